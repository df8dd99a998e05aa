#include "recipes.hpp"

#include <cmath>

#include <fmt/format.h>

#include "bowtie/errors.hpp"
#include "report.hpp"

namespace bowtie::cli {

using nlohmann::json;

namespace {

Radius alpha_k(int k) { return Radius::from_log2(-std::ldexp(1.0, k)); }

std::string fmt_tuple(int n, double a, double b, double p)
{
    return fmt::format("n={} alpha={} beta={} p={}", n, a, b, p);
}

struct Claims {
    json list = json::array();
    int failed = 0;

    void add(std::string claim, std::string expected, json measured, bool pass)
    {
        list.push_back({{"claim", std::move(claim)},
                        {"expected", std::move(expected)},
                        {"measured", std::move(measured)},
                        {"pass", pass}});
        failed += !pass;
    }

    json done(json extra = json::object())
    {
        extra["claims"] = list;
        extra["mismatches"] = failed;
        return extra;
    }
};

json ex_4_2()
{
    Claims c;
    auto w = RadialWeight::build(WeightSpec::inner_power(2, -1));
    const Radius r_min = w.natural_window().lo;

    auto local = exponent_estimate(w, Radius::from_value(1), r_min);
    c.add("Q_hat with R_0 = 1", "[0.95, 1.05]", num(local.Q_hat),
          local.Q_hat >= 0.95 && local.Q_hat <= 1.05);

    ExponentOptions opt;
    opt.r_max = Radius::from_value(1e6);
    auto global = exponent_estimate(w, Radius::infinity(), r_min, opt);
    c.add("Q_hat with R_0 = inf, proxy R_max = 1e6", "[1.9, 2.1]", num(global.Q_hat),
          global.Q_hat >= 1.9 && global.Q_hat <= 2.1);

    auto at1 = exponent_vs_p(w, 1.5, Radius::from_value(1));
    c.add("capacity condition at p = 1.5, R_0 = 1", "holds", to_string(at1.verdict),
          at1.verdict == ConditionVerdict::Holds);
    auto atinf = exponent_vs_p(w, 1.5, Radius::infinity());
    c.add("capacity condition at p = 1.5, R_0 = inf", "fails", to_string(atinf.verdict),
          atinf.verdict == ConditionVerdict::Fails);
    return c.done({{"weight", weight_spec_to_json(w.spec())}});
}

json ex_6_2()
{
    Claims c;
    auto w = RadialWeight::build(WeightSpec::dyadic_staircase());
    const Window win{alpha_k(8), alpha_k(2)};

    ExponentOptions opt;
    opt.r_max = win.hi;
    auto q = exponent_estimate(w, win.hi, win.lo, opt);
    c.add("Q_hat over (alpha_8, alpha_2)", "[3.9, 4.1]", num(q.Q_hat), q.Q_hat >= 3.9 && q.Q_hat <= 4.1);

    auto fit = measure_lower_exponent(w, win);
    c.add("lower exponent of mu(B_r)", "[3.28, 3.40]", num(fit.exponent),
          fit.exponent >= 3.28 && fit.exponent <= 3.40);

    for (auto [p, want] : {std::pair{3.9, ConditionVerdict::Fails}, std::pair{4.0, ConditionVerdict::Fails},
                           std::pair{4.5, ConditionVerdict::Holds}}) {
        auto rep = capacity_condition_check(w, p, win);
        c.add("capacity condition at p = " + Exponent(p).to_string(), to_string(want),
              {{"verdict", to_string(rep.verdict)}, {"log_spread", num(rep.log_spread)}},
              rep.verdict == want);
    }

    // deeper floor so the inner radii reach α_1000
    auto deep = RadialWeight::build(WeightSpec::dyadic_staircase(-std::ldexp(1.0, 1020)));
    std::vector<Radius> inner;
    for (int k = 2; k < 1000; k *= 2) inner.push_back(alpha_k(k));
    inner.push_back(alpha_k(1000));
    auto lim = point_capacity_limit(deep, Exponent(10, 3), alpha_k(0), Domain::PositiveQuadrant, inner);
    bool decreasing = true;
    for (std::size_t i = 1; i < lim.sequence.size(); ++i)
        decreasing &= lim.sequence[i].log_value < lim.sequence[i - 1].log_value;
    c.add("point capacity at p = 10/3 decays below 1e-8", "decreasing, last < 1e-8", to_json(lim),
          decreasing && lim.log_limit < std::log(1e-8));
    return c.done({{"weight", weight_spec_to_json(w.spec())}, {"window", window(win)}});
}

json powerlog_table()
{
    const std::vector<std::string> checks{"A_p on R^n", "capacity condition", "w~ A_p on R",
                                          "p-PI on the bow-tie", "point capacity positive"};
    std::vector<int> misses(checks.size(), 0);
    json details = json::array();
    int tuples = 0;
    for (int n : {1, 2, 3})
        for (double a = -n + 0.5; a <= 2.0 + 1e-9; a += 0.5)
            for (double b : {-2.0, 0.0, 2.0}) {
                auto w = RadialWeight::build(WeightSpec::power_log(n, a, b));
                for (double p : {1.0, 1.5, 2.0, 3.0}) {
                    ++tuples;
                    auto rep = decide_bowtie_pi(w, p);
                    const bool ap = classify_powerlog_Ap_Rn(n, a, b, p) == ApVerdict::Ap;
                    const bool cap = capacity_condition_classify_powerlog(n, p, a, b);
                    const bool pos = capacity_positivity_classify_powerlog(n, p, a, b) == Positivity::Positive;
                    auto check = [&](std::size_t i, const std::string& want, const std::string& got) {
                        if (want == got) return;
                        ++misses[i];
                        details.push_back({{"check", checks[i]}, {"at", fmt_tuple(n, a, b, p)},
                                           {"expected", want}, {"measured", got}});
                    };
                    check(0, ap ? "Ap" : "not_Ap", rep.rn_ap ? to_string(rep.rn_ap->verdict) : "unevaluated");
                    check(1, cap ? "holds" : "fails",
                          rep.capacity ? to_string(rep.capacity->verdict) : "unevaluated");
                    check(2, cap ? "holds" : "fails", to_string(rep.condition_v));
                    check(3, ap && cap ? "supports_pPI" : "does_not_support", to_string(rep.final));
                    auto num_pos = numeric_point_capacity_positivity(w, p, Radius::from_value(0.5));
                    check(4, pos ? "positive" : "zero", to_string(num_pos.verdict));
                }
            }
    Claims c;
    for (std::size_t i = 0; i < checks.size(); ++i)
        c.add(checks[i] + " matches the closed form on every tuple", "0 mismatches", misses[i], misses[i] == 0);
    return c.done({{"tuples", tuples}, {"mismatch_details", details}});
}

}  // namespace

std::vector<std::string> recipe_ids() { return {"ex-4.2", "ex-6.2", "powerlog-table"}; }

json run_recipe(const std::string& id)
{
    if (id == "ex-4.2") return ex_4_2();
    if (id == "ex-6.2") return ex_6_2();
    if (id == "powerlog-table") return powerlog_table();
    throw OutOfRange("unknown recipe '" + id + "'");
}

}  // namespace bowtie::cli
