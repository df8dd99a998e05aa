#include "bowtie/decider.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "bowtie/errors.hpp"
#include "bowtie/parallel.hpp"

namespace bowtie {

namespace {

bool is_one(const Exponent& p) { return (p - Exponent(1)).is_zero(); }

RouteVerdict from(ConditionVerdict v)
{
    switch (v) {
    case ConditionVerdict::Holds: return RouteVerdict::Holds;
    case ConditionVerdict::Fails: return RouteVerdict::Fails;
    case ConditionVerdict::Borderline: return RouteVerdict::Borderline;
    }
    return RouteVerdict::Borderline;
}

RouteVerdict from(ApVerdict v)
{
    switch (v) {
    case ApVerdict::Ap: return RouteVerdict::Holds;
    case ApVerdict::NotAp: return RouteVerdict::Fails;
    case ApVerdict::Borderline: return RouteVerdict::Borderline;
    }
    return RouteVerdict::Borderline;
}

RouteVerdict both(RouteVerdict a, RouteVerdict b)
{
    if (a == RouteVerdict::Fails || b == RouteVerdict::Fails) return RouteVerdict::Fails;
    if (a == RouteVerdict::Holds && b == RouteVerdict::Holds) return RouteVerdict::Holds;
    if (a == RouteVerdict::Unevaluated || b == RouteVerdict::Unevaluated)
        return RouteVerdict::Unevaluated;
    return RouteVerdict::Borderline;
}

Window clipped(Window w, Radius r0)
{
    if (r0 <= w.hi) w.hi = r0.shifted(-1e-9);
    return w;
}

}  // namespace

ExponentComparison exponent_vs_p(const RadialWeight& w, const Exponent& p, Radius r0,
                                 double delta_q, std::optional<Window> window)
{
    if (!(p.value() > 1.0)) throw OutOfRange("exponent comparison needs p > 1");
    const Window win = window.value_or(w.natural_window());
    ExponentComparison out;
    out.delta_q = delta_q;
    ExponentOptions opt;
    opt.r_max = win.hi;
    out.estimate = exponent_estimate(w, r0, win.lo, opt);
    out.notes = out.estimate.notes;
    const double q_hi = std::max(out.estimate.Q_hat, out.estimate.Q_hat_extended);
    const double q_lo = std::min(out.estimate.Q_hat, out.estimate.Q_hat_extended);
    const double pv = p.value();
    if (pv > q_hi + delta_q) {
        out.verdict = ConditionVerdict::Holds;
    } else if (pv < q_lo - delta_q) {
        out.verdict = ConditionVerdict::Fails;
    } else {
        const auto cap = capacity_condition_check(w, p, clipped(win, r0), r0);
        out.tie_break = cap.verdict;
        out.verdict = cap.verdict;
        out.notes.push_back("p within delta_Q of Q_hat; direct capacity check gives " +
                            to_string(cap.verdict));
    }
    return out;
}

P1SlopeReport p1_slope_check(const RadialWeight& w, Window window, Radius r0, double delta_q)
{
    window = clipped(window, r0);
    if (window.lo.is_zero() || window.hi.is_infinite() ||
        window.hi.ln() - window.lo.ln() < 3 * std::log(10.0) - 1e-9)
        throw WindowTooNarrow("slope check window must span at least 3 decades");
    P1SlopeReport rep;
    ExponentOptions opt;
    opt.r_max = window.hi;
    rep.Q_hat = exponent_estimate(w, r0, window.lo, opt).Q_hat;

    constexpr int m = 4;  // lattice points per octave
    const long j_lo = long(std::ceil(m * window.lo.log2() - 1e-9));
    const long j_hi = long(std::floor(m * window.hi.log2() + 1e-9));
    std::vector<double> lm(std::size_t(j_hi - j_lo + 1));
    parallel_for(lm.size(), [&](std::size_t i) {
        lm[i] = log_mu_ball(w, Radius::from_log2(double(j_lo + long(i)) / m));
    });
    const long depth = long(lm.size()) - 1;
    auto min_ratio = [&](long max_gap) {
        double best = kInf;
        for (long j = 0; j <= depth; ++j)
            for (long g = 1; g <= max_gap && j - g >= 0; ++g)
                best = std::min(best, lm[std::size_t(j - g)] - lm[std::size_t(j)] + g * kLn2 / m);
        return best;
    };
    rep.log_min_half = min_ratio(depth / 2);
    rep.log_min_full = min_ratio(depth);

    if (rep.Q_hat > 1.0 + delta_q) {
        rep.verdict = ConditionVerdict::Fails;
        rep.reason = "decay exponent exceeds 1";
    } else {
        const double drop = std::exp(rep.log_min_full - rep.log_min_half);
        if (drop >= 0.9) {
            rep.verdict = ConditionVerdict::Holds;
        } else if (drop < 0.5) {
            rep.verdict = ConditionVerdict::Fails;
            rep.reason = "ratio keeps falling with pair depth";
        } else {
            rep.verdict = ConditionVerdict::Borderline;
            rep.reason = "ratio drifts with pair depth";
        }
    }
    return rep;
}

std::string to_string(RouteVerdict v)
{
    switch (v) {
    case RouteVerdict::Holds: return "holds";
    case RouteVerdict::Fails: return "fails";
    case RouteVerdict::Borderline: return "borderline";
    case RouteVerdict::Unevaluated: return "unevaluated";
    }
    return "unknown";
}

std::string to_string(FinalVerdict v)
{
    switch (v) {
    case FinalVerdict::SupportsPI: return "supports_pPI";
    case FinalVerdict::DoesNotSupport: return "does_not_support";
    case FinalVerdict::Inconsistent: return "inconsistent";
    case FinalVerdict::Borderline: return "borderline";
    }
    return "unknown";
}

DecisionReport decide_bowtie_pi(const RadialWeight& w, const Exponent& p, const DecideConfig& cfg)
{
    if (!(p.value() >= 1.0) || !std::isfinite(p.value()))
        throw OutOfRange("p must be a finite number >= 1, got " + p.to_string());
    DecisionReport rep;
    rep.p = p;
    rep.weight = weight_spec_to_json(w.spec());
    rep.window = cfg.window.value_or(w.natural_window());
    const Window win = clipped(rep.window, cfg.r0);
    const bool p1 = is_one(p);
    ApScanConfig ap = cfg.ap;
    ap.window = win;

    // Each task owns its slot of the report and its own notes; the join below is pure.
    std::vector<std::string> task_notes[4];
    auto guarded = [](const char* name, std::vector<std::string>& notes, auto&& body) {
        return [name, &notes, body] {
            try {
                body();
            } catch (const Error& e) {
                notes.push_back(std::string(name) + " unevaluated: " + e.code() + ": " + e.what());
            }
        };
    };
    std::vector<std::future<void>> tasks;
    tasks.push_back(std::async(std::launch::async, guarded("condition (v)", task_notes[0], [&] {
        rep.line_ap = ap_scan(w, p, ApSpace::LineWTilde, ap);
    })));
    tasks.push_back(std::async(std::launch::async, guarded("A_p on R^n", task_notes[1], [&] {
        rep.rn_ap = ap_scan(w, p, ApSpace::RnRadial, ap);
    })));
    tasks.push_back(std::async(std::launch::async, guarded("capacity condition", task_notes[2], [&] {
        rep.capacity = capacity_condition_check(w, p, win, cfg.r0, cfg.capacity);
    })));
    tasks.push_back(std::async(std::launch::async, guarded(p1 ? "slope route" : "exponent route",
                                                           task_notes[3], [&] {
        if (p1) rep.p1 = p1_slope_check(w, win, cfg.r0, cfg.delta_q);
        else rep.exponent = exponent_vs_p(w, p, cfg.r0, cfg.delta_q, win);
    })));
    for (auto& t : tasks) t.get();
    for (auto& n : task_notes) rep.notes.insert(rep.notes.end(), n.begin(), n.end());

    const RouteVerdict rn = rep.rn_ap ? from(rep.rn_ap->verdict) : RouteVerdict::Unevaluated;
    if (rep.line_ap) rep.condition_v = from(rep.line_ap->verdict);
    rep.condition_iv =
        both(rn, rep.capacity ? from(rep.capacity->verdict) : RouteVerdict::Unevaluated);
    if (rep.p1) rep.p1_route = both(rn, from(rep.p1->verdict));
    if (rep.exponent) {
        rep.exponent_route = both(rn, from(rep.exponent->verdict));
        rep.notes.insert(rep.notes.end(), rep.exponent->notes.begin(), rep.exponent->notes.end());
    }
    rep.notes.push_back(
        "p-PI on the quadrant plus the capacity condition is not a separate route: for radial "
        "doubling weights p-PI on the quadrant and on R^n coincide, and the latter is "
        "certified through A_p");

    int holds = 0, fails = 0, open = 0;
    for (RouteVerdict v : {rep.condition_v, rep.condition_iv, p1 ? rep.p1_route : rep.exponent_route}) {
        holds += v == RouteVerdict::Holds;
        fails += v == RouteVerdict::Fails;
        open += v == RouteVerdict::Borderline || v == RouteVerdict::Unevaluated;
    }
    if (holds > 0 && fails > 0) {
        rep.final = FinalVerdict::Inconsistent;
        rep.notes.push_back("definite routes disagree");
    } else if (holds > 0 && open == 0) {
        rep.final = FinalVerdict::SupportsPI;
    } else if (fails > 0) {
        rep.final = FinalVerdict::DoesNotSupport;
    } else {
        rep.final = FinalVerdict::Borderline;
    }
    return rep;
}

}  // namespace bowtie
