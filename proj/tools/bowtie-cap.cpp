// bowtie-cap: capacities, measures, A_p scans and p-Poincaré decisions for
// radial weights, with JSON/CSV/text reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "CLI11.hpp"

#include "bowtie/errors.hpp"
#include "recipes.hpp"
#include "report.hpp"

#ifndef BOWTIE_VERSION
#define BOWTIE_VERSION "dev"
#endif

using namespace bowtie;
using namespace bowtie::cli;
using nlohmann::json;

namespace {

constexpr double kQuadTolerance = 1e-11;  // fixed inside the quadrature layer

struct Options {
    std::string spec_path;
    std::string family;
    int n = 1;
    double alpha = 0;
    double beta = 0;
    std::optional<double> log2_rho_min;

    std::string p = "2";
    std::string inner = "0";
    std::string outer = "1";
    std::string domain = "full";
    std::string window_lo, window_hi;
    std::string r0 = "inf";
    std::string r_max;
    std::string space = "line";
    std::vector<std::string> radii;
    std::string center = "0";

    std::string format = "json";
    std::uint64_t seed = 20240601;
    double delta_q = 0.05;
    double bound_factor = 1e3;
    int per_octave = 4;
    int nodes = 1 << 14;
    long mc_samples = 0;
    bool oracle = false;
    bool condition = false;
    bool doubling = false;
    bool lower_fit = false;
    std::string recipe;
};

void weight_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--spec", o.spec_path, "JSON weight spec file");
    cmd->add_option("--family", o.family, "power_log, constant or dyadic_staircase");
    cmd->add_option("--n", o.n, "dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--alpha", o.alpha);
    cmd->add_option("--beta", o.beta);
    cmd->add_option("--log2-rho-min", o.log2_rho_min, "staircase floor, log2");
}

void common_flags(CLI::App* cmd, Options& o)
{
    cmd->add_option("--format", o.format, "json, csv or text");
    cmd->add_option("--seed", o.seed, "seed for Monte Carlo checks");
    cmd->add_option("--window-lo", o.window_lo, "radius, e.g. 2^-256 or e^-31");
    cmd->add_option("--window-hi", o.window_hi);
    cmd->add_option("--per-octave", o.per_octave)->check(CLI::PositiveNumber);
}

WeightSpec load_spec(const Options& o)
{
    if (!o.spec_path.empty()) {
        if (!o.family.empty()) throw OutOfRange("give either --spec or --family, not both");
        std::ifstream in(o.spec_path);
        if (!in) throw MalformedSpec("cannot open " + o.spec_path);
        json j;
        try {
            in >> j;
        } catch (const json::parse_error& e) {
            throw MalformedSpec(o.spec_path + ": " + e.what());
        }
        return weight_spec_from_json(j);
    }
    if (o.family.empty()) throw OutOfRange("a weight is required: --spec FILE or --family NAME");
    json j{{"family", o.family}, {"n", o.n}};
    if (o.family == "power_log") {
        j["alpha"] = o.alpha;
        j["beta"] = o.beta;
    } else if (o.family == "dyadic_staircase" && o.log2_rho_min) {
        j["log2_rho_min"] = *o.log2_rho_min;
    }
    return weight_spec_from_json(j);
}

std::optional<Window> window_of(const Options& o)
{
    if (o.window_lo.empty() && o.window_hi.empty()) return std::nullopt;
    if (o.window_lo.empty() || o.window_hi.empty())
        throw OutOfRange("--window-lo and --window-hi go together");
    Window w{parse_radius(o.window_lo), parse_radius(o.window_hi)};
    if (!(w.lo < w.hi)) throw OutOfRange("window must satisfy lo < hi");
    return w;
}

json config_block(const std::string& command, const Options& o, const WeightSpec* spec)
{
    json c{{"command", command},
           {"p", o.p},
           {"r0", o.r0},
           {"grid", {{"per_octave", o.per_octave}, {"oracle_nodes", o.nodes}, {"mc_samples", o.mc_samples}}},
           {"tolerances", {{"tau_quad", kQuadTolerance}, {"delta_q", o.delta_q}, {"bound_factor", o.bound_factor}}},
           {"format", o.format},
           {"seed", o.seed}};
    if (spec) c["weight"] = weight_spec_to_json(*spec);
    if (auto w = window_of(o)) c["window"] = window(*w);
    return c;
}

json envelope(const std::string& command, const Options& o, const WeightSpec* spec)
{
    return {{"schema_version", kSchemaVersion},
            {"artifact_version", BOWTIE_VERSION},
            {"config", config_block(command, o, spec)}};
}

// Uniform points in B(z, r) by rejection from the cube, on raw generator bits
// so that a seed gives the same stream everywhere.
json monte_carlo_ball(const RadialWeight& w, Radius t, Radius r, long samples, std::uint64_t seed)
{
    const int n = w.dimension();
    if (n > 6) throw OutOfRange("Monte Carlo ball check supports n <= 6");
    std::mt19937_64 rng(seed);
    auto u = [&] { return double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    const double tv = t.value(), rv = r.value();
    double sum = 0, sum2 = 0;
    for (long k = 0; k < samples;) {
        double x[6] = {}, s = 0;
        for (int i = 0; i < n; ++i) {
            x[i] = u();
            s += x[i] * x[i];
        }
        if (s >= 1) continue;
        x[0] = tv + rv * x[0];
        double rho2 = x[0] * x[0];
        for (int i = 1; i < n; ++i) rho2 += rv * rv * x[i] * x[i];
        const double v = std::exp(w.log_w(Radius::from_value(std::sqrt(rho2))));
        sum += v;
        sum2 += v * v;
        ++k;
    }
    const double mean = sum / double(samples);
    const double sd = std::sqrt(std::max(0.0, sum2 / double(samples) - mean * mean) / double(samples));
    const double log_vol = w.log_omega() + n * r.ln() - std::log(double(n));
    return {{"samples", samples}, {"seed", seed}, {"log_mu", num(std::log(mean) + log_vol)},
            {"relative_std_error", num(sd / mean)}};
}

int cmd_capacity(const Options& o, json& out)
{
    const auto spec = load_spec(o);
    auto w = RadialWeight::build(spec);
    out = envelope("capacity", o, &spec);
    CapacityQuery q{Exponent::parse(o.p), parse_radius(o.inner), parse_radius(o.outer), domain_from_string(o.domain)};
    out["inner"] = radius(q.inner);
    out["outer"] = radius(q.outer);
    out.update(to_json(annulus_capacity(w, q)));
    if (o.oracle) out["oracle"] = to_json(discrete_capacity_oracle(w, q, o.nodes));
    if (o.condition) {
        CapacityConditionOptions opt;
        opt.bound_factor = o.bound_factor;
        opt.per_octave = o.per_octave;
        out["capacity_condition"] = to_json(capacity_condition_check(
            w, q.p, window_of(o).value_or(w.natural_window()), parse_radius(o.r0), opt));
    }
    return 0;
}

int cmd_measure(const Options& o, json& out)
{
    const auto spec = load_spec(o);
    auto w = RadialWeight::build(spec);
    out = envelope("measure", o, &spec);
    const Radius t = parse_radius(o.center);
    out["center"] = radius(t);
    json balls = json::array();
    for (const auto& text : o.radii.empty() ? std::vector<std::string>{"1"} : o.radii) {
        const Radius r = parse_radius(text);
        const double lm = t.is_zero() ? log_mu_ball(w, r) : log_ball_moment(w, Exponent(1), t, r);
        json b{{"r", radius(r)}, {"log_mu", num(lm)}, {"mu", num(std::exp(lm))}};
        if (o.mc_samples > 0) b["monte_carlo"] = monte_carlo_ball(w, t, r, o.mc_samples, o.seed);
        balls.push_back(b);
    }
    out["balls"] = balls;
    const Window win = window_of(o).value_or(w.natural_window());
    if (o.doubling) out["doubling"] = to_json(doubling_estimate(w, win));
    if (o.lower_fit) {
        auto fit = measure_lower_exponent(w, win);
        out["lower_exponent"] = {{"exponent", num(fit.exponent)}, {"witness", radius(fit.witness)},
                                 {"top", radius(fit.top)}};
    }
    return 0;
}

int cmd_ap(const Options& o, json& out)
{
    const auto spec = load_spec(o);
    auto w = RadialWeight::build(spec);
    out = envelope("ap-check", o, &spec);
    ApSpace space;
    if (o.space == "line" || o.space == "line_wtilde") space = ApSpace::LineWTilde;
    else if (o.space == "Rn" || o.space == "Rn_radial") space = ApSpace::RnRadial;
    else throw OutOfRange("--space must be line or Rn");
    ApScanConfig cfg;
    cfg.window = window_of(o);
    cfg.per_octave = o.per_octave;
    out.update(to_json(ap_scan(w, Exponent::parse(o.p), space, cfg)));
    return 0;
}

int cmd_exponent(const Options& o, json& out)
{
    const auto spec = load_spec(o);
    auto w = RadialWeight::build(spec);
    out = envelope("exponent", o, &spec);
    const Window win = window_of(o).value_or(w.natural_window());
    const Radius r0 = parse_radius(o.r0);
    ExponentOptions opt;
    opt.per_octave = o.per_octave;
    opt.r_max = o.r_max.empty() ? win.hi : parse_radius(o.r_max);
    out.update(to_json(exponent_estimate(w, r0, win.lo, opt)));
    return 0;
}

int cmd_decide(const Options& o, json& out)
{
    const auto spec = load_spec(o);
    auto w = RadialWeight::build(spec);
    out = envelope("decide", o, &spec);
    DecideConfig cfg;
    cfg.window = window_of(o);
    cfg.r0 = parse_radius(o.r0);
    cfg.delta_q = o.delta_q;
    cfg.capacity.bound_factor = o.bound_factor;
    cfg.capacity.per_octave = o.per_octave;
    cfg.ap.per_octave = o.per_octave;
    out.update(to_json(decide_bowtie_pi(w, Exponent::parse(o.p), cfg)));
    return 0;
}

int cmd_reproduce(const Options& o, json& out)
{
    out = envelope("reproduce", o, nullptr);
    out["recipe"] = o.recipe;
    out.update(run_recipe(o.recipe));
    if (out["mismatches"].get<int>() > 0) {
        std::string failed;
        for (const auto& c : out["claims"])
            if (!c["pass"].get<bool>())
                failed += "\n  " + c["claim"].get<std::string>() + ": measured " + c["measured"].dump();
        std::cerr << "ReproductionMismatch: " << o.recipe << failed << '\n';
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Capacities and Poincaré support for radial weights on the bow-tie"};
    app.require_subcommand(1);
    Options o;

    auto* cap = app.add_subcommand("capacity", "variational p-capacity of an annulus or a point");
    weight_flags(cap, o);
    common_flags(cap, o);
    cap->add_option("--p", o.p, "exponent, e.g. 2, 4.5 or 10/3");
    cap->add_option("--inner", o.inner, "inner radius, 0 for the point");
    cap->add_option("--outer", o.outer);
    cap->add_option("--domain", o.domain, "full, quadrant or bowtie");
    cap->add_flag("--oracle", o.oracle, "also run the discrete oracle");
    cap->add_option("--nodes", o.nodes, "oracle grid size")->check(CLI::Range(16, 1 << 22));
    cap->add_flag("--condition", o.condition, "also check the capacity condition on the window");
    cap->add_option("--r0", o.r0, "R_0, a radius or inf");
    cap->add_option("--bound-factor", o.bound_factor)->check(CLI::PositiveNumber);

    auto* meas = app.add_subcommand("measure", "ball measures, doubling and decay fits");
    weight_flags(meas, o);
    common_flags(meas, o);
    meas->add_option("--r", o.radii, "ball radius (repeatable)");
    meas->add_option("--center", o.center, "distance of the centre from 0");
    meas->add_option("--mc-samples", o.mc_samples, "Monte Carlo cross-check")->check(CLI::NonNegativeNumber);
    meas->add_flag("--doubling", o.doubling);
    meas->add_flag("--lower-fit", o.lower_fit);

    auto* ap = app.add_subcommand("ap-check", "scan the A_p expression");
    weight_flags(ap, o);
    common_flags(ap, o);
    ap->add_option("--p", o.p);
    ap->add_option("--space", o.space, "line (w~ on R) or Rn");

    auto* ex = app.add_subcommand("exponent", "decay exponent Q of the ball measure");
    weight_flags(ex, o);
    common_flags(ex, o);
    ex->add_option("--r0", o.r0, "R_0, a radius or inf");
    ex->add_option("--r-max", o.r_max, "finite stand-in for R_0 = inf");

    auto* dec = app.add_subcommand("decide", "p-Poincaré support on the bow-tie");
    weight_flags(dec, o);
    common_flags(dec, o);
    dec->add_option("--p", o.p);
    dec->add_option("--r0", o.r0, "R_0, a radius or inf");
    dec->add_option("--delta-q", o.delta_q)->check(CLI::PositiveNumber);
    dec->add_option("--bound-factor", o.bound_factor)->check(CLI::PositiveNumber);

    auto* rep = app.add_subcommand("reproduce", "run a named reproduction recipe");
    rep->add_option("id", o.recipe, "ex-4.2, ex-6.2 or powerlog-table")->required();
    rep->add_option("--format", o.format);
    rep->add_option("--seed", o.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    json out;
    int code = 0;
    try {
        const Format fmt = format_from_string(o.format);
        if (cap->parsed()) code = cmd_capacity(o, out);
        else if (meas->parsed()) code = cmd_measure(o, out);
        else if (ap->parsed()) code = cmd_ap(o, out);
        else if (ex->parsed()) code = cmd_exponent(o, out);
        else if (dec->parsed()) code = cmd_decide(o, out);
        else code = cmd_reproduce(o, out);
        std::cout << render(out, fmt);
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << '\n';
        return e.kind() == ErrorKind::Validation ? 2 : 3;
    }
    return code;
}
