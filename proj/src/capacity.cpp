#include "bowtie/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bowtie/errors.hpp"
#include "bowtie/measure.hpp"
#include "bowtie/parallel.hpp"
#include "bowtie/trend.hpp"

namespace bowtie {

std::string to_string(Domain d)
{
    switch (d) {
    case Domain::FullSpace: return "full";
    case Domain::PositiveQuadrant: return "quadrant";
    case Domain::BowTie: return "bowtie";
    }
    return "unknown";
}

Domain domain_from_string(const std::string& s)
{
    if (s == "full" || s == "full_space" || s == "FullSpace") return Domain::FullSpace;
    if (s == "quadrant" || s == "positive_quadrant" || s == "PositiveQuadrant")
        return Domain::PositiveQuadrant;
    if (s == "bowtie" || s == "bow_tie" || s == "BowTie") return Domain::BowTie;
    throw MalformedSpec("unknown domain '" + s + "' (full, quadrant, bowtie)");
}

double domain_factor(int n, Domain d)
{
    switch (d) {
    case Domain::FullSpace: return 1.0;
    case Domain::PositiveQuadrant: return std::ldexp(1.0, -n);
    case Domain::BowTie: return std::ldexp(1.0, 1 - n);
    }
    return 1.0;
}

double log_domain_factor(int n, Domain d)
{
    switch (d) {
    case Domain::FullSpace: return 0.0;
    case Domain::PositiveQuadrant: return -n * kLn2;
    case Domain::BowTie: return (1 - n) * kLn2;
    }
    return 0.0;
}

namespace {

void check_p(const Exponent& p)
{
    if (!(p.value() >= 1.0) || !std::isfinite(p.value()))
        throw OutOfRange("p must be a finite number >= 1, got " + p.to_string());
}

Exponent dual_exponent(const Exponent& p) { return Exponent(1) / (Exponent(1) - p); }

bool is_one(const Exponent& p) { return (p - Exponent(1)).is_zero(); }

// ln of the full-space capacity of the annulus; +inf dual integral gives -inf.
double log_full_capacity(const RadialWeight& w, const Exponent& p, Radius inner, Radius outer)
{
    if (is_one(p)) return w.log_hat_essinf(inner, outer);
    const double s = w.log_hat_moment(dual_exponent(p), inner, outer);
    if (s == kInf) return -kInf;
    return (1.0 - p.value()) * s;
}

CapacityResult finish(const RadialWeight& w, double log_full, Domain domain,
                      const Exponent& p, std::string method)
{
    CapacityResult r;
    r.domain = domain;
    r.method = std::move(method);
    r.log_full_space = log_full;
    r.log_value = log_full == -kInf ? -kInf : log_full + log_domain_factor(w.dimension(), domain);
    r.value = std::exp(r.log_value);
    if (log_full == -kInf)
        r.reason = is_one(p) ? "vanishing essential infimum" : "divergent dual integral";
    return r;
}

}  // namespace

CapacityResult annulus_capacity(const RadialWeight& w, const CapacityQuery& q)
{
    check_p(q.p);
    if (!(q.inner < q.outer) || q.outer.is_infinite())
        throw OutOfRange("annulus needs 0 <= inner < outer < inf");
    return finish(w, log_full_capacity(w, q.p, q.inner, q.outer), q.domain, q.p, "closed_form");
}

CapacityResult point_capacity(const RadialWeight& w, const Exponent& p, Radius r, Domain domain)
{
    return annulus_capacity(w, CapacityQuery{p, Radius::zero(), r, domain});
}

// Oracle --------------------------------------------------------------------

namespace {

// Minimises Σ c_i x_i^p over the simplex Σ x_i = 1, x > 0 by damped Newton
// steps projected onto the constraint. The x_i are the drops u_{i-1} - u_i of
// the discrete potential; monotone potentials are optimal so x ≥ 0 suffices.
std::pair<double, int> simplex_descent(const std::vector<double>& log_c, double p,
                                       const std::vector<double>& x0)
{
    const std::size_t n = log_c.size();
    const auto [mn, mx] = std::minmax_element(log_c.begin(), log_c.end());
    const double shift = 0.5 * (*mn + *mx);
    if (*mx - *mn > 1200.0)
        throw OutOfRange("oracle energy coefficients span more than e^1200; shorten the annulus");
    std::vector<double> c(n), x = x0, g(n), hinv(n), d(n), trial(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = std::exp(log_c[i] - shift);

    auto energy = [&](const std::vector<double>& v) {
        double f = 0;
        for (std::size_t i = 0; i < n; ++i) f += c[i] * std::pow(v[i], p);
        return f;
    };

    double f = energy(x);
    int it = 0;
    for (; it < 5000; ++it) {
        double sum_hinv = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double xp2 = std::pow(x[i], p - 2.0);
            g[i] = p * c[i] * xp2 * x[i];
            hinv[i] = 1.0 / (p * (p - 1.0) * c[i] * xp2);
            sum_hinv += hinv[i];
        }
        const double nu = 1.0 / ((p - 1.0) * sum_hinv);
        double decrement = 0, t = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = nu * hinv[i] - x[i] / (p - 1.0);
            decrement -= g[i] * d[i];
            if (d[i] < 0) t = std::min(t, 0.99 * x[i] / -d[i]);
        }
        if (decrement <= 1e-14 * f) break;
        for (;;) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + t * d[i];
            const double ft = energy(trial);
            if (ft <= f - 1e-4 * t * decrement) {
                x.swap(trial);
                f = ft;
                break;
            }
            t *= 0.5;
            if (t < 1e-20) return {std::log(f) + shift, it};
        }
    }
    return {std::log(f) + shift, it};
}

}  // namespace

OracleResult discrete_capacity_oracle(const RadialWeight& w, const CapacityQuery& q, int nodes)
{
    check_p(q.p);
    if (nodes < 64) throw OutOfRange("oracle needs at least 64 nodes");
    if (q.inner.is_zero() || !(q.inner < q.outer) || q.outer.is_infinite())
        throw OutOfRange("oracle needs 0 < inner < outer < inf");

    const double a = q.inner.ln(), b = q.outer.ln();
    const double h = (b - a) / nodes;
    const double ln_step = std::log(std::expm1(h));
    const auto count = std::size_t(nodes);
    std::vector<double> ln_delta(count), ln_w(count);
    for (std::size_t i = 0; i < count; ++i) {
        ln_delta[i] = a + double(i) * h + ln_step;
        ln_w[i] = w.eval(Radius::from_ln(a + (double(i) + 0.5) * h)).log_w_hat;
    }

    OracleResult out;
    out.nodes = nodes;
    const double factor = log_domain_factor(w.dimension(), q.domain);
    if (is_one(q.p)) {
        out.log_value = *std::min_element(ln_w.begin(), ln_w.end()) + factor;
        return out;
    }

    const double p = q.p.value(), gamma = 1.0 / (1.0 - p);
    LogSum s;
    for (std::size_t i = 0; i < count; ++i) s.add(ln_delta[i] + gamma * ln_w[i]);
    out.log_series = (1.0 - p) * s.value();

    std::vector<double> log_c(count), x0(count);
    const double ln_total = std::log(std::expm1(b - a)) + a;
    for (std::size_t i = 0; i < log_c.size(); ++i) {
        log_c[i] = ln_w[i] - (p - 1.0) * ln_delta[i];
        x0[i] = std::exp(ln_delta[i] - ln_total);  // u linear in ρ
    }
    const auto [ln_e, iters] = simplex_descent(log_c, p, x0);
    out.log_descent = ln_e;
    out.iterations = iters;
    if (std::fabs(std::expm1(out.log_descent - out.log_series)) > 1e-6)
        throw OracleDisagreement("series value e^" + std::to_string(out.log_series) +
                                 " and descent value e^" + std::to_string(out.log_descent) +
                                 " differ by more than 1e-6");
    out.log_value = out.log_series + factor;
    return out;
}

// Point capacity as a limit --------------------------------------------------

namespace {

double log_zero_threshold(const RadialWeight& w, const Exponent& p, Radius r)
{
    return std::log(1e-12) + log_mu_ball(w, r) - p.value() * r.ln();
}

}  // namespace

PointCapacityLimit point_capacity_limit(const RadialWeight& w, const Exponent& p, Radius r,
                                        Domain domain, std::vector<Radius> inner)
{
    check_p(p);
    if (inner.empty())
        for (int k = 2; k <= 8; ++k) inner.push_back(r.shifted(-k * std::log(10.0)));
    PointCapacityLimit out;
    for (Radius ri : inner)
        out.sequence.push_back(
            {ri, annulus_capacity(w, CapacityQuery{p, ri, r, domain}).log_value});
    const double zero = log_zero_threshold(w, p, r) + log_domain_factor(w.dimension(), domain);
    if (out.sequence.size() >= 2) {
        const double a = out.sequence[out.sequence.size() - 2].log_value;
        const double b = out.sequence.back().log_value;
        out.converged = (a < zero && b < zero) || std::fabs(std::expm1(b - a)) < 1e-6;
    }
    out.log_limit = out.sequence.empty() ? -kInf : out.sequence.back().log_value;
    return out;
}

std::string to_string(Positivity v) { return v == Positivity::Positive ? "positive" : "zero"; }

PositivityReport numeric_point_capacity_positivity(const RadialWeight& w, const Exponent& p,
                                                   Radius r)
{
    check_p(p);
    PositivityReport rep;
    std::vector<Radius> inner;
    for (int k = 1; k <= 8; ++k) inner.push_back(r.shifted(-std::pow(10.0, k)));

    if (is_one(p)) {
        for (Radius ri : inner) rep.sequence.push_back({ri, w.log_hat_essinf(ri, r)});
        const double a = rep.sequence[6].log_value, b = rep.sequence[7].log_value;
        const bool stable = a == b || (std::isfinite(a) && std::fabs(b - a) < 1e-9);
        rep.verdict = stable ? Positivity::Positive : Positivity::Zero;
        rep.basis = stable ? "essinf stable as the inner radius shrinks"
                           : "essinf keeps decreasing as the inner radius shrinks";
        return rep;
    }

    // L_k = ln ∫_{r e^{-10^k}}^r ŵ^γ. A convergent dual integral has
    // increments that shrink from one decade of u = -ln ρ to the next.
    const Exponent gamma = dual_exponent(p);
    std::vector<double> L;
    for (Radius ri : inner) {
        L.push_back(w.log_hat_moment(gamma, ri, r));
        rep.sequence.push_back({ri, L.back() == kInf ? -kInf : (1.0 - p.value()) * L.back()});
    }
    const double threshold = log_zero_threshold(w, p, r);
    const double d7 = log_sub(L[6], L[5]);
    const double d8 = log_sub(L[7], L[6]);
    if (L[7] == kInf) {
        rep.verdict = Positivity::Zero;
        rep.basis = "dual integral infinite";
    } else if (rep.sequence.back().log_value < threshold) {
        rep.verdict = Positivity::Zero;
        rep.basis = "capacity below 1e-12 mu(B_r)/r^p";
    } else if (d8 - L[7] < std::log(1e-9) || d8 < d7) {
        rep.verdict = Positivity::Positive;
        rep.basis = "dual integral increments shrink or vanish";
    } else {
        rep.verdict = Positivity::Zero;
        rep.basis = "dual integral increments do not shrink";
    }
    return rep;
}

namespace {

void check_powerlog(int n, const Exponent& p, const Exponent& alpha)
{
    if (n < 1) throw OutOfRange("n must be >= 1");
    check_p(p);
    if (!((alpha + Exponent(double(n))).sign() > 0))
        throw OutOfRange("alpha must exceed -n for a locally integrable weight");
}

}  // namespace

Positivity capacity_positivity_classify_powerlog(int n, const Exponent& p, const Exponent& alpha,
                                                 const Exponent& beta)
{
    check_powerlog(n, p, alpha);
    const int s = (alpha - (p - Exponent(double(n)))).sign();
    if (s < 0) return Positivity::Positive;
    if (s == 0 && (beta - (p - Exponent(1))).sign() > 0) return Positivity::Positive;
    if (is_one(p) && s == 0 && beta.sign() >= 0) return Positivity::Positive;
    return Positivity::Zero;
}

bool capacity_condition_classify_powerlog(int n, const Exponent& p, const Exponent& alpha,
                                          const Exponent& beta)
{
    check_powerlog(n, p, alpha);
    const int s = (alpha - (p - Exponent(double(n)))).sign();
    return s < 0 || (is_one(p) && s == 0 && beta.sign() >= 0);
}

// Capacity condition --------------------------------------------------------

std::string to_string(ConditionVerdict v)
{
    switch (v) {
    case ConditionVerdict::Holds: return "holds";
    case ConditionVerdict::Fails: return "fails";
    case ConditionVerdict::Borderline: return "borderline";
    }
    return "unknown";
}

namespace {

}  // namespace

CapacityConditionReport capacity_condition_check(const RadialWeight& w, const Exponent& p,
                                                 Window window, Radius r0,
                                                 const CapacityConditionOptions& opt)
{
    check_p(p);
    CapacityConditionReport rep;
    rep.p = p;
    if (r0 <= window.hi) window.hi = r0.shifted(-1e-9);
    rep.window = window;
    if (window.lo.is_zero() || window.hi.is_infinite() ||
        window.hi.ln() - window.lo.ln() < 3 * std::log(10.0) - 1e-9)
        throw WindowTooNarrow("capacity condition window must span at least 3 decades");

    const double step = kLn2 / opt.per_octave;
    std::vector<double> xs;
    for (double x = window.lo.ln(); x <= window.hi.ln() + 1e-9 * step; x += step) xs.push_back(x);
    const std::size_t m = xs.size();

    // Prefix sums of the dual integral and of μ; pieces are independent.
    const bool p1 = is_one(p);
    const Exponent gamma = p1 ? Exponent(1) : dual_exponent(p);
    std::vector<double> dual(m), mass(m);
    parallel_for(m, [&](std::size_t i) {
        const Radius a = i == 0 ? Radius::zero() : Radius::from_ln(xs[i - 1]);
        const Radius b = Radius::from_ln(xs[i]);
        dual[i] = p1 ? w.log_hat_essinf(a, b) : w.log_hat_moment(gamma, a, b);
        mass[i] = log_mu_ball(w, b);
    });
    for (std::size_t i = 1; i < m; ++i)
        dual[i] = p1 ? std::min(dual[i - 1], dual[i]) : log_add(dual[i - 1], dual[i]);

    std::vector<double> v(m);
    bool zero = false;
    const double ceiling = p.value() * kLn2 + 1e-9;
    for (std::size_t i = 0; i < m; ++i) {
        const double log_cap = p1 ? dual[i] : dual[i] == kInf ? -kInf : (1.0 - p.value()) * dual[i];
        v[i] = log_cap + p.value() * xs[i] - mass[i];
        if (v[i] == -kInf) zero = true;
        if (v[i] > ceiling) rep.upper_bound_ok = false;
        rep.ratio_samples.push_back({Radius::from_ln(xs[i]), v[i]});
    }
    if (!rep.upper_bound_ok)
        rep.reason = "ratio exceeds the Lipschitz bound 2^p; numerical trouble";
    if (zero) {
        rep.verdict = ConditionVerdict::Fails;
        rep.log_spread = kInf;
        rep.fitted_slope = -kInf;
        if (rep.reason.empty()) rep.reason = "point capacity is zero";
        return rep;
    }
    const auto [vmin, vmax] = std::minmax_element(v.begin(), v.end());
    rep.log_spread = *vmax - *vmin;

    // Sides run outward from the sample nearest r = 1.
    std::size_t pivot = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (std::fabs(xs[i]) < std::fabs(xs[pivot])) pivot = i;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> data(2);
    for (std::size_t i = 0; i < m; ++i) {
        auto& side = data[i <= pivot ? 0 : 1];
        side.first.push_back(std::fabs(xs[i]));
        side.second.push_back(v[i]);
    }
    data[1].first.insert(data[1].first.begin(), std::fabs(xs[pivot]));
    data[1].second.insert(data[1].second.begin(), v[pivot]);
    std::reverse(data[0].first.begin(), data[0].first.end());
    std::reverse(data[0].second.begin(), data[0].second.end());

    const TrendOptions topt{opt.flat_decrement, opt.hold_ratio, opt.fail_ratio};
    std::vector<TrendResult> sides;
    std::size_t longest = 0;
    for (std::size_t s = 0; s < 2; ++s) {
        sides.push_back(block_trend(data[s].first, data[s].second, step, topt));
        if (data[s].first.size() > data[longest].first.size()) longest = s;
    }
    rep.decrements = sides[longest].decrements;

    {
        // least-squares slope of the envelope against ln(1 + |ln r|), outer half
        const auto& ell = data[longest].first;
        std::vector<double> env(ell.size());
        std::partial_sum(data[longest].second.begin(), data[longest].second.end(), env.begin(),
                         [](double a, double b) { return std::min(a, b); });
        const std::size_t start = ell.size() / 2;
        double sx = 0, sy = 0, sxx = 0, sxy = 0, k = 0;
        for (std::size_t i = start; i < ell.size(); ++i) {
            const double x = std::log1p(ell[i]);
            sx += x, sy += env[i], sxx += x * x, sxy += x * env[i], k += 1;
        }
        const double den = k * sxx - sx * sx;
        rep.fitted_slope = den > 0 ? (k * sxy - sx * sy) / den : 0.0;
    }

    bool any_fail = false, all_hold = true, informative = false;
    for (const auto& s : sides) {
        if (!s.informative) continue;
        informative = true;
        any_fail |= s.trend == Trend::Diverges;
        all_hold &= s.trend == Trend::Settles;
    }
    if (any_fail) {
        rep.verdict = ConditionVerdict::Fails;
        if (rep.reason.empty()) rep.reason = "ratio keeps decaying at a steady pace per block";
    } else if (informative && all_hold && rep.log_spread <= std::log(opt.bound_factor)) {
        rep.verdict = ConditionVerdict::Holds;
    } else {
        rep.verdict = ConditionVerdict::Borderline;
        if (rep.reason.empty())
            rep.reason = !informative ? "window too short for block analysis"
                         : all_hold   ? "ratio spread exceeds the boundedness factor"
                                      : "decay trend inconclusive";
    }
    return rep;
}

}  // namespace bowtie
