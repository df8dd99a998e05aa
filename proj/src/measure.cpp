#include "bowtie/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "bowtie/errors.hpp"
#include "bowtie/parallel.hpp"
#include "bowtie/quadrature.hpp"

namespace bowtie {

double log_mu_ball(const RadialWeight& w, Radius r)
{
    return w.log_hat_moment(Exponent(1), Radius::zero(), r);
}

double mu_ball(const RadialWeight& w, double r)
{
    return std::exp(log_mu_ball(w, Radius::from_value(r)));
}

namespace {

// Cap fraction from 1 - c and 1 + c, each supplied without cancellation.
double cap_fraction(int n, double c, double one_minus, double one_plus)
{
    if (one_minus <= 0.0) return 0.0;
    if (one_plus <= 0.0) return 1.0;
    if (n == 1) return 0.5;
    if (n == 2) {
        return c >= 0.0 ? 2.0 * std::asin(std::sqrt(0.5 * one_minus)) / std::numbers::pi
                        : 1.0 - 2.0 * std::asin(std::sqrt(0.5 * one_plus)) / std::numbers::pi;
    }
    if (n == 3) return 0.5 * one_minus;
    const double a = 0.5 * (n - 1);
    if (c * c < 0.5) {
        // near the equator; I_{sin²θ}(a, ½) = 1 - I_{cos²θ}(½, a) keeps precision
        const double d = 0.5 * boost::math::ibeta(0.5, a, c * c);
        return c >= 0.0 ? 0.5 - d : 0.5 + d;
    }
    const double half = 0.5 * boost::math::ibeta(a, 0.5, one_minus * one_plus);
    return c >= 0.0 ? half : 1.0 - half;
}

}  // namespace

double spherical_cap_fraction(int n, double c)
{
    c = std::clamp(c, -1.0, 1.0);
    return cap_fraction(n, c, 1.0 - c, 1.0 + c);
}

double log_ball_moment(const RadialWeight& w, const Exponent& gamma, Radius t, Radius r)
{
    const int n = w.dimension();
    const Exponent kappa(double(n - 1));
    if (t.is_zero()) return w.log_omega() + w.log_moment(gamma, kappa, Radius::zero(), r);

    const double q = std::exp(t.ln() - r.ln());
    auto scaled = [&](double x) {
        return x <= 0.0 ? Radius::zero() : Radius::from_ln(r.ln() + std::log(x));
    };

    if (n == 1) {
        if (q >= 1.0) return w.log_moment(gamma, kappa, scaled(q - 1.0), scaled(q + 1.0));
        return log_add(w.log_moment(gamma, kappa, Radius::zero(), scaled(1.0 - q)),
                       w.log_moment(gamma, kappa, Radius::zero(), scaled(1.0 + q)));
    }

    LogSum total;
    double lo;
    if (q < 1.0) {
        // the sphere of radius ρ < r - t lies inside the ball
        lo = 1.0 - q;
        total.add(w.log_omega() + w.log_moment(gamma, kappa, Radius::zero(), scaled(lo)));
    } else if (q == 1.0) {
        // the ball touches the origin; near it half of each small sphere is inside
        lo = 1e-10;
        total.add(w.log_omega() + std::log(0.5) +
                  w.log_moment(gamma, kappa, Radius::zero(), scaled(lo)));
    } else {
        lo = q - 1.0;
    }
    if (total.value() == kInf) return kInf;
    const double hi = q + 1.0;

    // x = c - h cos(πs) clusters nodes at both ends where the cap fraction has
    // square-root behaviour. Distances to both ends are kept separately since
    // the integrand can be concentrated near either.
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double base = std::log(h * std::numbers::pi) + w.log_omega() + n * r.ln();
    auto integrand = [&](double s) {
        const double sn = std::sin(0.5 * std::numbers::pi * s);
        const double cs = std::cos(0.5 * std::numbers::pi * s);
        const double d_lo = 2.0 * h * sn * sn;  // x - lo
        const double d_hi = 2.0 * h * cs * cs;  // hi - x
        const double x = s <= 0.5 ? lo + d_lo : hi - d_hi;
        // 1 ∓ cos θ with cos θ = (x² + q² - 1)/(2qx); hi - x = 1 + q - x
        const double den = 2.0 * q * x;
        const double near = q < 1.0 ? d_lo : x + (q - 1.0);  // x + q - 1
        const double far = q > 1.0 ? d_lo : x + (1.0 - q);   // 1 + x - q
        const double one_minus = d_hi * far / den;
        const double one_plus = near * (x + q + 1.0) / den;
        const double cos_theta = one_minus < one_plus ? 1.0 - one_minus : one_plus - 1.0;
        const double frac = cap_fraction(n, cos_theta, one_minus, one_plus);
        if (frac <= 0.0) return -kInf;
        return base + std::log(2.0 * sn * cs) + (n - 1) * std::log(x) +
               gamma.value() * w.log_w(scaled(x)) + std::log(frac);
    };
    std::vector<double> cuts{0.0};
    for (Radius b : w.breakpoints(scaled(lo), scaled(hi))) {
        const double x = std::exp(b.ln() - r.ln());
        cuts.push_back(std::acos(std::clamp((c - x) / h, -1.0, 1.0)) / std::numbers::pi);
    }
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total.add(quad::log_integrate1(integrand, cuts[i], cuts[i + 1]));
    return total.value();
}

double mu_offcenter_ball(const RadialWeight& w, double t, double r)
{
    return std::exp(log_ball_moment(w, Exponent(1), Radius::from_value(t), Radius::from_value(r)));
}

namespace {

std::vector<Radius> log_grid(Window window, double per_decade)
{
    const double step = std::log(10.0) / per_decade;
    std::vector<Radius> out;
    for (double x = window.lo.ln(); x <= window.hi.ln() + 1e-9 * step; x += step)
        out.push_back(Radius::from_ln(x));
    return out;
}

std::vector<DoublingSample> doubling_grid(const RadialWeight& w, Window window,
                                          const DoublingOptions& opt, int per_decade)
{
    const auto radii = log_grid(window, per_decade);
    std::vector<DoublingSample> grid;
    for (Radius r : radii)
        for (double qv : opt.center_ratios) grid.push_back(DoublingSample{qv, r, 0.0});
    parallel_for(grid.size(), [&](std::size_t i) {
        auto& g = grid[i];
        const Radius t = g.center_ratio > 0 ? g.r.shifted(std::log(g.center_ratio)) : Radius::zero();
        const double big = log_ball_moment(w, Exponent(1), t, g.r.shifted(std::log(2.0)));
        const double small = log_ball_moment(w, Exponent(1), t, g.r);
        g.ratio = std::exp(big - small);
    });
    return grid;
}

}  // namespace

DoublingReport doubling_estimate(const RadialWeight& w, Window window, const DoublingOptions& opt)
{
    if (!(window.lo < window.hi)) throw WindowTooNarrow("doubling window is empty");
    DoublingReport rep;
    rep.grid = doubling_grid(w, window, opt, opt.per_decade);
    if (rep.grid.empty()) throw WindowTooNarrow("doubling grid is empty");
    rep.witness = *std::max_element(rep.grid.begin(), rep.grid.end(),
                                    [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
    rep.constant_estimate = rep.witness.ratio;
    const auto fine = doubling_grid(w, window, opt, 2 * opt.per_decade);
    rep.refined_estimate = 0;
    for (const auto& g : fine) rep.refined_estimate = std::max(rep.refined_estimate, g.ratio);
    rep.doubling = std::isfinite(rep.constant_estimate) &&
                   std::fabs(rep.refined_estimate / rep.constant_estimate - 1.0) < 0.05;
    return rep;
}

ExponentEstimate exponent_estimate(const RadialWeight& w, Radius r0, Radius r_min,
                                   const ExponentOptions& opt)
{
    ExponentEstimate est;
    est.r_min = r_min;
    Radius top = r0;
    bool inclusive = false;
    if (r0.is_infinite()) {
        top = opt.r_max.value_or(w.natural_window().hi);
        inclusive = true;
        est.r0_proxied = true;
        est.notes.push_back("R_0 = inf replaced by the finite proxy R_max = 2^" +
                            std::to_string(top.log2()));
    }
    est.r0 = top;
    if (!(r_min < top) || r_min.is_zero())
        throw WindowTooNarrow("exponent window needs 0 < r_min < R_0");

    const int m = opt.per_octave;
    const long j_lo = long(std::ceil(m * r_min.log2() - 1e-9));
    const long j_hi = inclusive ? long(std::floor(m * top.log2() + 1e-9))
                                : long(std::ceil(m * top.log2() - 1e-9)) - 1;
    if (j_hi <= j_lo) throw WindowTooNarrow("exponent window holds fewer than 2 lattice radii");

    auto radius = [&](long j) { return Radius::from_log2(double(j) / m); };
    std::vector<double> lm(std::size_t(j_hi - j_lo + 1));
    parallel_for(lm.size(), [&](std::size_t i) { lm[i] = log_mu_ball(w, radius(j_lo + long(i))); });

    auto scan = [&](int K, std::vector<SlopeSample>* keep) {
        double best = -kInf;
        SlopeSample arg;
        long pairs = 0;
        for (long j = j_lo; j <= j_hi; ++j) {
            for (int k = (K + 1) / 2; k <= K; ++k) {
                const long jr = j - long(k) * m;
                if (jr < j_lo) break;
                const double slope = (lm[j - j_lo] - lm[jr - j_lo]) / (k * kLn2);
                SlopeSample s{radius(jr), radius(j), slope};
                ++pairs;
                if (keep) keep->push_back(s);
                if (slope > best) {
                    best = slope;
                    arg = s;
                }
            }
        }
        return std::tuple{best, arg, pairs};
    };

    auto [q, arg, pairs] = scan(opt.max_octaves, &est.slope_samples);
    if (pairs < 8)
        throw WindowTooNarrow("exponent window yields " + std::to_string(pairs) +
                              " dyadic pairs (need 8); widen it to at least 2^" +
                              std::to_string((opt.max_octaves + 1) / 2) + " in ratio");
    est.Q_hat = std::max(0.0, q);
    est.max_pair = arg;
    auto [q2, arg2, pairs2] = scan(opt.max_octaves + 2, nullptr);
    est.Q_hat_extended = pairs2 > 0 ? std::max(0.0, q2) : est.Q_hat;
    est.saturated = pairs2 > 0 &&
                    std::fabs(est.Q_hat_extended - est.Q_hat) < 0.01 * std::max(est.Q_hat, 1e-12);
    if (!est.saturated) est.notes.push_back("Q_hat not saturated under K -> K+2");
    return est;
}

LowerExponentFit measure_lower_exponent(const RadialWeight& w, Window window, int samples)
{
    LowerExponentFit fit;
    fit.top = window.hi;
    const double top_mu = log_mu_ball(w, window.hi);
    const double lo = window.lo.ln(), hi = window.hi.ln();
    const double mid = 0.5 * (lo + hi);
    fit.exponent = -kInf;
    std::vector<double> s(std::size_t(samples), -kInf);
    parallel_for(s.size(), [&](std::size_t i) {
        const double x = lo + (mid - lo) * double(i) / double(samples - 1);
        s[i] = (log_mu_ball(w, Radius::from_ln(x)) - top_mu) / (x - hi);
    });
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] > fit.exponent) {
            fit.exponent = s[i];
            fit.witness = Radius::from_ln(lo + (mid - lo) * double(i) / double(samples - 1));
        }
    }
    return fit;
}

std::string to_string(AsymptoticClass c)
{
    switch (c) {
    case AsymptoticClass::PowerLog: return "PowerLog";
    case AsymptoticClass::LogPower: return "LogPower";
    case AsymptoticClass::OnePlusLog: return "OnePlusLog";
    case AsymptoticClass::Divergent: return "Divergent";
    }
    return "unknown";
}

PowerLogAsymptotics power_log_asymptotics(double a, double b, double r)
{
    PowerLogAsymptotics out;
    const double phi = phi_from_ln(std::log(r));
    if (a > 0) {
        out.cls = AsymptoticClass::PowerLog;
        out.representative = std::pow(r, a) * std::pow(phi, b);
    } else if (a == 0 && b < -1) {
        if (r <= 1) {
            out.cls = AsymptoticClass::LogPower;
            out.representative = std::pow(phi, b + 1);
        } else {
            out.cls = AsymptoticClass::OnePlusLog;
            out.representative = 1 + std::log(r);
        }
    } else {
        out.cls = AsymptoticClass::Divergent;
        out.representative = kInf;
    }
    out.numeric =
        std::exp(log_power_log_integral(a - 1, b, Radius::zero(), Radius::from_value(r)));
    return out;
}

}  // namespace bowtie
