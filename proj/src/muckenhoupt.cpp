#include "bowtie/muckenhoupt.hpp"

#include <algorithm>
#include <cmath>

#include "bowtie/errors.hpp"
#include "bowtie/measure.hpp"
#include "bowtie/parallel.hpp"

namespace bowtie {

namespace {

bool is_one(const Exponent& p) { return (p - Exponent(1)).is_zero(); }

void check_p(const Exponent& p)
{
    if (!(p.value() >= 1.0) || !std::isfinite(p.value()))
        throw OutOfRange("p must be a finite number >= 1, got " + p.to_string());
}

// The interval (t - r, t + r) folded onto [0, ∞) as one or two ranges of |ρ|.
// Each range is given as (lo, hi); a centred range (0, x) counts once per side.
std::vector<std::pair<Radius, Radius>> folded(Radius t, Radius r)
{
    if (t.is_zero()) return {{Radius::zero(), r}, {Radius::zero(), r}};
    const double q = std::exp(r.ln() - t.ln());
    if (q < 1.0)
        return {{t.shifted(std::log1p(-q)), t.shifted(std::log1p(q))}};
    std::vector<std::pair<Radius, Radius>> out{{Radius::zero(), t.shifted(std::log1p(q))}};
    if (q > 1.0) out.push_back({Radius::zero(), t.shifted(std::log(q - 1.0))});
    return out;
}

ApRatio combine(double log_mass, double log_dual, double log_size, const Exponent& p)
{
    // avg(w)·avg(w^{1/(1-p)})^{p-1}, or avg(w)/essinf w for p = 1 (log_dual is ln essinf)
    ApRatio out;
    if (is_one(p)) {
        if (log_dual == -kInf) return {kInf, true};
        out.log_ratio = log_mass - log_size - log_dual;
        return out;
    }
    if (log_dual == kInf) return {kInf, true};
    out.log_ratio = log_mass - log_size + (p.value() - 1.0) * (log_dual - log_size);
    return out;
}

ApRatio line_ratio(const RadialWeight& w, Radius t, Radius r, const Exponent& p)
{
    const auto parts = folded(t, r);
    LogSum mass, dual;
    double inf = kInf;
    const Exponent gamma = is_one(p) ? Exponent(1) : Exponent(1) / (Exponent(1) - p);
    for (const auto& [lo, hi] : parts) {
        mass.add(w.log_tilde_moment(Exponent(1), lo, hi));
        if (is_one(p)) inf = std::min(inf, w.log_tilde_essinf(Exponent(1), lo, hi));
        else dual.add(w.log_tilde_moment(gamma, lo, hi));
    }
    const double log_size = kLn2 + r.ln();
    return combine(mass.value(), is_one(p) ? inf : dual.value(), log_size, p);
}

}  // namespace

ApRatio ap_ratio_interval(const RadialWeight& w, double a, double b, const Exponent& p)
{
    check_p(p);
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw OutOfRange("interval must be bounded and nondegenerate");
    const double c = std::fabs(0.5 * (a + b));
    return line_ratio(w, Radius::from_value(c), Radius::from_value(0.5 * (b - a)), p);
}

ApRatio ap_ratio_ball(const RadialWeight& w, Radius t, Radius r, const Exponent& p)
{
    check_p(p);
    if (r.is_zero() || r.is_infinite() || t.is_infinite())
        throw OutOfRange("ball radius must be positive and finite");
    const int n = w.dimension();
    const double log_size = w.log_omega() + n * r.ln() - std::log(double(n));
    const double mass = log_ball_moment(w, Exponent(1), t, r);
    double dual;
    if (is_one(p)) {
        Radius lo = Radius::zero();
        if (r < t) lo = t.shifted(std::log1p(-std::exp(r.ln() - t.ln())));
        const Radius hi = t.is_zero() ? r : t.shifted(std::log1p(std::exp(r.ln() - t.ln())));
        dual = w.log_essinf(Exponent(1), Exponent(0), lo, hi);
    } else {
        dual = log_ball_moment(w, Exponent(1) / (Exponent(1) - p), t, r);
    }
    return combine(mass, dual, log_size, p);
}

std::string to_string(ApSpace s) { return s == ApSpace::LineWTilde ? "line_wtilde" : "Rn_radial"; }

std::string to_string(ApVerdict v)
{
    switch (v) {
    case ApVerdict::Ap: return "Ap";
    case ApVerdict::NotAp: return "not_Ap";
    case ApVerdict::Borderline: return "borderline";
    }
    return "unknown";
}

ApReport ap_scan(const RadialWeight& w, const Exponent& p, ApSpace space, const ApScanConfig& cfg)
{
    check_p(p);
    ApReport rep;
    rep.p = p;
    rep.space = space;
    rep.window = cfg.window.value_or(w.natural_window());
    const double lo = rep.window.lo.ln(), hi = rep.window.hi.ln();
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi - lo < 4 * std::log(10.0) - 1e-9)
        throw WindowTooNarrow("A_p scan window must span at least 4 decades");

    const double step = kLn2 / cfg.per_octave;
    std::vector<ApSample> sets;
    // Far from r = 1 the trend blocks are wide, so centres thin out in
    // proportion to |ln t|; near 1 they sit on the fixed lattice.
    for (double x = lo; x <= hi + 1e-9 * step; x += std::max(step, std::fabs(x) / cfg.deep_density)) {
        const Radius t = Radius::from_ln(x);
        sets.push_back({Radius::zero(), t, 0});
        for (double q : cfg.radius_ratios) sets.push_back({t, t.times(q), 0});
    }
    std::vector<char> divergent(sets.size(), 0);
    parallel_for(sets.size(), [&](std::size_t i) {
        auto& s = sets[i];
        const ApRatio a = space == ApSpace::LineWTilde ? line_ratio(w, s.t, s.r, p)
                                                       : ap_ratio_ball(w, s.t, s.r, p);
        s.log_ratio = a.log_ratio;
        divergent[i] = a.divergent;
    });
    rep.sets_scanned = sets.size();

    const auto top = std::max_element(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
        return a.log_ratio < b.log_ratio;
    });
    rep.witness = *top;
    rep.log_sup_ratio = top->log_ratio;
    if (std::find(divergent.begin(), divergent.end(), 1) != divergent.end()) {
        rep.verdict = ApVerdict::NotAp;
        rep.reason = is_one(p) ? "essential infimum vanishes on a scanned set"
                               : "dual average diverges on a scanned set";
        return rep;
    }

    // Each set is placed by the outer reach t + r of its radial range.
    auto key = [](const ApSample& s) {
        return s.t.is_zero() ? s.r.ln() : log_add(s.t.ln(), s.r.ln());
    };
    std::vector<double> ell[2], neg[2];
    for (const auto& s : sets) {
        const double k = key(s);
        const int side = k < 0 ? 0 : 1;
        ell[side].push_back(std::fabs(k));
        neg[side].push_back(-s.log_ratio);
    }
    TrendResult trends[2];
    for (int s = 0; s < 2; ++s) trends[s] = block_trend(ell[s], neg[s], step, cfg.trend);
    const int longest = ell[0].size() >= ell[1].size() ? 0 : 1;
    rep.growth = trends[longest].decrements;

    for (int b = 0; b < 64; ++b) {
        const double reach = std::ldexp(1.0, b + 1) - 1.0;
        double sup = -kInf;
        bool all = true;
        for (const auto& s : sets) {
            if (std::fabs(key(s)) < reach) sup = std::max(sup, s.log_ratio);
            else all = false;
        }
        if (sup > -kInf) rep.stage_log_sup.push_back(sup);
        if (all) break;
    }

    bool any_div = false, all_settle = true, informative = false;
    for (const auto& t : trends) {
        if (!t.informative) continue;
        informative = true;
        any_div |= t.trend == Trend::Diverges;
        all_settle &= t.trend == Trend::Settles;
    }
    if (any_div) {
        rep.verdict = ApVerdict::NotAp;
        rep.reason = "sup of the A_p expression keeps growing as the scan widens";
    } else if (informative && all_settle) {
        rep.verdict = ApVerdict::Ap;
    } else {
        rep.verdict = ApVerdict::Borderline;
        rep.reason = informative ? "growth of the sup inconclusive" : "scan too short for a trend";
    }
    return rep;
}

namespace {

void check_alpha(int n, const Exponent& alpha)
{
    if (n < 1) throw OutOfRange("n must be >= 1");
    if (!((alpha + Exponent(double(n))).sign() > 0))
        throw OutOfRange("alpha must exceed -n");
}

}  // namespace

A1Class classify_powerlog_A1(int n, const Exponent& alpha, const Exponent& beta)
{
    check_alpha(n, alpha);
    if (alpha.sign() < 0 || (alpha.is_zero() && beta.sign() >= 0)) return A1Class::A1;
    return A1Class::NotA1;
}

ApVerdict classify_power_Ap_Rn(int n, const Exponent& alpha, const Exponent& p)
{
    check_alpha(n, alpha);
    check_p(p);
    if (alpha.is_zero()) return ApVerdict::Ap;
    const Exponent upper = Exponent(double(n)) * (p - Exponent(1));
    return (alpha - upper).sign() < 0 ? ApVerdict::Ap : ApVerdict::NotAp;
}

ApVerdict classify_powerlog_Ap_Rn(int n, const Exponent& alpha, const Exponent& beta,
                                  const Exponent& p)
{
    check_alpha(n, alpha);
    check_p(p);
    if (is_one(p))
        return classify_powerlog_A1(n, alpha, beta) == A1Class::A1 ? ApVerdict::Ap
                                                                   : ApVerdict::NotAp;
    const Exponent upper = Exponent(double(n)) * (p - Exponent(1));
    return (alpha - upper).sign() < 0 ? ApVerdict::Ap : ApVerdict::NotAp;
}

}  // namespace bowtie
