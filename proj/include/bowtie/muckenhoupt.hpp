#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bowtie/trend.hpp"
#include "bowtie/weight.hpp"

namespace bowtie {

/// ln of the A_p expression on one interval or ball. `divergent` marks an
/// infinite dual average (or a vanishing essinf for p = 1).
struct ApRatio {
    double log_ratio = 0;
    bool divergent = false;
};

/// A_p expression of w̃(ρ) = |ρ|^{n-1} w(|ρ|) on the interval (a, b) ⊂ R.
ApRatio ap_ratio_interval(const RadialWeight& w, double a, double b, const Exponent& p);

/// A_p expression of w on the ball B(z, r) ⊂ R^n with |z| = t.
ApRatio ap_ratio_ball(const RadialWeight& w, Radius t, Radius r, const Exponent& p);

enum class ApSpace { LineWTilde, RnRadial };
std::string to_string(ApSpace s);

enum class ApVerdict { Ap, NotAp, Borderline };
std::string to_string(ApVerdict v);

struct ApScanConfig {
    std::optional<Window> window;  // defaults to the weight's natural window
    int per_octave = 4;
    /// Centres per unit of ln|ln t| once that is coarser than the lattice.
    double deep_density = 128;
    /// Radii as multiples of the center distance t; centred sets (t = 0) are
    /// always included. 1/4 and 1/2 probe the "r ≤ t/2" regime, ≥ 1 sets
    /// reach across the origin.
    std::vector<double> radius_ratios{1.0 / 16, 0.25, 0.5, 0.75, 1.0, 1.5, 4.0};
    TrendOptions trend;
};

struct ApSample {
    Radius t;  // center distance from 0
    Radius r;
    double log_ratio = 0;
};

struct ApReport {
    Exponent p;
    ApSpace space = ApSpace::LineWTilde;
    Window window;
    std::size_t sets_scanned = 0;
    double log_sup_ratio = 0;  // +inf when some set has a divergent dual average
    ApSample witness;
    std::vector<double> stage_log_sup;  // running sup after each doubling of |ln r|
    std::vector<double> growth;         // increments of ln sup per stage, outermost side
    ApVerdict verdict = ApVerdict::Borderline;
    std::string reason;
};

/// Scans the A_p expression over intervals (space = line) or balls
/// (space = R^n) with centres and radii on a log lattice. "not A_p" needs
/// either an infinite ratio or a sup that keeps growing as the scan widens
/// toward 0 and ∞; a large but settling sup is still A_p.
ApReport ap_scan(const RadialWeight& w, const Exponent& p, ApSpace space,
                 const ApScanConfig& cfg = {});

enum class A1Class { A1, NotA1 };
/// |x|^α φ^β on R^n is A_1 iff α < 0 or α = 0 ≤ β. OutOfRange for α ≤ -n.
A1Class classify_powerlog_A1(int n, const Exponent& alpha, const Exponent& beta);

/// |x|^α on R^n is A_p iff -n < α < n(p-1) or α = 0. OutOfRange for α ≤ -n or p < 1.
ApVerdict classify_power_Ap_Rn(int n, const Exponent& alpha, const Exponent& p);

/// |x|^α φ^β on R^n: A_1 per the rule above for p = 1; for p > 1 the
/// logarithm does not move the power thresholds, and at α = n(p-1) the
/// product of averages on small centred balls grows like φ(r)^{p-1}.
ApVerdict classify_powerlog_Ap_Rn(int n, const Exponent& alpha, const Exponent& beta,
                                  const Exponent& p);

}  // namespace bowtie
