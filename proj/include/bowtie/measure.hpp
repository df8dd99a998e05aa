#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bowtie/weight.hpp"

namespace bowtie {

/// ln μ(B_r) = ln ∫_0^r ŵ dρ.
double log_mu_ball(const RadialWeight& w, Radius r);
double mu_ball(const RadialWeight& w, double r);

/// ln ∫_{B(z,r)} w^γ dx for any z with |z| = t. The sphere of radius ρ meets
/// the ball in a cap; its area fraction weights ŵ-style radial quadrature.
double log_ball_moment(const RadialWeight& w, const Exponent& gamma, Radius t, Radius r);
double mu_offcenter_ball(const RadialWeight& w, double t, double r);

/// Area fraction of S^{n-1} lying within angle θ of a fixed pole.
double spherical_cap_fraction(int n, double cos_theta);

struct DoublingSample {
    double center_ratio = 0;  // t / r
    Radius r;
    double ratio = 0;  // μ(B(z,2r)) / μ(B(z,r))
};

struct DoublingReport {
    double constant_estimate = 1;
    double refined_estimate = 1;
    DoublingSample witness;
    std::vector<DoublingSample> grid;
    bool doubling = false;  // false means inconclusive
};

struct DoublingOptions {
    int per_decade = 2;
    std::vector<double> center_ratios = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 16.0};
};

/// Max of μ(2B)/μ(B) over a log grid of radii in the window and centers at
/// t = q·r. Declared doubling when one grid refinement moves it < 5%.
DoublingReport doubling_estimate(const RadialWeight& w, Window window,
                                 const DoublingOptions& opt = {});

struct SlopeSample {
    Radius rho;
    Radius r;
    double slope = 0;  // ln(μ(B_r)/μ(B_ρ)) / ln(r/ρ)
};

struct ExponentOptions {
    int per_octave = 4;
    /// Pairs (r 2^-k, r) use k in [K/2, K]. Short pairs only see the local
    /// slope, which logarithmic factors push above the scaling exponent.
    int max_octaves = 40;
    /// Stand-in for R_0 = ∞; defaults to the top of the weight's natural window.
    std::optional<Radius> r_max;
};

struct ExponentEstimate {
    double Q_hat = 0;
    double Q_hat_extended = 0;  // with max_octaves + 2
    bool saturated = false;
    Radius r_min;
    Radius r0;  // effective upper end (the proxy when R_0 = ∞)
    bool r0_proxied = false;
    SlopeSample max_pair;
    std::vector<SlopeSample> slope_samples;
    std::vector<std::string> notes;
};

/// Largest measure-decay slope over long dyadic pairs on the fixed lattice
/// log2 r ∈ Z/per_octave, r_min ≤ ρ < r < R_0. Throws WindowTooNarrow below
/// 8 pairs.
ExponentEstimate exponent_estimate(const RadialWeight& w, Radius r0, Radius r_min,
                                   const ExponentOptions& opt = {});

struct LowerExponentFit {
    double exponent = 0;
    Radius witness;
    Radius top;
};

/// Smallest s with μ(B_r) ≥ μ(B_top)(r/top)^s for r in the lower half (log
/// scale) of the window.
LowerExponentFit measure_lower_exponent(const RadialWeight& w, Window window,
                                        int samples = 2000);

enum class AsymptoticClass { PowerLog, LogPower, OnePlusLog, Divergent };
std::string to_string(AsymptoticClass c);

struct PowerLogAsymptotics {
    AsymptoticClass cls = AsymptoticClass::Divergent;
    double representative = 0;  // r^a φ^b, φ^{b+1}, 1 + ln r or ∞
    double numeric = 0;         // ∫_0^r ρ^{a-1} φ^b dρ, ∞ when divergent
};

/// Growth class of ∫_0^r ρ^{a-1} φ(ρ)^b dρ with its comparable representative.
PowerLogAsymptotics power_log_asymptotics(double a, double b, double r);

}  // namespace bowtie
