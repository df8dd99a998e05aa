#pragma once

#include <string>
#include <vector>

#include "bowtie/weight.hpp"

namespace bowtie {

enum class Domain { FullSpace, PositiveQuadrant, BowTie };
std::string to_string(Domain d);
Domain domain_from_string(const std::string& s);

/// Capacity on the domain divided by the full-space capacity: 2^{-n} for the
/// quadrant, 2^{1-n} for the bow-tie. Exact powers of two.
double domain_factor(int n, Domain d);
double log_domain_factor(int n, Domain d);

struct CapacityQuery {
    Exponent p = Exponent(2);
    Radius inner = Radius::zero();  // zero encodes the point {0}
    Radius outer = Radius::from_value(1.0);
    Domain domain = Domain::FullSpace;
};

struct CapacityResult {
    double value = 0;
    double log_value = -kInf;
    double log_full_space = -kInf;
    Domain domain = Domain::FullSpace;
    std::string method;  // "closed_form" or "discrete_oracle"
    std::string reason;  // set when the value is exactly 0
};

/// (∫ ŵ^{1/(1-p)})^{1-p} over the annulus for p > 1, essinf ŵ for p = 1.
CapacityResult annulus_capacity(const RadialWeight& w, const CapacityQuery& q);

/// Capacity of {0} in B_r.
CapacityResult point_capacity(const RadialWeight& w, const Exponent& p, Radius r,
                              Domain domain = Domain::FullSpace);

struct OracleResult {
    double log_value = -kInf;  // on the query's domain
    double log_series = -kInf;
    double log_descent = -kInf;
    int nodes = 0;
    int iterations = 0;
};

/// Discrete radial energy minimisation on a log-spaced grid. For p > 1 the
/// series formula and a projected Newton descent must agree to 1e-6
/// (OracleDisagreement otherwise); for p = 1 the minimum of ŵ at the cell
/// midpoints. Requires inner > 0 and nodes >= 64.
OracleResult discrete_capacity_oracle(const RadialWeight& w, const CapacityQuery& q, int nodes);

struct LimitSample {
    Radius inner;
    double log_value = -kInf;
};

struct PointCapacityLimit {
    std::vector<LimitSample> sequence;
    bool converged = false;
    double log_limit = -kInf;
};

/// Annulus capacities for the given inner radii (default r·10^{-k},
/// k = 2..8). Converged when the last two differ by < 1e-6 relative or both
/// are below 1e-12 μ(B_r)/r^p.
PointCapacityLimit point_capacity_limit(const RadialWeight& w, const Exponent& p, Radius r,
                                        Domain domain = Domain::FullSpace,
                                        std::vector<Radius> inner = {});

enum class Positivity { Positive, Zero };
std::string to_string(Positivity v);

struct PositivityReport {
    Positivity verdict = Positivity::Zero;
    std::vector<LimitSample> sequence;  // inner radii r e^{-10^k}
    std::string basis;
};

/// Decides cap({0}, B_r) > 0 from the behaviour of the annulus capacities as
/// the inner radius goes to 0 over u = -ln ρ decades.
PositivityReport numeric_point_capacity_positivity(const RadialWeight& w, const Exponent& p,
                                                   Radius r);

/// cap({0}, B_r) > 0 for w = |x|^α φ^β. Throws OutOfRange for α <= -n or p < 1.
Positivity capacity_positivity_classify_powerlog(int n, const Exponent& p, const Exponent& alpha,
                                                 const Exponent& beta);
/// cap({0}, B_r) ≳ r^{-p} μ(B_r) for w = |x|^α φ^β.
bool capacity_condition_classify_powerlog(int n, const Exponent& p, const Exponent& alpha,
                                          const Exponent& beta);

enum class ConditionVerdict { Holds, Fails, Borderline };
std::string to_string(ConditionVerdict v);

struct RatioSample {
    Radius r;
    double log_ratio = 0;  // ln(cap({0},B_r) r^p / μ(B_r))
};

struct CapacityConditionOptions {
    double bound_factor = 1e3;  // F
    int per_octave = 4;
    double flat_decrement = 0.05;
    double hold_ratio = 0.7;
    double fail_ratio = 0.85;
};

struct CapacityConditionReport {
    Exponent p;
    Window window;
    std::vector<RatioSample> ratio_samples;
    ConditionVerdict verdict = ConditionVerdict::Borderline;
    double fitted_slope = 0;  // of the lower envelope against ln(1 + |ln r|)
    double log_spread = 0;    // ln(max/min ratio)
    std::vector<double> decrements;  // envelope drop per block, outermost side
    bool upper_bound_ok = true;      // ratio ≤ 2^p everywhere
    std::string reason;
};

/// Scans cap({0},B_r) r^p / μ(B_r) over the window (capped below R_0). The
/// verdict follows the lower envelope across blocks where |ln r| doubles: a
/// decay that keeps its pace means the ratio tends to 0.
CapacityConditionReport capacity_condition_check(const RadialWeight& w, const Exponent& p,
                                                 Window window, Radius r0 = Radius::infinity(),
                                                 const CapacityConditionOptions& opt = {});

}  // namespace bowtie
