#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bowtie/capacity.hpp"
#include "bowtie/measure.hpp"
#include "bowtie/muckenhoupt.hpp"

namespace bowtie {

struct ExponentComparison {
    ConditionVerdict verdict = ConditionVerdict::Borderline;
    ExponentEstimate estimate;
    double delta_q = 0.05;
    /// Set when p is within δ_Q of Q̂ and the direct capacity check decided.
    std::optional<ConditionVerdict> tie_break;
    std::vector<std::string> notes;
};

/// The capacity condition through p versus the decay exponent: holds for
/// p > Q̂ + δ_Q, fails for p < Q̂ - δ_Q. Closer than δ_Q the direct capacity
/// check decides (p = Q itself fails). Requires p > 1.
ExponentComparison exponent_vs_p(const RadialWeight& w, const Exponent& p, Radius r0,
                                 double delta_q = 0.05, std::optional<Window> window = {});

struct P1SlopeReport {
    ConditionVerdict verdict = ConditionVerdict::Borderline;
    double Q_hat = 0;
    /// ln min of (μ(B_ρ)/μ(B_r))·(r/ρ) over lattice pairs, using pairs up to
    /// half the available depth and all of it.
    double log_min_half = 0;
    double log_min_full = 0;
    std::string reason;
};

/// μ(B_ρ)/μ(B_r) ≳ ρ/r on the window below R_0.
P1SlopeReport p1_slope_check(const RadialWeight& w, Window window, Radius r0 = Radius::infinity(),
                             double delta_q = 0.05);

enum class RouteVerdict { Holds, Fails, Borderline, Unevaluated };
std::string to_string(RouteVerdict v);

enum class FinalVerdict { SupportsPI, DoesNotSupport, Inconsistent, Borderline };
std::string to_string(FinalVerdict v);

struct DecideConfig {
    std::optional<Window> window;  // defaults to the weight's natural window
    Radius r0 = Radius::infinity();
    double delta_q = 0.05;
    ApScanConfig ap;
    CapacityConditionOptions capacity;
};

struct DecisionReport {
    Exponent p;
    nlohmann::json weight;
    Window window;

    std::optional<ApReport> line_ap;  // condition (v)
    RouteVerdict condition_v = RouteVerdict::Unevaluated;

    std::optional<ApReport> rn_ap;  // condition (iv), with the capacity check
    std::optional<CapacityConditionReport> capacity;
    RouteVerdict condition_iv = RouteVerdict::Unevaluated;

    std::optional<ExponentComparison> exponent;  // p > 1
    RouteVerdict exponent_route = RouteVerdict::Unevaluated;

    std::optional<P1SlopeReport> p1;  // p = 1
    RouteVerdict p1_route = RouteVerdict::Unevaluated;

    FinalVerdict final = FinalVerdict::Borderline;
    std::vector<std::string> notes;
};

/// Runs every route to p-Poincaré support on the bow-tie and joins them.
/// A route that throws is recorded as unevaluated with the error in notes.
DecisionReport decide_bowtie_pi(const RadialWeight& w, const Exponent& p,
                                const DecideConfig& cfg = {});

}  // namespace bowtie
