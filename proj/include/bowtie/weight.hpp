#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bowtie/exponent.hpp"
#include "bowtie/radius.hpp"

namespace bowtie {

enum class Family { PowerLog, DyadicStaircase, PiecewiseSegments, Tabulated };

std::string to_string(Family family);

/// w(ρ) = ρ^α φ(ρ)^β with φ(ρ) = max{1, -ln ρ}.
struct PowerLogParams {
    double alpha = 0.0;
    double beta = 0.0;
};

/// The doubly-exponential staircase built from α_k = 2^(-2^k), β_k = α_k^(3/2).
/// Below ρ_min the weight is frozen at w(ρ_min).
struct DyadicStaircaseParams {
    static constexpr double kDefaultLog2RhoMin = -1024.0;  // ρ_min = α_10
    double log2_rho_min = kDefaultLog2RhoMin;
};

/// w(ρ) = coef · ρ^exponent on [from, to). `to` may be +inf.
struct Segment {
    double from = 0.0;
    double to = kInf;
    double coef = 1.0;
    double exponent = 0.0;
};

struct PiecewiseParams {
    std::vector<Segment> segments;
};

/// Samples (ρ_i, w_i), interpolated log-linearly and extrapolated with the
/// end slopes.
struct TabulatedParams {
    std::vector<std::pair<double, double>> samples;
};

struct WeightSpec {
    int n = 1;
    std::variant<PowerLogParams, DyadicStaircaseParams, PiecewiseParams, TabulatedParams>
        params;

    static WeightSpec power_log(int n, double alpha, double beta = 0.0);
    static WeightSpec constant(int n) { return power_log(n, 0.0, 0.0); }
    static WeightSpec dyadic_staircase(
        double log2_rho_min = DyadicStaircaseParams::kDefaultLog2RhoMin);
    static WeightSpec piecewise(int n, std::vector<Segment> segments);
    static WeightSpec tabulated(int n, std::vector<std::pair<double, double>> samples);

    /// |x|^α inside the unit ball, 1 outside.
    static WeightSpec inner_power(int n, double alpha);
};

/// JSON weight spec (schema in docs/weight-spec.md). Unknown keys are rejected.
WeightSpec weight_spec_from_json(const nlohmann::json& j);
nlohmann::json weight_spec_to_json(const WeightSpec& spec);

/// The values of w, ŵ = ω_{n-1} w ρ^{n-1} and w̃ = ρ^{n-1} w at one radius,
/// with their natural logs (the plain values may underflow).
struct ProfileValues {
    double w = 0, w_hat = 0, w_tilde = 0;
    double log_w = 0, log_w_hat = 0, log_w_tilde = 0;
};

/// A radius window [lo, hi] used by scans.
struct Window {
    Radius lo;
    Radius hi;
};

namespace detail {

class Profile {
public:
    virtual ~Profile() = default;
    virtual double log_w(Radius rho) const = 0;
    /// ln ∫_a^b w^γ ρ^κ dρ; +inf when divergent.
    virtual double log_moment(const Exponent& gamma, const Exponent& kappa, Radius a,
                              Radius b) const = 0;
    /// ln essinf_{a<ρ<b} w^γ ρ^κ; the a = 0 end is taken as a limit.
    virtual double log_essinf(const Exponent& gamma, const Exponent& kappa, Radius a,
                              Radius b) const = 0;
    /// Points in (a, b) where the profile is not smooth.
    virtual std::vector<Radius> breakpoints(Radius a, Radius b) const = 0;
    virtual Window natural_window() const = 0;
};

}  // namespace detail

/// An immutable, validated radial weight on R^n.
class RadialWeight {
public:
    /// Throws NonIntegrable or MalformedSpec.
    static RadialWeight build(const WeightSpec& spec);

    int dimension() const noexcept { return spec_.n; }
    Family family() const noexcept;
    const WeightSpec& spec() const noexcept { return spec_; }

    /// ω_{n-1}, the area of the unit sphere in R^n (ω_0 = 2).
    double omega() const noexcept { return std::exp(log_omega_); }
    double log_omega() const noexcept { return log_omega_; }

    double log_w(Radius rho) const { return profile_->log_w(rho); }
    ProfileValues eval(Radius rho) const;

    double log_moment(const Exponent& gamma, const Exponent& kappa, Radius a,
                      Radius b) const
    {
        return profile_->log_moment(gamma, kappa, a, b);
    }
    double log_essinf(const Exponent& gamma, const Exponent& kappa, Radius a,
                      Radius b) const
    {
        return profile_->log_essinf(gamma, kappa, a, b);
    }

    /// ln ∫_a^b ŵ^γ dρ.
    double log_hat_moment(const Exponent& gamma, Radius a, Radius b) const;
    /// ln ∫_a^b w̃^γ dρ over a ⊂ (0, ∞).
    double log_tilde_moment(const Exponent& gamma, Radius a, Radius b) const;
    /// ln essinf ŵ over (a, b).
    double log_hat_essinf(Radius a, Radius b) const;
    double log_tilde_essinf(const Exponent& gamma, Radius a, Radius b) const;

    std::vector<Radius> breakpoints(Radius a, Radius b) const
    {
        return profile_->breakpoints(a, b);
    }
    /// Default scan window for this family.
    Window natural_window() const { return profile_->natural_window(); }

private:
    RadialWeight(WeightSpec spec, std::shared_ptr<const detail::Profile> profile);

    WeightSpec spec_;
    std::shared_ptr<const detail::Profile> profile_;
    double log_omega_ = 0.0;
};

/// ln ω_{n-1} = ln(2 π^{n/2} / Γ(n/2)).
double log_sphere_area(int n);

/// φ(ρ) = max{1, -ln ρ}, from ln ρ.
inline double phi_from_ln(double ln_rho) { return ln_rho < -1.0 ? -ln_rho : 1.0; }

/// ln ∫_lo^hi ρ^e dρ for 0 ≤ lo < hi ≤ ∞ given as logs; +inf when divergent.
double log_power_integral(double e, double ln_lo, double ln_hi);

/// ln ∫_a^b ρ^c φ(ρ)^d dρ; +inf when divergent. Exact where closed forms exist,
/// otherwise log-domain quadrature in u = -ln ρ.
double log_power_log_integral(double c, double d, Radius a, Radius b);

}  // namespace bowtie
