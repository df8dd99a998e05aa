#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <numbers>

namespace bowtie {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = std::numbers::ln2;

/// A radius in [0, ∞], stored by its natural logarithm so that radii like
/// 2^(-2^600) stay representable. ln = -inf encodes 0, +inf encodes ∞.
class Radius {
public:
    constexpr Radius() = default;

    static Radius from_value(double r) { return Radius(r <= 0.0 ? -kInf : std::log(r)); }
    static constexpr Radius from_ln(double ln) { return Radius(ln); }
    static constexpr Radius from_log2(double log2) { return Radius(log2 * kLn2); }
    static constexpr Radius zero() { return Radius(-kInf); }
    static constexpr Radius infinity() { return Radius(kInf); }

    constexpr double ln() const noexcept { return ln_; }
    constexpr double log2() const noexcept { return ln_ / kLn2; }
    double value() const noexcept { return std::exp(ln_); }
    constexpr bool is_zero() const noexcept { return ln_ == -kInf; }
    constexpr bool is_infinite() const noexcept { return ln_ == kInf; }

    /// Radius multiplied by e^shift.
    constexpr Radius shifted(double shift) const noexcept { return Radius(ln_ + shift); }
    Radius times(double factor) const { return Radius(ln_ + std::log(factor)); }

    friend constexpr auto operator<=>(Radius a, Radius b) = default;

private:
    explicit constexpr Radius(double ln) : ln_(ln) {}

    double ln_ = -kInf;
};

/// ln(e^a + e^b) for values in [-inf, +inf].
inline double log_add(double a, double b)
{
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    if (a == kInf || b == kInf) return kInf;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

/// ln(e^a - e^b), requires a >= b; returns -inf when equal.
inline double log_sub(double a, double b)
{
    if (b == -kInf) return a;
    if (b >= a) return -kInf;
    return a + std::log(-std::expm1(b - a));
}

/// Streaming log-sum-exp accumulator.
class LogSum {
public:
    void add(double log_term) { total_ = log_add(total_, log_term); }
    double value() const noexcept { return total_; }

private:
    double total_ = -kInf;
};

}  // namespace bowtie
