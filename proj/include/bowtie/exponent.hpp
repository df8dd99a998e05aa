#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bowtie {

/// Reduced fraction num/den with den > 0.
class Rational {
public:
    Rational(std::int64_t num = 0, std::int64_t den = 1);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double value() const noexcept { return double(num_) / double(den_); }
    int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

    // Arithmetic returns nullopt on int64 overflow.
    static std::optional<Rational> add(const Rational& a, const Rational& b);
    static std::optional<Rational> mul(const Rational& a, const Rational& b);
    static std::optional<Rational> div(const Rational& a, const Rational& b);

    /// Reduces a wide fraction; nullopt if it does not fit.
    static std::optional<Rational> from_wide(__int128 num, __int128 den);

    friend bool operator==(const Rational&, const Rational&) = default;

private:

    std::int64_t num_;
    std::int64_t den_;
};

/// A real exponent that remembers its exact rational value when it has one.
///
/// Critical exponents (p = 10/3 for the dyadic staircase, p = Q in general)
/// sit on discontinuities of the capacity as a function of p. Carrying the
/// rational lets per-level exponents cancel to exactly zero instead of to
/// a rounding residue that gets multiplied by 2^k.
class Exponent {
public:
    /// Exact when the shortest decimal form of `value` is a short fraction.
    Exponent(double value = 0.0);  // NOLINT: implicit by intent
    Exponent(const Rational& exact);  // NOLINT
    Exponent(std::int64_t num, std::int64_t den) : Exponent(Rational(num, den)) {}

    /// Accepts "10/3", "-2", "3.9", "1e-3". Decimal text is read exactly.
    static Exponent parse(std::string_view text);

    double value() const noexcept { return value_; }
    const std::optional<Rational>& exact() const noexcept { return exact_; }
    int sign() const noexcept;
    bool is_zero() const noexcept { return sign() == 0; }

    std::string to_string() const;

    friend Exponent operator+(const Exponent& a, const Exponent& b);
    friend Exponent operator-(const Exponent& a, const Exponent& b);
    friend Exponent operator*(const Exponent& a, const Exponent& b);
    friend Exponent operator/(const Exponent& a, const Exponent& b);
    friend Exponent operator-(const Exponent& a);

private:
    double value_;
    std::optional<Rational> exact_;
};

}  // namespace bowtie
