#include "bowtie/exponent.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "bowtie/errors.hpp"

namespace bowtie {
namespace {

using i128 = __int128;

struct Reduced {
    std::int64_t num;
    std::int64_t den;
};

std::optional<Reduced> reduce(i128 num, i128 den)
{
    if (den == 0) return std::nullopt;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 a = num < 0 ? -num : num;
    i128 b = den;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
    if (num > lim || num < -lim || den > lim) return std::nullopt;
    return Reduced{std::int64_t(num), std::int64_t(den)};
}

}  // namespace

std::optional<Rational> Rational::from_wide(__int128 num, __int128 den)
{
    auto r = reduce(num, den);
    if (!r) return std::nullopt;
    Rational out;
    out.num_ = r->num;
    out.den_ = r->den;
    return out;
}

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den)
{
    if (den == 0) throw MalformedSpec("rational with zero denominator");
    auto r = reduce(num, den);
    num_ = r->num;
    den_ = r->den;
}

std::optional<Rational> Rational::add(const Rational& a, const Rational& b)
{
    return from_wide(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                        i128(a.den_) * b.den_);
}

std::optional<Rational> Rational::mul(const Rational& a, const Rational& b)
{
    return from_wide(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
}

std::optional<Rational> Rational::div(const Rational& a, const Rational& b)
{
    if (b.num_ == 0) return std::nullopt;
    return from_wide(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
}

namespace {

// Exact reading of decimal text: sign, digits, optional fraction, optional
// exponent. nullopt when the text is not decimal or does not fit int64.
std::optional<Rational> exact_decimal(std::string_view text, bool& malformed)
{
    malformed = false;
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
    i128 mantissa = 0;
    int scale = 0;
    int digits = 0;
    bool seen_point = false;
    bool too_long = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.' && !seen_point) {
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9') break;
        if (mantissa == 0 && c == '0') {
            if (seen_point) --scale;
            continue;
        }
        if (++digits > 18) {
            too_long = true;
            continue;
        }
        mantissa = mantissa * 10 + (c - '0');
        if (seen_point) --scale;
    }
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') {
            malformed = true;
            return std::nullopt;
        }
        int e = 0;
        auto rest = text.substr(i + 1);
        if (!rest.empty() && rest[0] == '+') rest.remove_prefix(1);
        auto r = std::from_chars(rest.data(), rest.data() + rest.size(), e);
        if (r.ec != std::errc{} || r.ptr != rest.data() + rest.size()) {
            malformed = true;
            return std::nullopt;
        }
        scale += e;
    }
    if (too_long) return std::nullopt;
    if (mantissa == 0) return Rational(0);
    if (scale > 18 || scale < -18) return std::nullopt;
    i128 num = negative ? -mantissa : mantissa;
    i128 den = 1;
    for (int k = 0; k < scale; ++k) num *= 10;
    for (int k = 0; k < -scale; ++k) den *= 10;
    return Rational::from_wide(num, den);
}

}  // namespace

// A double is taken to mean its shortest round-trip decimal, so 0.1 is 1/10.
Exponent::Exponent(double value) : value_(value)
{
    if (!std::isfinite(value)) return;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    bool malformed = false;
    exact_ = exact_decimal(std::string_view(buf, res.ptr), malformed);
}

Exponent::Exponent(const Rational& exact) : value_(exact.value()), exact_(exact) {}

Exponent Exponent::parse(std::string_view text)
{
    auto fail = [&] {
        return MalformedSpec("cannot parse exponent '" + std::string(text) + "'");
    };
    if (text.empty()) throw fail();

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::int64_t num = 0, den = 0;
        auto lhs = text.substr(0, slash);
        auto rhs = text.substr(slash + 1);
        auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), num);
        auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), den);
        if (r1.ec != std::errc{} || r1.ptr != lhs.data() + lhs.size() ||
            r2.ec != std::errc{} || r2.ptr != rhs.data() + rhs.size() || den == 0)
            throw fail();
        return Exponent(Rational(num, den));
    }

    double value = 0.0;
    {
        std::string owned(text);
        std::size_t used = 0;
        try {
            value = std::stod(owned, &used);
        } catch (const std::exception&) {
            throw fail();
        }
        if (used != owned.size() || !std::isfinite(value)) throw fail();
    }
    bool malformed = false;
    auto exact = exact_decimal(text, malformed);
    if (malformed) throw fail();
    Exponent out(value);
    out.exact_ = exact;
    return out;
}

int Exponent::sign() const noexcept
{
    if (exact_) return exact_->sign();
    return (value_ > 0) - (value_ < 0);
}

std::string Exponent::to_string() const
{
    std::ostringstream out;
    if (exact_ && exact_->den() != 1 && exact_->den() <= 1000000) {
        out << exact_->num() << '/' << exact_->den();
    } else {
        out.precision(17);
        out << value_;
    }
    return out.str();
}

Exponent operator+(const Exponent& a, const Exponent& b)
{
    if (a.exact() && b.exact())
        if (auto r = Rational::add(*a.exact(), *b.exact())) return Exponent(*r);
    return Exponent(a.value() + b.value());
}

Exponent operator-(const Exponent& a) { return Exponent(Rational(-1)) * a; }

Exponent operator-(const Exponent& a, const Exponent& b) { return a + (-b); }

Exponent operator*(const Exponent& a, const Exponent& b)
{
    if (a.exact() && b.exact())
        if (auto r = Rational::mul(*a.exact(), *b.exact())) return Exponent(*r);
    return Exponent(a.value() * b.value());
}

Exponent operator/(const Exponent& a, const Exponent& b)
{
    if (a.exact() && b.exact())
        if (auto r = Rational::div(*a.exact(), *b.exact())) return Exponent(*r);
    return Exponent(a.value() / b.value());
}

}  // namespace bowtie
