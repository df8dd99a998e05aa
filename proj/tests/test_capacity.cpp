#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "bowtie/capacity.hpp"
#include "bowtie/errors.hpp"
#include "bowtie/measure.hpp"
#include "oracles.hpp"

using namespace bowtie;
using std::numbers::pi;

namespace {

Radius R(double r) { return Radius::from_value(r); }

CapacityQuery query(double p, double inner, double outer, Domain d = Domain::FullSpace)
{
    return CapacityQuery{Exponent(p), R(inner), R(outer), d};
}

Radius alpha_k(int k) { return Radius::from_log2(-std::ldexp(1.0, k)); }

}  // namespace

TEST_CASE("trivial capacities")
{
    auto c1 = RadialWeight::build(WeightSpec::constant(1));
    CHECK(point_capacity(c1, 2, R(1)).value == doctest::Approx(2.0).epsilon(1e-14));
    for (double p : {1.5, 2.0, 3.0})
        for (double r : {0.3, 1.0, 5.0})
            CHECK(point_capacity(c1, p, R(r)).value ==
                  doctest::Approx(2 * std::pow(r, 1 - p)).epsilon(1e-12));

    auto c2 = RadialWeight::build(WeightSpec::constant(2));
    auto zero = point_capacity(c2, 2, R(0.7));
    CHECK(zero.value == 0.0);
    CHECK(zero.reason == "divergent dual integral");

    auto ring = annulus_capacity(c2, CapacityQuery{2, R(1), Radius::from_ln(1.0)});
    CHECK(std::fabs(ring.value / (2 * pi) - 1) < 1e-8);

    auto lin = RadialWeight::build(WeightSpec::power_log(1, 1.0));
    CHECK(point_capacity(lin, 1, R(1)).value == 0.0);
}

TEST_CASE("power weight point capacity")
{
    auto w = RadialWeight::build(WeightSpec::power_log(2, -1.5));
    // ∫_0^1 (2π ρ^{-1/2})^{-1} dρ = 1/(3π)
    CHECK(point_capacity(w, 2, R(1)).value == doctest::Approx(3 * pi).epsilon(1e-12));
    auto lim = point_capacity_limit(w, 2, R(1));
    CHECK(lim.converged);
    CHECK(std::exp(lim.log_limit) == doctest::Approx(3 * pi).epsilon(1e-5));
}

TEST_CASE("critical logarithmic weight")
{
    // ŵ = 2πρ (ln 1/ρ)², ∫_0^{0.1} dρ / ŵ = 1/(2π ln 10)
    auto w = RadialWeight::build(WeightSpec::power_log(2, 0.0, 2.0));
    CHECK(point_capacity(w, 2, R(0.1)).value ==
          doctest::Approx(2 * pi * std::log(10.0)).epsilon(1e-10));
}

TEST_CASE("domain factors")
{
    auto c1 = RadialWeight::build(WeightSpec::constant(1));
    CHECK(point_capacity(c1, 1, R(1), Domain::BowTie).value == 2.0);
    CHECK(point_capacity(c1, 1, R(1), Domain::PositiveQuadrant).value == 1.0);
    for (int n = 1; n <= 6; ++n) {
        CHECK(domain_factor(n, Domain::FullSpace) == 1.0);
        CHECK(std::ldexp(domain_factor(n, Domain::PositiveQuadrant), n) == 1.0);
        CHECK(std::ldexp(domain_factor(n, Domain::BowTie), n - 1) == 1.0);
        CHECK(std::exp(log_domain_factor(n, Domain::BowTie)) ==
              doctest::Approx(domain_factor(n, Domain::BowTie)));
    }
    auto w = RadialWeight::build(WeightSpec::power_log(3, 0.4, -1.0));
    const auto full = annulus_capacity(w, query(2.5, 0.1, 2.0));
    const auto quad = annulus_capacity(w, query(2.5, 0.1, 2.0, Domain::PositiveQuadrant));
    const auto bow = annulus_capacity(w, query(2.5, 0.1, 2.0, Domain::BowTie));
    CHECK(full.value == doctest::Approx(8 * quad.value).epsilon(1e-14));
    CHECK(full.value == doctest::Approx(4 * bow.value).epsilon(1e-14));
    CHECK(domain_from_string("bowtie") == Domain::BowTie);
    CHECK_THROWS_AS(domain_from_string("torus"), MalformedSpec);
}

TEST_CASE("bad queries")
{
    auto w = RadialWeight::build(WeightSpec::constant(2));
    CHECK_THROWS_AS(annulus_capacity(w, query(0.5, 0.1, 1)), OutOfRange);
    CHECK_THROWS_AS(annulus_capacity(w, query(2, 1, 1)), OutOfRange);
    CHECK_THROWS_AS(discrete_capacity_oracle(w, query(2, 0, 1), 128), OutOfRange);
    CHECK_THROWS_AS(discrete_capacity_oracle(w, query(2, 0.1, 1), 32), OutOfRange);
}

TEST_CASE("oracle against closed forms")
{
    auto c1 = RadialWeight::build(WeightSpec::constant(1));
    auto o = discrete_capacity_oracle(c1, query(2, 1e-6, 1), 4096);
    CHECK(std::exp(o.log_value) == doctest::Approx(2.0).epsilon(1e-5));

    auto c2 = RadialWeight::build(WeightSpec::constant(2));
    const double want = annulus_capacity(c2, query(3, 0.5, 1)).value;
    o = discrete_capacity_oracle(c2, query(3, 0.5, 1), 4096);
    CHECK(std::fabs(std::exp(o.log_value) / want - 1) < 1e-4);
    // (2π)^{-1/2} ∫_{1/2}^1 ρ^{-1/2} dρ = (2 - √2)/√(2π), so cap = 2π/(2 - √2)²
    CHECK(want == doctest::Approx(2 * pi / std::pow(2 - std::sqrt(2.0), 2)).epsilon(1e-12));

    auto st = RadialWeight::build(WeightSpec::dyadic_staircase());
    CapacityQuery q{Exponent(9, 2), alpha_k(5), alpha_k(3), Domain::FullSpace};
    const double exact = annulus_capacity(st, q).log_value;
    o = discrete_capacity_oracle(st, q, 1 << 16);
    CHECK(std::fabs(std::expm1(o.log_value - exact)) < 1e-3);
    CHECK(std::fabs(std::expm1(o.log_descent - o.log_series)) < 1e-6);
}

TEST_CASE("oracle for p = 1 tracks the essential infimum")
{
    auto w = RadialWeight::build(WeightSpec::power_log(2, 0.5, -1.0));
    const auto q = query(1, 0.01, 0.2);
    const double exact = annulus_capacity(w, q).log_value;
    const auto o = discrete_capacity_oracle(w, q, 1 << 14);
    CHECK(o.log_value >= exact - 1e-12);
    CHECK(o.log_value - exact < 1e-3);
}

TEST_CASE("capacity is monotone in both radii")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<WeightSpec> specs{WeightSpec::power_log(2, -0.5, 1.0), WeightSpec::power_log(3, 1.2),
                                  WeightSpec::inner_power(2, -1.0), WeightSpec::dyadic_staircase()};
    for (int trial = 0; trial < 200; ++trial) {
        auto w = RadialWeight::build(specs[std::size_t(trial) % specs.size()]);
        const double p = 1 + 3 * u(rng);
        double x[3] = {-8 * u(rng), -8 * u(rng), -8 * u(rng)};
        std::sort(x, x + 3);
        if (x[1] - x[0] < 1e-3 || x[2] - x[1] < 1e-3) continue;
        auto cap = [&](double a, double b) {
            return annulus_capacity(w, CapacityQuery{p, Radius::from_ln(a), Radius::from_ln(b)})
                .log_value;
        };
        // shrinking the hole lowers capacity; enlarging the outer ball lowers it too
        CHECK(cap(x[0], x[2]) <= cap(x[1], x[2]) + 1e-12);
        CHECK(cap(x[0], x[2]) <= cap(x[0], x[1]) + 1e-12);
    }
}

TEST_CASE("positivity classifier")
{
    CHECK(capacity_positivity_classify_powerlog(2, 3, 0, 0) == Positivity::Positive);
    CHECK(capacity_positivity_classify_powerlog(2, 2, 0, 1.5) == Positivity::Positive);
    CHECK(capacity_positivity_classify_powerlog(2, 1, -1, -0.5) == Positivity::Zero);
    CHECK(capacity_positivity_classify_powerlog(2, 1, -1, 0) == Positivity::Positive);
    CHECK(capacity_positivity_classify_powerlog(2, 2, 0, 1) == Positivity::Zero);
    CHECK(capacity_positivity_classify_powerlog(3, Exponent(10, 3), Exponent(1, 3), 2.4) ==
          Positivity::Positive);
    CHECK_THROWS_AS(capacity_positivity_classify_powerlog(2, 2, -2, 0), OutOfRange);
    CHECK_THROWS_AS(capacity_positivity_classify_powerlog(2, 0.5, 0, 0), OutOfRange);

    CHECK(capacity_condition_classify_powerlog(2, 2, -1.5, 0));
    CHECK_FALSE(capacity_condition_classify_powerlog(2, 2, 0, 1.5));
    CHECK(capacity_condition_classify_powerlog(2, 1, -1, 0));
}

TEST_CASE("numeric positivity matches the classifier on a small grid")
{
    int checked = 0;
    for (int n : {1, 2, 3})
        for (double p : {1.0, 2.0, 3.5})
            for (double da : {-0.5, 0.0, 0.3})
                for (double beta : {-1.5, 0.0, 2.0, 4.0}) {
                    const Exponent alpha = Exponent(p) - Exponent(double(n)) + Exponent(da);
                    if (!((alpha + Exponent(double(n))).value() > 0)) continue;
                    if (da == 0 && std::fabs(beta - (p - 1)) < 0.1) continue;
                    auto w = RadialWeight::build(WeightSpec::power_log(n, alpha.value(), beta));
                    const auto num = numeric_point_capacity_positivity(w, p, R(0.5));
                    CAPTURE(n);
                    CAPTURE(p);
                    CAPTURE(da);
                    CAPTURE(beta);
                    CHECK(num.verdict == capacity_positivity_classify_powerlog(n, p, alpha, beta));
                    ++checked;
                }
    CHECK(checked > 80);
}

TEST_CASE("capacity condition on power weights")
{
    const Window win{R(1e-6), R(1e3)};
    auto good = capacity_condition_check(RadialWeight::build(WeightSpec::power_log(2, -1.5)), 2, win);
    CHECK(good.verdict == ConditionVerdict::Holds);
    CHECK(good.upper_bound_ok);
    CHECK(good.log_spread < 1e-9);

    auto flat = capacity_condition_check(RadialWeight::build(WeightSpec::constant(2)), 2, win);
    CHECK(flat.verdict == ConditionVerdict::Fails);

    // critical case: the ratio decays like (ln 1/r)^{1-p}
    auto crit =
        capacity_condition_check(RadialWeight::build(WeightSpec::power_log(2, 0.0, 2.0)), 2,
                                 Window{Radius::from_ln(-200), R(0.5)});
    CHECK(crit.verdict == ConditionVerdict::Fails);
    CHECK(crit.fitted_slope < -0.5);

    CHECK_THROWS_AS(capacity_condition_check(RadialWeight::build(WeightSpec::constant(2)), 2,
                                             Window{R(0.01), R(1)}),
                    WindowTooNarrow);
}

TEST_CASE("capacity condition on the staircase")
{
    auto st = RadialWeight::build(WeightSpec::dyadic_staircase());
    const Window win{alpha_k(8), alpha_k(2)};
    auto low = capacity_condition_check(st, 3.9, win);
    CHECK(low.verdict == ConditionVerdict::Fails);
    auto four = capacity_condition_check(st, 4, win);
    CHECK(four.verdict == ConditionVerdict::Fails);
    auto high = capacity_condition_check(st, 4.5, win);
    CHECK(high.verdict == ConditionVerdict::Holds);
    CHECK(high.upper_bound_ok);
    CHECK(low.upper_bound_ok);
    CHECK(high.log_spread < std::log(1e3));
}

TEST_CASE("point capacity at p = 10/3 vanishes along the staircase")
{
    auto st = RadialWeight::build(WeightSpec::dyadic_staircase(-std::ldexp(1.0, 1020)));
    const Exponent p(10, 3);
    std::vector<Radius> inner;
    for (int k = 2; k <= 1000; k = k < 512 ? 2 * k : 1000) {
        inner.push_back(alpha_k(k));
        if (k == 1000) break;
    }
    auto lim = point_capacity_limit(st, p, alpha_k(0), Domain::PositiveQuadrant, inner);
    for (std::size_t i = 1; i < lim.sequence.size(); ++i)
        CHECK(lim.sequence[i].log_value < lim.sequence[i - 1].log_value);
    CHECK(lim.log_limit < std::log(1e-8));
}
