#include <cmath>
#include <random>

#include "doctest.h"

#include "bowtie/errors.hpp"
#include "bowtie/muckenhoupt.hpp"
#include "oracles.hpp"

using namespace bowtie;

namespace {

Radius R(double r) { return Radius::from_value(r); }

// A_p expression of an even 1-D weight by Simpson's rule, split at 0.
template <typename F>
double simpson_ratio(F&& wt, double a, double b, double p)
{
    auto integral = [&](auto&& g) {
        if (a < 0 && b > 0) return oracle::simpson(g, a, 0.0) + oracle::simpson(g, 0.0, b);
        return oracle::simpson(g, a, b);
    };
    const double len = b - a;
    const double m1 = integral([&](double x) { return wt(x); }) / len;
    const double md = integral([&](double x) { return std::pow(wt(x), 1 / (1 - p)); }) / len;
    return m1 * std::pow(md, p - 1);
}

}  // namespace

TEST_CASE("interval ratios with hand values")
{
    auto flat = RadialWeight::build(WeightSpec::constant(1));
    for (double p : {1.0, 1.5, 2.0, 5.0})
        CHECK(ap_ratio_interval(flat, -0.3, 2.0, p).log_ratio == doctest::Approx(0.0).epsilon(1e-12));

    auto lin = RadialWeight::build(WeightSpec::constant(2));  // w̃ = |ρ|
    CHECK(ap_ratio_interval(lin, -1, 1, 2).divergent);
    // ½ · (∫_0^1 ρ^{-1/2} dρ)² = ½ · 4
    CHECK(std::exp(ap_ratio_interval(lin, -1, 1, 3).log_ratio) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ap_ratio_interval(lin, -1, 1, 1).divergent);
    CHECK_THROWS_AS(ap_ratio_interval(lin, 1, 1, 2), OutOfRange);
}

TEST_CASE("interval ratios against Simpson")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 40; ++i) {
        const int n = 1 + i % 3;
        const double alpha = -n + 0.3 + 2.5 * u(rng);
        const double beta = -2 + 4 * u(rng);
        const double p = 1.2 + 3 * u(rng);
        // keep the dual integrand integrable at 0 so Simpson has a chance
        if ((alpha + n - 1) / (p - 1) > 0.6) continue;
        auto w = RadialWeight::build(WeightSpec::power_log(n, alpha, beta));
        auto wt = [&](double x) {
            const double r = std::fabs(x);
            const double phi = std::max(1.0, -std::log(r));
            return std::pow(r, n - 1 + alpha) * std::pow(phi, beta);
        };
        const double a = 0.05 + u(rng), b = a + 0.05 + 2 * u(rng);
        const double got = std::exp(ap_ratio_interval(w, a, b, p).log_ratio);
        CHECK(got == doctest::Approx(simpson_ratio(wt, a, b, p)).epsilon(1e-6));
    }
}

TEST_CASE("ball ratios against Monte Carlo")
{
    // w = |x| on R^2, ball B((0.6, 0), 0.5), p = 2: avg |x| · avg |x|^{-1}
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(-1, 1);
    double s1 = 0, s2 = 0;
    long k = 0;
    while (k < 2000000) {
        const double x = u(rng), y = u(rng);
        if (x * x + y * y >= 1) continue;
        const double px = 0.6 + 0.5 * x, py = 0.5 * y;
        const double r = std::hypot(px, py);
        s1 += r;
        s2 += 1 / r;
        ++k;
    }
    const double mc = (s1 / double(k)) * (s2 / double(k));
    auto w = RadialWeight::build(WeightSpec::power_log(2, 1.0));
    const double got = std::exp(ap_ratio_ball(w, R(0.6), R(0.5), 2).log_ratio);
    CHECK(got == doctest::Approx(mc).epsilon(2e-3));

    auto flat = RadialWeight::build(WeightSpec::constant(3));
    CHECK(ap_ratio_ball(flat, R(2), R(0.7), 3).log_ratio == doctest::Approx(0.0).scale(1));
    CHECK(std::fabs(ap_ratio_ball(flat, R(2), R(5), 3).log_ratio) < 1e-9);
}

TEST_CASE("Jensen lower bound on random sets")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<WeightSpec> specs{WeightSpec::power_log(2, 0.7, -1.0), WeightSpec::inner_power(3, -1.5),
                                  WeightSpec::dyadic_staircase(),
                                  WeightSpec::tabulated(1, {{0.01, 2.0}, {0.1, 0.3}, {1.0, 1.0}})};
    for (int i = 0; i < 120; ++i) {
        auto w = RadialWeight::build(specs[std::size_t(i) % specs.size()]);
        const double p = 1 + 3 * u(rng);
        const Radius t = Radius::from_ln(-6 + 8 * u(rng));
        const Radius r = Radius::from_ln(-6 + 8 * u(rng));
        const auto line = ap_ratio_interval(w, t.value() - r.value(), t.value() + r.value(), p);
        const auto ball = ap_ratio_ball(w, t, r, p);
        CHECK((line.divergent || line.log_ratio > -1e-9));
        CHECK((ball.divergent || ball.log_ratio > -1e-9));
    }
}

TEST_CASE("pure powers are dilation invariant on centred intervals")
{
    auto w = RadialWeight::build(WeightSpec::power_log(1, 0.8));
    const double base = ap_ratio_interval(w, -1, 1, 2.5).log_ratio;
    for (double lam : {1e-5, 1e-2, 3.0, 1e4})
        CHECK(ap_ratio_interval(w, -lam, lam, 2.5).log_ratio == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("scan verdicts")
{
    auto x1 = RadialWeight::build(WeightSpec::power_log(2, 1.0));
    CHECK(ap_scan(x1, 2, ApSpace::RnRadial).verdict == ApVerdict::Ap);

    auto flat = RadialWeight::build(WeightSpec::constant(2));
    auto rep = ap_scan(flat, 2, ApSpace::LineWTilde);
    CHECK(rep.verdict == ApVerdict::NotAp);
    CHECK(rep.log_sup_ratio == kInf);

    auto inv = RadialWeight::build(WeightSpec::power_log(2, -1.0));
    rep = ap_scan(inv, 2, ApSpace::LineWTilde);
    CHECK(rep.verdict == ApVerdict::Ap);
    CHECK(std::fabs(rep.log_sup_ratio) < 1e-9);

    // |x|^{n(p-1)} φ^β: the sup grows like φ^{p-1}
    auto edge = RadialWeight::build(WeightSpec::power_log(2, 2.0, 2.0));
    rep = ap_scan(edge, 2, ApSpace::RnRadial);
    CHECK(rep.verdict == ApVerdict::NotAp);
    REQUIRE(rep.growth.size() >= 2);
    CHECK(rep.growth.back() == doctest::Approx(std::log(2.0)).epsilon(0.05));

    auto st = RadialWeight::build(WeightSpec::dyadic_staircase());
    CHECK(ap_scan(st, 3.9, ApSpace::LineWTilde).verdict == ApVerdict::NotAp);
    CHECK(ap_scan(st, 4.5, ApSpace::LineWTilde).verdict == ApVerdict::Ap);
    CHECK(ap_scan(st, 3.9, ApSpace::RnRadial).verdict == ApVerdict::Ap);

    ApScanConfig narrow;
    narrow.window = Window{R(0.01), R(1)};
    CHECK_THROWS_AS(ap_scan(flat, 2, ApSpace::RnRadial, narrow), WindowTooNarrow);
}

TEST_CASE("closed-form classes")
{
    CHECK(classify_powerlog_A1(3, -1, 7) == A1Class::A1);
    CHECK(classify_powerlog_A1(2, 0, 1) == A1Class::A1);
    CHECK(classify_powerlog_A1(2, 0, -1) == A1Class::NotA1);
    CHECK(classify_powerlog_A1(2, 0.5, 3) == A1Class::NotA1);
    CHECK_THROWS_AS(classify_powerlog_A1(2, -2, 0), OutOfRange);

    CHECK(classify_power_Ap_Rn(2, 0, 1) == ApVerdict::Ap);
    CHECK(classify_power_Ap_Rn(2, 1.9, 2) == ApVerdict::Ap);
    CHECK(classify_power_Ap_Rn(2, 2, 2) == ApVerdict::NotAp);
    CHECK(classify_power_Ap_Rn(2, -1.9, 1) == ApVerdict::Ap);
    CHECK(classify_power_Ap_Rn(2, 0.1, 1) == ApVerdict::NotAp);
    CHECK_THROWS_AS(classify_power_Ap_Rn(2, 0, 0.5), OutOfRange);

    CHECK(classify_powerlog_Ap_Rn(2, 0, -1, 1) == ApVerdict::NotAp);
    CHECK(classify_powerlog_Ap_Rn(2, 0, -1, 1.5) == ApVerdict::Ap);
    CHECK(classify_powerlog_Ap_Rn(2, 2, 5, 2) == ApVerdict::NotAp);
}

TEST_CASE("scan agrees with the power classification")
{
    int checked = 0;
    for (int n : {1, 2, 3})
        for (double p : {1.0, 1.5, 3.0})
            for (double alpha : {-n + 0.2, -0.5, 0.0, 0.4, double(n) * (p - 1) - 0.2,
                                 double(n) * (p - 1) + 0.3}) {
                if (alpha <= -n) continue;
                auto w = RadialWeight::build(WeightSpec::power_log(n, alpha));
                CAPTURE(n);
                CAPTURE(p);
                CAPTURE(alpha);
                CHECK(ap_scan(w, p, ApSpace::RnRadial).verdict == classify_power_Ap_Rn(n, alpha, p));
                ++checked;
            }
    CHECK(checked >= 50);
}
