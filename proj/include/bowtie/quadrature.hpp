#pragma once

// Log-domain adaptive Gauss–Kronrod quadrature.
//
// Integrands are supplied as ln f(x) so that values spanning e^{±700} (and
// beyond, for the staircase weights) never overflow. Each panel is rescaled
// by its own largest node value before exponentiation; panels are combined
// with log-sum-exp. Several integrands sharing the same nodes can be
// integrated in one pass (the A_p ratio needs ∫w and ∫w^{1/(1-p)} together).

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "bowtie/errors.hpp"
#include "bowtie/radius.hpp"

namespace bowtie::quad {

struct Options {
    double rel_tol = 1e-11;
    int max_panels = 4000;
};

namespace detail {

// Kronrod 15-point nodes/weights with the embedded Gauss 7-point weights.
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights live on the odd Kronrod nodes (indices 1, 3, 5, 7).
inline constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t M>
struct Panel {
    double a = 0, b = 0;
    std::array<double, M> log_value{};
    std::array<double, M> log_error{};
    double priority = -kInf;  // largest log error relative to current totals
};

template <std::size_t M, typename F>
Panel<M> evaluate(const F& log_f, double a, double b)
{
    Panel<M> p;
    p.a = a;
    p.b = b;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<std::array<double, M>, 15> lv{};
    std::array<double, 15> xs{};
    for (int i = 0; i < 7; ++i) {
        xs[2 * i] = c - h * kNodes[i];
        xs[2 * i + 1] = c + h * kNodes[i];
    }
    xs[14] = c;
    for (int i = 0; i < 15; ++i) lv[i] = log_f(xs[i]);

    for (std::size_t m = 0; m < M; ++m) {
        double peak = -kInf;
        for (int i = 0; i < 15; ++i) peak = std::max(peak, lv[i][m]);
        if (peak == -kInf) {
            p.log_value[m] = -kInf;
            p.log_error[m] = -kInf;
            continue;
        }
        if (!std::isfinite(peak)) {
            p.log_value[m] = kInf;
            p.log_error[m] = kInf;
            continue;
        }
        double kron = kKronrod[7] * std::exp(lv[14][m] - peak);
        double gauss = kGauss[3] * std::exp(lv[14][m] - peak);
        for (int i = 0; i < 7; ++i) {
            const double s = std::exp(lv[2 * i][m] - peak) + std::exp(lv[2 * i + 1][m] - peak);
            kron += kKronrod[i] * s;
            if (i % 2 == 1) gauss += kGauss[i / 2] * s;
        }
        const double ln_h = std::log(h);
        p.log_value[m] = peak + ln_h + std::log(kron);
        const double err = std::fabs(kron - gauss);
        p.log_error[m] = err > 0 ? peak + ln_h + std::log(err) : -kInf;
    }
    return p;
}

}  // namespace detail

/// Integrates M positive integrands given by ln f on [a, b] (finite).
/// Returns ln ∫ f for each; -inf for a vanishing integral, +inf when the
/// integrand is infinite at a node.
template <std::size_t M, typename F>
std::array<double, M> log_integrate(const F& log_f, double a, double b,
                                    const Options& opt = {})
{
    std::array<double, M> result;
    result.fill(-kInf);
    if (!(b > a)) return result;

    std::vector<detail::Panel<M>> panels;
    panels.push_back(detail::evaluate<M>(log_f, a, b));

    auto totals = [&] {
        std::array<double, M> v, e;
        v.fill(-kInf);
        e.fill(-kInf);
        for (const auto& p : panels)
            for (std::size_t m = 0; m < M; ++m) {
                v[m] = log_add(v[m], p.log_value[m]);
                e[m] = log_add(e[m], p.log_error[m]);
            }
        return std::pair{v, e};
    };

    const double ln_tol = std::log(opt.rel_tol);
    for (;;) {
        auto [v, e] = totals();
        bool done = true;
        for (std::size_t m = 0; m < M; ++m) {
            if (v[m] == kInf) return v;
            if (v[m] == -kInf) continue;
            if (e[m] - v[m] > ln_tol) done = false;
        }
        if (done) return v;
        if (int(panels.size()) >= opt.max_panels)
            throw QuadratureFailure("adaptive quadrature exceeded " +
                                    std::to_string(opt.max_panels) + " panels");

        // Split the panel with the largest error relative to its integrand's total.
        std::size_t worst = 0;
        double worst_score = -kInf;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            for (std::size_t m = 0; m < M; ++m) {
                if (v[m] == -kInf) continue;
                const double s = panels[i].log_error[m] - v[m];
                if (s > worst_score) {
                    worst_score = s;
                    worst = i;
                }
            }
        }
        const auto old = panels[worst];
        const double mid = 0.5 * (old.a + old.b);
        if (!(mid > old.a && mid < old.b)) return v;  // cannot split further
        panels[worst] = detail::evaluate<M>(log_f, old.a, mid);
        panels.push_back(detail::evaluate<M>(log_f, mid, old.b));
    }
}

/// Single-integrand convenience wrapper.
template <typename F>
double log_integrate1(const F& log_f, double a, double b, const Options& opt = {})
{
    auto wrapped = [&](double x) { return std::array<double, 1>{log_f(x)}; };
    return log_integrate<1>(wrapped, a, b, opt)[0];
}

}  // namespace bowtie::quad
