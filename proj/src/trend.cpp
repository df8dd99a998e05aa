#include "bowtie/trend.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bowtie/radius.hpp"

namespace bowtie {

TrendResult block_trend(std::vector<double> ell, std::vector<double> v, double step,
                        const TrendOptions& opt)
{
    TrendResult out;
    if (ell.size() < 2) return out;
    std::vector<std::size_t> order(ell.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ell[a] < ell[b]; });
    std::vector<double> e(ell.size()), env(ell.size());
    double run = kInf;
    for (std::size_t i = 0; i < order.size(); ++i) {
        e[i] = ell[order[i]];
        run = std::min(run, v[order[i]]);
        env[i] = run;
    }

    const double first = e.front(), last = e.back();
    std::vector<double> block_min;
    for (int b = 0; b < 64; ++b) {
        const double lo = std::ldexp(1.0, b) - 1.0, hi = std::ldexp(1.0, b + 1) - 1.0;
        if (hi > last + 0.5 * step) break;
        if (lo < first - 0.5 * step) continue;
        double m = kInf;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] < hi + 0.5 * step) m = std::min(m, env[i]);
        block_min.push_back(m);
    }
    for (std::size_t i = 1; i < block_min.size(); ++i)
        out.decrements.push_back(block_min[i - 1] - block_min[i]);
    if (out.decrements.empty()) return out;
    out.informative = true;

    const double dl = out.decrements.back();
    if (dl <= opt.flat_decrement) {
        out.trend = Trend::Settles;
    } else if (out.decrements.size() >= 2) {
        const double dp = out.decrements[out.decrements.size() - 2];
        const double ratio = dp > 0 ? dl / dp : kInf;
        if (ratio <= opt.settle_ratio) out.trend = Trend::Settles;
        else if (ratio >= opt.diverge_ratio) out.trend = Trend::Diverges;
    }
    return out;
}

}  // namespace bowtie
