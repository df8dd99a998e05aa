#pragma once

// Decides whether a log-scale quantity keeps moving as a scan widens.
//
// Samples are keyed by ell = |ln r| (distance from r = 1 on a log scale). The
// running minimum is taken outward and compared across blocks
// [2^b - 1, 2^{b+1} - 1): a quantity that tends to -inf like -c ln ell or
// faster drops by a roughly constant (or growing) amount per block, while one
// that settles drops by geometrically shrinking amounts.

#include <vector>

namespace bowtie {

enum class Trend { Settles, Diverges, Unclear };

struct TrendOptions {
    double flat_decrement = 0.05;
    double settle_ratio = 0.7;
    double diverge_ratio = 0.85;
};

struct TrendResult {
    Trend trend = Trend::Unclear;
    std::vector<double> decrements;  // drop of the running minimum per complete block
    bool informative = false;        // at least one decrement available
};

/// `ell` and `v` in any order; `step` is the sampling pitch in ell.
TrendResult block_trend(std::vector<double> ell, std::vector<double> v, double step,
                        const TrendOptions& opt = {});

}  // namespace bowtie
