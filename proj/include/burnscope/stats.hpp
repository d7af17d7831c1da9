// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_STATS_HPP
#define BURNSCOPE_STATS_HPP

#include <vector>

namespace burnscope::stats {

double mean(const std::vector<double>& v);
/** N-denominator standard deviation; 0 for empty input. */
double population_std(const std::vector<double>& v);

/** Quantile q in [0, 1] by linear interpolation between order statistics. */
double quantile(std::vector<double> v, double q);

struct Fences {
    double q1{0};
    double q3{0};
    double lower{0};
    double upper{0};
};

Fences tukey_fences(const std::vector<double>& v, double k = 1.5);
/** Values strictly outside the fences. */
bool is_outlier(const Fences& f, double x);

} // namespace burnscope::stats

#endif // BURNSCOPE_STATS_HPP
