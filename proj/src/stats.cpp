// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/stats.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace burnscope::stats {

double mean(const std::vector<double>& v)
{
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v)
{
    if (v.empty()) return 0.0;
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

double quantile(std::vector<double> v, double q)
{
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + (v[hi] - v[lo]) * frac;
}

Fences tukey_fences(const std::vector<double>& v, double k)
{
    Fences f;
    f.q1 = quantile(v, 0.25);
    f.q3 = quantile(v, 0.75);
    const double iqr = f.q3 - f.q1;
    f.lower = f.q1 - k * iqr;
    f.upper = f.q3 + k * iqr;
    return f;
}

bool is_outlier(const Fences& f, double x)
{
    return x < f.lower || x > f.upper;
}

} // namespace burnscope::stats
