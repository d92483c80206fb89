#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "treelike/core_types.hpp"
#include "treelike/parallel.hpp"
#include "treelike/stats.hpp"

namespace treelike {

struct NjStats {
    double nj_max = 0.0;
    double nj_avg = 0.0;
    double nj_std = 0.0;
    std::size_t n = 0;

    friend bool operator==(const NjStats&, const NjStats&) = default;
};

/// Dense n x n Q-matrix; diagonal is 0.
struct QMatrix {
    std::size_t n = 0;
    std::vector<double> values;

    double operator()(std::size_t i, std::size_t j) const noexcept { return values[i * n + j]; }
};

/// Q(i,j) = (n-2) D(i,j) - sum_k D(i,k) - sum_k D(j,k), computed once per pair and mirrored.
inline QMatrix q_matrix(const DistanceMatrix& d, std::size_t workers = 1)
{
    const std::size_t n = d.size();
    if (n < 3) throw ValidationError("Q-matrix needs at least 3 points");

    std::vector<double> row_sum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (double v : d.row(i)) row_sum[i] += v;

    QMatrix q{n, std::vector<double>(n * n, 0.0)};
    const double scale = static_cast<double>(n - 2);
    parallel_for(0, n, workers, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j)
            q.values[i * n + j] = scale * d(i, j) - row_sum[i] - row_sum[j];
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) q.values[j * n + i] = q.values[i * n + j];
    return q;
}

/// max / mean / population std of |Q(i,j)| over i < j. All zero when n < 3.
inline NjStats nj_scores(const DistanceMatrix& d, std::size_t workers = 1)
{
    const std::size_t n = d.size();
    NjStats out;
    out.n = n;
    if (n < 3) return out;

    const QMatrix q = q_matrix(d, workers);
    std::vector<double> magnitudes;
    magnitudes.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) magnitudes.push_back(std::abs(q(i, j)));
    const Summary s = summarize(magnitudes);
    out.nj_max = s.max;
    out.nj_avg = s.mean;
    out.nj_std = s.std;
    return out;
}

/// The pair NJ would join first: minimum Q, ties broken lexicographically.
inline std::pair<std::size_t, std::size_t> argmin_q_pair(const DistanceMatrix& d)
{
    const QMatrix q = q_matrix(d);
    std::pair<std::size_t, std::size_t> best{0, 1};
    for (std::size_t i = 0; i < q.n; ++i)
        for (std::size_t j = i + 1; j < q.n; ++j)
            if (q(i, j) < q(best.first, best.second)) best = {i, j};
    return best;
}

} // namespace treelike
