#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treelike/core_types.hpp"
#include "treelike/distances.hpp"
#include "treelike/parallel.hpp"
#include "treelike/random.hpp"

namespace treelike {

struct ClusterResult {
    std::size_t k = 0;
    std::size_t dim = 0;
    std::vector<std::size_t> assignments;
    std::vector<double> centroids; // k x dim
    double inertia = 0.0;
    std::size_t iterations = 0;
    std::vector<double> inertia_trace; // after every Lloyd iteration
    Seed seed{};
    MetricKind silhouette_metric = MetricKind::euclidean;
    // Left empty where the index is undefined (e.g. Calinski-Harabasz with k = n).
    std::optional<double> silhouette;
    std::optional<double> calinski_harabasz;
    std::optional<double> davies_bouldin;

    std::span<const double> centroid(std::size_t c) const { return {centroids.data() + c * dim, dim}; }

    friend bool operator==(const ClusterResult&, const ClusterResult&) = default;
};

namespace detail {

struct Partition {
    std::size_t k = 0;
    std::vector<std::size_t> sizes;
};

/// Labels must be exactly 0..k-1 with every cluster nonempty.
inline Partition check_partition(std::span<const std::size_t> labels, std::size_t n)
{
    if (labels.size() != n)
        throw ShapeError("assignment count " + std::to_string(labels.size()) +
                         " does not match " + std::to_string(n) + " points");
    Partition p;
    for (std::size_t l : labels) p.k = std::max(p.k, l + 1);
    p.sizes.assign(p.k, 0);
    for (std::size_t l : labels) ++p.sizes[l];
    for (std::size_t c = 0; c < p.k; ++c)
        if (p.sizes[c] == 0) throw ValidationError("cluster " + std::to_string(c) + " is empty");
    if (p.k < 2) throw ValidationError("validity indices need at least 2 clusters");
    return p;
}

inline std::vector<double> cluster_means(const EmbeddingSet& set, std::span<const std::size_t> labels,
                                         const Partition& p)
{
    const std::size_t dim = set.dim();
    std::vector<double> means(p.k * dim, 0.0);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto row = set.row(i);
        for (std::size_t d = 0; d < dim; ++d) means[labels[i] * dim + d] += row[d];
    }
    for (std::size_t c = 0; c < p.k; ++c)
        for (std::size_t d = 0; d < dim; ++d) means[c * dim + d] /= static_cast<double>(p.sizes[c]);
    return means;
}

inline double squared_to(std::span<const double> x, const double* c) noexcept
{
    double acc = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) acc += (x[d] - c[d]) * (x[d] - c[d]);
    return acc;
}

} // namespace detail

/// Mean silhouette width from a distance matrix. Points in singleton clusters score 0.
inline double silhouette(const DistanceMatrix& d, std::span<const std::size_t> labels)
{
    const std::size_t n = d.size();
    const detail::Partition p = detail::check_partition(labels, n);
    std::vector<double> per_cluster(p.k);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = labels[i];
        if (p.sizes[own] == 1) continue;
        std::fill(per_cluster.begin(), per_cluster.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) per_cluster[labels[j]] += d(i, j);
        const double a = per_cluster[own] / static_cast<double>(p.sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < p.k; ++c)
            if (c != own) b = std::min(b, per_cluster[c] / static_cast<double>(p.sizes[c]));
        const double scale = std::max(a, b);
        if (scale > 0.0) total += (b - a) / scale;
    }
    return total / static_cast<double>(n);
}

/// Between-cluster over within-cluster dispersion, each divided by its degrees of freedom.
inline double calinski_harabasz(const EmbeddingSet& set, std::span<const std::size_t> labels)
{
    const std::size_t n = set.size();
    const std::size_t dim = set.dim();
    const detail::Partition p = detail::check_partition(labels, n);
    if (p.k >= n) throw ValidationError("Calinski-Harabasz is undefined for k >= n");

    const std::vector<double> means = detail::cluster_means(set, labels, p);
    std::vector<double> grand(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) grand[d] += set.row(i)[d];
    for (double& g : grand) g /= static_cast<double>(n);

    double between = 0.0;
    for (std::size_t c = 0; c < p.k; ++c)
        between += static_cast<double>(p.sizes[c]) * detail::squared_to(grand, &means[c * dim]);
    double within = 0.0;
    for (std::size_t i = 0; i < n; ++i) within += detail::squared_to(set.row(i), &means[labels[i] * dim]);
    if (within == 0.0) throw ValidationError("Calinski-Harabasz is undefined: zero within-cluster dispersion");

    return (between / static_cast<double>(p.k - 1)) / (within / static_cast<double>(n - p.k));
}

/// Mean over clusters of the worst (s_i + s_j) / d(c_i, c_j) ratio.
inline double davies_bouldin(const EmbeddingSet& set, std::span<const std::size_t> labels)
{
    const std::size_t n = set.size();
    const std::size_t dim = set.dim();
    const detail::Partition p = detail::check_partition(labels, n);
    const std::vector<double> means = detail::cluster_means(set, labels, p);

    std::vector<double> scatter(p.k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        scatter[labels[i]] += std::sqrt(detail::squared_to(set.row(i), &means[labels[i] * dim]));
    for (std::size_t c = 0; c < p.k; ++c) scatter[c] /= static_cast<double>(p.sizes[c]);

    double total = 0.0;
    for (std::size_t a = 0; a < p.k; ++a) {
        double worst = 0.0;
        for (std::size_t b = 0; b < p.k; ++b) {
            if (a == b) continue;
            const double sep = std::sqrt(
                detail::squared_to(std::span<const double>(&means[a * dim], dim), &means[b * dim]));
            if (sep == 0.0)
                throw ValidationError("Davies-Bouldin is undefined: clusters " + std::to_string(a) +
                                      " and " + std::to_string(b) + " share a centroid");
            worst = std::max(worst, (scatter[a] + scatter[b]) / sep);
        }
        total += worst;
    }
    return total / static_cast<double>(p.k);
}

struct KMeansOptions {
    std::size_t k = 2;
    Seed seed{};
    std::size_t max_iter = 300;
    double tol = 1e-8;
    std::size_t workers = 1;
    MetricKind silhouette_metric = MetricKind::euclidean;
};

namespace detail {

/// k-means++ seeding from a single stream of the seed.
inline std::vector<double> kmeans_plus_plus(const EmbeddingSet& set, std::size_t k, Seed seed)
{
    const std::size_t n = set.size();
    const std::size_t dim = set.dim();
    CounterRng rng(seed, 0);
    std::vector<double> centroids;
    centroids.reserve(k * dim);
    std::vector<char> chosen(n, 0);
    auto take = [&](std::size_t i) {
        chosen[i] = 1;
        const auto row = set.row(i);
        centroids.insert(centroids.end(), row.begin(), row.end());
    };

    take(static_cast<std::size_t>(rng.uniform_below(n)));
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t c = 1; c < k; ++c) {
        const double* last = &centroids[(c - 1) * dim];
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], squared_to(set.row(i), last));
            total += nearest[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double cumulative = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (nearest[i] == 0.0) continue;
                cumulative += nearest[i];
                pick = i;
                if (cumulative > target) break;
            }
        } else {
            for (std::size_t i = 0; i < n && pick == n; ++i)
                if (!chosen[i]) pick = i;
        }
        take(pick);
    }
    return centroids;
}

} // namespace detail

/// Seeded k-means++ followed by Lloyd iterations. Stops when no centroid moves
/// by `tol` or more, or after `max_iter` iterations. A cluster that empties is
/// reseeded with the point farthest from its current centroid. The three
/// validity indices are filled in where defined.
inline ClusterResult kmeans(const EmbeddingSet& set, const KMeansOptions& opts)
{
    const std::size_t n = set.size();
    const std::size_t dim = set.dim();
    const std::size_t k = opts.k;
    if (k < 2) throw ValidationError("k must be at least 2");
    if (k > n) throw ValidationError("k = " + std::to_string(k) + " exceeds " + std::to_string(n) + " points");

    ClusterResult r;
    r.k = k;
    r.dim = dim;
    r.seed = opts.seed;
    r.silhouette_metric = opts.silhouette_metric;
    r.centroids = detail::kmeans_plus_plus(set, k, opts.seed);
    r.assignments.assign(n, 0);

    std::vector<double> dist2(n);
    std::vector<double> next(k * dim);
    std::vector<std::size_t> sizes(k);
    for (std::size_t iter = 1; iter <= std::max<std::size_t>(opts.max_iter, 1); ++iter) {
        r.iterations = iter;
        parallel_for(0, n, opts.workers, [&](std::size_t i) {
            std::size_t best = 0;
            double best_d = detail::squared_to(set.row(i), &r.centroids[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double dc = detail::squared_to(set.row(i), &r.centroids[c * dim]);
                if (dc < best_d) {
                    best_d = dc;
                    best = c;
                }
            }
            r.assignments[i] = best;
            dist2[i] = best_d;
        });

        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < n; ++i) ++sizes[r.assignments[i]];
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] != 0) continue;
            std::size_t far = n;
            for (std::size_t i = 0; i < n; ++i)
                if (sizes[r.assignments[i]] > 1 && (far == n || dist2[i] > dist2[far])) far = i;
            --sizes[r.assignments[far]];
            r.assignments[far] = c;
            dist2[far] = 0.0;
            sizes[c] = 1;
        }

        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = set.row(i);
            for (std::size_t d = 0; d < dim; ++d) next[r.assignments[i] * dim + d] += row[d];
        }
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t d = 0; d < dim; ++d) next[c * dim + d] /= static_cast<double>(sizes[c]);

        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            shift = std::max(shift, detail::squared_to(std::span<const double>(&next[c * dim], dim),
                                                       &r.centroids[c * dim]));
        r.centroids.swap(next);

        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inertia += detail::squared_to(set.row(i), &r.centroids[r.assignments[i] * dim]);
        assert(r.inertia_trace.empty() ||
               inertia <= r.inertia_trace.back() * (1.0 + 1e-12) + 1e-300);
        r.inertia_trace.push_back(inertia);
        r.inertia = inertia;

        if (std::sqrt(shift) < opts.tol) break;
    }

    // Poincaré silhouettes expect the caller to have rescaled into the ball.
    const DistanceMatrix d = build_distance_matrix(set, opts.silhouette_metric, opts.workers);
    r.silhouette = silhouette(d, r.assignments);
    if (k < n) {
        try {
            r.calinski_harabasz = calinski_harabasz(set, r.assignments);
        } catch (const ValidationError&) {
        }
    }
    try {
        r.davies_bouldin = davies_bouldin(set, r.assignments);
    } catch (const ValidationError&) {
    }
    return r;
}

} // namespace treelike
