#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treelike/core_types.hpp"
#include "treelike/parallel.hpp"

namespace treelike {

enum class MetricKind { euclidean, poincare };

inline std::string_view to_string(MetricKind kind)
{
    return kind == MetricKind::euclidean ? "euclidean" : "poincare";
}

inline MetricKind metric_kind_from_string(std::string_view s)
{
    if (s == "euclidean") return MetricKind::euclidean;
    if (s == "poincare") return MetricKind::poincare;
    throw ParseError("unknown metric '" + std::string(s) + "' (expected euclidean or poincare)");
}

inline MetricTag to_tag(MetricKind kind)
{
    return kind == MetricKind::euclidean ? MetricTag::euclidean : MetricTag::poincare;
}

namespace detail {

inline double squared_norm(std::span<const double> x) noexcept
{
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc;
}

inline double squared_gap(std::span<const double> x, std::span<const double> y) noexcept
{
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double diff = x[k] - y[k];
        acc += diff * diff;
    }
    return acc;
}

/// arcosh(1 + 2u) for u >= 0, written via log1p to stay accurate near u = 0.
inline double arcosh_one_plus_2u(double u) noexcept
{
    if (!(u > 0.0)) return 0.0;
    const double t = 2.0 * u;
    return std::log1p(t + std::sqrt(t * (t + 2.0)));
}

/// Poincaré distance from precomputed squared norms (both < 1).
inline double poincare_from_parts(double gap_sq, double norm_sq_x, double norm_sq_y) noexcept
{
    const double u = gap_sq / ((1.0 - norm_sq_x) * (1.0 - norm_sq_y));
    return arcosh_one_plus_2u(u);
}

inline void require_same_length(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw ShapeError("vector lengths differ: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
}

} // namespace detail

inline double euclidean_distance(std::span<const double> x, std::span<const double> y)
{
    detail::require_same_length(x, y);
    return std::sqrt(detail::squared_gap(x, y));
}

/// Hyperbolic distance in the Poincaré ball; both points must have norm < 1.
inline double poincare_distance(std::span<const double> x, std::span<const double> y)
{
    detail::require_same_length(x, y);
    const double nx = detail::squared_norm(x);
    const double ny = detail::squared_norm(y);
    if (!(nx < 1.0)) throw DomainError("first point lies outside the open unit ball");
    if (!(ny < 1.0)) throw DomainError("second point lies outside the open unit ball");
    return detail::poincare_from_parts(detail::squared_gap(x, y), nx, ny);
}

/// Pairwise distances between all rows. The upper triangle is computed once
/// and mirrored, so the result is exactly symmetric with a zero diagonal.
inline DistanceMatrix build_distance_matrix(const EmbeddingSet& set, MetricKind kind,
                                            std::size_t workers = 1)
{
    const std::size_t n = set.size();
    std::vector<double> norms;
    if (kind == MetricKind::poincare) {
        norms.resize(n);
        std::vector<std::size_t> outside;
        for (std::size_t i = 0; i < n; ++i) {
            norms[i] = detail::squared_norm(set.row(i));
            if (!(norms[i] < 1.0)) outside.push_back(i);
        }
        if (!outside.empty()) {
            std::string msg = "rows outside the open unit ball:";
            for (std::size_t k = 0; k < outside.size() && k < 10; ++k)
                msg += " " + std::to_string(outside[k]);
            if (outside.size() > 10) msg += " ... (" + std::to_string(outside.size()) + " total)";
            throw DomainError(msg);
        }
    }

    std::vector<double> entries(n * n, 0.0);
    parallel_for(0, n, workers, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = detail::squared_gap(set.row(i), set.row(j));
            entries[i * n + j] = kind == MetricKind::euclidean
                                     ? std::sqrt(gap)
                                     : detail::poincare_from_parts(gap, norms[i], norms[j]);
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) entries[j * n + i] = entries[i * n + j];
    return DistanceMatrix(n, std::move(entries), to_tag(kind));
}

} // namespace treelike
