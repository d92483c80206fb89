#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "treelike/core_types.hpp"

namespace treelike {

/// Right-pads variable-length sequences to the longest length, keeping order.
inline EmbeddingSet pad_and_flatten(const std::vector<std::vector<double>>& raw,
                                    double pad_value = 0.0)
{
    if (raw.empty()) throw ValidationError("cannot pad an empty list of sequences");
    std::size_t dim = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i].empty()) throw ValidationError("sequence " + std::to_string(i) + " is empty");
        for (double v : raw[i])
            if (!std::isfinite(v))
                throw ValidationError("non-finite value in sequence " + std::to_string(i));
        dim = std::max(dim, raw[i].size());
    }
    std::vector<double> flat(raw.size() * dim, pad_value);
    for (std::size_t i = 0; i < raw.size(); ++i)
        std::copy(raw[i].begin(), raw[i].end(), flat.begin() + static_cast<std::ptrdiff_t>(i * dim));
    return EmbeddingSet(raw.size(), dim, std::move(flat));
}

namespace detail {

/// Eigen-decomposition of a symmetric m x m matrix (row-major) by cyclic Jacobi
/// rotations. Returns eigenvalues (unsorted) and the eigenvectors as the
/// columns of a row-major m x m matrix.
inline std::pair<std::vector<double>, std::vector<double>>
jacobi_eigen(std::vector<double> a, std::size_t m)
{
    std::vector<double> v(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) v[i * m + i] = 1.0;

    auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * m + c]; };

    double total = 0.0;
    for (double x : a) total += x * x;
    if (total == 0.0) return {std::vector<double>(m, 0.0), std::move(v)};

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) off += at(p, q) * at(p, q);
        if (off <= 1e-32 * total) break;

        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < m; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double vkp = v[k * m + p];
                    const double vkq = v[k * m + q];
                    v[k * m + p] = c * vkp - s * vkq;
                    v[k * m + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<double> values(m);
    for (std::size_t i = 0; i < m; ++i) values[i] = at(i, i);
    return {std::move(values), std::move(v)};
}

} // namespace detail

struct PcaModel {
    std::vector<double> mean;               // dim
    std::vector<double> components;         // k x dim, orthonormal rows
    std::vector<double> explained_variance; // k, non-increasing
    double total_variance = 0.0;
    double retained_fraction = 0.0;
    std::size_t dim = 0;

    std::size_t rank() const noexcept { return explained_variance.size(); }

    std::span<const double> component(std::size_t c) const
    {
        return {components.data() + c * dim, dim};
    }

    EmbeddingSet transform(const EmbeddingSet& set) const
    {
        if (set.dim() != dim) throw ShapeError("PCA model dimension does not match input");
        const std::size_t k = rank();
        std::vector<double> out(set.size() * k, 0.0);
        std::vector<double> centered(dim);
        for (std::size_t i = 0; i < set.size(); ++i) {
            const auto row = set.row(i);
            for (std::size_t d = 0; d < dim; ++d) centered[d] = row[d] - mean[d];
            for (std::size_t c = 0; c < k; ++c) {
                double acc = 0.0;
                for (std::size_t d = 0; d < dim; ++d) acc += centered[d] * components[c * dim + d];
                out[i * k + c] = acc;
            }
        }
        return EmbeddingSet(set.size(), k, std::move(out), set.ids(), set.labels());
    }
};

/// Projects centered data onto the fewest principal directions whose
/// cumulative explained variance reaches `variance_target`.
///
/// Decomposes the dim x dim covariance when dim <= n and the n x n Gram matrix
/// otherwise. Each component is signed so that its largest-magnitude entry is
/// positive. Variances use the n - 1 denominator.
inline std::pair<EmbeddingSet, PcaModel> pca_fit_transform(const EmbeddingSet& set,
                                                            double variance_target)
{
    if (!(variance_target > 0.0 && variance_target <= 1.0))
        throw ValidationError("variance target must lie in (0, 1]");
    const std::size_t n = set.size();
    const std::size_t dim = set.dim();
    if (n < 2) throw ValidationError("PCA needs at least 2 rows");

    PcaModel model;
    model.dim = dim;
    model.mean.assign(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = set.row(i);
        for (std::size_t d = 0; d < dim; ++d) model.mean[d] += row[d];
    }
    for (double& m : model.mean) m /= static_cast<double>(n);

    std::vector<double> xc(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = set.row(i);
        for (std::size_t d = 0; d < dim; ++d) xc[i * dim + d] = row[d] - model.mean[d];
    }
    const double denom = static_cast<double>(n - 1);
    double total = 0.0;
    for (double x : xc) total += x * x;
    total /= denom;
    if (total == 0.0) throw DomainError("degenerate data: zero total variance");
    model.total_variance = total;

    // Candidate (variance, direction) pairs.
    std::vector<double> variances;
    std::vector<std::vector<double>> directions;
    if (dim <= n) {
        std::vector<double> cov(dim * dim, 0.0);
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = a; b < dim; ++b) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += xc[i * dim + a] * xc[i * dim + b];
                cov[a * dim + b] = cov[b * dim + a] = acc / denom;
            }
        }
        auto [vals, vecs] = detail::jacobi_eigen(std::move(cov), dim);
        for (std::size_t c = 0; c < dim; ++c) {
            std::vector<double> dir(dim);
            for (std::size_t d = 0; d < dim; ++d) dir[d] = vecs[d * dim + c];
            variances.push_back(vals[c]);
            directions.push_back(std::move(dir));
        }
    } else {
        std::vector<double> gram(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t d = 0; d < dim; ++d) acc += xc[i * dim + d] * xc[j * dim + d];
                gram[i * n + j] = gram[j * n + i] = acc;
            }
        }
        auto [vals, vecs] = detail::jacobi_eigen(std::move(gram), n);
        for (std::size_t c = 0; c < n; ++c) {
            std::vector<double> dir(dim, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double u = vecs[i * n + c];
                for (std::size_t d = 0; d < dim; ++d) dir[d] += xc[i * dim + d] * u;
            }
            variances.push_back(vals[c] / denom);
            directions.push_back(std::move(dir));
        }
    }

    std::vector<std::size_t> order(variances.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return variances[a] > variances[b]; });

    // Directions with negligible variance cannot be normalised (Gram path) and
    // carry no information; they are never selected.
    const double negligible = total * 1e-14;
    double cumulative = 0.0;
    for (std::size_t idx : order) {
        const double var = std::max(variances[idx], 0.0);
        if (var <= negligible && model.rank() > 0) break;
        std::vector<double>& dir = directions[idx];
        double norm = 0.0;
        for (double x : dir) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) break;
        std::size_t argmax = 0;
        for (std::size_t d = 1; d < dim; ++d)
            if (std::abs(dir[d]) > std::abs(dir[argmax])) argmax = d;
        const double sign = dir[argmax] < 0.0 ? -1.0 : 1.0;
        for (double& x : dir) x = sign * x / norm;

        model.components.insert(model.components.end(), dir.begin(), dir.end());
        model.explained_variance.push_back(var);
        cumulative += var;
        if (cumulative >= variance_target * total * (1.0 - 1e-12)) break;
    }
    model.retained_fraction = std::min(1.0, cumulative / total);

    EmbeddingSet projected = model.transform(set);
    return {std::move(projected), std::move(model)};
}

struct RescaleResult {
    EmbeddingSet set;
    double scalar = 1.0;
};

/// Multiplies every row by one scalar so the largest row norm becomes
/// `target_max_norm`. Relative norms and distance ratios are preserved.
inline RescaleResult rescale_to_ball(const EmbeddingSet& set, double target_max_norm = 0.9)
{
    if (!(target_max_norm > 0.0 && target_max_norm < 1.0))
        throw DomainError("target max norm must lie in (0, 1)");
    double max_norm = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        double sq = 0.0;
        for (double x : set.row(i)) sq += x * x;
        max_norm = std::max(max_norm, std::sqrt(sq));
    }
    if (max_norm == 0.0) throw DomainError("cannot rescale an all-zero embedding set");
    const double s = target_max_norm / max_norm;
    std::vector<double> values = set.values();
    for (double& x : values) x *= s;
    return {EmbeddingSet(set.size(), set.dim(), std::move(values), set.ids(), set.labels()), s};
}

} // namespace treelike
