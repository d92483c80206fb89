#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace treelike {

// Error categories. The CLI maps each one to a distinct exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text or binary payload.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input parsed but breaks a structural invariant (symmetry, shape, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Input outside the mathematical domain of an operation (e.g. Poincaré norm >= 1).
class DomainError : public Error {
public:
    using Error::Error;
};

class ShapeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

struct Seed {
    std::uint64_t value = 42;

    friend bool operator==(const Seed&, const Seed&) = default;
};

/// n real vectors of a common dimension, stored row-major.
class EmbeddingSet {
public:
    EmbeddingSet() = default;

    EmbeddingSet(std::size_t n, std::size_t dim, std::vector<double> values,
                 std::optional<std::vector<std::string>> ids = std::nullopt,
                 std::optional<std::vector<std::string>> labels = std::nullopt)
        : n_(n), dim_(dim), values_(std::move(values)), ids_(std::move(ids)),
          labels_(std::move(labels))
    {
        if (n_ == 0) throw ShapeError("embedding set must contain at least one row");
        if (dim_ == 0) throw ShapeError("embedding dimension must be at least 1");
        if (values_.size() != n_ * dim_)
            throw ShapeError("embedding payload has " + std::to_string(values_.size()) +
                             " values, expected " + std::to_string(n_ * dim_));
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw ValidationError("non-finite value in embedding row " +
                                      std::to_string(i / dim_));
        }
        if (ids_ && ids_->size() != n_) throw ShapeError("ids length does not match row count");
        if (labels_ && labels_->size() != n_)
            throw ShapeError("labels length does not match row count");
    }

    static EmbeddingSet from_rows(const std::vector<std::vector<double>>& rows)
    {
        if (rows.empty()) throw ShapeError("embedding set must contain at least one row");
        const std::size_t dim = rows.front().size();
        std::vector<double> flat;
        flat.reserve(rows.size() * dim);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != dim)
                throw ShapeError("row " + std::to_string(i) + " has " +
                                 std::to_string(rows[i].size()) + " entries, expected " +
                                 std::to_string(dim));
            flat.insert(flat.end(), rows[i].begin(), rows[i].end());
        }
        return EmbeddingSet(rows.size(), dim, std::move(flat));
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return dim_; }

    std::span<const double> row(std::size_t i) const
    {
        return {values_.data() + i * dim_, dim_};
    }

    const std::vector<double>& values() const noexcept { return values_; }
    const std::optional<std::vector<std::string>>& ids() const noexcept { return ids_; }
    const std::optional<std::vector<std::string>>& labels() const noexcept { return labels_; }

    friend bool operator==(const EmbeddingSet&, const EmbeddingSet&) = default;

private:
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> values_;
    std::optional<std::vector<std::string>> ids_;
    std::optional<std::vector<std::string>> labels_;
};

enum class MetricTag { euclidean, poincare, graph_shortest_path, external };

inline std::string_view to_string(MetricTag tag)
{
    switch (tag) {
    case MetricTag::euclidean: return "euclidean";
    case MetricTag::poincare: return "poincare";
    case MetricTag::graph_shortest_path: return "graph_shortest_path";
    case MetricTag::external: return "external";
    }
    return "external";
}

inline MetricTag metric_tag_from_string(std::string_view s)
{
    if (s == "euclidean") return MetricTag::euclidean;
    if (s == "poincare") return MetricTag::poincare;
    if (s == "graph_shortest_path") return MetricTag::graph_shortest_path;
    if (s == "external") return MetricTag::external;
    throw ParseError("unknown metric tag '" + std::string(s) + "'");
}

/// Full n x n square matrix of distances.
///
/// Stored densely (not triangular) so the quadruple and triple loops get O(1)
/// access. The constructor checks shape only; use validate_distance_matrix for
/// the metric invariants.
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    DistanceMatrix(std::size_t n, std::vector<double> entries, MetricTag tag)
        : n_(n), entries_(std::move(entries)), tag_(tag)
    {
        if (entries_.size() != n_ * n_)
            throw ShapeError("distance matrix payload has " + std::to_string(entries_.size()) +
                             " entries, expected " + std::to_string(n_ * n_));
    }

    static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                    MetricTag tag = MetricTag::external)
    {
        const std::size_t n = rows.size();
        std::vector<double> flat;
        flat.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n)
                throw ShapeError("distance matrix is not square: row " + std::to_string(i) +
                                 " has " + std::to_string(rows[i].size()) + " entries, expected " +
                                 std::to_string(n));
            flat.insert(flat.end(), rows[i].begin(), rows[i].end());
        }
        return DistanceMatrix(n, std::move(flat), tag);
    }

    std::size_t size() const noexcept { return n_; }
    MetricTag tag() const noexcept { return tag_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }

    const std::vector<double>& entries() const noexcept { return entries_; }

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> entries_;
    MetricTag tag_ = MetricTag::external;
};

enum class ViolationKind { nonzero_diagonal, asymmetry, negative, non_finite };

inline std::string_view to_string(ViolationKind kind)
{
    switch (kind) {
    case ViolationKind::nonzero_diagonal: return "nonzero_diagonal";
    case ViolationKind::asymmetry: return "asymmetry";
    case ViolationKind::negative: return "negative";
    case ViolationKind::non_finite: return "non_finite";
    }
    return "unknown";
}

struct MatrixViolation {
    ViolationKind kind;
    std::size_t i;
    std::size_t j;
    double magnitude;
};

/// Checks zero diagonal, symmetry, and finite nonnegative entries within `tol`.
/// Asymmetries are reported once per unordered pair (i < j).
inline std::vector<MatrixViolation> validate_distance_matrix(const DistanceMatrix& d, double tol)
{
    std::vector<MatrixViolation> out;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = d(i, j);
            if (!std::isfinite(v)) {
                out.push_back({ViolationKind::non_finite, i, j, v});
                continue;
            }
            if (i == j) {
                if (std::abs(v) > tol) out.push_back({ViolationKind::nonzero_diagonal, i, j, std::abs(v)});
                continue;
            }
            if (v < -tol) out.push_back({ViolationKind::negative, i, j, -v});
            if (i < j && std::isfinite(d(j, i))) {
                const double gap = std::abs(v - d(j, i));
                if (gap > tol) out.push_back({ViolationKind::asymmetry, i, j, gap});
            }
        }
    }
    return out;
}

inline std::string describe(const MatrixViolation& v)
{
    return std::string(to_string(v.kind)) + " at (" + std::to_string(v.i) + "," +
           std::to_string(v.j) + ") magnitude " + std::to_string(v.magnitude);
}

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k)
{
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace treelike
