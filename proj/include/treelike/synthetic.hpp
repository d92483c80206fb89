#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treelike/core_types.hpp"
#include "treelike/distances.hpp"
#include "treelike/random.hpp"

namespace treelike {

/// Points drawn from a standard normal and projected onto the unit sphere.
inline EmbeddingSet sample_sphere(std::size_t n, std::size_t dim, Seed seed)
{
    if (n < 1) throw ValidationError("sphere sample needs n >= 1");
    if (dim < 2) throw ValidationError("sphere sample needs dim >= 2");
    std::vector<double> values(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(seed, i);
        double* row = values.data() + i * dim;
        double norm = 0.0;
        while (norm == 0.0) {
            double sq = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                row[d] = rng.normal();
                sq += row[d] * row[d];
            }
            norm = std::sqrt(sq);
        }
        for (std::size_t d = 0; d < dim; ++d) row[d] /= norm;
    }
    return EmbeddingSet(n, dim, std::move(values));
}

/// Points in the 2-d Poincaré disk: radius uniform in [0,1), angle uniform in [0, 2pi).
inline EmbeddingSet sample_poincare_disk(std::size_t n, Seed seed)
{
    if (n < 1) throw ValidationError("disk sample needs n >= 1");
    std::vector<double> values(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(seed, i);
        const double r = rng.uniform01();
        const double theta = 2.0 * std::numbers::pi * rng.uniform01();
        values[2 * i] = r * std::cos(theta);
        values[2 * i + 1] = r * std::sin(theta);
    }
    return EmbeddingSet(n, 2, std::move(values));
}

/// Square matrix of nonnegative edge weights; infinity marks a missing edge.
struct WeightMatrix {
    std::size_t n = 0;
    std::vector<double> weights;

    static WeightMatrix unconnected(std::size_t n)
    {
        WeightMatrix w{n, std::vector<double>(n * n, std::numeric_limits<double>::infinity())};
        for (std::size_t i = 0; i < n; ++i) w.weights[i * n + i] = 0.0;
        return w;
    }

    void connect(std::size_t i, std::size_t j, double weight = 1.0)
    {
        weights[i * n + j] = weight;
        weights[j * n + i] = weight;
    }

    double operator()(std::size_t i, std::size_t j) const noexcept { return weights[i * n + j]; }
};

/// All-pairs shortest paths. Pairs left unreachable get the sentinel
/// distance n, which exceeds every unit-weight path length (at most n - 1).
inline DistanceMatrix floyd_warshall(const WeightMatrix& adjacency)
{
    const std::size_t n = adjacency.n;
    if (adjacency.weights.size() != n * n) throw ShapeError("adjacency matrix is not square");
    for (std::size_t i = 0; i < n; ++i) {
        if (adjacency(i, i) != 0.0)
            throw ValidationError("adjacency diagonal must be zero at " + std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            if (adjacency(i, j) != adjacency(j, i))
                throw ValidationError("adjacency matrix is asymmetric at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
            if (std::isnan(adjacency(i, j)) || adjacency(i, j) < 0.0)
                throw ValidationError("adjacency weights must be nonnegative");
        }
    }

    std::vector<double> dist = adjacency.weights;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            const double dik = dist[i * n + k];
            if (std::isinf(dik)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                const double through = dik + dist[k * n + j];
                if (through < dist[i * n + j]) dist[i * n + j] = through;
            }
        }
    const auto sentinel = static_cast<double>(n);
    for (double& v : dist)
        if (std::isinf(v)) v = sentinel;
    return DistanceMatrix(n, std::move(dist), MetricTag::graph_shortest_path);
}

/// Erdős–Rényi G(n, p) with unit edge weights.
inline WeightMatrix erdos_renyi_adjacency(std::size_t n, double p, Seed seed)
{
    if (!(p > 0.0 && p <= 1.0)) throw ValidationError("edge probability must lie in (0, 1]");
    WeightMatrix w = WeightMatrix::unconnected(n);
    CounterRng rng(seed, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform01() < p) w.connect(i, j);
    return w;
}

inline DistanceMatrix sample_dense_graph(std::size_t n, double p, Seed seed)
{
    if (n < 2) throw ValidationError("dense graph needs n >= 2");
    return floyd_warshall(erdos_renyi_adjacency(n, p, seed));
}

struct TreeFixture {
    DistanceMatrix distances;
    // Leaf pairs attached to the same internal node, each as (smaller, larger).
    std::vector<std::pair<std::size_t, std::size_t>> cherries;

    bool is_cherry(std::size_t a, std::size_t b) const
    {
        const auto key = std::minmax(a, b);
        return std::find(cherries.begin(), cherries.end(),
                         std::pair<std::size_t, std::size_t>{key.first, key.second}) !=
               cherries.end();
    }
};

/// Leaf path distances of a random unrooted binary tree with edge weights
/// uniform in [0.1, 2]. Leaves are added by subdividing a random edge; leaf
/// labels are shuffled afterwards.
inline TreeFixture tree_metric_fixture(std::size_t n_leaves, Seed seed)
{
    if (n_leaves < 4) throw ValidationError("tree fixture needs at least 4 leaves");
    CounterRng rng(seed, 0);
    auto weight = [&rng] { return rng.uniform(0.1, 2.0); };

    struct Edge {
        std::size_t u, v;
        double w;
    };
    // Nodes 0..n_leaves-1 are leaves; internal nodes follow.
    std::vector<Edge> edges;
    std::size_t next_internal = n_leaves;
    const std::size_t hub = next_internal++;
    for (std::size_t leaf = 0; leaf < 3; ++leaf) edges.push_back({hub, leaf, weight()});
    for (std::size_t leaf = 3; leaf < n_leaves; ++leaf) {
        const auto pick = static_cast<std::size_t>(rng.uniform_below(edges.size()));
        const Edge old = edges[pick];
        const std::size_t mid = next_internal++;
        edges[pick] = {old.u, mid, weight()};
        edges.push_back({mid, old.v, weight()});
        edges.push_back({mid, leaf, weight()});
    }

    const std::size_t nodes = next_internal;
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(nodes);
    for (const Edge& e : edges) {
        adj[e.u].push_back({e.v, e.w});
        adj[e.v].push_back({e.u, e.w});
    }

    std::vector<std::size_t> label(n_leaves);
    for (std::size_t i = 0; i < n_leaves; ++i) label[i] = i;
    for (std::size_t i = n_leaves - 1; i > 0; --i)
        std::swap(label[i], label[static_cast<std::size_t>(rng.uniform_below(i + 1))]);

    std::vector<double> dist(n_leaves * n_leaves, 0.0);
    std::vector<double> from(nodes);
    std::vector<std::size_t> stack;
    std::vector<char> seen(nodes);
    for (std::size_t src = 0; src < n_leaves; ++src) {
        std::fill(seen.begin(), seen.end(), 0);
        from[src] = 0.0;
        seen[src] = 1;
        stack.assign(1, src);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (auto [v, w] : adj[u]) {
                if (seen[v]) continue;
                seen[v] = 1;
                from[v] = from[u] + w;
                stack.push_back(v);
            }
        }
        for (std::size_t dst = 0; dst < n_leaves; ++dst)
            dist[label[src] * n_leaves + label[dst]] = from[dst];
    }
    // Path sums are accumulated from each end separately; mirror for exact symmetry.
    for (std::size_t i = 0; i < n_leaves; ++i)
        for (std::size_t j = i + 1; j < n_leaves; ++j)
            dist[j * n_leaves + i] = dist[i * n_leaves + j];

    TreeFixture out{DistanceMatrix(n_leaves, std::move(dist), MetricTag::external), {}};
    for (std::size_t node = n_leaves; node < nodes; ++node) {
        std::vector<std::size_t> leaves;
        for (auto [v, w] : adj[node])
            if (v < n_leaves) leaves.push_back(label[v]);
        if (leaves.size() == 2) {
            const auto [a, b] = std::minmax(leaves[0], leaves[1]);
            out.cherries.emplace_back(a, b);
        }
    }
    std::sort(out.cherries.begin(), out.cherries.end());
    return out;
}

/// Cophenetic distances of a random dendrogram: clusters are merged in random
/// order at strictly increasing heights.
inline DistanceMatrix ultrametric_fixture(std::size_t n, Seed seed)
{
    if (n < 3) throw ValidationError("ultrametric fixture needs n >= 3");
    CounterRng rng(seed, 0);
    std::vector<std::vector<std::size_t>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};

    std::vector<double> dist(n * n, 0.0);
    double height = 0.0;
    while (clusters.size() > 1) {
        auto a = static_cast<std::size_t>(rng.uniform_below(clusters.size()));
        auto b = static_cast<std::size_t>(rng.uniform_below(clusters.size() - 1));
        if (b >= a) ++b;
        if (a > b) std::swap(a, b);
        height += rng.uniform(0.1, 1.0);
        for (std::size_t x : clusters[a])
            for (std::size_t y : clusters[b]) dist[x * n + y] = dist[y * n + x] = height;
        clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
    }
    return DistanceMatrix(n, std::move(dist), MetricTag::external);
}

enum class SyntheticKind { sphere, dense_graph, poincare_disk, tree_metric, ultrametric };

inline std::string_view to_string(SyntheticKind k)
{
    switch (k) {
    case SyntheticKind::sphere: return "sphere";
    case SyntheticKind::dense_graph: return "dense_graph";
    case SyntheticKind::poincare_disk: return "poincare_disk";
    case SyntheticKind::tree_metric: return "tree_metric";
    case SyntheticKind::ultrametric: return "ultrametric";
    }
    return "sphere";
}

/// Accepts both the long names and the CLI short forms (graph, disk, tree, ultra).
inline SyntheticKind synthetic_kind_from_string(std::string_view s)
{
    if (s == "sphere") return SyntheticKind::sphere;
    if (s == "dense_graph" || s == "graph") return SyntheticKind::dense_graph;
    if (s == "poincare_disk" || s == "disk") return SyntheticKind::poincare_disk;
    if (s == "tree_metric" || s == "tree") return SyntheticKind::tree_metric;
    if (s == "ultrametric" || s == "ultra") return SyntheticKind::ultrametric;
    throw ParseError("unknown synthetic kind '" + std::string(s) + "'");
}

struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::sphere;
    std::size_t n = 50;
    std::size_t dim = 10; // sphere only
    double p = 0.8;       // dense_graph only
    Seed seed{};
};

struct SyntheticData {
    std::optional<EmbeddingSet> embeddings; // sphere and poincare_disk
    DistanceMatrix distances;
    std::vector<std::pair<std::size_t, std::size_t>> cherries; // tree_metric
};

/// Generates the space and its distance matrix: Euclidean for the sphere,
/// hyperbolic for the disk, shortest paths for the graph.
inline SyntheticData synthesize(const SyntheticSpec& spec, std::size_t workers = 1)
{
    SyntheticData out;
    switch (spec.kind) {
    case SyntheticKind::sphere:
        out.embeddings = sample_sphere(spec.n, spec.dim, spec.seed);
        out.distances = build_distance_matrix(*out.embeddings, MetricKind::euclidean, workers);
        break;
    case SyntheticKind::poincare_disk:
        out.embeddings = sample_poincare_disk(spec.n, spec.seed);
        out.distances = build_distance_matrix(*out.embeddings, MetricKind::poincare, workers);
        break;
    case SyntheticKind::dense_graph:
        out.distances = sample_dense_graph(spec.n, spec.p, spec.seed);
        break;
    case SyntheticKind::tree_metric: {
        TreeFixture tree = tree_metric_fixture(spec.n, spec.seed);
        out.distances = std::move(tree.distances);
        out.cherries = std::move(tree.cherries);
        break;
    }
    case SyntheticKind::ultrametric:
        out.distances = ultrametric_fixture(spec.n, spec.seed);
        break;
    }
    return out;
}

} // namespace treelike
