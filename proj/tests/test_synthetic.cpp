#include <gtest/gtest.h>

#include <cmath>

#include "treelike/distances.hpp"
#include "treelike/hyperbolicity.hpp"
#include "treelike/synthetic.hpp"
#include "treelike/ultrametricity.hpp"

using namespace treelike;

TEST(SampleSphere, UnitNormsAndDiameter)
{
    const auto s = sample_sphere(64, 10, Seed{3});
    for (std::size_t i = 0; i < s.size(); ++i) {
        double sq = 0;
        for (double x : s.row(i)) sq += x * x;
        EXPECT_NEAR(std::sqrt(sq), 1.0, 1e-12);
    }
    const auto d = build_distance_matrix(s, MetricKind::euclidean);
    for (double x : d.entries()) EXPECT_LE(x, 2.0 + 1e-12);
    EXPECT_TRUE(validate_distance_matrix(d, 0.0).empty());
}

TEST(SampleSphere, Deterministic)
{
    EXPECT_EQ(sample_sphere(20, 5, Seed{1}), sample_sphere(20, 5, Seed{1}));
    EXPECT_NE(sample_sphere(20, 5, Seed{1}), sample_sphere(20, 5, Seed{2}));
    EXPECT_THROW(sample_sphere(5, 1, Seed{1}), ValidationError);
}

TEST(SamplePoincareDisk, InsideUnitDisk)
{
    const auto s = sample_poincare_disk(500, Seed{4});
    EXPECT_EQ(s.dim(), 2u);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_LT(std::hypot(s.row(i)[0], s.row(i)[1]), 1.0);
    EXPECT_EQ(s, sample_poincare_disk(500, Seed{4}));
    EXPECT_NO_THROW(build_distance_matrix(s, MetricKind::poincare));
}

TEST(FloydWarshall, PathGraph)
{
    auto w = WeightMatrix::unconnected(4);
    w.connect(0, 1);
    w.connect(1, 2);
    w.connect(2, 3);
    const auto d = floyd_warshall(w);
    EXPECT_EQ(d(0, 3), 3.0);
    EXPECT_EQ(d.tag(), MetricTag::graph_shortest_path);
}

TEST(FloydWarshall, IsolatedVertexGetsSentinel)
{
    auto w = WeightMatrix::unconnected(5);
    w.connect(0, 1);
    w.connect(1, 2);
    w.connect(2, 3);
    const auto d = floyd_warshall(w);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(d(4, j), 5.0);
}

TEST(FloydWarshall, Shortcut)
{
    auto w = WeightMatrix::unconnected(3);
    w.connect(0, 1, 10);
    w.connect(0, 2);
    w.connect(1, 2);
    EXPECT_EQ(floyd_warshall(w)(0, 1), 2.0);
}

TEST(FloydWarshall, IdempotentOnMetricInput)
{
    const auto first = floyd_warshall(erdos_renyi_adjacency(15, 0.3, Seed{2}));
    WeightMatrix again{15, first.entries()};
    EXPECT_EQ(floyd_warshall(again).entries(), first.entries());
}

TEST(FloydWarshall, DisjointEdges)
{
    auto w = WeightMatrix::unconnected(4);
    w.connect(0, 1);
    w.connect(2, 3);
    const auto d = floyd_warshall(w);
    EXPECT_EQ(d(0, 1), 1.0);
    EXPECT_EQ(d(0, 2), 4.0);
    EXPECT_EQ(d(1, 3), 4.0);
}

TEST(FloydWarshall, RejectsAsymmetric)
{
    auto w = WeightMatrix::unconnected(3);
    w.weights[0 * 3 + 1] = 1.0;
    EXPECT_THROW(floyd_warshall(w), ValidationError);
}

TEST(SampleDenseGraph, CompleteGraphAtPOne)
{
    const auto d = sample_dense_graph(12, 1.0, Seed{9});
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 12; ++j) EXPECT_EQ(d(i, j), i == j ? 0.0 : 1.0);
}

TEST(SampleDenseGraph, IntegerDistances)
{
    for (double p : {0.05, 0.2, 0.8}) {
        const std::size_t n = 40;
        const auto d = sample_dense_graph(n, p, Seed{5});
        EXPECT_TRUE(validate_distance_matrix(d, 0.0).empty());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double x = d(i, j);
                EXPECT_EQ(x, std::floor(x));
                if (i != j) {
                    EXPECT_GE(x, 1.0);
                    EXPECT_LE(x, static_cast<double>(n));
                }
            }
    }
    EXPECT_THROW(sample_dense_graph(5, 0.0, Seed{1}), ValidationError);
}

TEST(TreeMetricFixture, ZeroHyperbolicAndMetric)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto tree = tree_metric_fixture(16, Seed{seed});
        const auto& d = tree.distances;
        EXPECT_TRUE(validate_distance_matrix(d, 0.0).empty());
        EXPECT_LE(exact_delta(d).delta_max, 1e-9);
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j)
                for (std::size_t k = 0; k < d.size(); ++k) EXPECT_LE(d(i, k), d(i, j) + d(j, k) + 1e-9);
        EXPECT_GE(tree.cherries.size(), 2u);
        for (auto [a, b] : tree.cherries) EXPECT_LT(a, b);
    }
    EXPECT_THROW(tree_metric_fixture(3, Seed{1}), ValidationError);
}

TEST(UltrametricFixture, Properties)
{
    const auto d = ultrametric_fixture(30, Seed{8});
    EXPECT_TRUE(validate_distance_matrix(d, 0.0).empty());
    EXPECT_TRUE(is_ultrametric(d, 1e-9));
    EXPECT_EQ(exact_ultrametricity(d, 1e-9).num_violations, 0u);
    EXPECT_LE(exact_delta(ultrametric_fixture(14, Seed{8})).delta_max, 1e-9);
    EXPECT_THROW(ultrametric_fixture(2, Seed{1}), ValidationError);
}

TEST(Synthesize, KindsAndAliases)
{
    EXPECT_EQ(synthetic_kind_from_string("graph"), SyntheticKind::dense_graph);
    EXPECT_EQ(synthetic_kind_from_string("disk"), SyntheticKind::poincare_disk);
    EXPECT_EQ(synthetic_kind_from_string("tree"), SyntheticKind::tree_metric);
    EXPECT_EQ(synthetic_kind_from_string("ultra"), SyntheticKind::ultrametric);
    EXPECT_THROW(synthetic_kind_from_string("torus"), ParseError);

    for (auto kind : {SyntheticKind::sphere, SyntheticKind::dense_graph, SyntheticKind::poincare_disk,
                      SyntheticKind::tree_metric, SyntheticKind::ultrametric}) {
        SyntheticSpec spec;
        spec.kind = kind;
        spec.n = 20;
        const auto data = synthesize(spec, 2);
        EXPECT_EQ(data.distances.size(), 20u);
        EXPECT_TRUE(validate_distance_matrix(data.distances, 0.0).empty());
        EXPECT_EQ(data.embeddings.has_value(),
                  kind == SyntheticKind::sphere || kind == SyntheticKind::poincare_disk);
    }
}
