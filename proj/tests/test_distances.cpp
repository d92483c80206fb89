#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "treelike/distances.hpp"
#include "oracles.hpp"

using namespace treelike;

namespace {

// 30-digit reference values (mpmath).
constexpr double kLn3 = 1.09861228866810969139524523692;
constexpr double kLn19 = 2.94443897916644046000902743189;
constexpr double kSqrt14 = 3.74165738677394138558374873232;
// arcosh(1 + 2 * 0.5 / 0.75^2)
constexpr double kHalfAxesGap = 1.68069977242800356446350924941;

std::vector<double> v(std::initializer_list<double> x) { return x; }

} // namespace

TEST(EuclideanDistance, Examples)
{
    EXPECT_EQ(euclidean_distance(v({0, 0}), v({3, 4})), 5.0);
    EXPECT_EQ(euclidean_distance(v({1.5, -2, 7}), v({1.5, -2, 7})), 0.0);
    EXPECT_NEAR(euclidean_distance(v({1, 1, 1}), v({2, 3, 4})), kSqrt14, 1e-15);
    EXPECT_THROW(euclidean_distance(v({1, 2}), v({1})), ShapeError);
}

TEST(PoincareDistance, Examples)
{
    EXPECT_EQ(poincare_distance(v({0.3, 0.2}), v({0.3, 0.2})), 0.0);
    EXPECT_NEAR(poincare_distance(v({0, 0}), v({0.5, 0})), kLn3, 1e-15);
    EXPECT_NEAR(poincare_distance(v({0, 0}), v({0.9, 0})), kLn19, 1e-14);
    EXPECT_THROW(poincare_distance(v({1, 0}), v({0, 0})), DomainError);
    EXPECT_THROW(poincare_distance(v({0, 0}), v({0.8, 0.8})), DomainError);
}

TEST(PoincareDistance, ClosedFormFromOrigin)
{
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 500; ++t) {
        std::vector<double> x(1 + t % 6);
        for (auto& e : x) e = u(gen);
        double norm = 0;
        for (double e : x) norm += e * e;
        norm = std::sqrt(norm);
        const double r = std::uniform_real_distribution<double>(0.0, 0.99)(gen);
        for (auto& e : x) e *= r / norm;
        const std::vector<double> origin(x.size(), 0.0);
        EXPECT_NEAR(poincare_distance(origin, x), std::log((1 + r) / (1 - r)), 1e-12);
    }
}

TEST(PoincareDistance, SymmetricAndPositive)
{
    const auto pts = oracle::random_points(20, 3, 2, 0.5);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) {
            EXPECT_EQ(poincare_distance(pts[i], pts[j]), poincare_distance(pts[j], pts[i]));
            if (i != j) {
                EXPECT_GT(poincare_distance(pts[i], pts[j]), 0.0);
            }
        }
}

TEST(BuildDistanceMatrix, Examples)
{
    const auto two = build_distance_matrix(EmbeddingSet::from_rows({{0, 0}, {3, 4}}), MetricKind::euclidean);
    EXPECT_EQ(two.entries(), (std::vector<double>{0, 5, 5, 0}));
    EXPECT_EQ(two.tag(), MetricTag::euclidean);

    const auto one = build_distance_matrix(EmbeddingSet::from_rows({{0.1, 0.2}}), MetricKind::poincare);
    EXPECT_EQ(one.entries(), (std::vector<double>{0}));

    const auto p = build_distance_matrix(EmbeddingSet::from_rows({{0, 0}, {0.5, 0}, {0, 0.5}}),
                                         MetricKind::poincare);
    EXPECT_EQ(p.tag(), MetricTag::poincare);
    EXPECT_NEAR(p(0, 1), kLn3, 1e-15);
    EXPECT_NEAR(p(0, 2), kLn3, 1e-15);
    EXPECT_NEAR(p(1, 2), kHalfAxesGap, 1e-14);
    EXPECT_TRUE(validate_distance_matrix(p, 0.0).empty());
}

TEST(BuildDistanceMatrix, PoincareRejectsRowsOutsideBall)
{
    try {
        build_distance_matrix(EmbeddingSet::from_rows({{0, 0}, {1, 0}, {0.2, 0}, {3, 3}}), MetricKind::poincare);
        FAIL();
    } catch (const DomainError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find(" 1"), std::string::npos);
        EXPECT_NE(msg.find(" 3"), std::string::npos);
    }
}

TEST(BuildDistanceMatrix, TriangleInequality)
{
    for (unsigned seed = 0; seed < 5; ++seed) {
        const auto set = EmbeddingSet::from_rows(oracle::random_points(15, 6, seed));
        const auto d = build_distance_matrix(set, MetricKind::euclidean);
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = 0; j < d.size(); ++j)
                for (std::size_t k = 0; k < d.size(); ++k) EXPECT_LE(d(i, k), d(i, j) + d(j, k) + 1e-9);
    }
}

TEST(BuildDistanceMatrix, RotationIsometry)
{
    const std::size_t dim = 5;
    const auto pts = oracle::random_points(20, dim, 8);
    // Random orthonormal matrix by Gram-Schmidt.
    auto q = oracle::random_points(dim, dim, 99);
    for (std::size_t a = 0; a < dim; ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            double dot = 0;
            for (std::size_t k = 0; k < dim; ++k) dot += q[a][k] * q[b][k];
            for (std::size_t k = 0; k < dim; ++k) q[a][k] -= dot * q[b][k];
        }
        double norm = 0;
        for (double x : q[a]) norm += x * x;
        for (double& x : q[a]) x /= std::sqrt(norm);
    }
    std::vector<std::vector<double>> rotated(pts.size(), std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t k = 0; k < dim; ++k) rotated[i][a] += q[a][k] * pts[i][k];

    const auto before = build_distance_matrix(EmbeddingSet::from_rows(pts), MetricKind::euclidean);
    const auto after = build_distance_matrix(EmbeddingSet::from_rows(rotated), MetricKind::euclidean);
    for (std::size_t i = 0; i < before.entries().size(); ++i)
        EXPECT_NEAR(before.entries()[i], after.entries()[i], 1e-9);
}

TEST(BuildDistanceMatrix, WorkerCountDoesNotChangeBits)
{
    const auto set = EmbeddingSet::from_rows(oracle::random_points(57, 9, 5, 0.1));
    for (auto kind : {MetricKind::euclidean, MetricKind::poincare})
        EXPECT_EQ(build_distance_matrix(set, kind, 1), build_distance_matrix(set, kind, 8));
}
