#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "treelike/core_types.hpp"
#include "treelike/hyperbolicity.hpp"
#include "treelike/parallel.hpp"
#include "treelike/random.hpp"
#include "treelike/stats.hpp"

namespace treelike {

/// Violation statistics. max/avg/std are taken over violating triples only
/// (nu > epsilon) and are zero when there are none; avg_over_all_triples
/// averages nu over every evaluated triple.
struct UltraStats {
    double max_violation = 0.0;
    double avg_violation = 0.0;
    double std_violation = 0.0;
    std::uint64_t num_violations = 0;
    std::uint64_t total_triples = 0;
    double epsilon = 0.0;
    double avg_over_all_triples = 0.0;
    EvaluationMode mode = EvaluationMode::sampled;
    std::optional<Seed> seed;

    friend bool operator==(const UltraStats&, const UltraStats&) = default;
};

namespace detail {

inline double triple_violation_unchecked(const DistanceMatrix& d, std::size_t i, std::size_t j,
                                         std::size_t k) noexcept
{
    const double dij = d(i, j);
    const double djk = d(j, k);
    const double dik = d(i, k);
    const double v1 = dik - std::max(dij, djk);
    const double v2 = dij - std::max(dik, djk);
    const double v3 = djk - std::max(dij, dik);
    return std::max({v1, v2, v3, 0.0});
}

inline void require_three_points(const DistanceMatrix& d)
{
    if (d.size() < 3) throw ValidationError("need at least 3 points, got " + std::to_string(d.size()));
}

inline void require_epsilon(double epsilon)
{
    if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be nonnegative");
}

} // namespace detail

/// nu = max(d_ik - max(d_ij, d_jk), d_ij - max(d_ik, d_jk), d_jk - max(d_ij, d_ik), 0),
/// which equals the largest side minus the second largest.
inline double triple_violation(const DistanceMatrix& d, std::size_t i, std::size_t j, std::size_t k)
{
    for (std::size_t x : {i, j, k}) detail::require_index(d, x);
    if (i == j || j == k || i == k) throw ValidationError("triple indices must be distinct");
    return detail::triple_violation_unchecked(d, i, j, k);
}

inline UltraStats exact_ultrametricity(const DistanceMatrix& d, double epsilon = 1e-9,
                                       std::size_t workers = 1)
{
    detail::require_three_points(d);
    detail::require_epsilon(epsilon);
    const std::size_t n = d.size();
    auto visit = [&](bool violations_only) {
        return [&d, n, epsilon, violations_only](std::size_t i, auto&& sink) {
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k) {
                    const double nu = detail::triple_violation_unchecked(d, i, j, k);
                    if (!violations_only || nu > epsilon) sink(nu);
                }
        };
    };
    const Summary viol = blocked_summary(n - 2, workers, visit(true));
    const Summary all = blocked_summary(n - 2, workers, visit(false));

    UltraStats out;
    out.max_violation = viol.max;
    out.avg_violation = viol.mean;
    out.std_violation = viol.std;
    out.num_violations = viol.count;
    out.total_triples = all.count;
    out.epsilon = epsilon;
    out.avg_over_all_triples = all.mean;
    out.mode = EvaluationMode::exact;
    return out;
}

/// Draws `samples` distinct unordered triples. Attempt t uses stream t of the
/// seed; duplicates are rejected in attempt order, so the list is deterministic.
inline std::vector<std::array<std::size_t, 3>> sample_unique_triples(std::size_t n,
                                                                     std::uint64_t samples,
                                                                     Seed seed)
{
    if (samples > choose(n, 3)) throw ValidationError("more unique triples requested than exist");
    std::vector<std::array<std::size_t, 3>> out;
    out.reserve(samples);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(samples * 2);
    const auto un = static_cast<std::uint64_t>(n);
    for (std::uint64_t attempt = 0; out.size() < samples; ++attempt) {
        CounterRng rng(seed, attempt);
        std::array<std::size_t, 3> t{};
        t[0] = static_cast<std::size_t>(rng.uniform_below(n));
        do t[1] = static_cast<std::size_t>(rng.uniform_below(n));
        while (t[1] == t[0]);
        do t[2] = static_cast<std::size_t>(rng.uniform_below(n));
        while (t[2] == t[0] || t[2] == t[1]);
        std::sort(t.begin(), t.end());
        const std::uint64_t key = (t[0] * un + t[1]) * un + t[2];
        if (seen.insert(key).second) out.push_back(t);
    }
    return out;
}

/// Violation statistics over `samples` unique random triples. Switches to full
/// enumeration when C(n,3) <= 4 * samples.
inline UltraStats sample_ultrametricity(const DistanceMatrix& d, std::uint64_t samples,
                                        double epsilon, Seed seed, std::size_t workers = 1)
{
    detail::require_three_points(d);
    detail::require_epsilon(epsilon);
    if (samples == 0) throw ValidationError("sample count must be at least 1");
    const std::size_t n = d.size();
    if (choose(n, 3) <= 4 * samples) return exact_ultrametricity(d, epsilon, workers);

    const auto triples = sample_unique_triples(n, samples, seed);
    std::vector<double> nu(triples.size());
    parallel_for(0, triples.size(), workers, [&](std::size_t s) {
        const auto& t = triples[s];
        nu[s] = detail::triple_violation_unchecked(d, t[0], t[1], t[2]);
    });

    std::vector<double> violations;
    for (double v : nu)
        if (v > epsilon) violations.push_back(v);
    const Summary viol = summarize(violations);
    const Summary all = summarize(nu);

    UltraStats out;
    out.max_violation = viol.max;
    out.avg_violation = viol.mean;
    out.std_violation = viol.std;
    out.num_violations = viol.count;
    out.total_triples = all.count;
    out.epsilon = epsilon;
    out.avg_over_all_triples = all.mean;
    out.mode = EvaluationMode::sampled;
    out.seed = seed;
    return out;
}

inline bool is_ultrametric(const DistanceMatrix& d, double epsilon = 1e-9)
{
    return exact_ultrametricity(d, epsilon).num_violations == 0;
}

} // namespace treelike
