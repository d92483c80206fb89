#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "treelike/core_types.hpp"
#include "treelike/parallel.hpp"
#include "treelike/random.hpp"
#include "treelike/stats.hpp"

namespace treelike {

/// How a single quadruple is turned into a delta value.
///
/// four_point: half the gap between the two largest of the three pairwise
/// sums; symmetric in the four points.
/// slack: max(0, min([a,b]_w, [b,c]_w) - [a,c]_w) for the labelled quadruple,
/// i.e. the smallest delta making [a,c]_w >= min([a,b]_w, [b,c]_w) - delta hold.
enum class DeltaFormula { four_point, paper_slack };

enum class EvaluationMode { sampled, exact };

inline std::string_view to_string(DeltaFormula f)
{
    return f == DeltaFormula::four_point ? "four_point" : "paper_slack";
}

inline DeltaFormula delta_formula_from_string(std::string_view s)
{
    if (s == "four_point") return DeltaFormula::four_point;
    if (s == "paper_slack") return DeltaFormula::paper_slack;
    throw ParseError("unknown delta formula '" + std::string(s) + "'");
}

inline std::string_view to_string(EvaluationMode m)
{
    return m == EvaluationMode::sampled ? "sampled" : "exact";
}

inline EvaluationMode evaluation_mode_from_string(std::string_view s)
{
    if (s == "sampled") return EvaluationMode::sampled;
    if (s == "exact") return EvaluationMode::exact;
    throw ParseError("unknown evaluation mode '" + std::string(s) + "'");
}

struct DeltaStats {
    double delta_max = 0.0;
    double delta_avg = 0.0;
    double delta_std = 0.0;
    std::uint64_t samples_evaluated = 0;
    EvaluationMode mode = EvaluationMode::sampled;
    DeltaFormula formula = DeltaFormula::four_point;
    std::optional<Seed> seed;

    friend bool operator==(const DeltaStats&, const DeltaStats&) = default;
};

namespace detail {

inline void require_index(const DistanceMatrix& d, std::size_t i)
{
    if (i >= d.size())
        throw ValidationError("index " + std::to_string(i) + " out of range for " +
                              std::to_string(d.size()) + " points");
}

inline double four_point_unchecked(const DistanceMatrix& d, std::size_t a, std::size_t b,
                                   std::size_t c, std::size_t w) noexcept
{
    std::array<double, 3> s{d(a, b) + d(c, w), d(a, c) + d(b, w), d(a, w) + d(b, c)};
    std::sort(s.begin(), s.end());
    return (s[2] - s[1]) / 2.0;
}

inline double gromov_unchecked(const DistanceMatrix& d, std::size_t a, std::size_t b,
                               std::size_t w) noexcept
{
    return 0.5 * (d(a, w) + d(b, w) - d(a, b));
}

inline double slack_unchecked(const DistanceMatrix& d, std::size_t a, std::size_t b, std::size_t c,
                              std::size_t w) noexcept
{
    const double ab = gromov_unchecked(d, a, b, w);
    const double bc = gromov_unchecked(d, b, c, w);
    const double ac = gromov_unchecked(d, a, c, w);
    return std::max(0.0, std::min(ab, bc) - ac);
}

inline double quadruple_unchecked(const DistanceMatrix& d, std::size_t a, std::size_t b,
                                  std::size_t c, std::size_t w, DeltaFormula f) noexcept
{
    return f == DeltaFormula::four_point ? four_point_unchecked(d, a, b, c, w)
                                         : slack_unchecked(d, a, b, c, w);
}

// All 24 orderings of four slots.
inline constexpr std::array<std::array<int, 4>, 24> kRoleAssignments = [] {
    std::array<std::array<int, 4>, 24> out{};
    std::array<int, 4> p{0, 1, 2, 3};
    std::size_t k = 0;
    do {
        out[k++] = p;
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}();

inline void require_four_points(const DistanceMatrix& d)
{
    if (d.size() < 4) throw ValidationError("need at least 4 points, got " + std::to_string(d.size()));
}

} // namespace detail

/// Gromov product [a,b]_w = (d(a,w) + d(b,w) - d(a,b)) / 2.
inline double gromov_product(const DistanceMatrix& d, std::size_t a, std::size_t b, std::size_t w)
{
    detail::require_index(d, a);
    detail::require_index(d, b);
    detail::require_index(d, w);
    return detail::gromov_unchecked(d, a, b, w);
}

inline double quadruple_delta(const DistanceMatrix& d, std::size_t a, std::size_t b, std::size_t c,
                              std::size_t w, DeltaFormula formula = DeltaFormula::four_point)
{
    for (std::size_t i : {a, b, c, w}) detail::require_index(d, i);
    if (a == b || a == c || a == w || b == c || b == w || c == w)
        throw ValidationError("quadruple indices must be distinct");
    return detail::quadruple_unchecked(d, a, b, c, w, formula);
}

/// Delta statistics over every quadruple of the matrix.
///
/// four_point visits each unordered quadruple once (C(n,4) values); the slack
/// formula visits all 24 role assignments of each (24 * C(n,4) values).
inline DeltaStats exact_delta(const DistanceMatrix& d,
                              DeltaFormula formula = DeltaFormula::four_point,
                              std::size_t workers = 1)
{
    detail::require_four_points(d);
    const std::size_t n = d.size();
    const Summary s = blocked_summary(n - 3, workers, [&](std::size_t a, auto&& sink) {
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t w = c + 1; w < n; ++w) {
                    if (formula == DeltaFormula::four_point) {
                        sink(detail::four_point_unchecked(d, a, b, c, w));
                    } else {
                        const std::array<std::size_t, 4> q{a, b, c, w};
                        for (const auto& r : detail::kRoleAssignments)
                            sink(detail::slack_unchecked(d, q[r[0]], q[r[1]], q[r[2]], q[r[3]]));
                    }
                }
    });
    DeltaStats out;
    out.delta_max = s.max;
    out.delta_avg = s.mean;
    out.delta_std = s.std;
    out.samples_evaluated = s.count;
    out.mode = EvaluationMode::exact;
    out.formula = formula;
    return out;
}

struct DeltaSampling {
    std::uint64_t samples = 100000;
    Seed seed{};
    DeltaFormula formula = DeltaFormula::four_point;
    std::size_t workers = 1;
    // Enumerate every quadruple instead when `samples` reaches the number of
    // distinct evaluations exact_delta would perform.
    bool exhaustive_fallback = false;
};

/// Draws the four distinct indices of sample `id` from its own stream.
inline std::array<std::size_t, 4> sample_quadruple(std::size_t n, Seed seed, std::uint64_t id)
{
    CounterRng rng(seed, id);
    std::array<std::size_t, 4> q{};
    for (std::size_t k = 0; k < 4; ++k) {
        bool fresh = false;
        while (!fresh) {
            q[k] = static_cast<std::size_t>(rng.uniform_below(n));
            fresh = std::find(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(k), q[k]) ==
                    q.begin() + static_cast<std::ptrdiff_t>(k);
        }
    }
    return q;
}

/// Monte Carlo delta estimate over `samples` random quadruples, drawn with
/// replacement across samples. Deterministic in (d, samples, seed, formula).
inline DeltaStats sample_delta(const DistanceMatrix& d, const DeltaSampling& opts)
{
    detail::require_four_points(d);
    if (opts.samples == 0) throw ValidationError("sample count must be at least 1");
    const std::size_t n = d.size();

    if (opts.exhaustive_fallback) {
        const std::uint64_t exhaustive =
            choose(n, 4) * (opts.formula == DeltaFormula::four_point ? 1 : 24);
        if (opts.samples >= exhaustive) return exact_delta(d, opts.formula, opts.workers);
    }

    std::vector<double> slots(opts.samples);
    parallel_for(0, slots.size(), opts.workers, [&](std::size_t i) {
        const auto q = sample_quadruple(n, opts.seed, i);
        slots[i] = detail::quadruple_unchecked(d, q[0], q[1], q[2], q[3], opts.formula);
    });
    const Summary s = summarize(slots);

    DeltaStats out;
    out.delta_max = s.max;
    out.delta_avg = s.mean;
    out.delta_std = s.std;
    out.samples_evaluated = s.count;
    out.mode = EvaluationMode::sampled;
    out.formula = opts.formula;
    out.seed = opts.seed;
    return out;
}

inline DeltaStats sample_delta(const DistanceMatrix& d, std::uint64_t samples, Seed seed,
                               DeltaFormula formula = DeltaFormula::four_point,
                               std::size_t workers = 1)
{
    return sample_delta(d, DeltaSampling{samples, seed, formula, workers, false});
}

} // namespace treelike
