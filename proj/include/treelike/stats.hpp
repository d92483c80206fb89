#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "treelike/parallel.hpp"

namespace treelike {

/// max / mean / population standard deviation of a collection of values.
/// All fields are zero for an empty collection.
struct Summary {
    double max = 0.0;
    double mean = 0.0;
    double std = 0.0;
    std::size_t count = 0;
};

/// Two-pass summary, reduced sequentially in index order.
inline Summary summarize(std::span<const double> values)
{
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    s.max = values.front();
    for (double v : values) {
        sum += v;
        s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(s.count);
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.count));
    return s;
}

/// Two-pass summary over values produced block by block, without storing them.
///
/// `visit(block, sink)` must call `sink(value)` for every value of `block`, in a
/// fixed order. Blocks run in parallel; partial results are combined in block
/// order, so the result does not depend on `workers`. Values are produced twice.
template <class Visit>
Summary blocked_summary(std::size_t blocks, std::size_t workers, Visit&& visit)
{
    struct Partial {
        std::size_t count = 0;
        double sum = 0.0;
        double max = 0.0;
        double ss = 0.0;
    };
    std::vector<Partial> parts(blocks);
    parallel_for(0, blocks, workers, [&](std::size_t b) {
        Partial& p = parts[b];
        visit(b, [&p](double v) {
            p.max = p.count == 0 ? v : std::max(p.max, v);
            p.sum += v;
            ++p.count;
        });
    });

    Summary s;
    double sum = 0.0;
    for (const Partial& p : parts) {
        if (p.count == 0) continue;
        s.max = s.count == 0 ? p.max : std::max(s.max, p.max);
        s.count += p.count;
        sum += p.sum;
    }
    if (s.count == 0) return s;
    s.mean = sum / static_cast<double>(s.count);

    const double mean = s.mean;
    parallel_for(0, blocks, workers, [&](std::size_t b) {
        Partial& p = parts[b];
        visit(b, [&p, mean](double v) { p.ss += (v - mean) * (v - mean); });
    });
    double ss = 0.0;
    for (const Partial& p : parts) ss += p.ss;
    s.std = std::sqrt(ss / static_cast<double>(s.count));
    return s;
}

} // namespace treelike
