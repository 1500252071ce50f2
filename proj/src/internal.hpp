#pragma once

#include "incprune/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace incprune::detail {

inline std::vector<int> lex_order(const VectorSet& w) {
    std::vector<int> order(static_cast<size_t>(w.size()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lex_less(w[a], w[b]); });
    return order;
}

// BEST over the not-yet-removed vectors: maximize b . v, ties toward the
// lexicographic minimum. Returns a position in `order`.
inline int best_alive(const Belief& b, const VectorSet& w, const std::vector<int>& order,
                      const std::vector<char>& alive) {
    int pick = -1;
    double max = 0.0;
    for (size_t i = 0; i < order.size(); ++i) {
        if (!alive[i]) continue;
        const AlphaVector& v = w[order[i]];
        const double score = dot(b, v);
        if (pick < 0 || score > max ||
            (score == max && lex_less(v, w[order[static_cast<size_t>(pick)]]))) {
            pick = static_cast<int>(i);
            max = score;
        }
    }
    return pick;
}

}  // namespace incprune::detail
