#include "incprune/prune.hpp"

#include "internal.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace incprune {

VectorSet pr(const VectorSet& w, LpContext& ctx) {
    if (w.empty()) throw std::invalid_argument("pr: empty set");
    const std::vector<int> order = detail::lex_order(w);
    std::vector<char> alive(order.size(), 1);
    int n_alive = static_cast<int>(order.size());
    size_t front = 0;

    VectorSet kept(w.dim());
    std::vector<const AlphaVector*> kept_ptrs;
    while (n_alive > 0) {
        while (!alive[front]) ++front;
        const AlphaVector& cand = w[order[front]];
        if (pointwise_dominate(cand, kept)) {
            alive[front] = 0;
            --n_alive;
            continue;
        }
        std::optional<Belief> witness = lp_dominate(cand, kept_ptrs, ctx);
        if (!witness) {
            alive[front] = 0;
            --n_alive;
            continue;
        }
        const int pick = detail::best_alive(*witness, w, order, alive);
        kept.insert(w[order[static_cast<size_t>(pick)]]);
        kept_ptrs.push_back(&w[order[static_cast<size_t>(pick)]]);
        alive[static_cast<size_t>(pick)] = 0;
        --n_alive;
    }
    kept.sort_lex();
    return kept;
}

std::vector<int> pr_region_subset(const RegionConstraintSet& region, const VectorSet& w,
                                  std::span<const int> members, LpContext& ctx) {
    std::vector<int> order(members.begin(), members.end());
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lex_less(w[a], w[b]); });
    std::vector<char> alive(order.size(), 1);
    int n_alive = static_cast<int>(order.size());
    size_t front = 0;

    std::vector<int> kept;
    std::vector<const AlphaVector*> kept_ptrs;
    while (n_alive > 0) {
        while (!alive[front]) ++front;
        const AlphaVector& cand = w[order[front]];
        std::optional<Belief> witness = lp_dominate_region(region, cand, kept_ptrs, ctx);
        if (!witness) {
            alive[front] = 0;
            --n_alive;
            continue;
        }
        const int pick = detail::best_alive(*witness, w, order, alive);
        kept.push_back(order[static_cast<size_t>(pick)]);
        kept_ptrs.push_back(&w[order[static_cast<size_t>(pick)]]);
        alive[static_cast<size_t>(pick)] = 0;
        --n_alive;
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

VectorSet pr_region(const RegionConstraintSet& region, const VectorSet& w, LpContext& ctx) {
    if (w.empty()) throw std::invalid_argument("pr_region: empty set");
    std::vector<int> members(static_cast<size_t>(w.size()));
    std::iota(members.begin(), members.end(), 0);
    const std::vector<int> kept = pr_region_subset(region, w, members, ctx);
    VectorSet out(w.dim());
    for (int idx : kept) out.insert(w[idx]);
    out.sort_lex();
    return out;
}

}  // namespace incprune
