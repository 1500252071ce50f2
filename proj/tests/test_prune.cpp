#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "incprune/prune.hpp"

#include <algorithm>
#include <random>

using namespace incprune;

namespace {

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

VectorSet make_set(std::initializer_list<Vector> vs) {
    VectorSet set;
    for (const Vector& v : vs) set.insert(AlphaVector(v));
    return set;
}

VectorSet random_set(std::mt19937_64& rng, int dim, int n, double lo = -10.0, double hi = 10.0) {
    std::uniform_real_distribution<double> entry(lo, hi);
    VectorSet set(dim);
    while (set.size() < n) {
        Vector v(dim);
        for (int s = 0; s < dim; ++s) v[s] = entry(rng);
        set.insert(AlphaVector(std::move(v)));
    }
    return set;
}

std::vector<Belief> simplex_grid(int dim, int steps) {
    std::vector<Belief> out;
    if (dim == 2) {
        for (int i = 0; i <= steps; ++i) {
            const double p = static_cast<double>(i) / steps;
            out.push_back(Belief(vec2(p, 1.0 - p)));
        }
    } else if (dim == 3) {
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; i + j <= steps; ++j) {
                Vector v(3);
                v << static_cast<double>(i) / steps, static_cast<double>(j) / steps,
                    static_cast<double>(steps - i - j) / steps;
                out.push_back(Belief(std::move(v)));
            }
        }
    }
    return out;
}

double envelope(const VectorSet& set, const Belief& b) {
    double max = -std::numeric_limits<double>::infinity();
    for (const AlphaVector& v : set) max = std::max(max, dot(b, v));
    return max;
}

}  // namespace

TEST_CASE("pr: spec instances") {
    LpContext ctx;
    SUBCASE("constant below the lower envelope is removed") {
        const VectorSet out = pr(make_set({vec2(1, 0), vec2(0, 1), vec2(0.4, 0.4)}), ctx);
        CHECK(set_equal(out, make_set({vec2(1, 0), vec2(0, 1)}), 0.0));
    }
    SUBCASE("singleton passes through") {
        const VectorSet out = pr(make_set({vec2(1, 1)}), ctx);
        CHECK(set_equal(out, make_set({vec2(1, 1)}), 0.0));
    }
    SUBCASE("three-piece envelope keeps all three") {
        const VectorSet out = pr(make_set({vec2(1, 0), vec2(0, 1), vec2(0.6, 0.6)}), ctx);
        CHECK(out.size() == 3);
    }
    SUBCASE("empty input rejected") {
        CHECK_THROWS_AS(pr(VectorSet(2), ctx), std::invalid_argument);
    }
}

TEST_CASE("pr is idempotent and order-canonical") {
    std::mt19937_64 rng(3);
    LpContext ctx;
    for (int rep = 0; rep < 25; ++rep) {
        const int dim = 2 + static_cast<int>(rng() % 2);
        const VectorSet w = random_set(rng, dim, 8);
        const VectorSet once = pr(w, ctx);
        const VectorSet twice = pr(once, ctx);
        CHECK(set_equal(once, twice, 0.0));

        // Re-insert in reversed lexicographic order; result must not change.
        VectorSet reversed(dim);
        std::vector<const AlphaVector*> items;
        for (const AlphaVector& v : w) items.push_back(&v);
        std::sort(items.begin(), items.end(),
                  [](const AlphaVector* a, const AlphaVector* b) { return lex_less(*b, *a); });
        for (const AlphaVector* v : items) reversed.insert(*v);
        CHECK(set_equal(pr(reversed, ctx), once, 0.0));
    }
}

TEST_CASE("pr preserves the envelope on a dense grid") {
    std::mt19937_64 rng(9);
    LpContext ctx;
    for (int rep = 0; rep < 15; ++rep) {
        const int dim = 2 + static_cast<int>(rng() % 2);
        const VectorSet w = random_set(rng, dim, 10);
        const VectorSet pruned = pr(w, ctx);
        CHECK(pruned.size() <= w.size());
        for (const Belief& b : simplex_grid(dim, dim == 2 ? 600 : 60)) {
            CHECK(envelope(pruned, b) == doctest::Approx(envelope(w, b)).epsilon(1e-9));
        }
    }
}

TEST_CASE("pr output is minimal: every member wins somewhere") {
    std::mt19937_64 rng(15);
    LpContext ctx;
    for (int rep = 0; rep < 15; ++rep) {
        const VectorSet pruned = pr(random_set(rng, 3, 9), ctx);
        for (int i = 0; i < pruned.size(); ++i) {
            VectorSet rest(pruned.dim());
            for (int j = 0; j < pruned.size(); ++j) {
                if (j != i) rest.insert(pruned[j]);
            }
            if (rest.empty()) continue;
            CHECK(lp_dominate(pruned[i], rest, ctx).has_value());
        }
    }
}

TEST_CASE("pr_region: spec instances") {
    LpContext ctx;
    const VectorSet u = make_set({vec2(1, 0), vec2(0, 1)});
    const RegionConstraintSet upper = region_of(u, 0, 0);  // p > 1/2
    SUBCASE("interval comparison keeps the region winner") {
        const VectorSet out = pr_region(upper, make_set({vec2(1, 0), vec2(0, 1)}), ctx);
        CHECK(set_equal(out, make_set({vec2(1, 0)}), 0.0));
    }
    SUBCASE("whole simplex reduces to pr") {
        const RegionConstraintSet whole(2);
        const VectorSet minimal = make_set({vec2(1, 0), vec2(0, 1), vec2(0.6, 0.6)});
        const VectorSet out = pr_region(whole, minimal, ctx);
        CHECK(set_equal(out, pr(minimal, ctx), 0.0));
    }
    SUBCASE("lines compared on the restricted interval") {
        const VectorSet out = pr_region(upper, make_set({vec2(0.6, 0.6), vec2(0, 1)}), ctx);
        CHECK(set_equal(out, make_set({vec2(0.6, 0.6)}), 0.0));
    }
    SUBCASE("empty-interior region prunes everything") {
        RegionConstraintSet slab(2);
        slab.add(vec2(1, -1), 0, 0);
        slab.add(vec2(-1, 1), 0, 1);
        const VectorSet out = pr_region(slab, make_set({vec2(1, 0), vec2(0, 1)}), ctx);
        CHECK(out.empty());
    }
}

TEST_CASE("pr_region survivors own a strict witness inside the region") {
    std::mt19937_64 rng(21);
    LpContext ctx;
    for (int rep = 0; rep < 20; ++rep) {
        const VectorSet anchor = pr(random_set(rng, 3, 5), ctx);
        const VectorSet w = pr(random_set(rng, 3, 6), ctx);
        if (anchor.size() < 2) continue;
        const RegionConstraintSet region = region_of(anchor, 0, 0);
        std::vector<int> all(static_cast<size_t>(w.size()));
        for (int i = 0; i < w.size(); ++i) all[static_cast<size_t>(i)] = i;
        for (int idx : pr_region_subset(region, w, all, ctx)) {
            // The survivor must strictly beat every other member somewhere
            // inside (the closure of) the region.
            VectorSet rest(w.dim());
            for (int j = 0; j < w.size(); ++j) {
                if (j != idx) rest.insert(w[j]);
            }
            const auto witness = lp_dominate_region(region, w[idx], rest, ctx);
            REQUIRE(witness.has_value());
            for (const Vector& c : region.constraints) {
                CHECK(witness->probs().dot(c) >= -1e-9);
            }
        }
    }
}

TEST_CASE("region-based identity for pairwise cross-sums") {
    std::mt19937_64 rng(27);
    LpContext ctx;
    for (int rep = 0; rep < 20; ++rep) {
        const int dim = 2 + static_cast<int>(rng() % 2);
        const VectorSet u = pr(random_set(rng, dim, 4), ctx);
        const VectorSet w = pr(random_set(rng, dim, 4), ctx);
        const VectorSet direct = pr(cross_sum(u, w), ctx);

        VectorSet assembled(dim);
        for (int i = 0; i < u.size(); ++i) {
            const RegionConstraintSet region = region_of(u, i, 0);
            for (const AlphaVector& kept : pr_region(region, w, ctx)) {
                assembled.insert(AlphaVector(u[i].coeffs + kept.coeffs));
            }
        }
        assembled.sort_lex();
        CHECK(set_equal(assembled, direct, 1e-6));
    }
}
