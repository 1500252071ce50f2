#include "incprune/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace incprune {

namespace {

// FNV-1a over the raw coordinate bytes. Negative zeros are normalized at
// insertion so the hash sees one representation per value.
std::uint64_t hash_coords(const Vector& v) {
    std::uint64_t h = 1469598103934665603ull;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double x = v[i];
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(x));
        std::memcpy(&bits, &x, sizeof(bits));
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (bits >> (8 * byte)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return h;
}

void normalize_zeros(Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) v[i] = 0.0;  // folds -0.0 into +0.0
    }
}

}  // namespace

bool lex_less(const Vector& u, const Vector& w) {
    if (u.size() != w.size()) {
        throw std::invalid_argument("lex_less: dimension mismatch");
    }
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u[i] < w[i]) return true;
        if (u[i] > w[i]) return false;
    }
    return false;
}

bool tag_less(const AlphaVector& a, const AlphaVector& b) {
    if (a.action != b.action) return a.action < b.action;
    if (a.src_left != b.src_left) return a.src_left < b.src_left;
    return a.src_right < b.src_right;
}

std::pair<int, bool> VectorSet::insert_indexed(AlphaVector v) {
    if (!std::isfinite(v.coeffs.sum())) {
        throw std::invalid_argument("VectorSet: non-finite coordinate");
    }
    if (dim_ == 0 && vectors_.empty()) {
        dim_ = v.dim();
    } else if (v.dim() != dim_) {
        throw std::invalid_argument("VectorSet: dimension mismatch");
    }
    normalize_zeros(v.coeffs);
    const std::uint64_t h = hash_coords(v.coeffs);
    auto& slots = buckets_[h];
    for (int idx : slots) {
        AlphaVector& held = vectors_[static_cast<size_t>(idx)];
        if (held.coeffs == v.coeffs) {
            if (tag_less(v, held)) {
                held.action = v.action;
                held.src_left = v.src_left;
                held.src_right = v.src_right;
            }
            return {idx, false};
        }
    }
    const int fresh = static_cast<int>(vectors_.size());
    slots.push_back(fresh);
    vectors_.push_back(std::move(v));
    return {fresh, true};
}

bool VectorSet::insert(AlphaVector v) { return insert_indexed(std::move(v)).second; }

void VectorSet::sort_lex() {
    std::sort(vectors_.begin(), vectors_.end(),
              [](const AlphaVector& a, const AlphaVector& b) { return lex_less(a, b); });
    buckets_.clear();
    for (int i = 0; i < size(); ++i) {
        buckets_[hash_coords(vectors_[static_cast<size_t>(i)].coeffs)].push_back(i);
    }
}

Belief::Belief(Vector p) : probs_(std::move(p)) {
    if (probs_.size() == 0) throw std::invalid_argument("Belief: empty");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
        if (!std::isfinite(probs_[i]) || probs_[i] < -1e-7 || probs_[i] > 1.0 + 1e-7) {
            throw std::invalid_argument("Belief: entry outside [0,1]");
        }
        sum += probs_[i];
    }
    if (std::abs(sum - 1.0) > 1e-7) {
        throw std::invalid_argument("Belief: entries do not sum to 1");
    }
    // Normalize away solver jitter so downstream code sees a clean point.
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
        probs_[i] = std::clamp(probs_[i], 0.0, 1.0);
    }
    probs_ /= probs_.sum();
}

Belief Belief::vertex(int dim, int s) {
    Vector p = Vector::Zero(dim);
    p[s] = 1.0;
    return Belief(std::move(p));
}

Belief Belief::uniform(int dim) {
    return Belief(Vector::Constant(dim, 1.0 / dim));
}

double dot(const Belief& b, const Vector& v) {
    if (b.dim() != v.size()) throw std::invalid_argument("dot: dimension mismatch");
    return b.probs().dot(v);
}

VectorSet cross_sum(const VectorSet& u, const VectorSet& w) {
    if (u.empty() || w.empty()) throw std::invalid_argument("cross_sum: empty operand");
    if (u.dim() != w.dim()) throw std::invalid_argument("cross_sum: dimension mismatch");
    VectorSet out(u.dim());
    for (int i = 0; i < u.size(); ++i) {
        for (int j = 0; j < w.size(); ++j) {
            AlphaVector sum(u[i].coeffs + w[j].coeffs);
            sum.action = (u[i].action == w[j].action) ? u[i].action : -1;
            sum.src_left = i;
            sum.src_right = j;
            out.insert(std::move(sum));
        }
    }
    return out;
}

bool pointwise_dominate(const AlphaVector& w, const VectorSet& u) {
    for (const AlphaVector& cand : u) {
        if (cand.dim() != w.dim()) {
            throw std::invalid_argument("pointwise_dominate: dimension mismatch");
        }
        if ((w.coeffs.array() <= cand.coeffs.array()).all()) return true;
    }
    return false;
}

const AlphaVector& best(const Belief& b, const VectorSet& u) {
    if (u.empty()) throw std::invalid_argument("best: empty set");
    const AlphaVector* win = &u[0];
    double max = dot(b, u[0]);
    for (int i = 1; i < u.size(); ++i) {
        const double score = dot(b, u[i]);
        if (score > max || (score == max && lex_less(u[i], *win))) {
            win = &u[i];
            max = score;
        }
    }
    return *win;
}

std::string to_text(const VectorSet& set) {
    std::vector<const AlphaVector*> order;
    order.reserve(static_cast<size_t>(set.size()));
    for (const AlphaVector& v : set) order.push_back(&v);
    std::sort(order.begin(), order.end(),
              [](const AlphaVector* a, const AlphaVector* b) { return lex_less(*a, *b); });
    std::string out;
    char buf[64];
    for (const AlphaVector* v : order) {
        for (int s = 0; s < v->dim(); ++s) {
            std::snprintf(buf, sizeof(buf), "%.17g", v->coeffs[s]);
            if (s > 0) out += ' ';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

bool set_equal(const VectorSet& a, const VectorSet& b, double tol) {
    if (a.size() != b.size()) return false;
    std::vector<const AlphaVector*> oa, ob;
    for (const AlphaVector& v : a) oa.push_back(&v);
    for (const AlphaVector& v : b) ob.push_back(&v);
    auto cmp = [](const AlphaVector* x, const AlphaVector* y) { return lex_less(*x, *y); };
    std::sort(oa.begin(), oa.end(), cmp);
    std::sort(ob.begin(), ob.end(), cmp);
    for (size_t i = 0; i < oa.size(); ++i) {
        if (((oa[i]->coeffs - ob[i]->coeffs).array().abs() > tol).any()) return false;
    }
    return true;
}

}  // namespace incprune
