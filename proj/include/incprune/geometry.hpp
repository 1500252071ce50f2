#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace incprune {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One linear piece of a piecewise linear convex value function: the
/// expected discounted reward per state, plus an optional provenance tag
/// (the action that produced it, and for cross-sum products the index of
/// the source vector in each operand set).
struct AlphaVector {
    Vector coeffs;
    int action = -1;
    int src_left = -1;
    int src_right = -1;

    AlphaVector() = default;
    explicit AlphaVector(Vector c) : coeffs(std::move(c)) {}
    AlphaVector(Vector c, int a) : coeffs(std::move(c)), action(a) {}

    int dim() const { return static_cast<int>(coeffs.size()); }
};

/// Strict lexicographic order on coordinates; false for identical vectors.
bool lex_less(const Vector& u, const Vector& w);
inline bool lex_less(const AlphaVector& u, const AlphaVector& w) {
    return lex_less(u.coeffs, w.coeffs);
}

/// Order on provenance tags, used to keep a deterministic representative
/// when exact duplicates collide.
bool tag_less(const AlphaVector& a, const AlphaVector& b);

/// A finite set of equal-dimension vectors. Exact coordinate duplicates are
/// merged at insertion (the lexicographically smallest tag is kept), so the
/// set never holds two identical vectors.
class VectorSet {
  public:
    VectorSet() = default;
    explicit VectorSet(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(vectors_.size()); }
    bool empty() const { return vectors_.empty(); }

    const AlphaVector& operator[](int i) const { return vectors_[static_cast<size_t>(i)]; }

    auto begin() const { return vectors_.begin(); }
    auto end() const { return vectors_.end(); }

    /// Inserts a vector; returns false when an identical vector was already
    /// present (in which case only the tag may be updated).
    bool insert(AlphaVector v);

    /// As insert, also reporting the index now holding the value (the
    /// existing representative on a duplicate).
    std::pair<int, bool> insert_indexed(AlphaVector v);

    /// Reorders the members into lexicographic order. Canonical form for
    /// serialization and set comparison.
    void sort_lex();

  private:
    int dim_ = 0;
    std::vector<AlphaVector> vectors_;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

/// A point on the probability simplex over states. The constructor
/// validates the simplex conditions (small solver jitter is tolerated and
/// normalized away) and throws std::invalid_argument otherwise.
class Belief {
  public:
    explicit Belief(Vector p);

    const Vector& probs() const { return probs_; }
    int dim() const { return static_cast<int>(probs_.size()); }
    double operator[](int s) const { return probs_[s]; }

    /// Vertex of the simplex concentrated on state s.
    static Belief vertex(int dim, int s);
    static Belief uniform(int dim);

  private:
    Vector probs_;
};

double dot(const Belief& b, const Vector& v);
inline double dot(const Belief& b, const AlphaVector& v) { return dot(b, v.coeffs); }

/// The set of all pairwise sums {u + w}. Each product carries the indices
/// of its sources so later passes can recover which u and w built it.
/// Throws on empty operands or mismatched dimensions.
VectorSet cross_sum(const VectorSet& u, const VectorSet& w);

/// True iff some member of the set is coordinatewise >= w.
bool pointwise_dominate(const AlphaVector& w, const VectorSet& u);

/// The member maximizing b . u, ties broken toward the lexicographic
/// minimum. Throws on an empty set.
const AlphaVector& best(const Belief& b, const VectorSet& u);

/// Canonical text form: one vector per line, entries space-separated with
/// 17 significant digits, lines in lexicographic order.
std::string to_text(const VectorSet& set);

/// Set comparison up to coordinate tolerance: both sets sorted
/// lexicographically, then matched pairwise.
bool set_equal(const VectorSet& a, const VectorSet& b, double tol);

}  // namespace incprune
