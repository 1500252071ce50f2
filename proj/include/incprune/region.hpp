#pragma once

#include "incprune/geometry.hpp"

#include <utility>
#include <vector>

namespace incprune {

/// The linear constraints of a witness region: each difference vector
/// u - u' encodes one inequality b . (u - u') > 0. Constraint sets of
/// region intersections are concatenations of the operands' constraints.
/// An empty constraint list denotes the whole simplex.
struct RegionConstraintSet {
    int dim = 0;
    std::vector<Vector> constraints;
    /// (set id, vector id) of the region owner that generated each
    /// constraint; parallel to `constraints`.
    std::vector<std::pair<int, int>> provenance;

    RegionConstraintSet() = default;
    explicit RegionConstraintSet(int d) : dim(d) {}

    int size() const { return static_cast<int>(constraints.size()); }
    bool empty() const { return constraints.empty(); }

    void add(Vector diff, int set_id, int vector_id);
    void append(const RegionConstraintSet& other);
};

/// Constraints of the region where set[index] strictly beats every other
/// member of the set.
RegionConstraintSet region_of(const VectorSet& set, int index, int set_id = -1);

RegionConstraintSet intersect(const RegionConstraintSet& a, const RegionConstraintSet& b);

}  // namespace incprune
