#include "incprune/region.hpp"

#include <stdexcept>

namespace incprune {

void RegionConstraintSet::add(Vector diff, int set_id, int vector_id) {
    if (dim == 0) dim = static_cast<int>(diff.size());
    if (diff.size() != dim) throw std::invalid_argument("RegionConstraintSet: dimension mismatch");
    constraints.push_back(std::move(diff));
    provenance.emplace_back(set_id, vector_id);
}

void RegionConstraintSet::append(const RegionConstraintSet& other) {
    if (dim == 0) dim = other.dim;
    if (other.dim != 0 && other.dim != dim) {
        throw std::invalid_argument("RegionConstraintSet: dimension mismatch");
    }
    constraints.insert(constraints.end(), other.constraints.begin(), other.constraints.end());
    provenance.insert(provenance.end(), other.provenance.begin(), other.provenance.end());
}

RegionConstraintSet region_of(const VectorSet& set, int index, int set_id) {
    if (index < 0 || index >= set.size()) throw std::out_of_range("region_of: bad index");
    RegionConstraintSet region(set.dim());
    for (int j = 0; j < set.size(); ++j) {
        if (j == index) continue;
        region.add(set[index].coeffs - set[j].coeffs, set_id, index);
    }
    return region;
}

RegionConstraintSet intersect(const RegionConstraintSet& a, const RegionConstraintSet& b) {
    RegionConstraintSet out = a;
    out.append(b);
    return out;
}

}  // namespace incprune
