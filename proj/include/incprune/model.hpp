#pragma once

#include "incprune/geometry.hpp"

#include <vector>

namespace incprune {

/// A discrete POMDP: per-action transition rows P^a(s'|s), per-action
/// observation rows O^a(z|s'), expected immediate reward R^a(s), and a
/// discount in [0,1). Rows are expected to be stochastic; `validate` in
/// the format module reports violations as diagnostics.
struct PomdpModel {
    int n_states = 0;
    int n_actions = 0;
    int n_observations = 0;
    std::vector<Matrix> transition;   // [a](s, s')
    std::vector<Matrix> observation;  // [a](s', z)
    Matrix reward;                    // (a, s)
    double discount = 0.0;
};

}  // namespace incprune
