#ifndef OBILEVEL_BASELINES_HPP
#define OBILEVEL_BASELINES_HPP

#include "obilevel/problems.hpp"
#include "obilevel/vec.hpp"

namespace obilevel {

// Single-level projected gradient step on the leader with an oracle inner
// solve: x <- project(x - alpha * hypergradient). A deliberately strong
// comparator; it sees the exact hypergradient, not a stochastic estimate.
Vec ogd_step(const BilevelOracle& oracle, long t, const Vec& x, double alpha);

// Exponentially smoothed variant: step along d_t = eta grad_t + (1-eta) d_{t-1},
// with d_1 = eta grad_1.
struct EmaState {
  Vec d;
  bool initialized = false;
};

Vec ema_ogd_step(const BilevelOracle& oracle, long t, const Vec& x, EmaState& state,
                 double alpha, double eta);

}  // namespace obilevel

#endif
