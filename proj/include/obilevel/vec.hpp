#ifndef OBILEVEL_VEC_HPP
#define OBILEVEL_VEC_HPP

#include <Eigen/Core>
#include <variant>

#include "obilevel/errors.hpp"
#include "obilevel/rng.hpp"

namespace obilevel {

using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

bool all_finite(const Vec& v);
void require_finite(const Vec& v, const char* what);

// Uniform draw from the unit sphere (normalized Gaussian).
Vec sample_unit_sphere(NoiseStream& stream, Index dim);

// Closed convex feasible sets used by the solvers and the regret measure.
struct Unconstrained {
  Index dim;
};

struct Box {
  Vec lower;
  Vec upper;  // componentwise lower <= upper, checked by make_box
};

struct BallSet {
  Vec center;
  double radius;  // > 0
};

using FeasibleSet = std::variant<Unconstrained, Box, BallSet>;

Box make_box(Vec lower, Vec upper);
BallSet make_ball(Vec center, double radius);
FeasibleSet symmetric_box(Index dim, double half_width);

Index set_dim(const FeasibleSet& set);
bool contains(const FeasibleSet& set, const Vec& z, double tol = 0.0);

// Euclidean projection onto the set. Rejects non-finite input, returns the
// nearest feasible point, idempotent.
Vec project(const FeasibleSet& set, const Vec& z);

// Norm-ball projection about the origin: min{1, radius/||v||} v.
Vec project_ball(const Vec& v, double radius);

// Projected-gradient mapping (x - project(set, x - alpha p)) / alpha.
// Vanishes exactly at constrained stationary points; for Unconstrained it
// returns p itself.
struct ProjectedGradient {
  Vec value;
  double step;
};

ProjectedGradient projected_gradient(const FeasibleSet& set, const Vec& x, const Vec& p,
                                     double alpha);

}  // namespace obilevel

#endif
