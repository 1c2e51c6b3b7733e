#include "obilevel/vec.hpp"

#include <cmath>
#include <sstream>

namespace obilevel {

bool all_finite(const Vec& v) { return v.allFinite(); }

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) {
    std::ostringstream os;
    os << what << " contains a non-finite entry";
    fail(Errc::non_finite, os.str());
  }
}

Vec sample_unit_sphere(NoiseStream& stream, Index dim) {
  Vec v(dim);
  double norm = 0.0;
  do {
    for (Index k = 0; k < dim; ++k) v[k] = stream.next_normal();
    norm = v.norm();
  } while (!(norm > 1e-12));
  return v / norm;
}

Box make_box(Vec lower, Vec upper) {
  require_finite(lower, "box lower bound");
  require_finite(upper, "box upper bound");
  if (lower.size() != upper.size())
    fail(Errc::dimension_mismatch, "box bounds have mismatched dimensions");
  if (((upper - lower).array() < 0.0).any())
    fail(Errc::invalid_config, "box has lower > upper in some component");
  return Box{std::move(lower), std::move(upper)};
}

BallSet make_ball(Vec center, double radius) {
  require_finite(center, "ball center");
  if (!(radius > 0.0)) fail(Errc::invalid_config, "ball radius must be positive");
  return BallSet{std::move(center), radius};
}

FeasibleSet symmetric_box(Index dim, double half_width) {
  return make_box(Vec::Constant(dim, -half_width), Vec::Constant(dim, half_width));
}

Index set_dim(const FeasibleSet& set) {
  return std::visit(
      [](const auto& s) -> Index {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Unconstrained>) return s.dim;
        else if constexpr (std::is_same_v<T, Box>) return s.lower.size();
        else return s.center.size();
      },
      set);
}

bool contains(const FeasibleSet& set, const Vec& z, double tol) {
  if (z.size() != set_dim(set)) return false;
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Unconstrained>) {
          return true;
        } else if constexpr (std::is_same_v<T, Box>) {
          return ((z - s.lower).array() >= -tol).all() && ((s.upper - z).array() >= -tol).all();
        } else {
          return (z - s.center).norm() <= s.radius + tol;
        }
      },
      set);
}

Vec project_ball(const Vec& v, double radius) {
  require_finite(v, "ball projection input");
  if (!(radius > 0.0)) fail(Errc::invalid_config, "ball radius must be positive");
  double n = v.norm();
  if (n <= radius) return v;  // boundary ties return v unchanged
  Vec w = v * (radius / n);
  // A single rescale can land an ulp outside; nudge until ||w|| <= radius.
  for (int k = 0; k < 8 && w.norm() > radius; ++k) w *= (1.0 - 4.0 * 2.220446049250313e-16);
  return w;
}

Vec project(const FeasibleSet& set, const Vec& z) {
  require_finite(z, "projection input");
  if (z.size() != set_dim(set))
    fail(Errc::dimension_mismatch, "projection input dimension does not match the set");
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Unconstrained>) {
          return z;
        } else if constexpr (std::is_same_v<T, Box>) {
          return z.cwiseMax(s.lower).cwiseMin(s.upper);
        } else {
          return s.center + project_ball(z - s.center, s.radius);
        }
      },
      set);
}

ProjectedGradient projected_gradient(const FeasibleSet& set, const Vec& x, const Vec& p,
                                     double alpha) {
  require_finite(x, "projected-gradient base point");
  require_finite(p, "projected-gradient direction");
  if (!(alpha > 0.0)) fail(Errc::invalid_config, "projected-gradient step must be positive");
  if (x.size() != set_dim(set) || p.size() != x.size())
    fail(Errc::dimension_mismatch, "projected-gradient dimensions do not match the set");
  if (!contains(set, x, 1e-12))
    fail(Errc::infeasible_point, "projected-gradient base point lies outside the set");
  if (std::holds_alternative<Unconstrained>(set)) return ProjectedGradient{p, alpha};
  Vec moved = project(set, x - alpha * p);
  return ProjectedGradient{(x - moved) / alpha, alpha};
}

}  // namespace obilevel
