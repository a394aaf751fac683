#pragma once

#include <array>
#include <limits>
#include <utility>

#include "fbwave/model.hpp"

namespace fbwave {

enum class Branch { Plus, Minus };
enum class SpeedSign { Positive, Negative };

// Shock descriptor produced by the layer problems.  The non-local part
// (Maxwell level v with jump endpoints u_plus/u_minus) is filled by
// equal_area; the viscous part (fold connections u_r/u_l with their own
// levels v_r/v_l) by viscous_shock_endpoints.  Unfilled fields stay NaN.
struct ShockData {
  static constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  double v = nan;        // equal-area level: F(u_plus)+v = F(u_minus)+v = 0
  double u_plus = nan;   // lower jump endpoint, < alpha
  double u_minus = nan;  // upper jump endpoint, > beta
  double u_r = nan;      // simple root of F(u)-F(alpha), > beta
  double u_l = nan;      // simple root of F(u)-F(beta), < alpha
  double v_r = nan;      // fold level -F(alpha)
  double v_l = nan;      // fold level -F(beta)
  double a = nan;        // heteroclinic steepness sqrt(k/6)
  SpeedSign sign = SpeedSign::Positive;  // jump direction for the viscous part
};

// Point of the frozen-v layer flow together with its conserved energy
// H = -w^2/2 + G(u) + v u.
struct LayerPhasePoint {
  double u, w, v, H;
};

LayerPhasePoint layer_point(const ModelSpec& model, double u, double w,
                            double v);

// Maxwell (equal-area) level of the cubic F: the unique v where F(u)+v keeps
// three real roots and the signed area between the outer ones vanishes.
ShockData equal_area(const ModelSpec& model);

// Fold-touching shock endpoints of the viscous relaxation: u_r pairs with the
// double root at alpha (level -F(alpha)), u_l with the double root at beta.
// The endpoint values are independent of the speed sign; the sign only flips
// the jump direction.
ShockData viscous_shock_endpoints(const ModelSpec& model, SpeedSign sign);

// Closed-form heteroclinic (u, w) of the non-local layer problem at xi.
// Branch::Plus runs u_minus -> u_plus as xi: -inf -> +inf (w <= 0).
std::pair<double, double> heteroclinic_profile(const ShockData& shock,
                                               Branch branch, double xi);

struct ConnectionReport {
  bool connects;
  double miss_distance;              // closest approach to the target state
  std::array<double, 3> equilibria;  // u_plus < u_0 < u_minus at this level
};

// Shoots the unstable manifold of the upper equilibrium of the
// mixed-regularisation layer problem
//   du/dxi = (1 - 1/mu) c u + w/mu,   dw/dxi = v + F(u)
// towards the lower equilibrium and reports the closest approach.  mu = 1
// reduces to the Hamiltonian layer problem, where the connection exists.
ConnectionReport mixed_layer_check(const ModelSpec& model, double v, double mu,
                                   double c);

}  // namespace fbwave
