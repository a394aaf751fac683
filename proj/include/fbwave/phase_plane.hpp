#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fbwave/layer.hpp"
#include "fbwave/model.hpp"

namespace fbwave {

// Reduced travelling-wave problem after desingularisation:
//   u' = -p - c u,   p' = D(u) R(u)
// in the stretched variable psi.  Inside (alpha, beta) the trajectories agree
// with the singular reduced flow as point sets with reversed orientation.
struct DesingularisedSystem {
  ModelSpec model;
  double c;

  void operator()(const std::array<double, 2>& y,
                  std::array<double, 2>& dy) const noexcept {
    dy[0] = -y[1] - c * y[0];
    dy[1] = model.D(y[0]) * model.R(y[0]);
  }
};

enum class EquilibriumType {
  Saddle,
  StableNode,
  StableSpiral,
  Centre,
  UnstableSpiral,
  UnstableNode,
};

const char* to_string(EquilibriumType type) noexcept;

struct FixedPointInfo {
  double u, p;
  EquilibriumType type;
  std::complex<double> tau_plus, tau_minus;  // eigenvalues
  // eigenvectors (1, tau_minus) for tau_plus and (1, tau_plus) for tau_minus;
  // meaningful only when the eigenvalues are real
  std::array<double, 2> E_plus, E_minus;
};

// Classifies the equilibria (0,0), (alpha,-c alpha), (A,-c A), (beta,-c beta),
// (1,-c) -- the A point only for Allee reactions -- ordered by increasing u.
std::vector<FixedPointInfo> classify_fixed_points(
    const DesingularisedSystem& system);

struct CrossingEvent {
  double psi, u, p;
  double du_dpsi;    // slope at the crossing
  bool transversal;  // |du/dpsi| above the tangency threshold
  double line;       // the u-line that was crossed
};

struct Trajectory {
  std::vector<std::array<double, 3>> samples;  // (psi, u, p) accepted steps
  std::vector<CrossingEvent> events;           // crossings in traversal order
  const CrossingEvent& stop() const { return events.back(); }
};

enum class ManifoldKind { Unstable, Stable };

struct ShootOptions {
  double delta = 1e-6;  // eigenvector seeding offset
  double rtol = 1e-10;
  double atol = 1e-12;
  double psi_max = 2000.0;
};

// Integrates one branch of a saddle manifold until the first transversal
// crossing of a stop line (tangencies are recorded but do not stop the run).
// Unstable manifolds run forward in psi, stable manifolds backward.
Trajectory shoot_manifold(const DesingularisedSystem& system,
                          const FixedPointInfo& fixed_point, ManifoldKind kind,
                          int branch_sign, const std::vector<double>& stop_lines,
                          const ShootOptions& options = {});

enum class Regularisation { NonLocal, ViscousPositive, ViscousNegative };

const char* to_string(Regularisation reg) noexcept;

// Shooting residual Delta p = p*_+ - p*_-, where p*_- is the first crossing
// of the unstable manifold of (1,-c) with the from-line and p*_+ the first
// crossing of the stable manifold of (0,0), run backward, with the to-line.
// Lines per regularisation: NonLocal (u_minus, u_plus); ViscousPositive
// (u_r, alpha); ViscousNegative (beta, u_l).
double delta_p(const ModelSpec& model, Regularisation reg, double c,
               const ShootOptions& options = {});

struct SpeedResult {
  double c0;
  double residual;  // |Delta p| at c0
  std::pair<double, double> bracket;
  double u_from, u_to;  // shock endpoints used for the section lines
  double p_star;        // section value of the slow variable at c0
  Regularisation reg;
};

// Root of Delta p(c): 16-point scan of the bracket for a sign change, then
// bisection with secant acceleration to |Delta p| < 1e-6 and width < 1e-5.
// Speeds where a section crossing is missing count as sign-undefined.
// Without an explicit bracket, [0.01, 1] and/or [-1, -0.01] are scanned as
// admitted by the regularisation.
SpeedResult find_speed(const ModelSpec& model, Regularisation reg,
                       std::optional<std::pair<double, double>> bracket = {},
                       const ShootOptions& options = {});

enum class RegularisationKind { NonLocal, Viscous };

struct SpeedCurveRow {
  double A;
  std::optional<SpeedResult> result;
  std::string error;  // failure note when no speed was found
};

// Independent find_speed calls over an A-grid; rows never abort the sweep.
// For the viscous kind each row tries the positive fold connection first and
// the negative one second.  Rows are ordered by A regardless of jobs.
std::vector<SpeedCurveRow> speed_curve(const ModelSpec& base,
                                       RegularisationKind kind, double A_min,
                                       double A_max, int n, int jobs = 1);

}  // namespace fbwave
