#pragma once

#include <vector>

#include "fbwave/errors.hpp"
#include "fbwave/model.hpp"

namespace fbwave {

// Uniform space-time grid for the implicit solver. n always satisfies
// x_min + (n-1)*dx == x_max; use regular() to build a validated grid.
struct Grid {
  double x_min, x_max;
  double dx, dt;
  int n;

  static Grid regular(double x_min, double x_max, double dx, double dt);
  double x(int j) const { return x_min + j * dx; }
};

struct PdeState {
  double t = 0.0;
  std::vector<double> U;
};

// U = 1 on [x_min, x_step], 0 after
PdeState heaviside_state(const Grid& grid, double x_step);

// One backward-Euler step of U_t = (D(U) U_x)_x + R(U) with zero-flux
// boundaries, solved by damped Newton iteration on the tridiagonal system.
// The interface diffusivity is the average of the two nodal diffusivities;
// with a negative-diffusivity interval this choice matters and is recorded in
// run metadata.
PdeState step_implicit(const PdeState& state, const ModelSpec& model,
                       const Grid& grid);

struct PdeHistory {
  Grid grid;
  std::vector<PdeState> snapshots;
};

// March step_implicit from `initial`, recording a snapshot at every entry of
// t_samples (ascending multiples of dt; the initial time itself is allowed).
PdeHistory simulate(const ModelSpec& model, const Grid& grid,
                    const PdeState& initial,
                    const std::vector<double>& t_samples);

// Left-most x with U < threshold, linearly interpolated between the
// bracketing nodes. Throws NoFront if the threshold is never crossed.
double front_position(const PdeState& state, const Grid& grid,
                      double threshold = 1e-3);

// Front displacement between the snapshots at t2 and t3 divided by t3-t2.
double front_speed(const PdeHistory& history, double t2, double t3,
                   double threshold = 1e-3);

}  // namespace fbwave
