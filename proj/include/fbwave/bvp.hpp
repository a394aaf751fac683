#pragma once

#include <vector>

#include "fbwave/errors.hpp"
#include "fbwave/layer.hpp"
#include "fbwave/model.hpp"
#include "fbwave/phase_plane.hpp"

namespace fbwave {

// Travelling-wave boundary value problem for the regularised systems, posed
// on z in [-L, L] with the wave speed c appended as an unknown (a constant
// state with c' = 0). The trailing integral variable q with q' = u pins the
// translation invariance through the boundary value q(-L).
struct BvpProblem {
  ModelSpec model;
  Regularisation reg = Regularisation::NonLocal;
  double epsilon = 1e-3;
  double L = 40.0;
  double q_pin = -5.0;
  int max_nodes = 24000;
  double residual_target = 1e-8;
};

// Node-major storage of a profile: y[node*dim + comp]. Component order is
// (u, w, p, v, q, c) for the fourth-order regularisation and (u, p, v, q, c)
// for the viscous one.
struct BvpProfile {
  Regularisation reg = Regularisation::NonLocal;
  double epsilon = 0.0;
  int dim = 6;
  std::vector<double> z;
  std::vector<double> y;

  double at(std::size_t node, int comp) const { return y[node * dim + comp]; }
  double& at(std::size_t node, int comp) { return y[node * dim + comp]; }
  std::size_t nodes() const { return z.size(); }
  int comp_u() const { return 0; }
  int comp_w() const;  // throws for viscous profiles
  int comp_p() const;
  int comp_v() const;
  int comp_q() const;
  int comp_c() const;
};

struct BvpSolution {
  BvpProfile profile;
  double c = 0.0;
  double residual = 0.0;  // max scaled off-collocation residual
  int newton_iterations = 0;
  int refinement_rounds = 0;
};

// Singular-orbit initial guess: the two slow arcs obtained from the
// phase-plane shooting (mapped from the desingularised variable by
// dz = D(u) dpsi) joined by a fast inner profile of width O(epsilon).
BvpProfile construct_guess(const BvpProblem& problem, double c_seed,
                           const ShockData& shock, int n_nodes = 0);

BvpSolution solve_wave(const BvpProblem& problem, const BvpProfile& guess);

struct SymmetryReport {
  double max_residual = 0.0;   // scaled residual of the mapped profile
  bool involution_ok = false;  // applying the map twice restores the profile
};

// Applies (w, p, z, c) -> (-w, -p, -z, -c) to a fourth-order-regularisation
// solution and evaluates the governing equations on the mapped profile.
SymmetryReport symmetry_check(const BvpSolution& solution);

}  // namespace fbwave
