#include "fbwave/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

namespace fbwave {

Grid Grid::regular(double x_min, double x_max, double dx, double dt) {
  if (!(x_max > x_min) || !(dx > 0.0) || !(dt > 0.0))
    throw Error(ErrorCode::DomainError, "grid spans and steps must be positive");
  const double span = (x_max - x_min) / dx;
  const double rounded = std::round(span);
  if (std::abs(span - rounded) > 1e-9 * std::max(1.0, std::abs(span)))
    throw Error(ErrorCode::DomainError,
                "space step must divide the domain span exactly");
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.dx = dx;
  g.dt = dt;
  g.n = static_cast<int>(rounded) + 1;
  return g;
}

PdeState heaviside_state(const Grid& grid, double x_step) {
  PdeState state;
  state.t = 0.0;
  state.U.resize(grid.n);
  for (int j = 0; j < grid.n; ++j)
    state.U[j] = grid.x(j) <= x_step ? 1.0 : 0.0;
  return state;
}

namespace {

// residual of the backward-Euler system for the trial state V
void residual(const std::vector<double>& V, const std::vector<double>& U,
              const ModelSpec& model, const Grid& grid,
              std::vector<double>& G) {
  const int n = grid.n;
  const double r = grid.dt / (grid.dx * grid.dx);
  G.resize(n);
  double flux_left = 0.0;  // zero-flux boundary face
  for (int j = 0; j < n; ++j) {
    double flux_right = 0.0;
    if (j + 1 < n) {
      const double dmid = 0.5 * (model.D(V[j]) + model.D(V[j + 1]));
      flux_right = dmid * (V[j + 1] - V[j]);
    }
    G[j] = V[j] - U[j] - r * (flux_right - flux_left) -
           grid.dt * model.R(V[j]);
    flux_left = flux_right;
  }
}

// tridiagonal Jacobian of the residual, stored as three diagonals
void jacobian(const std::vector<double>& V, const ModelSpec& model,
              const Grid& grid, std::vector<double>& lower,
              std::vector<double>& diag, std::vector<double>& upper) {
  const int n = grid.n;
  const double r = grid.dt / (grid.dx * grid.dx);
  lower.assign(n, 0.0);
  diag.assign(n, 0.0);
  upper.assign(n, 0.0);
  // face j+1/2 flux derivatives w.r.t. its two nodes
  auto dflux = [&](int j, double& dl, double& dr) {
    const double du = V[j + 1] - V[j];
    const double dmid = 0.5 * (model.D(V[j]) + model.D(V[j + 1]));
    dl = 0.5 * model.D_prime(V[j]) * du - dmid;
    dr = 0.5 * model.D_prime(V[j + 1]) * du + dmid;
  };
  for (int j = 0; j < n; ++j)
    diag[j] = 1.0 - grid.dt * model.R_prime(V[j]);
  for (int j = 0; j + 1 < n; ++j) {
    double dl, dr;
    dflux(j, dl, dr);
    // flux j+1/2 enters G[j] with -r and G[j+1] with +r
    diag[j] -= r * dl;
    upper[j] -= r * dr;
    lower[j + 1] += r * dl;
    diag[j + 1] += r * dr;
  }
}

// Thomas algorithm; overwrites the inputs
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t j = 1; j < n; ++j) {
    const double m = lower[j] / diag[j - 1];
    diag[j] -= m * upper[j - 1];
    rhs[j] -= m * rhs[j - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t j = n - 1; j-- > 0;)
    rhs[j] = (rhs[j] - upper[j] * rhs[j + 1]) / diag[j];
}

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

PdeState step_implicit(const PdeState& state, const ModelSpec& model,
                       const Grid& grid) {
  if (static_cast<int>(state.U.size()) != grid.n)
    throw Error(ErrorCode::DomainError, "state size does not match the grid");

  const std::vector<double>& U = state.U;
  std::vector<double> V = U;
  std::vector<double> G, lower, diag, upper, trial, Gtrial;
  residual(V, U, model, grid, G);
  double gnorm = max_norm(G);

  for (int it = 0; it < 50; ++it) {
    jacobian(V, model, grid, lower, diag, upper);
    std::vector<double> delta = G;
    for (double& d : delta) d = -d;
    solve_tridiagonal(lower, diag, upper, delta);

    // halve the update while it increases the residual (the Jacobian is
    // indefinite where D < 0, so full steps can overshoot)
    double scale = 1.0;
    trial.resize(grid.n);
    for (int damp = 0;; ++damp) {
      for (int j = 0; j < grid.n; ++j) trial[j] = V[j] + scale * delta[j];
      residual(trial, U, model, grid, Gtrial);
      if (max_norm(Gtrial) <= gnorm || damp >= 8) break;
      scale *= 0.5;
    }
    V.swap(trial);
    G.swap(Gtrial);
    gnorm = max_norm(G);

    if (scale * max_norm(delta) < 1e-6) {
      PdeState out;
      out.t = state.t + grid.dt;
      out.U = std::move(V);
      return out;
    }
  }
  throw Error(ErrorCode::NonConvergence,
              "implicit step stalled after 50 Newton iterations; use a "
              "smaller time step");
}

PdeHistory simulate(const ModelSpec& model, const Grid& grid,
                    const PdeState& initial,
                    const std::vector<double>& t_samples) {
  if (t_samples.empty())
    throw Error(ErrorCode::DomainError, "need at least one sample time");
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    const double offset = t_samples[i] - initial.t;
    const double steps = offset / grid.dt;
    if (offset < -1e-9 || std::abs(steps - std::round(steps)) > 1e-6)
      throw Error(ErrorCode::DomainError,
                  "sample times must be multiples of the time step at or "
                  "after the initial time");
    if (i > 0 && !(t_samples[i] > t_samples[i - 1]))
      throw Error(ErrorCode::DomainError, "sample times must be ascending");
  }

  PdeHistory history{grid, {}};
  PdeState current = initial;
  for (double target : t_samples) {
    const long steps =
        std::lround((target - current.t) / grid.dt);
    for (long s = 0; s < steps; ++s)
      current = step_implicit(current, model, grid);
    PdeState snapshot = current;
    snapshot.t = target;  // suppress accumulated roundoff in t
    history.snapshots.push_back(snapshot);
    current.t = target;
  }
  return history;
}

double front_position(const PdeState& state, const Grid& grid,
                      double threshold) {
  const std::vector<double>& U = state.U;
  for (int j = 0; j < grid.n; ++j) {
    if (!(U[j] < threshold)) continue;
    if (j == 0) return grid.x_min;
    const double drop = U[j - 1] - U[j];
    const double frac = drop > 0.0 ? (U[j - 1] - threshold) / drop : 0.0;
    return grid.x(j - 1) + frac * grid.dx;
  }
  std::ostringstream os;
  os << "density never falls below " << threshold << " at t=" << state.t;
  throw Error(ErrorCode::NoFront, os.str());
}

double front_speed(const PdeHistory& history, double t2, double t3,
                   double threshold) {
  if (!(t3 > t2))
    throw Error(ErrorCode::DomainError, "need t3 > t2");
  auto find = [&](double t) -> const PdeState& {
    for (const auto& snap : history.snapshots)
      if (std::abs(snap.t - t) < 1e-9) return snap;
    std::ostringstream os;
    os << "no snapshot at t=" << t;
    throw Error(ErrorCode::DomainError, os.str());
  };
  const double x2 = front_position(find(t2), history.grid, threshold);
  const double x3 = front_position(find(t3), history.grid, threshold);
  return (x3 - x2) / (t3 - t2);
}

}  // namespace fbwave
