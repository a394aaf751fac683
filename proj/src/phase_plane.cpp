#include "fbwave/phase_plane.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "fbwave/ode.hpp"

namespace fbwave {
namespace {

constexpr double kTangencyThreshold = 1e-12;
constexpr double kCrossingTol = 1e-10;  // refinement tolerance in u

std::string describe_state(double psi, const std::array<double, 2>& y) {
  std::ostringstream os;
  os << "psi=" << psi << ", u=" << y[0] << ", p=" << y[1];
  return os.str();
}

}  // namespace

const char* to_string(EquilibriumType type) noexcept {
  switch (type) {
    case EquilibriumType::Saddle: return "saddle";
    case EquilibriumType::StableNode: return "stable_node";
    case EquilibriumType::StableSpiral: return "stable_spiral";
    case EquilibriumType::Centre: return "centre";
    case EquilibriumType::UnstableSpiral: return "unstable_spiral";
    case EquilibriumType::UnstableNode: return "unstable_node";
  }
  return "unknown";
}

const char* to_string(Regularisation reg) noexcept {
  switch (reg) {
    case Regularisation::NonLocal: return "nonlocal";
    case Regularisation::ViscousPositive: return "viscous_positive";
    case Regularisation::ViscousNegative: return "viscous_negative";
  }
  return "unknown";
}

std::vector<FixedPointInfo> classify_fixed_points(
    const DesingularisedSystem& system) {
  const auto& m = system.model;
  const double c = system.c;

  std::vector<double> us = {0.0, m.alpha(), m.beta(), 1.0};
  if (m.reaction().cls() != ReactionClass::Logistic)
    us.push_back(m.reaction().allee_threshold());
  std::sort(us.begin(), us.end());

  std::vector<FixedPointInfo> out;
  out.reserve(us.size());
  for (double u : us) {
    FixedPointInfo fp;
    fp.u = u;
    fp.p = -c * u;
    const double s = m.D_prime(u) * m.R(u) + m.D(u) * m.R_prime(u);
    const std::complex<double> disc(c * c - 4.0 * s, 0.0);
    const std::complex<double> root = std::sqrt(disc);
    fp.tau_plus = 0.5 * (-c + root);
    fp.tau_minus = 0.5 * (-c - root);
    if (s < 0.0) {
      fp.type = EquilibriumType::Saddle;
    } else if (c == 0.0) {
      fp.type = EquilibriumType::Centre;
    } else if (disc.real() >= 0.0) {
      fp.type = c > 0.0 ? EquilibriumType::StableNode
                        : EquilibriumType::UnstableNode;
    } else {
      fp.type = c > 0.0 ? EquilibriumType::StableSpiral
                        : EquilibriumType::UnstableSpiral;
    }
    if (disc.real() >= 0.0) {
      fp.E_plus = {1.0, fp.tau_minus.real()};
      fp.E_minus = {1.0, fp.tau_plus.real()};
    } else {
      fp.E_plus = {ShockData::nan, ShockData::nan};
      fp.E_minus = {ShockData::nan, ShockData::nan};
    }
    out.push_back(fp);
  }
  return out;
}

Trajectory shoot_manifold(const DesingularisedSystem& system,
                          const FixedPointInfo& fixed_point, ManifoldKind kind,
                          int branch_sign, const std::vector<double>& stop_lines,
                          const ShootOptions& options) {
  if (fixed_point.type != EquilibriumType::Saddle)
    throw Error(ErrorCode::DomainError,
                "manifold shooting requires a saddle equilibrium");
  if (options.delta == 0.0)
    throw Error(ErrorCode::DegenerateSeed,
                "seeding offset delta must be nonzero");
  if (branch_sign != 1 && branch_sign != -1)
    throw Error(ErrorCode::DomainError, "branch_sign must be +1 or -1");
  if (stop_lines.empty())
    throw Error(ErrorCode::DomainError, "need at least one stop line");
  for (double line : stop_lines)
    if (!(line >= -0.2) || !(line <= 1.2))
      throw Error(ErrorCode::DomainError,
                  "stop lines must lie within [-0.2, 1.2]");

  const auto& E = kind == ManifoldKind::Unstable ? fixed_point.E_plus
                                                 : fixed_point.E_minus;
  if (std::isnan(E[0]))
    throw Error(ErrorCode::DomainError,
                "saddle eigenvectors unavailable (complex eigenvalues)");
  const double norm = std::hypot(E[0], E[1]);
  const std::array<double, 2> seed = {
      fixed_point.u + branch_sign * options.delta * E[0] / norm,
      fixed_point.p + branch_sign * options.delta * E[1] / norm};

  // stable manifolds are integrated backward by negating the field; sigma is
  // the integration variable and psi = dir * sigma the reported one
  const double dir = kind == ManifoldKind::Unstable ? 1.0 : -1.0;
  auto field = [&system, dir](const std::array<double, 2>& y,
                              std::array<double, 2>& dy) {
    system(y, dy);
    dy[0] *= dir;
    dy[1] *= dir;
  };

  ode::Options iopt;
  iopt.rtol = options.rtol;
  iopt.atol = options.atol;
  iopt.h_max = 0.25;
  ode::Integrator<2, decltype(field)> integ(field, iopt);
  integ.start(0.0, seed);

  Trajectory traj;
  traj.samples.push_back({0.0, seed[0], seed[1]});

  while (integ.t() < options.psi_max) {
    integ.step();
    const auto& dense = integ.dense();

    // scan sub-intervals of the step for line crossings, earliest first
    constexpr int kSub = 8;
    double th_lo = 0.0;
    auto y_lo = dense.eval(0.0);
    for (int j = 1; j <= kSub; ++j) {
      const double th_hi = static_cast<double>(j) / kSub;
      const auto y_hi = dense.eval(th_hi);
      double best_theta = 2.0;
      double best_line = 0.0;
      for (double line : stop_lines) {
        const double glo = y_lo[0] - line, ghi = y_hi[0] - line;
        if ((glo <= 0.0) == (ghi <= 0.0)) continue;
        const double theta = ode::refine_crossing(
            dense, [line](const std::array<double, 2>& y) { return y[0] - line; },
            th_lo, th_hi, kCrossingTol);
        if (theta < best_theta) {
          best_theta = theta;
          best_line = line;
        }
      }
      if (best_theta <= 1.0) {
        const auto yc = dense.eval(best_theta);
        std::array<double, 2> dyc;
        system(yc, dyc);
        CrossingEvent ev;
        ev.psi = dir * (dense.t0 + best_theta * dense.h);
        ev.u = yc[0];
        ev.p = yc[1];
        ev.du_dpsi = dyc[0];
        ev.transversal = std::abs(dyc[0]) > kTangencyThreshold;
        ev.line = best_line;
        traj.events.push_back(ev);
        if (ev.transversal) {
          traj.samples.push_back({ev.psi, ev.u, ev.p});
          return traj;
        }
      }
      th_lo = th_hi;
      y_lo = y_hi;
    }

    traj.samples.push_back({dir * integ.t(), integ.y()[0], integ.y()[1]});
    const double u = integ.y()[0], p = integ.y()[1];
    if (u < -2.0 || u > 3.0 || std::abs(p) > 50.0)
      throw Error(ErrorCode::ManifoldEscape,
                  "trajectory left the phase window at " +
                      describe_state(dir * integ.t(), integ.y()));
  }
  throw Error(ErrorCode::ManifoldEscape,
              "psi budget exhausted before a transversal stop-line crossing; "
              "last state " +
                  describe_state(dir * integ.t(), integ.y()));
}

namespace {

struct SectionLines {
  double from, to;
};

SectionLines section_lines(const ModelSpec& model, Regularisation reg) {
  switch (reg) {
    case Regularisation::NonLocal: {
      auto shock = equal_area(model);
      return {shock.u_minus, shock.u_plus};
    }
    case Regularisation::ViscousPositive: {
      auto shock = viscous_shock_endpoints(model, SpeedSign::Positive);
      return {shock.u_r, model.alpha()};
    }
    case Regularisation::ViscousNegative: {
      auto shock = viscous_shock_endpoints(model, SpeedSign::Negative);
      return {model.beta(), shock.u_l};
    }
  }
  throw Error(ErrorCode::DomainError, "unknown regularisation");
}

struct DeltaPDetail {
  double dp, p_minus, p_plus;
  SectionLines lines;
};

DeltaPDetail delta_p_detail(const ModelSpec& model, Regularisation reg,
                            double c, const ShootOptions& options) {
  if (c == 0.0)
    throw Error(ErrorCode::DomainError, "wave speed must be nonzero");
  if (reg == Regularisation::ViscousPositive && c < 0.0)
    throw Error(ErrorCode::DomainError,
                "positive fold connection needs c > 0");
  if (reg == Regularisation::ViscousNegative && c > 0.0)
    throw Error(ErrorCode::DomainError,
                "negative fold connection needs c < 0");

  const SectionLines lines = section_lines(model, reg);
  DesingularisedSystem sys{model, c};
  const auto fps = classify_fixed_points(sys);
  const FixedPointInfo* origin = nullptr;
  const FixedPointInfo* carrying = nullptr;
  for (const auto& fp : fps) {
    if (fp.u == 0.0) origin = &fp;
    if (fp.u == 1.0) carrying = &fp;
  }
  if (!origin || !carrying || origin->type != EquilibriumType::Saddle ||
      carrying->type != EquilibriumType::Saddle)
    throw Error(ErrorCode::DomainError,
                "end states are not saddles; no shock-fronted wave of this "
                "type exists");

  auto missing = [&](const char* which, const Error& cause) {
    std::ostringstream os;
    os << which << " has no transversal crossing at c=" << c << " ("
       << cause.what() << ")";
    return Error(ErrorCode::NoCrossing, os.str());
  };

  double p_minus, p_plus;
  try {
    auto gamma_minus = shoot_manifold(sys, *carrying, ManifoldKind::Unstable,
                                      -1, {lines.from}, options);
    p_minus = gamma_minus.stop().p;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ManifoldEscape) throw missing("gamma-", e);
    throw;
  }
  try {
    auto gamma_plus = shoot_manifold(sys, *origin, ManifoldKind::Stable, 1,
                                     {lines.to}, options);
    p_plus = gamma_plus.stop().p;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ManifoldEscape) throw missing("gamma+", e);
    throw;
  }
  return {p_plus - p_minus, p_minus, p_plus, lines};
}

}  // namespace

double delta_p(const ModelSpec& model, Regularisation reg, double c,
               const ShootOptions& options) {
  return delta_p_detail(model, reg, c, options).dp;
}

namespace {

constexpr double kDpTol = 1e-6;
constexpr double kBracketTol = 1e-5;

std::optional<double> try_delta_p(const ModelSpec& model, Regularisation reg,
                                  double c, const ShootOptions& options) {
  try {
    return delta_p_detail(model, reg, c, options).dp;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoCrossing) return std::nullopt;
    throw;
  }
}

// refine a sign-change bracket by bisection with secant acceleration
std::optional<SpeedResult> refine_bracket(const ModelSpec& model,
                                          Regularisation reg, double lo,
                                          double dp_lo, double hi,
                                          double dp_hi,
                                          const ShootOptions& options) {
  const std::pair<double, double> original{lo, hi};
  double best_c = std::abs(dp_lo) < std::abs(dp_hi) ? lo : hi;
  double best_dp = std::abs(dp_lo) < std::abs(dp_hi) ? dp_lo : dp_hi;

  for (int it = 0; it < 200; ++it) {
    if (std::abs(best_dp) < kDpTol && hi - lo < kBracketTol) break;

    // secant candidate, falling back to the midpoint
    double cand = 0.5 * (lo + hi);
    const double denom = dp_hi - dp_lo;
    if (denom != 0.0) {
      const double sec = lo - dp_lo * (hi - lo) / denom;
      const double margin = 0.1 * (hi - lo);
      if (sec > lo + margin && sec < hi - margin) cand = sec;
    }

    std::optional<double> dp = try_delta_p(model, reg, cand, options);
    if (!dp) {
      // crossing undefined at the candidate: try a few nearby points before
      // giving up on this bracket
      bool found = false;
      for (double frac : {0.25, 0.75, 0.375, 0.625}) {
        cand = lo + frac * (hi - lo);
        dp = try_delta_p(model, reg, cand, options);
        if (dp) {
          found = true;
          break;
        }
      }
      if (!found) return std::nullopt;
    }

    if (std::abs(*dp) < std::abs(best_dp)) {
      best_dp = *dp;
      best_c = cand;
    }
    if ((*dp < 0.0) == (dp_lo < 0.0)) {
      lo = cand;
      dp_lo = *dp;
    } else {
      hi = cand;
      dp_hi = *dp;
    }
    if (hi - lo < 1e-14) break;
  }
  if (!(std::abs(best_dp) < kDpTol)) return std::nullopt;

  SpeedResult result;
  result.c0 = best_c;
  result.reg = reg;
  result.bracket = original;
  auto detail = delta_p_detail(model, reg, best_c, options);
  result.residual = std::abs(detail.dp);
  result.u_from = detail.lines.from;
  result.u_to = detail.lines.to;
  result.p_star = detail.p_minus;
  return result;
}

std::optional<SpeedResult> scan_bracket(const ModelSpec& model,
                                        Regularisation reg, double lo,
                                        double hi,
                                        const ShootOptions& options) {
  constexpr int kScan = 16;
  std::array<std::optional<double>, kScan> dp;
  std::array<double, kScan> cs;
  for (int i = 0; i < kScan; ++i) {
    cs[i] = lo + (hi - lo) * i / (kScan - 1);
    dp[i] = try_delta_p(model, reg, cs[i], options);
  }

  auto refined = [&](double blo, double dp_blo, double bhi, double dp_bhi)
      -> std::optional<SpeedResult> {
    auto result = refine_bracket(model, reg, blo, dp_blo, bhi, dp_bhi, options);
    if (result) result->bracket = {lo, hi};
    return result;
  };

  // adjacent scan points where the residual is defined with opposite signs
  for (int i = 0; i + 1 < kScan; ++i) {
    if (!dp[i] || !dp[i + 1]) continue;
    if ((*dp[i] < 0.0) == (*dp[i + 1] < 0.0)) continue;
    auto result = refined(cs[i], *dp[i], cs[i + 1], *dp[i + 1]);
    if (result) return result;
  }

  // the residual can be undefined on part of the bracket; a sign change may
  // hide between the edge of the defined region and its defined neighbour,
  // so shrink each defined/undefined gap toward the boundary
  for (int i = 0; i + 1 < kScan; ++i) {
    if (dp[i].has_value() == dp[i + 1].has_value()) continue;
    const bool left_defined = dp[i].has_value();
    double c_def = left_defined ? cs[i] : cs[i + 1];
    double dp_def = left_defined ? *dp[i] : *dp[i + 1];
    double c_und = left_defined ? cs[i + 1] : cs[i];
    for (int probe = 0; probe < 8; ++probe) {
      const double mid = 0.5 * (c_def + c_und);
      const auto v = try_delta_p(model, reg, mid, options);
      if (!v) {
        c_und = mid;
        continue;
      }
      if ((*v < 0.0) != (dp_def < 0.0)) {
        auto result = mid < c_def ? refined(mid, *v, c_def, dp_def)
                                  : refined(c_def, dp_def, mid, *v);
        if (result) return result;
        break;
      }
      c_def = mid;
      dp_def = *v;
    }
  }
  return std::nullopt;
}

}  // namespace

SpeedResult find_speed(const ModelSpec& model, Regularisation reg,
                       std::optional<std::pair<double, double>> bracket,
                       const ShootOptions& options) {
  std::vector<std::pair<double, double>> brackets;
  if (bracket) {
    auto [lo, hi] = *bracket;
    if (lo > hi) std::swap(lo, hi);
    brackets.push_back({lo, hi});
  } else {
    switch (reg) {
      case Regularisation::NonLocal:
        brackets.push_back({0.01, 1.0});
        brackets.push_back({-1.0, -0.01});
        break;
      case Regularisation::ViscousPositive:
        brackets.push_back({0.01, 1.0});
        break;
      case Regularisation::ViscousNegative:
        brackets.push_back({-1.0, -0.01});
        break;
    }
  }

  for (const auto& [lo, hi] : brackets) {
    auto result = scan_bracket(model, reg, lo, hi, options);
    if (result) return *result;
  }

  std::ostringstream os;
  os << "no sign change of the shooting residual on";
  for (const auto& [lo, hi] : brackets) os << " [" << lo << ", " << hi << "]";
  throw Error(ErrorCode::NoSpeedInBracket, os.str());
}

std::vector<SpeedCurveRow> speed_curve(const ModelSpec& base,
                                       RegularisationKind kind, double A_min,
                                       double A_max, int n, int jobs) {
  if (n < 2)
    throw Error(ErrorCode::DomainError, "need at least two sweep points");
  if (!(A_min < A_max))
    throw Error(ErrorCode::DomainError, "empty Allee parameter range");
  jobs = std::max(1, jobs);

  std::vector<SpeedCurveRow> rows(n);

  auto solve_row = [&](double A, std::optional<double> warm) -> SpeedCurveRow {
    SpeedCurveRow row;
    row.A = A;
    try {
      auto model = ModelSpec::from_roots(base.k(), base.alpha(), base.beta(),
                                         Reaction::allee(base.reaction().rate(), A));
      std::vector<Regularisation> attempts;
      if (kind == RegularisationKind::NonLocal) {
        attempts = {Regularisation::NonLocal};
      } else if (warm && *warm < 0.0) {
        attempts = {Regularisation::ViscousNegative,
                    Regularisation::ViscousPositive};
      } else {
        attempts = {Regularisation::ViscousPositive,
                    Regularisation::ViscousNegative};
      }
      std::string failures;
      for (auto reg : attempts) {
        // warm-started bracket around the previous root, then the defaults
        std::vector<std::optional<std::pair<double, double>>> tries;
        if (warm) {
          const double w = *warm;
          const bool admissible =
              (reg == Regularisation::NonLocal) ||
              (reg == Regularisation::ViscousPositive && w > 0.0) ||
              (reg == Regularisation::ViscousNegative && w < 0.0);
          if (admissible) {
            double blo = w - 0.05, bhi = w + 0.05;
            if (w > 0.0) blo = std::max(blo, 1e-3);
            if (w < 0.0) bhi = std::min(bhi, -1e-3);
            tries.push_back(std::make_pair(blo, bhi));
          }
        }
        tries.push_back(std::nullopt);
        bool done = false;
        for (const auto& b : tries) {
          try {
            row.result = find_speed(model, reg, b);
            done = true;
            break;
          } catch (const Error& e) {
            if (e.code() != ErrorCode::NoSpeedInBracket) throw;
            failures = e.what();
          }
        }
        if (done) break;
      }
      if (!row.result) row.error = failures;
    } catch (const Error& e) {
      row.error = e.what();
    }
    return row;
  };

  auto worker = [&](int start) {
    std::optional<double> warm;
    for (int i = start; i < n; i += jobs) {
      const double A = A_min + (A_max - A_min) * i / (n - 1);
      rows[i] = solve_row(A, warm);
      if (rows[i].result) warm = rows[i].result->c0;
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace fbwave
