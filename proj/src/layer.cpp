#include "fbwave/layer.hpp"

#include <algorithm>
#include <cmath>

#include "fbwave/ode.hpp"
#include "fbwave/poly.hpp"

namespace fbwave {
namespace {

// Outermost real roots of F(u) + v; returns NaNs if the cubic has fewer than
// two real roots (v outside the fold window).
std::pair<double, double> outer_roots(const Potential& pot, double v) {
  auto roots = poly::cubic_real_roots(pot.F[3], pot.F[2], pot.F[1], v);
  if (roots.size() < 2)
    return {ShockData::nan, ShockData::nan};
  return {roots.front(), roots.back()};
}

}  // namespace

LayerPhasePoint layer_point(const ModelSpec& model, double u, double w,
                            double v) {
  return {u, w, v, -0.5 * w * w + model.G(u) + v * u};
}

ShockData equal_area(const ModelSpec& model) {
  const auto& pot = model.potential();
  const double Fa = model.F(model.alpha());
  const double Fb = model.F(model.beta());

  // Signed area between the outer roots; strictly increasing in v on the
  // fold window (-F(alpha), -F(beta)).
  auto maxwell = [&](double v) -> double {
    auto [up, um] = outer_roots(pot, v);
    if (std::isnan(up)) return ShockData::nan;
    return model.G(um) - model.G(up) + v * (um - up);
  };

  // The residual is negative at v = -F(alpha) and positive at v = -F(beta),
  // but rounding can push the fold levels themselves outside the three-root
  // window; back off the evaluation points until both signs are available.
  const double width = Fa - Fb;
  double lo = -Fa, hi = -Fb;
  double mlo = ShockData::nan, mhi = ShockData::nan;
  for (double margin : {0.0, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4}) {
    const double l = -Fa + margin * width, h = -Fb - margin * width;
    const double ml = maxwell(l), mh = maxwell(h);
    if (ml < 0.0 && mh > 0.0) {
      lo = l;
      hi = h;
      mlo = ml;
      mhi = mh;
      break;
    }
  }
  if (std::isnan(mlo) || std::isnan(mhi)) {
    // last resort: scan a widened interval for any sign change
    const double wlo = -Fa - 1.0, whi = -Fb + 1.0;
    bool found = false;
    double prev_v = wlo, prev_m = maxwell(wlo);
    for (int i = 1; i <= 256 && !found; ++i) {
      const double v = wlo + (whi - wlo) * i / 256.0;
      const double m = maxwell(v);
      if (!std::isnan(prev_m) && !std::isnan(m) &&
          (prev_m < 0.0) != (m < 0.0)) {
        lo = prev_v;
        hi = v;
        mlo = prev_m;
        found = true;
      }
      prev_v = v;
      prev_m = m;
    }
    if (!found)
      throw Error(ErrorCode::NoMaxwellPoint,
                  "equal-area residual has no sign change on "
                  "[-F(alpha)-1, -F(beta)+1]");
  }

  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double m = maxwell(mid);
    if (std::isnan(m)) break;
    if ((m < 0.0) == (mlo < 0.0)) {
      lo = mid;
      mlo = m;
    } else {
      hi = mid;
    }
  }

  ShockData out;
  out.v = 0.5 * (lo + hi);
  auto [up, um] = outer_roots(pot, out.v);
  out.u_plus = up;
  out.u_minus = um;
  out.a = model.layer_amplitude();
  if (!(up < model.alpha()) || !(um > model.beta()))
    throw Error(ErrorCode::NoMaxwellPoint,
                "equal-area endpoints failed to straddle the backward region");
  return out;
}

ShockData viscous_shock_endpoints(const ModelSpec& model, SpeedSign sign) {
  if (!(model.beta() - model.alpha() > 1e-12))
    throw Error(ErrorCode::DegenerateFold,
                "coincident diffusivity roots leave no fold connection");
  const auto& pot = model.potential();
  ShockData out;
  out.v_r = -model.F(model.alpha());
  out.v_l = -model.F(model.beta());
  auto [lo_r, u_r] = outer_roots(pot, out.v_r);  // double root alpha + u_r
  auto [u_l, hi_l] = outer_roots(pot, out.v_l);  // u_l + double root beta
  (void)lo_r;
  (void)hi_l;
  out.u_r = u_r;
  out.u_l = u_l;
  out.a = model.layer_amplitude();
  out.sign = sign;
  return out;
}

std::pair<double, double> heteroclinic_profile(const ShockData& shock,
                                               Branch branch, double xi) {
  const double mid = 0.5 * (shock.u_plus + shock.u_minus);
  const double half = 0.5 * (shock.u_minus - shock.u_plus);
  const double delta = shock.u_minus - shock.u_plus;
  const double th = std::tanh(-0.5 * shock.a * delta * xi);
  const double sech = 1.0 / std::cosh(-0.5 * shock.a * delta * xi);
  const double amp = 0.25 * shock.a * delta * delta * sech * sech;
  if (branch == Branch::Plus) return {mid + half * th, -amp};
  return {mid - half * th, amp};
}

ConnectionReport mixed_layer_check(const ModelSpec& model, double v, double mu,
                                   double c) {
  if (!(mu > 0.0) || !(mu <= 1.0))
    throw Error(ErrorCode::DomainError, "mu must lie in (0, 1]");
  if (c == 0.0)
    throw Error(ErrorCode::DomainError, "wave speed must be nonzero");

  const auto& pot = model.potential();
  auto roots = poly::cubic_real_roots(pot.F[3], pot.F[2], pot.F[1], v);
  if (roots.size() < 3 || roots[1] - roots[0] < 1e-10 ||
      roots[2] - roots[1] < 1e-10)
    throw Error(ErrorCode::NoTripleRoot,
                "level v does not give three distinct layer equilibria");

  const double u_from = roots[2], u_to = roots[0];
  const double w_from = (1.0 - mu) * c * u_from;
  const double w_to = (1.0 - mu) * c * u_to;

  const double inv_mu = 1.0 / mu;
  auto field = [&](const ode::State<2>& y, ode::State<2>& dy) {
    dy[0] = (1.0 - inv_mu) * c * y[0] + inv_mu * y[1];
    dy[1] = v + model.F(y[0]);
  };

  // unstable eigenpair at the upper saddle: lambda^2 - (1-1/mu)c lambda -
  // D(u)/mu = 0, eigenvector (lambda, D(u))
  const double tr = (1.0 - inv_mu) * c;
  const double Du = model.D(u_from);
  const double lam = 0.5 * (tr + std::sqrt(tr * tr + 4.0 * Du * inv_mu));
  double eu = lam, ew = Du;
  const double norm = std::hypot(eu, ew);
  eu /= norm;
  ew /= norm;
  if (eu > 0.0) {  // point the seed towards decreasing u
    eu = -eu;
    ew = -ew;
  }

  const double delta = 1e-6;
  ode::Options opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  ode::Integrator<2, decltype(field)> integ(field, opt);
  integ.start(0.0, {u_from + delta * eu, w_from + delta * ew});

  const double span = u_from - u_to;
  const double horizon = 200.0 / (model.layer_amplitude() * span);
  const double w_scale =
      10.0 * (1.0 + model.layer_amplitude() * span * span);

  double dmin = std::hypot(integ.y()[0] - u_to, integ.y()[1] - w_to);
  while (integ.t() < horizon) {
    integ.step();
    for (int s = 1; s <= 8; ++s) {
      const auto y = integ.dense().eval(s / 8.0);
      dmin = std::min(dmin, std::hypot(y[0] - u_to, y[1] - w_to));
    }
    const double u = integ.y()[0];
    if (u > u_from + 0.5 || u < u_to - 0.5 || std::abs(integ.y()[1]) > w_scale)
      break;
  }

  return {dmin < 1e-6, dmin, {roots[0], roots[1], roots[2]}};
}

}  // namespace fbwave
