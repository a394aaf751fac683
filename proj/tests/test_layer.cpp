#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "fbwave/layer.hpp"
#include "fbwave/model.hpp"
#include "fbwave/ode.hpp"

using namespace fbwave;

namespace {

ModelSpec demo_model(double A = 0.2) {
  return ModelSpec::from_roots(6.0, 7.0 / 12.0, 3.0 / 4.0,
                               Reaction::allee(5.0, A));
}

// integrate the frozen-v layer flow u' = w, w' = v + F(u)
template <class M>
auto layer_field(const M& m, double v) {
  return [&m, v](const ode::State<2>& y, ode::State<2>& dy) {
    dy[0] = y[1];
    dy[1] = v + m.F(y[0]);
  };
}

}  // namespace

TEST_CASE("equal area level and endpoints of the reference potential") {
  auto m = demo_model();
  auto shock = equal_area(m);
  CHECK(shock.v == doctest::Approx(-61.0 / 108.0).epsilon(1e-12));
  CHECK(shock.u_plus ==
        doctest::Approx(2.0 / 3.0 - 1.0 / (4.0 * std::sqrt(3.0)))
            .epsilon(1e-11));
  CHECK(shock.u_minus ==
        doctest::Approx(2.0 / 3.0 + 1.0 / (4.0 * std::sqrt(3.0)))
            .epsilon(1e-11));
  CHECK(shock.a == doctest::Approx(1.0).epsilon(1e-14));

  // defining conditions: both endpoints are roots and the area vanishes
  CHECK(std::abs(m.F(shock.u_plus) + shock.v) < 1e-12);
  CHECK(std::abs(m.F(shock.u_minus) + shock.v) < 1e-12);
  const double area = m.G(shock.u_minus) - m.G(shock.u_plus) +
                      shock.v * (shock.u_minus - shock.u_plus);
  CHECK(std::abs(area) < 1e-12);
}

TEST_CASE("equal area level of any centred potential sits at the centre") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dk(1.0, 10.0);
  std::uniform_real_distribution<double> dd(0.02, 0.19);
  for (int trial = 0; trial < 25; ++trial) {
    const double k = dk(rng), d = dd(rng);
    const double centre = 0.5;  // any centre works; use a non-2/3 one
    auto m = ModelSpec::from_roots(k, centre - d, centre + d,
                                   Reaction::allee(1.0, -0.5));
    auto shock = equal_area(m);
    CHECK(shock.v == doctest::Approx(-m.F(centre)).epsilon(1e-10));
    CHECK(shock.u_plus + shock.u_minus ==
          doctest::Approx(2.0 * centre).epsilon(1e-9));
  }
}

TEST_CASE("equal area ordering over the sampled model box") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dk(1.0, 10.0);
  std::uniform_real_distribution<double> da(0.1, 0.6);
  for (int trial = 0; trial < 200; ++trial) {
    const double k = dk(rng);
    const double alpha = da(rng);
    std::uniform_real_distribution<double> db(alpha + 0.05, 0.95);
    const double beta = db(rng);
    auto m = ModelSpec::from_roots(k, alpha, beta, Reaction::allee(1.0, -0.5));
    auto shock = equal_area(m);
    CHECK(shock.u_plus < alpha);
    CHECK(beta < shock.u_minus);
    CHECK(std::abs(m.F(shock.u_plus) + shock.v) < 1e-10);
    CHECK(std::abs(m.F(shock.u_minus) + shock.v) < 1e-10);
    CHECK(std::abs(m.G(shock.u_minus) - m.G(shock.u_plus) +
                   shock.v * (shock.u_minus - shock.u_plus)) < 1e-10);
  }
}

TEST_CASE("equal area endpoints stay inside (0,1) for centred potentials") {
  // closed form for the centred family: endpoints 2/3 +- sqrt(3) d where
  // d = (beta - alpha)/2; they remain in (0,1) whenever d < 1/(3 sqrt(3))
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dk(1.0, 10.0);
  std::uniform_real_distribution<double> dd(0.02, 1.0 / (3.0 * std::sqrt(3.0)) - 1e-3);
  for (int trial = 0; trial < 50; ++trial) {
    const double k = dk(rng), d = dd(rng);
    auto m = ModelSpec::from_roots(k, 2.0 / 3.0 - d, 2.0 / 3.0 + d,
                                   Reaction::allee(1.0, -0.5));
    auto shock = equal_area(m);
    CHECK(0.0 < shock.u_plus);
    CHECK(shock.u_plus < m.alpha());
    CHECK(m.beta() < shock.u_minus);
    CHECK(shock.u_minus < 1.0);
    CHECK(shock.u_plus ==
          doctest::Approx(2.0 / 3.0 - std::sqrt(3.0) * d).epsilon(1e-9));
    CHECK(shock.u_minus ==
          doctest::Approx(2.0 / 3.0 + std::sqrt(3.0) * d).epsilon(1e-9));
  }
}

TEST_CASE("viscous fold endpoints of the reference potential") {
  auto m = demo_model();
  auto shock = viscous_shock_endpoints(m, SpeedSign::Positive);
  CHECK(shock.u_r == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(shock.v_r == doctest::Approx(-245.0 / 432.0).epsilon(1e-12));
  CHECK(shock.u_l == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(shock.v_l == doctest::Approx(-9.0 / 16.0).epsilon(1e-12));

  // the same endpoints come back for negative speeds, direction flipped
  auto rev = viscous_shock_endpoints(m, SpeedSign::Negative);
  CHECK(rev.u_r == doctest::Approx(shock.u_r).epsilon(1e-14));
  CHECK(rev.u_l == doctest::Approx(shock.u_l).epsilon(1e-14));
  CHECK(rev.sign == SpeedSign::Negative);

  // factorisation oracle: F(u) - F(alpha) = 2 (u - 7/12)^2 (u - 5/6)
  for (double u : {0.1, 0.3, 0.62, 0.9, 1.1}) {
    const double lhs = m.F(u) - m.F(7.0 / 12.0);
    const double rhs = 2.0 * (u - 7.0 / 12.0) * (u - 7.0 / 12.0) * (u - 5.0 / 6.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    const double lhs2 = m.F(u) - m.F(3.0 / 4.0);
    const double rhs2 = 2.0 * (u - 0.75) * (u - 0.75) * (u - 0.5);
    CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-12));
  }

  // closed forms for general roots: u_r = (3 beta - alpha)/2 and
  // u_l = (3 alpha - beta)/2
  auto m2 = ModelSpec::from_roots(4.0, 0.4, 0.75, Reaction::allee(1.0, 0.2));
  auto s2 = viscous_shock_endpoints(m2, SpeedSign::Positive);
  CHECK(s2.u_r == doctest::Approx((3.0 * 0.75 - 0.4) / 2.0).epsilon(1e-12));
  CHECK(s2.u_l == doctest::Approx((3.0 * 0.4 - 0.75) / 2.0).epsilon(1e-12));
}

TEST_CASE("heteroclinic closed form") {
  auto m = demo_model();
  auto shock = equal_area(m);

  auto [u0, w0] = heteroclinic_profile(shock, Branch::Plus, 0.0);
  CHECK(u0 == doctest::Approx(0.5 * (shock.u_plus + shock.u_minus))
                  .epsilon(1e-14));
  CHECK(w0 == doctest::Approx(-1.0 / 48.0).epsilon(1e-12));

  auto [um, wm] = heteroclinic_profile(shock, Branch::Minus, 0.0);
  CHECK(um == doctest::Approx(u0).epsilon(1e-14));
  CHECK(wm == doctest::Approx(1.0 / 48.0).epsilon(1e-12));

  auto [ul, wl] = heteroclinic_profile(shock, Branch::Plus, -150.0);
  auto [ur, wr] = heteroclinic_profile(shock, Branch::Plus, 150.0);
  CHECK(ul == doctest::Approx(shock.u_minus).epsilon(1e-12));
  CHECK(ur == doctest::Approx(shock.u_plus).epsilon(1e-12));
  CHECK(std::abs(wl) < 1e-12);
  CHECK(std::abs(wr) < 1e-12);

  // conserved energy along the closed form
  const double H0 = layer_point(m, shock.u_minus, 0.0, shock.v).H;
  for (double xi = -30.0; xi <= 30.0; xi += 0.5) {
    auto [u, w] = heteroclinic_profile(shock, Branch::Plus, xi);
    CHECK(layer_point(m, u, w, shock.v).H == doctest::Approx(H0).epsilon(1e-11));
  }
}

TEST_CASE("numerical layer flow conserves H and tracks the closed form") {
  auto m = demo_model();
  auto shock = equal_area(m);

  auto field = layer_field(m, shock.v);
  ode::Options opt;  // defaults rtol 1e-10, atol 1e-12
  ode::Integrator<2, decltype(field)> integ(field, opt);

  auto [us, ws] = heteroclinic_profile(shock, Branch::Plus, -30.0);
  integ.start(-30.0, {us, ws});
  const double H0 = layer_point(m, us, ws, shock.v).H;

  double drift = 0.0;
  double mismatch = 0.0;
  double next_sample = -30.0;
  while (integ.t() < 30.0) {
    integ.step();
    while (next_sample <= integ.t()) {
      const double theta =
          (next_sample - integ.dense().t0) / integ.dense().h;
      auto y = integ.dense().eval(theta);
      drift = std::max(drift,
                       std::abs(layer_point(m, y[0], y[1], shock.v).H - H0));
      auto [ue, we] = heteroclinic_profile(shock, Branch::Plus, next_sample);
      mismatch = std::max(mismatch,
                          std::max(std::abs(y[0] - ue), std::abs(y[1] - we)));
      next_sample += 0.25;
    }
  }
  CHECK(drift < 1e-8);
  CHECK(mismatch < 1e-6);
}

TEST_CASE("mixed-regularisation connection check") {
  auto m = demo_model();
  auto shock = equal_area(m);

  SUBCASE("mu = 1 recovers the Hamiltonian heteroclinic") {
    auto rep = mixed_layer_check(m, shock.v, 1.0, 0.197);
    CHECK(rep.connects);
    CHECK(rep.miss_distance < 1e-6);
    // equilibria are the roots of F(u) + v in order
    CHECK(rep.equilibria[0] == doctest::Approx(shock.u_plus).epsilon(1e-10));
    CHECK(rep.equilibria[2] == doctest::Approx(shock.u_minus).epsilon(1e-10));
    for (double u : rep.equilibria)
      CHECK(m.F(u) == doctest::Approx(-shock.v).epsilon(1e-9));
  }
  SUBCASE("mu < 1 breaks the connection") {
    for (double mu : {0.25, 0.5, 0.75}) {
      auto rep = mixed_layer_check(m, shock.v, mu, 0.197);
      CHECK_FALSE(rep.connects);
      CHECK(rep.miss_distance > 1e-3);
    }
  }
  SUBCASE("level without three roots is rejected") {
    CHECK_THROWS_AS(mixed_layer_check(m, 5.0, 0.5, 0.197), Error);
    try {
      mixed_layer_check(m, 5.0, 0.5, 0.197);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoTripleRoot);
    }
  }
  SUBCASE("parameter domain") {
    CHECK_THROWS_AS(mixed_layer_check(m, shock.v, 0.0, 0.197), Error);
    CHECK_THROWS_AS(mixed_layer_check(m, shock.v, 1.5, 0.197), Error);
    CHECK_THROWS_AS(mixed_layer_check(m, shock.v, 0.5, 0.0), Error);
  }
}

TEST_CASE("layer point stores the energy") {
  auto m = demo_model();
  auto p = layer_point(m, 0.7, -0.1, -0.5);
  CHECK(p.H == doctest::Approx(-0.5 * 0.01 + m.G(0.7) - 0.5 * 0.7));
}
