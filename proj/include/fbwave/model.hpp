#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "fbwave/errors.hpp"

namespace fbwave {

enum class ReactionClass { Logistic, WeakAllee, StrongAllee };

const char* to_string(ReactionClass cls) noexcept;

// Per-class lattice event probabilities (per step of duration tau) that a
// reaction term was derived from, when it was derived from one.
struct LatticeRates {
  double lambda_i = 0.0;  // proliferation, isolated agents
  double lambda_g = 0.0;  // proliferation, grouped agents
  double K_i = 0.0;       // death, isolated agents
  double K_g = 0.0;       // death, grouped agents
};

// Source term R(u): either logistic rate*u*(1-u) or the cubic Allee form
// rate*u*(1-u)*(u-A).
class Reaction {
 public:
  static Reaction logistic(double lambda);
  static Reaction allee(double r, double A);
  // Map from per-class lattice rates, K_g = 0 required.  lambda_i = lambda_g
  // with K_i = 0 collapses to the logistic form; otherwise the growth rate
  // r = K_i - lambda_i + lambda_g must be positive, and A = 1 - lambda_g / r.
  static Reaction from_rates(double lambda_i, double lambda_g, double K_i,
                             double K_g = 0.0);

  ReactionClass cls() const noexcept { return cls_; }
  double rate() const noexcept { return rate_; }
  double allee_threshold() const noexcept { return A_; }
  const std::optional<LatticeRates>& rates() const noexcept { return rates_; }

  double operator()(double u) const noexcept;
  double derivative(double u) const noexcept;
  std::vector<double> coefficients() const;  // ascending powers of u

 private:
  Reaction() = default;
  ReactionClass cls_ = ReactionClass::Logistic;
  double rate_ = 0.0;
  double A_ = 0.0;
  std::optional<LatticeRates> rates_;
};

// Antiderivatives of the diffusivity under the convention F(0) = G(0) = 0;
// the equal-area offset v is the only free constant elsewhere.
struct Potential {
  std::array<double, 4> F{};  // F(u) = F[1] u + F[2] u^2 + F[3] u^3
  std::array<double, 5> G{};  // G(u) = G[2] u^2 + G[3] u^3 + G[4] u^4
};

struct Evaluation {
  double D, R, F, G;
};

// Roots of the centred diffusivity family 3(D_i-D_g)u^2 - 4(D_i-D_g)u + D_i;
// requires D_i > 4 D_g, and the roots straddle 2/3 with alpha + beta = 4/3.
std::pair<double, double> diffusivity_roots(double D_i, double D_g);

class ModelSpec {
 public:
  // Centred family: D(u) = 3(D_i-D_g)u^2 - 4(D_i-D_g)u + D_i with D_i > 4 D_g.
  static ModelSpec from_motility(double D_i, double D_g, Reaction reaction);
  // Direct factored form D(u) = k (u-alpha)(u-beta); the centred constraint
  // alpha + beta = 4/3 is deliberately not enforced here.
  static ModelSpec from_roots(double k, double alpha, double beta,
                              Reaction reaction);

  double D_i() const noexcept { return D_i_; }
  double D_g() const noexcept { return D_g_; }
  double k() const noexcept { return k_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  const Reaction& reaction() const noexcept { return reaction_; }
  const Potential& potential() const noexcept { return potential_; }

  double D(double u) const noexcept { return k_ * (u - alpha_) * (u - beta_); }
  double D_prime(double u) const noexcept {
    return k_ * (2.0 * u - alpha_ - beta_);
  }
  double R(double u) const noexcept { return reaction_(u); }
  double R_prime(double u) const noexcept { return reaction_.derivative(u); }
  double F(double u) const noexcept;
  double G(double u) const noexcept;
  Evaluation evaluate(double u) const noexcept;

  std::vector<double> D_coefficients() const;  // ascending powers of u

  // Scale a = sqrt(k/6) of the layer heteroclinic; equals
  // sqrt((D_i - D_g)/2) for the centred family.
  double layer_amplitude() const noexcept;

 private:
  ModelSpec(double D_i, double D_g, double k, double alpha, double beta,
            Reaction reaction);

  double D_i_, D_g_, k_, alpha_, beta_;
  Reaction reaction_;
  Potential potential_;
};

enum class WaveDirection { Left, Right };

struct ConditionCheck {
  bool holds;
  double worst_margin;  // extremal value of the checked integral
};

// Sign test on the cumulative integral of D*R required for a monotonically
// decreasing shock-fronted wave: strictly negative on (0, U1] for a
// left-moving wave, strictly positive on [U2, 1) for a right-moving wave.
// Evaluated through the exact polynomial antiderivative on a dense grid plus
// every interior root of the integrand.
ConditionCheck necessary_condition(const ModelSpec& model,
                                   WaveDirection direction,
                                   double shock_endpoint, int n_samples = 256);

}  // namespace fbwave
