#include "fbwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbwave/poly.hpp"

namespace fbwave {

const char* to_string(ReactionClass cls) noexcept {
  switch (cls) {
    case ReactionClass::Logistic: return "logistic";
    case ReactionClass::WeakAllee: return "weak_allee";
    case ReactionClass::StrongAllee: return "strong_allee";
  }
  return "unknown";
}

Reaction Reaction::logistic(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::DomainError, "logistic rate must be nonnegative");
  Reaction r;
  r.cls_ = ReactionClass::Logistic;
  r.rate_ = lambda;
  r.A_ = 0.0;
  return r;
}

Reaction Reaction::allee(double r, double A) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw Error(ErrorCode::DomainError, "Allee growth rate must be positive");
  if (!std::isfinite(A) || A >= 1.0)
    throw Error(ErrorCode::DomainError,
                "Allee threshold must be below 1 (source term would be "
                "non-positive on (0,1))");
  Reaction out;
  out.cls_ = A > 0.0 ? ReactionClass::StrongAllee : ReactionClass::WeakAllee;
  out.rate_ = r;
  out.A_ = A;
  return out;
}

Reaction Reaction::from_rates(double lambda_i, double lambda_g, double K_i,
                              double K_g) {
  for (double v : {lambda_i, lambda_g, K_i, K_g})
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::DomainError, "lattice rates must be >= 0");
  if (K_g != 0.0)
    throw Error(ErrorCode::DomainError,
                "nonzero grouped death rate is outside the reduced family "
                "(rescale the density first)");

  if (K_i == 0.0 && lambda_i == lambda_g) {
    Reaction out = logistic(lambda_g);
    out.rates_ = LatticeRates{lambda_i, lambda_g, K_i, K_g};
    return out;
  }

  const double r = K_i - lambda_i + lambda_g;
  if (r == 0.0)
    throw Error(ErrorCode::UndefinedAllee,
                "growth rate K_i - lambda_i + lambda_g vanishes");
  if (r < 0.0)
    throw Error(ErrorCode::DomainError,
                "negative growth rate K_i - lambda_i + lambda_g");
  Reaction out = allee(r, 1.0 - lambda_g / r);
  out.rates_ = LatticeRates{lambda_i, lambda_g, K_i, K_g};
  return out;
}

double Reaction::operator()(double u) const noexcept {
  if (cls_ == ReactionClass::Logistic) return rate_ * u * (1.0 - u);
  return rate_ * u * (1.0 - u) * (u - A_);
}

double Reaction::derivative(double u) const noexcept {
  if (cls_ == ReactionClass::Logistic) return rate_ * (1.0 - 2.0 * u);
  return rate_ * ((1.0 - 2.0 * u) * (u - A_) + u * (1.0 - u));
}

std::vector<double> Reaction::coefficients() const {
  if (cls_ == ReactionClass::Logistic) return {0.0, rate_, -rate_};
  return {0.0, -rate_ * A_, rate_ * (1.0 + A_), -rate_};
}

std::pair<double, double> diffusivity_roots(double D_i, double D_g) {
  if (!(D_i >= 0.0) || !(D_g >= 0.0) || !std::isfinite(D_i) ||
      !std::isfinite(D_g))
    throw Error(ErrorCode::DomainError, "diffusivities must be >= 0");
  if (!(D_i > 4.0 * D_g))
    throw Error(ErrorCode::NoBackwardRegion,
                "D_i <= 4 D_g: diffusivity has no negative interval "
                "(double root at 2/3 in the limit)");
  const double s = std::sqrt((D_i - 4.0 * D_g) / (4.0 * (D_i - D_g)));
  return {2.0 / 3.0 * (1.0 - s), 2.0 / 3.0 * (1.0 + s)};
}

ModelSpec::ModelSpec(double D_i, double D_g, double k, double alpha,
                     double beta, Reaction reaction)
    : D_i_(D_i), D_g_(D_g), k_(k), alpha_(alpha), beta_(beta),
      reaction_(std::move(reaction)) {
  if (reaction_.cls() != ReactionClass::Logistic) {
    const double A = reaction_.allee_threshold();
    if (A == alpha_ || A == beta_)
      throw Error(ErrorCode::DomainError,
                  "Allee threshold coincides with a diffusivity root");
  }
  const double sum = alpha_ + beta_, prod = alpha_ * beta_;
  potential_.F = {0.0, k_ * prod, -k_ * sum / 2.0, k_ / 3.0};
  potential_.G = {0.0, 0.0, k_ * prod / 2.0, -k_ * sum / 6.0, k_ / 12.0};
}

ModelSpec ModelSpec::from_motility(double D_i, double D_g, Reaction reaction) {
  auto [alpha, beta] = diffusivity_roots(D_i, D_g);
  return ModelSpec(D_i, D_g, 3.0 * (D_i - D_g), alpha, beta,
                   std::move(reaction));
}

ModelSpec ModelSpec::from_roots(double k, double alpha, double beta,
                                Reaction reaction) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw Error(ErrorCode::DomainError, "leading coefficient k must be > 0");
  if (!(0.0 < alpha) || !(alpha < beta) || !(beta < 1.0))
    throw Error(ErrorCode::DomainError,
                "diffusivity roots must satisfy 0 < alpha < beta < 1");
  // Back out the motility pair from D(0) = D_i and k = 3(D_i - D_g); for a
  // non-centred root pair the implied D_g may be negative, which is accepted
  // here (only the centred constructor promises physical motilities).
  const double D_i = k * alpha * beta;
  return ModelSpec(D_i, D_i - k / 3.0, k, alpha, beta, std::move(reaction));
}

double ModelSpec::F(double u) const noexcept {
  const auto& c = potential_.F;
  return ((c[3] * u + c[2]) * u + c[1]) * u;
}

double ModelSpec::G(double u) const noexcept {
  const auto& c = potential_.G;
  return (((c[4] * u + c[3]) * u + c[2]) * u) * u;
}

Evaluation ModelSpec::evaluate(double u) const noexcept {
  return {D(u), R(u), F(u), G(u)};
}

std::vector<double> ModelSpec::D_coefficients() const {
  return {k_ * alpha_ * beta_, -k_ * (alpha_ + beta_), k_};
}

double ModelSpec::layer_amplitude() const noexcept {
  return std::sqrt(k_ / 6.0);
}

ConditionCheck necessary_condition(const ModelSpec& model,
                                   WaveDirection direction,
                                   double shock_endpoint, int n_samples) {
  if (n_samples < 16)
    throw Error(ErrorCode::DomainError, "need at least 16 samples");
  const bool left = direction == WaveDirection::Left;
  if (left) {
    if (!(0.0 < shock_endpoint) || !(shock_endpoint <= model.alpha()))
      throw Error(ErrorCode::DomainError,
                  "left-moving shock endpoint must lie in (0, alpha]");
  } else {
    if (!(model.beta() <= shock_endpoint) || !(shock_endpoint < 1.0))
      throw Error(ErrorCode::DomainError,
                  "right-moving shock endpoint must lie in [beta, 1)");
  }

  const auto integrand =
      poly::multiply(model.D_coefficients(), model.reaction().coefficients());
  const auto anti = poly::antiderivative(integrand);

  const double lo = left ? 0.0 : shock_endpoint;
  const double hi = left ? shock_endpoint : 1.0;

  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(n_samples) + 6);
  for (int i = 1; i <= n_samples; ++i) {
    const double t = static_cast<double>(i) / n_samples;
    // exclude the trivial zero-length integral at the outer boundary
    const double x = left ? lo + t * (hi - lo) : hi - t * (hi - lo);
    points.push_back(x);
  }
  // extrema of the cumulative integral sit at integrand roots
  const double candidates[] = {model.alpha(), model.beta(),
                               model.reaction().allee_threshold(), 0.0, 1.0};
  for (double c : candidates)
    if (lo < c && c < hi) points.push_back(c);

  const double at_hi = poly::eval(anti, hi);
  bool holds = true;
  double worst = left ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::infinity();
  for (double x : points) {
    const double integral =
        left ? poly::eval(anti, x) : at_hi - poly::eval(anti, x);
    if (left) {
      worst = std::max(worst, integral);
      if (!(integral < 0.0)) holds = false;
    } else {
      worst = std::min(worst, integral);
      if (!(integral > 0.0)) holds = false;
    }
  }
  return {holds, worst};
}

}  // namespace fbwave
