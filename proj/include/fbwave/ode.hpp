#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the classic quintic dense
// output, for the small autonomous systems used by the travelling-wave
// shooters.  Fixed state dimension, FSAL, PI-free standard step control.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include "fbwave/errors.hpp"

namespace fbwave::ode {

template <int N>
using State = std::array<double, N>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 2'000'000;
};

template <int N>
struct DenseStep {
  double t0 = 0.0, h = 0.0;
  State<N> r1{}, r2{}, r3{}, r4{}, r5{};

  // value at t0 + theta*h, theta in [0,1]
  State<N> eval(double theta) const {
    State<N> y;
    const double om = 1.0 - theta;
    for (int i = 0; i < N; ++i) {
      y[i] = r1[i] +
             theta * (r2[i] + om * (r3[i] + theta * (r4[i] + om * r5[i])));
    }
    return y;
  }
};

template <int N, class F>
class Integrator {
 public:
  Integrator(F f, Options opt = {}) : f_(std::move(f)), opt_(opt) {}

  void start(double t0, const State<N>& y0) {
    t_ = t0;
    y_ = y0;
    f_(y_, k1_);
    h_ = initial_step();
    steps_ = 0;
  }

  // Advance one accepted step; returns false once max_steps is exhausted.
  bool step() {
    double h = h_;
    for (;;) {
      if (++steps_ > opt_.max_steps)
        throw Error(ErrorCode::ManifoldEscape,
                    "step budget exhausted before any stop event");
      h = std::min(h, opt_.h_max);
      const double err = attempt(h);
      if (err <= 1.0) {
        make_dense(h);
        t_ += h;
        y_ = y_new_;
        k1_ = k7_;  // FSAL
        const double fac =
            std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
        h_ = h * (rejected_ ? std::min(fac, 1.0) : fac);
        rejected_ = false;
        return true;
      }
      rejected_ = true;
      h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
      if (!(h > 0.0) || t_ + h == t_)
        throw Error(ErrorCode::ManifoldEscape,
                    "step size underflow during integration");
    }
  }

  double t() const noexcept { return t_; }
  const State<N>& y() const noexcept { return y_; }
  const DenseStep<N>& dense() const noexcept { return dense_; }
  double last_h() const noexcept { return dense_.h; }

 private:
  double attempt(double h) {
    auto stage = [&](const State<N>& yin, State<N>& kout) { f_(yin, kout); };
    State<N> tmp;
    for (int i = 0; i < N; ++i) tmp[i] = y_[i] + h * a21 * k1_[i];
    stage(tmp, k2_);
    for (int i = 0; i < N; ++i)
      tmp[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    stage(tmp, k3_);
    for (int i = 0; i < N; ++i)
      tmp[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    stage(tmp, k4_);
    for (int i = 0; i < N; ++i)
      tmp[i] = y_[i] +
               h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    stage(tmp, k5_);
    for (int i = 0; i < N; ++i)
      tmp[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] +
                            a64 * k4_[i] + a65 * k5_[i]);
    stage(tmp, k6_);
    for (int i = 0; i < N; ++i)
      y_new_[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] +
                               a75 * k5_[i] + a76 * k6_[i]);
    stage(y_new_, k7_);

    double err = 0.0;
    for (int i = 0; i < N; ++i) {
      const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] +
                            e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      const double sc =
          opt_.atol + opt_.rtol * std::max(std::abs(y_[i]), std::abs(y_new_[i]));
      err += (e / sc) * (e / sc);
    }
    return std::sqrt(err / N);
  }

  void make_dense(double h) {
    dense_.t0 = t_;
    dense_.h = h;
    for (int i = 0; i < N; ++i) {
      const double ydiff = y_new_[i] - y_[i];
      const double bspl = h * k1_[i] - ydiff;
      dense_.r1[i] = y_[i];
      dense_.r2[i] = ydiff;
      dense_.r3[i] = bspl;
      dense_.r4[i] = ydiff - h * k7_[i] - bspl;
      dense_.r5[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] +
                          d5 * k5_[i] + d6 * k6_[i] + d7 * k7_[i]);
    }
  }

  double initial_step() {
    double d0 = 0.0, d1n = 0.0;
    for (int i = 0; i < N; ++i) {
      const double sc = opt_.atol + opt_.rtol * std::abs(y_[i]);
      d0 += (y_[i] / sc) * (y_[i] / sc);
      d1n += (k1_[i] / sc) * (k1_[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1n = std::sqrt(d1n / N);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, opt_.h_max);

    State<N> y1, f1;
    for (int i = 0; i < N; ++i) y1[i] = y_[i] + h0 * k1_[i];
    f_(y1, f1);
    double d2 = 0.0;
    for (int i = 0; i < N; ++i) {
      const double sc = opt_.atol + opt_.rtol * std::abs(y_[i]);
      d2 += ((f1[i] - k1_[i]) / sc) * ((f1[i] - k1_[i]) / sc);
    }
    d2 = std::sqrt(d2 / N) / h0;

    const double dm = std::max(d1n, d2);
    const double h1 =
        (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, opt_.h_max});
  }

  // Butcher tableau (Dormand & Prince 1980) and Hairer's dense-output weights.
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0,
                          a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                          a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                          a65 = -5103.0 / 18656.0;
  static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0,
                          a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                          a76 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                          e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                          e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;

  F f_;
  Options opt_;
  double t_ = 0.0, h_ = 1e-6;
  long steps_ = 0;
  bool rejected_ = false;
  State<N> y_{}, y_new_{};
  State<N> k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{};
  DenseStep<N> dense_{};
};

// Bisect theta in [lo, hi] for a sign change of g over one dense step;
// returns theta with the bracket narrowed below tol in g's argument units.
template <int N, class G>
double refine_crossing(const DenseStep<N>& dense, G g, double lo, double hi,
                       double tol) {
  double glo = g(dense.eval(lo));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(dense.eval(mid));
    if (std::abs(gm) < tol || hi - lo < 1e-15) return mid;
    if ((glo <= 0.0) == (gm <= 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace fbwave::ode
