#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "swflow/linalg.hpp"

namespace swflow {

// Continuously differentiable exogenous input with an analytic derivative
// and a closed-form bound on sup ||w'||.
//
// Kinds:
//   constant:          w(t) = value
//   sinusoid:          w_i(t) = offset_i + amplitude_i sin(omega t + phase);
//                      optionally frozen at freeze_time (presets align the
//                      freeze with a derivative zero so w stays C^1)
//   piecewise_linear:  per-channel linear interpolation between knots with
//                      quadratically smoothed corners of half-width
//                      smoothing
class DisturbanceSignal {
 public:
  enum class Kind { constant, sinusoid, piecewise_linear };

  static DisturbanceSignal constant(Vector value) {
    DisturbanceSignal d;
    d.kind_ = Kind::constant;
    d.offset_ = std::move(value);
    return d;
  }

  static DisturbanceSignal sinusoid(Vector offset, Vector amplitude, double omega,
                                    double phase = 0.0, double freeze_time = -1.0) {
    if (offset.size() != amplitude.size())
      throw DimensionMismatch("DisturbanceSignal: offset/amplitude size mismatch");
    DisturbanceSignal d;
    d.kind_ = Kind::sinusoid;
    d.offset_ = std::move(offset);
    d.amplitude_ = std::move(amplitude);
    d.omega_ = omega;
    d.phase_ = phase;
    d.freeze_time_ = freeze_time;
    return d;
  }

  static DisturbanceSignal piecewise_linear(std::vector<double> times,
                                            std::vector<Vector> values, double smoothing) {
    if (times.size() < 2 || times.size() != values.size())
      throw std::invalid_argument("DisturbanceSignal: need matching knot times and values");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (times[i] <= times[i - 1])
        throw std::invalid_argument("DisturbanceSignal: knot times must increase");
    if (!(smoothing > 0.0))
      throw std::invalid_argument("DisturbanceSignal: smoothing width must be positive");
    DisturbanceSignal d;
    d.kind_ = Kind::piecewise_linear;
    d.times_ = std::move(times);
    d.values_ = std::move(values);
    d.smoothing_ = smoothing;
    return d;
  }

  Kind kind() const { return kind_; }
  int dim() const {
    return static_cast<int>(kind_ == Kind::piecewise_linear ? values_.front().size()
                                                            : offset_.size());
  }

  Vector value(double t) const {
    switch (kind_) {
      case Kind::constant:
        return offset_;
      case Kind::sinusoid: {
        const double te = effective_time(t);
        Vector w = offset_;
        for (Eigen::Index i = 0; i < w.size(); ++i)
          w(i) += amplitude_(i) * std::sin(omega_ * te + phase_);
        return w;
      }
      case Kind::piecewise_linear:
        return pwl_eval(t, false);
    }
    return offset_;
  }

  Vector derivative(double t) const {
    switch (kind_) {
      case Kind::constant:
        return Vector::Zero(offset_.size());
      case Kind::sinusoid: {
        if (freeze_time_ >= 0.0 && t >= freeze_time_) return Vector::Zero(offset_.size());
        Vector dw(offset_.size());
        for (Eigen::Index i = 0; i < dw.size(); ++i)
          dw(i) = amplitude_(i) * omega_ * std::cos(omega_ * t + phase_);
        return dw;
      }
      case Kind::piecewise_linear:
        return pwl_eval(t, true);
    }
    return Vector::Zero(offset_.size());
  }

  double sup_derivative_norm() const {
    switch (kind_) {
      case Kind::constant:
        return 0.0;
      case Kind::sinusoid: {
        double s = 0.0;
        for (Eigen::Index i = 0; i < amplitude_.size(); ++i)
          s += amplitude_(i) * amplitude_(i);
        return omega_ * std::sqrt(s);
      }
      case Kind::piecewise_linear: {
        double worst = 0.0;
        for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
          const double slope =
              (values_[k + 1] - values_[k]).norm() / (times_[k + 1] - times_[k]);
          worst = std::max(worst, slope);
        }
        return worst;
      }
    }
    return 0.0;
  }

  double freeze_time() const { return freeze_time_; }
  const Vector& offset() const { return offset_; }
  const Vector& amplitude() const { return amplitude_; }
  double omega() const { return omega_; }
  double phase() const { return phase_; }
  const std::vector<double>& knot_times() const { return times_; }
  const std::vector<Vector>& knot_values() const { return values_; }
  double smoothing() const { return smoothing_; }

 private:
  double effective_time(double t) const {
    return (freeze_time_ >= 0.0 && t > freeze_time_) ? freeze_time_ : t;
  }

  // Piecewise-linear value/derivative with corners blended quadratically on
  // [t_k - s, t_k + s]; the blend matches value and slope at both ends.
  Vector pwl_eval(double t, bool want_derivative) const {
    const std::size_t n = times_.size();
    const double t0 = times_.front(), t1 = times_.back();
    auto segment_slope = [&](std::size_t k) -> Vector {
      return (values_[k + 1] - values_[k]) / (times_[k + 1] - times_[k]);
    };
    if (t <= t0) return want_derivative ? Vector::Zero(dim()) : values_.front();
    if (t >= t1) return want_derivative ? Vector::Zero(dim()) : values_.back();
    std::size_t seg = 0;
    while (seg + 2 < n && times_[seg + 1] <= t) ++seg;
    // interior corner blend?
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double d = t - times_[k];
      if (std::abs(d) <= smoothing_) {
        const Vector m0 = segment_slope(k - 1), m1 = segment_slope(k);
        const double x = (d + smoothing_) / (2.0 * smoothing_);  // in [0, 1]
        if (want_derivative) return m0 + (m1 - m0) * x;
        // integral of the blended slope from t_k - s
        const Vector base = values_[k] - m0 * smoothing_;
        return base + (m0 * x + 0.5 * (m1 - m0) * x * x) * (2.0 * smoothing_);
      }
    }
    const Vector m = segment_slope(seg);
    if (want_derivative) return m;
    return values_[seg] + m * (t - times_[seg]);
  }

  Kind kind_ = Kind::constant;
  Vector offset_;
  Vector amplitude_;
  double omega_ = 0.0;
  double phase_ = 0.0;
  double freeze_time_ = -1.0;
  std::vector<double> times_;
  std::vector<Vector> values_;
  double smoothing_ = 0.0;
};

}  // namespace swflow
