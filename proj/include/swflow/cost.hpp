#pragma once

#include <memory>

#include "swflow/linalg.hpp"
#include "swflow/plant.hpp"

namespace swflow {

// Steady-state cost in split form: h penalizes the input, g the output.
// Controllers only ever consume grad_h and grad_g; the value methods exist
// for monitors and reports.
class Cost {
 public:
  virtual ~Cost() = default;
  virtual double h(const Vector& u) const = 0;
  virtual Vector grad_h(const Vector& u) const = 0;
  virtual double g(const Vector& y) const = 0;
  virtual Vector grad_g(const Vector& y) const = 0;
  virtual int input_dim() const = 0;
  virtual int output_dim() const = 0;
  virtual std::shared_ptr<Cost> clone() const = 0;
};

// h(u) = u^T R u, g(y) = (y - y_ref)^T Qy (y - y_ref) with R, Qy > 0.
class QuadraticCost : public Cost {
 public:
  QuadraticCost(Matrix R, Matrix Qy, Vector y_ref)
      : R_(std::move(R)), Qy_(std::move(Qy)), y_ref_(std::move(y_ref)) {
    if (!is_symmetric(R_) || lambda_min_sym(R_) <= 0.0)
      throw std::invalid_argument("QuadraticCost: R must be symmetric positive definite");
    if (!is_symmetric(Qy_) || lambda_min_sym(Qy_) <= 0.0)
      throw std::invalid_argument("QuadraticCost: Qy must be symmetric positive definite");
    if (Qy_.rows() != y_ref_.size())
      throw DimensionMismatch("QuadraticCost: y_ref dimension mismatch");
  }

  double h(const Vector& u) const override { return u.dot(R_ * u); }
  Vector grad_h(const Vector& u) const override { return 2.0 * R_ * u; }
  double g(const Vector& y) const override {
    Vector d = y - y_ref_;
    return d.dot(Qy_ * d);
  }
  Vector grad_g(const Vector& y) const override { return 2.0 * Qy_ * (y - y_ref_); }
  int input_dim() const override { return static_cast<int>(R_.rows()); }
  int output_dim() const override { return static_cast<int>(Qy_.rows()); }
  std::shared_ptr<Cost> clone() const override { return std::make_shared<QuadraticCost>(*this); }

  const Matrix& R() const { return R_; }
  const Matrix& Qy() const { return Qy_; }
  const Vector& y_ref() const { return y_ref_; }

 private:
  Matrix R_, Qy_;
  Vector y_ref_;
};

// f(u) = (G u + H w - y_ref)^4 / 4 for scalar plants: h = 0 and
// g(y) = (y - y_ref)^4 / 4.
class QuarticCost : public Cost {
 public:
  explicit QuarticCost(double y_ref) : y_ref_(y_ref) {}

  double h(const Vector&) const override { return 0.0; }
  Vector grad_h(const Vector& u) const override { return Vector::Zero(u.size()); }
  double g(const Vector& y) const override {
    const double d = y(0) - y_ref_;
    return 0.25 * d * d * d * d;
  }
  Vector grad_g(const Vector& y) const override {
    const double d = y(0) - y_ref_;
    return Vector::Constant(1, d * d * d);
  }
  int input_dim() const override { return 1; }
  int output_dim() const override { return 1; }
  std::shared_ptr<Cost> clone() const override { return std::make_shared<QuarticCost>(*this); }

  double y_ref() const { return y_ref_; }

 private:
  double y_ref_;
};

// Smoothness and curvature data of the reduced cost f(u) = h(u) + g(Gu + Hw).
struct CostConstants {
  double ell_u = 0.0;  // Lipschitz constant of grad h
  double ell_y = 0.0;  // Lipschitz constant of grad g
  double ell = 0.0;    // ell_u + ell_y ||G||^2
  double mu = 0.0;     // PL / strong convexity modulus of f
  double ell0 = 0.0;   // reverse-Lipschitz slope
  double nu0 = 0.0;    // reverse-Lipschitz dead zone radius
};

inline void check_cost_dims(const Cost& cost, const SteadyStateMap& map, const Vector& u,
                            const Vector& w) {
  if (u.size() != map.G.cols() || u.size() != cost.input_dim())
    throw DimensionMismatch("cost: input dimension mismatch");
  if (w.size() != map.H.cols()) throw DimensionMismatch("cost: disturbance dimension mismatch");
  if (map.G.rows() != cost.output_dim())
    throw DimensionMismatch("cost: output dimension mismatch");
}

inline double f_value(const Cost& cost, const SteadyStateMap& map, const Vector& u,
                      const Vector& w) {
  check_cost_dims(cost, map, u, w);
  return cost.h(u) + cost.g(map.G * u + map.H * w);
}

inline Vector grad_f(const Cost& cost, const SteadyStateMap& map, const Vector& u,
                     const Vector& w) {
  check_cost_dims(cost, map, u, w);
  return cost.grad_h(u) + map.G.transpose() * cost.grad_g(map.G * u + map.H * w);
}

inline Vector optimal_input(const Cost& cost, const SteadyStateMap& map, const Vector& w) {
  if (const auto* quad = dynamic_cast<const QuadraticCost*>(&cost)) {
    // grad f = 2 R u + 2 G^T Qy (G u + H w - y_ref) = 0
    Matrix K = quad->R() + map.G.transpose() * quad->Qy() * map.G;
    Eigen::FullPivLU<Matrix> lu(K);
    if (!lu.isInvertible())
      throw NotSolvable("optimal_input: R + G^T Qy G is singular");
    return lu.solve(map.G.transpose() * quad->Qy() * (quad->y_ref() - map.H * w));
  }
  if (const auto* quartic = dynamic_cast<const QuarticCost*>(&cost)) {
    const double G = map.G(0, 0);
    if (G == 0.0) throw NotSolvable("optimal_input: quartic cost with G = 0");
    return Vector::Constant(1, (quartic->y_ref() - (map.H * w)(0)) / G);
  }
  throw NotSolvable("optimal_input: no closed form for this cost");
}

inline CostConstants cost_constants(const QuadraticCost& cost, const SteadyStateMap& map) {
  CostConstants c;
  c.ell_u = 2.0 * lambda_max_sym(cost.R());
  c.ell_y = 2.0 * lambda_max_sym(cost.Qy());
  c.ell = c.ell_u + c.ell_y * map.norm_G * map.norm_G;
  c.mu = 2.0 * lambda_min_sym(cost.R() + map.G.transpose() * cost.Qy() * map.G);
  // strong convexity gives the reverse-Lipschitz property with slope mu and
  // no dead zone
  c.ell0 = 0.5 * c.mu;
  c.nu0 = 0.0;
  return c;
}

// Local constants for the quartic cost on the ball |u - u*| <= ball_radius.
// f''(u) = 3 G^2 (G u + H w - y_ref)^2 = 3 G^4 (u - u*)^2, so the local
// gradient Lipschitz constant is 3 G^4 ball_radius^2.  |grad f| =
// |G|^4 |u - u*|^3, which exceeds ell0 |u - u*| outside |u - u*| > nu0 with
// ell0 = G^4 nu0^2.
inline CostConstants quartic_constants(const QuarticCost&, const SteadyStateMap& map,
                                       double ball_radius, double nu0 = 1.0) {
  const double G = map.G(0, 0);
  const double g2 = G * G;
  CostConstants c;
  c.ell_u = 0.0;
  c.ell_y = 3.0 * g2 * ball_radius * ball_radius;  // |y - y_ref| <= |G| ball_radius
  c.ell = c.ell_y * g2;
  c.mu = 0.0;  // not PL: the quartic is flat at the optimum
  c.nu0 = nu0;
  c.ell0 = g2 * g2 * nu0 * nu0;
  return c;
}

inline bool check_pl(const Cost& cost, const SteadyStateMap& map, const Vector& w,
                     const std::vector<Vector>& samples, double mu) {
  const Vector ustar = optimal_input(cost, map, w);
  const double fstar = f_value(cost, map, ustar, w);
  for (const Vector& u : samples) {
    const double lhs = 0.5 * grad_f(cost, map, u, w).squaredNorm();
    const double rhs = mu * (f_value(cost, map, u, w) - fstar);
    if (lhs < rhs - 1e-9) return false;
  }
  return true;
}

inline bool check_reverse_lipschitz(const Cost& cost, const SteadyStateMap& map, const Vector& w,
                                    const std::vector<Vector>& samples, double ell0, double nu0) {
  const Vector ustar = optimal_input(cost, map, w);
  for (const Vector& u : samples) {
    const double dist = (u - ustar).norm();
    if (dist <= nu0) continue;
    if (grad_f(cost, map, u, w).norm() <= ell0 * dist) return false;
  }
  return true;
}

}  // namespace swflow
