#pragma once

#include "hinge/basis.hpp"
#include "hinge/nonlinearity.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hinge {

using SpaceTimeFn = std::function<double(double x, double t)>;

/// Distributed load f(x, t). time_deriv may be empty, in which case only
/// the auditors that need df/dt refuse to run.
struct Forcing {
  std::string id = "zero";
  SpaceTimeFn eval = [](double, double) { return 0.0; };
  SpaceTimeFn time_deriv = [](double, double) { return 0.0; };

  bool is_zero() const { return id == "zero"; }
  bool has_time_deriv() const { return static_cast<bool>(time_deriv); }
};

/// Forcing catalog:
///   zero
///   mode_cos [amp, mode = 1, omega = 1]: amp sin(mode pi (x-a)/L) cos(omega t)
Forcing make_forcing(std::string_view id, std::span<const double> params,
                     const Interval& interval);

/// Initial-data catalog (functions of x on the interval):
///   zero
///   sine_series [a_1, a_2, ...]: sum_m a_m sin(m pi (x-a)/L)
///   eigenfunction [i, amp = 1]: amp e_i(x)
///   parabola [amp = 1]: amp (x-a)(b-x)
std::function<double(double)> make_initial(std::string_view id, std::span<const double> params,
                                           const Interval& interval);

/// Modal state: u_k(t) = sum g_i e_i, u_k'(t) = sum gdot_i e_i.
struct ModalState {
  double t = 0.0;
  Eigen::VectorXd g;
  Eigen::VectorXd gdot;

  bool finite() const { return g.allFinite() && gdot.allFinite(); }
};

enum class Method { Splitting, Rk4 };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

/// The projected system g'' + Lambda g + Gamma1(g') + Gamma2(g) = G(t),
/// Lambda = diag(lambda_i^2). Immutable after construction.
class OdeSystem {
 public:
  OdeSystem(BasisPtr basis, Quadrature quad, NonlinearFn f1, NonlinearFn f2, Forcing forcing);

  const EigenBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const Quadrature& quadrature() const { return quad_; }
  const NodeTable& table() const { return table_; }
  const NonlinearFn& f1() const { return f1_; }
  const NonlinearFn& f2() const { return f2_; }
  const Forcing& forcing() const { return forcing_; }
  /// Diagonal of Lambda: lambda_i^2.
  const Eigen::VectorXd& lam_sq() const { return lam_sq_; }
  int size() const { return basis_->size(); }

  /// Gamma(y)_j = (F(sum y_m e_m), e_j) through the tabulated node values.
  Eigen::VectorXd gamma(const NonlinearFn& fn, const Eigen::VectorXd& coeffs) const;
  /// Same map evaluated with on-the-fly sine evaluations; reference path.
  Eigen::VectorXd gamma_direct(const NonlinearFn& fn, const Eigen::VectorXd& coeffs) const;

  /// G(t)_j = (f(t), e_j).
  Eigen::VectorXd load(double t) const;

  /// Forcing sampled at the quadrature nodes.
  Eigen::VectorXd forcing_at_nodes(double t) const;
  Eigen::VectorXd forcing_rate_at_nodes(double t) const;

 private:
  BasisPtr basis_;
  Quadrature quad_;
  NodeTable table_;
  NonlinearFn f1_;
  NonlinearFn f2_;
  Forcing forcing_;
  Eigen::VectorXd lam_sq_;
};

struct Trajectory {
  std::vector<ModalState> states;
  double dt = 0.0;
  Method method = Method::Splitting;
};

/// Default step min(1e-3, 0.1 / lambda_k).
double default_dt(const EigenBasis& basis);
/// Largest step accepted by rk4: 2.5 / lambda_k.
double rk4_dt_limit(const EigenBasis& basis);

/// L2 projection of the initial displacement y and velocity z onto W_k.
ModalState project_initial_data(const std::function<double(double)>& y,
                                const std::function<double(double)>& z, const OdeSystem& system);

/// g'' = G(t) - Lambda g - Gamma1(gdot) - Gamma2(g).
Eigen::VectorXd modal_rhs(const OdeSystem& system, const ModalState& state);

/// One step. Splitting: Strang composition of a nonlinear half kick
/// (two explicit-midpoint sub-steps, forcing frozen at the kick's end of
/// the step), the exact per-mode rotation, and a second half kick.
/// Rk4: classical four-stage scheme on (g, gdot); rejects dt > 2.5/lambda_k.
ModalState step(const OdeSystem& system, const ModalState& state, double dt, Method method);

/// Integrates to T, recording the initial state, every output_every-th step
/// and the final state at exactly T (the last step is shortened).
/// Throws std::runtime_error on a non-finite state.
Trajectory solve(const OdeSystem& system, const ModalState& initial, double T, double dt,
                 Method method, int output_every = 1);

}  // namespace hinge
