#include "hinge/galerkin_ode.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hinge {

Forcing make_forcing(std::string_view id, std::span<const double> params,
                     const Interval& interval) {
  if (id == "zero") {
    if (!params.empty()) throw std::invalid_argument("forcing 'zero' takes no parameters");
    return Forcing{};
  }
  if (id == "mode_cos") {
    if (params.empty() || params.size() > 3) {
      throw std::invalid_argument("forcing 'mode_cos' takes [amp, mode, omega]");
    }
    const double amp = params[0];
    const double mode = params.size() > 1 ? params[1] : 1.0;
    const double omega = params.size() > 2 ? params[2] : 1.0;
    if (mode < 1.0 || mode != std::floor(mode)) {
      throw std::invalid_argument("forcing 'mode_cos' needs a positive integer mode");
    }
    const double w = mode * std::numbers::pi / interval.length();
    const double a = interval.a;
    Forcing f;
    f.id = "mode_cos";
    f.eval = [=](double x, double t) { return amp * std::sin(w * (x - a)) * std::cos(omega * t); };
    f.time_deriv = [=](double x, double t) {
      return -amp * omega * std::sin(w * (x - a)) * std::sin(omega * t);
    };
    return f;
  }
  throw std::invalid_argument("unknown forcing id '" + std::string(id) + "'");
}

std::function<double(double)> make_initial(std::string_view id, std::span<const double> params,
                                           const Interval& interval) {
  const double a = interval.a;
  const double b = interval.b;
  const double L = interval.length();
  if (id == "zero") {
    if (!params.empty()) throw std::invalid_argument("initial 'zero' takes no parameters");
    return [](double) { return 0.0; };
  }
  if (id == "sine_series") {
    if (params.empty()) throw std::invalid_argument("initial 'sine_series' needs amplitudes");
    std::vector<double> amps(params.begin(), params.end());
    return [amps, a, L](double x) {
      double s = 0.0;
      for (std::size_t m = 0; m < amps.size(); ++m) {
        s += amps[m] * std::sin((m + 1) * std::numbers::pi * (x - a) / L);
      }
      return s;
    };
  }
  if (id == "eigenfunction") {
    if (params.empty() || params.size() > 2) {
      throw std::invalid_argument("initial 'eigenfunction' takes [i, amp]");
    }
    const double i = params[0];
    if (i < 1.0 || i != std::floor(i)) {
      throw std::invalid_argument("initial 'eigenfunction' needs a positive integer index");
    }
    const double amp = params.size() > 1 ? params[1] : 1.0;
    const double nf = std::sqrt(2.0 / L);
    return [=](double x) { return amp * nf * std::sin(i * std::numbers::pi * (x - a) / L); };
  }
  if (id == "parabola") {
    if (params.size() > 1) throw std::invalid_argument("initial 'parabola' takes [amp]");
    const double amp = params.empty() ? 1.0 : params[0];
    return [=](double x) { return amp * (x - a) * (b - x); };
  }
  throw std::invalid_argument("unknown initial-data id '" + std::string(id) + "'");
}

std::string_view to_string(Method m) { return m == Method::Rk4 ? "rk4" : "splitting"; }

Method parse_method(std::string_view name) {
  if (name == "splitting") return Method::Splitting;
  if (name == "rk4") return Method::Rk4;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected splitting or rk4)");
}

// ---------------------------------------------------------------------------

OdeSystem::OdeSystem(BasisPtr basis, Quadrature quad, NonlinearFn f1, NonlinearFn f2,
                     Forcing forcing)
    : basis_(std::move(basis)),
      quad_(std::move(quad)),
      table_(*basis_, quad_),
      f1_(std::move(f1)),
      f2_(std::move(f2)),
      forcing_(std::move(forcing)) {
  lam_sq_ = basis_->eigenvalues().array().square();
}

Eigen::VectorXd OdeSystem::gamma(const NonlinearFn& fn, const Eigen::VectorXd& coeffs) const {
  if (fn.is_zero()) return Eigen::VectorXd::Zero(size());
  Eigen::VectorXd nodal = table_.synthesize(coeffs);
  for (Eigen::Index q = 0; q < nodal.size(); ++q) nodal[q] = fn.eval(nodal[q]);
  return table_.analyze(nodal);
}

Eigen::VectorXd OdeSystem::gamma_direct(const NonlinearFn& fn,
                                        const Eigen::VectorXd& coeffs) const {
  const auto nodes = quad_.nodes();
  const auto weights = quad_.weights();
  const double nf = basis_->norm_factor();
  const double a = basis_->interval().a;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    double u = 0.0;
    for (int i = 1; i <= size(); ++i) {
      u += coeffs[i - 1] * nf * std::sin(basis_->wavenumber(i) * (nodes[q] - a));
    }
    const double Fw = weights[q] * fn.eval(u);
    for (int i = 1; i <= size(); ++i) {
      out[i - 1] += Fw * nf * std::sin(basis_->wavenumber(i) * (nodes[q] - a));
    }
  }
  return out;
}

Eigen::VectorXd OdeSystem::forcing_at_nodes(double t) const {
  const auto nodes = quad_.nodes();
  Eigen::VectorXd f(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t q = 0; q < nodes.size(); ++q) f[q] = forcing_.eval(nodes[q], t);
  return f;
}

Eigen::VectorXd OdeSystem::forcing_rate_at_nodes(double t) const {
  if (!forcing_.has_time_deriv()) {
    throw std::logic_error("forcing '" + forcing_.id + "' has no time derivative");
  }
  const auto nodes = quad_.nodes();
  Eigen::VectorXd f(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t q = 0; q < nodes.size(); ++q) f[q] = forcing_.time_deriv(nodes[q], t);
  return f;
}

Eigen::VectorXd OdeSystem::load(double t) const {
  if (forcing_.is_zero()) return Eigen::VectorXd::Zero(size());
  return table_.analyze(forcing_at_nodes(t));
}

// ---------------------------------------------------------------------------

double default_dt(const EigenBasis& basis) {
  return std::min(1e-3, 0.1 / basis.eigenvalue(basis.size()));
}

double rk4_dt_limit(const EigenBasis& basis) { return 2.5 / basis.eigenvalue(basis.size()); }

ModalState project_initial_data(const std::function<double(double)>& y,
                                const std::function<double(double)>& z, const OdeSystem& system) {
  ModalState s;
  s.t = 0.0;
  s.g = analyze(y, system.basis_ptr(), system.quadrature()).coeffs();
  s.gdot = analyze(z, system.basis_ptr(), system.quadrature()).coeffs();
  return s;
}

namespace {

Eigen::VectorXd acceleration(const OdeSystem& sys, double t, const Eigen::VectorXd& g,
                             const Eigen::VectorXd& v) {
  Eigen::VectorXd a = sys.load(t);
  a.array() -= sys.lam_sq().array() * g.array();
  if (!sys.f1().is_zero()) a -= sys.gamma(sys.f1(), v);
  if (!sys.f2().is_zero()) a -= sys.gamma(sys.f2(), g);
  return a;
}

// Advances v under v' = G(t_force) - Gamma2(g) - Gamma1(v) for a time h with g frozen.
void kick(const OdeSystem& sys, double t_force, const Eigen::VectorXd& g, Eigen::VectorXd& v,
          double h) {
  Eigen::VectorXd base = sys.load(t_force);
  if (!sys.f2().is_zero()) base -= sys.gamma(sys.f2(), g);
  if (sys.f1().is_zero()) {
    v += h * base;
    return;
  }
  const double hs = 0.5 * h;
  for (int sub = 0; sub < 2; ++sub) {
    Eigen::VectorXd mid = v + (0.5 * hs) * (base - sys.gamma(sys.f1(), v));
    v += hs * (base - sys.gamma(sys.f1(), mid));
  }
}

void rotate(const OdeSystem& sys, Eigen::VectorXd& g, Eigen::VectorXd& v, double dt) {
  const auto& lam = sys.basis().eigenvalues();
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double w = lam[i];
    const double c = std::cos(w * dt);
    const double s = std::sin(w * dt);
    const double gi = g[i];
    const double vi = v[i];
    g[i] = gi * c + vi * s / w;
    v[i] = -gi * w * s + vi * c;
  }
}

ModalState step_splitting(const OdeSystem& sys, const ModalState& state, double dt) {
  ModalState out = state;
  kick(sys, state.t, out.g, out.gdot, 0.5 * dt);
  rotate(sys, out.g, out.gdot, dt);
  out.t = state.t + dt;
  kick(sys, out.t, out.g, out.gdot, 0.5 * dt);
  return out;
}

ModalState step_rk4(const OdeSystem& sys, const ModalState& s, double dt) {
  const double limit = rk4_dt_limit(sys.basis());
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "rk4 step dt = " << dt << " exceeds the stability bound 2.5/lambda_k = " << limit;
    throw std::invalid_argument(msg.str());
  }
  const double h = dt;
  const Eigen::VectorXd& g = s.g;
  const Eigen::VectorXd& v = s.gdot;

  const Eigen::VectorXd k1g = v;
  const Eigen::VectorXd k1v = acceleration(sys, s.t, g, v);
  const Eigen::VectorXd k2g = v + 0.5 * h * k1v;
  const Eigen::VectorXd k2v = acceleration(sys, s.t + 0.5 * h, g + 0.5 * h * k1g, k2g);
  const Eigen::VectorXd k3g = v + 0.5 * h * k2v;
  const Eigen::VectorXd k3v = acceleration(sys, s.t + 0.5 * h, g + 0.5 * h * k2g, k3g);
  const Eigen::VectorXd k4g = v + h * k3v;
  const Eigen::VectorXd k4v = acceleration(sys, s.t + h, g + h * k3g, k4g);

  ModalState out;
  out.t = s.t + h;
  out.g = g + (h / 6.0) * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
  out.gdot = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  return out;
}

}  // namespace

Eigen::VectorXd modal_rhs(const OdeSystem& system, const ModalState& state) {
  return acceleration(system, state.t, state.g, state.gdot);
}

ModalState step(const OdeSystem& system, const ModalState& state, double dt, Method method) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step needs dt > 0");
  return method == Method::Rk4 ? step_rk4(system, state, dt) : step_splitting(system, state, dt);
}

Trajectory solve(const OdeSystem& system, const ModalState& initial, double T, double dt,
                 Method method, int output_every) {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("solve needs T > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("solve needs dt > 0");
  if (output_every < 1) throw std::invalid_argument("output_every must be >= 1");
  if (initial.g.size() != system.size() || initial.gdot.size() != system.size()) {
    throw std::invalid_argument("initial state size does not match the system");
  }
  if (method == Method::Rk4 && dt > rk4_dt_limit(system.basis()) * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "rk4 step dt = " << dt << " exceeds the stability bound 2.5/lambda_k = "
        << rk4_dt_limit(system.basis());
    throw std::invalid_argument(msg.str());
  }

  const auto n_steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  Trajectory traj;
  traj.dt = dt;
  traj.method = method;
  traj.states.reserve(static_cast<std::size_t>(n_steps / output_every + 2));

  ModalState state = initial;
  state.t = 0.0;
  traj.states.push_back(state);

  for (long j = 1; j <= n_steps; ++j) {
    const double t_next = (j == n_steps) ? T : j * dt;
    state = step(system, state, t_next - state.t, method);
    state.t = t_next;
    if (!state.finite()) {
      std::ostringstream msg;
      msg << "non-finite modal state at t = " << t_next << " (step " << j << " of " << n_steps
          << ", dt = " << dt << ", method " << to_string(method) << ")";
      throw std::runtime_error(msg.str());
    }
    if (j % output_every == 0 || j == n_steps) traj.states.push_back(state);
  }
  return traj;
}

}  // namespace hinge
