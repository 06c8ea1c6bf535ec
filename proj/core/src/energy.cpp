#include "hinge/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hinge {
namespace {

double weighted_sum(const Quadrature& quad, const Eigen::VectorXd& values) {
  const auto w = quad.weights();
  double s = 0.0;
  for (Eigen::Index q = 0; q < values.size(); ++q) s += w[q] * values[q];
  return s;
}

double weighted_square(const Quadrature& quad, const Eigen::VectorXd& values) {
  const auto w = quad.weights();
  double s = 0.0;
  for (Eigen::Index q = 0; q < values.size(); ++q) s += w[q] * values[q] * values[q];
  return s;
}

Eigen::VectorXd apply(const NonlinearFn& fn, Eigen::VectorXd nodal) {
  for (Eigen::Index q = 0; q < nodal.size(); ++q) nodal[q] = fn.eval(nodal[q]);
  return nodal;
}

double potential_energy(const OdeSystem& sys, const Eigen::VectorXd& u_nodes) {
  if (sys.f2().is_zero()) return 0.0;
  if (!sys.f2().has_primitive()) {
    throw std::invalid_argument("restoring nonlinearity '" + sys.f2().id + "' has no primitive");
  }
  Eigen::VectorXd p = u_nodes;
  for (Eigen::Index q = 0; q < p.size(); ++q) p[q] = sys.f2().primitive(p[q]);
  return weighted_sum(sys.quadrature(), p);
}

}  // namespace

EnergyReport energy_report(const OdeSystem& system, const ModalState& state) {
  const auto& basis = system.basis();
  const auto& table = system.table();
  const Eigen::VectorXd u = table.synthesize(state.g);
  const Eigen::VectorXd v = table.synthesize(state.gdot);

  EnergyReport r;
  r.t = state.t;
  r.kinetic = 0.5 * squared_norm(basis, state.gdot, Space::L2);
  r.elastic = 0.5 * squared_norm(basis, state.g, Space::H2Star);
  r.potential = potential_energy(system, u);
  r.total = r.kinetic + r.elastic + r.potential;
  if (!system.f1().is_zero()) {
    r.dissipation_rate = weighted_sum(system.quadrature(),
                                      (apply(system.f1(), v).array() * v.array()).matrix());
  }
  if (!system.forcing().is_zero()) {
    r.work_rate = weighted_sum(system.quadrature(),
                               (system.forcing_at_nodes(state.t).array() * v.array()).matrix());
  }
  return r;
}

std::vector<EnergyReport> energy_series(const OdeSystem& system, const Trajectory& traj) {
  std::vector<EnergyReport> out;
  out.reserve(traj.states.size());
  for (const auto& s : traj.states) out.push_back(energy_report(system, s));
  return out;
}

std::vector<double> identity_residuals(const std::vector<EnergyReport>& series) {
  std::vector<double> res;
  if (series.size() < 2) return res;
  res.reserve(series.size() - 1);
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const auto& p = series[i];
    const auto& q = series[i + 1];
    const double h = q.t - p.t;
    const double dissipated = 0.5 * h * (p.dissipation_rate + q.dissipation_rate);
    const double worked = 0.5 * h * (p.work_rate + q.work_rate);
    res.push_back(q.total - p.total + dissipated - worked);
  }
  return res;
}

std::vector<double> cumulative_identity_residuals(const std::vector<EnergyReport>& series) {
  auto res = identity_residuals(series);
  double run = 0.0;
  for (auto& r : res) {
    run += r;
    r = run;
  }
  return res;
}

double identity_residual(const OdeSystem& system, const Trajectory& traj, std::size_t i) {
  if (i + 1 >= traj.states.size()) throw std::out_of_range("identity_residual segment index");
  const std::vector<EnergyReport> pair = {energy_report(system, traj.states[i]),
                                          energy_report(system, traj.states[i + 1])};
  return identity_residuals(pair).front();
}

std::string_view to_string(Bound b) {
  switch (b) {
    case Bound::Step2: return "step2";
    case Bound::Step3: return "step3";
    case Bound::Step4: return "step4";
    case Bound::H4Recovery: return "h4_recovery";
  }
  return "unknown";
}

double BoundReport::min_margin() const {
  if (margins.empty()) return 0.0;
  return *std::min_element(margins.begin(), margins.end());
}

void finalize(BoundReport& report) {
  report.margins.resize(report.lhs.size());
  double max_rhs = 0.0;
  for (std::size_t i = 0; i < report.lhs.size(); ++i) {
    report.margins[i] = report.rhs[i] - report.lhs[i];
    max_rhs = std::max(max_rhs, std::abs(report.rhs[i]));
  }
  report.tolerance = 1e-7 * (1.0 + max_rhs);
  report.passed = true;
  for (double m : report.margins) {
    if (!(m >= -report.tolerance)) report.passed = false;
  }
}

double displacement_bound(const OdeSystem& system, const Trajectory& traj) {
  double M = 0.0;
  for (const auto& s : traj.states) M = std::max(M, sup_norm_bound(system.basis(), s.g));
  return M;
}

double velocity_bound(const OdeSystem& system, const Trajectory& traj) {
  double M = 0.0;
  for (const auto& s : traj.states) M = std::max(M, sup_norm_bound(system.basis(), s.gdot));
  return M;
}

BoundReport check_apriori_bounds(const OdeSystem& system, const Trajectory& traj, Bound which) {
  if (traj.states.empty()) throw std::invalid_argument("bound audit needs a non-empty trajectory");
  const auto& basis = system.basis();
  const auto& quad = system.quadrature();
  const auto& table = system.table();
  const double length = basis.interval().length();

  BoundReport rep;
  rep.bound = which;
  for (const auto& s : traj.states) rep.times.push_back(s.t);

  switch (which) {
    case Bound::Step2: {
      const auto& s0 = traj.states.front();
      const double v0 = potential_energy(system, table.synthesize(s0.g));
      const double c = system.f2().floor;
      const double base = 0.5 * squared_norm(basis, s0.gdot, Space::L2) +
                          0.5 * squared_norm(basis, s0.g, Space::H2Star) + (v0 - c * length);
      double forcing_integral = 0.0;  // 1/2 int_0^t |f|^2
      double prev_f2 = weighted_square(quad, system.forcing_at_nodes(s0.t));
      for (std::size_t n = 0; n < traj.states.size(); ++n) {
        const auto& s = traj.states[n];
        if (n > 0) {
          const double f2n = weighted_square(quad, system.forcing_at_nodes(s.t));
          forcing_integral += 0.5 * 0.5 * (s.t - traj.states[n - 1].t) * (prev_f2 + f2n);
          prev_f2 = f2n;
        }
        rep.lhs.push_back(0.5 * squared_norm(basis, s.gdot, Space::L2) +
                          0.5 * squared_norm(basis, s.g, Space::H2Star));
        rep.rhs.push_back(std::exp(s.t) * (base + forcing_integral));
      }
      rep.constants = {{"floor_c", c},
                       {"interval_length", length},
                       {"V_u0", v0},
                       {"V_u0_minus_c_length", v0 - c * length},
                       {"initial_budget", base}};
      break;
    }
    case Bound::Step3: {
      if (!system.forcing().has_time_deriv()) {
        throw std::invalid_argument("step3 audit needs a forcing with a time derivative");
      }
      const double lam1_sq = basis.eigenvalue(1) * basis.eigenvalue(1);
      const double M = displacement_bound(system, traj);
      const double lip = lipschitz_bound(system.f2(), M);
      const double C = 1.0 + std::max(1.0, 1.0 / lam1_sq) * lip * lip;

      auto lhs_of = [&](const ModalState& s) {
        const Eigen::VectorXd acc = modal_rhs(system, s);
        return 0.5 * acc.squaredNorm() + 0.5 * squared_norm(basis, s.gdot, Space::H2Star);
      };
      const double base = lhs_of(traj.states.front());
      double rate_integral = 0.0;  // int_0^t |f'|^2
      double prev = weighted_square(quad, system.forcing_rate_at_nodes(traj.states.front().t));
      for (std::size_t n = 0; n < traj.states.size(); ++n) {
        const auto& s = traj.states[n];
        if (n > 0) {
          const double cur = weighted_square(quad, system.forcing_rate_at_nodes(s.t));
          rate_integral += 0.5 * (s.t - traj.states[n - 1].t) * (prev + cur);
          prev = cur;
        }
        rep.lhs.push_back(n == 0 ? base : lhs_of(s));
        rep.rhs.push_back(std::exp(C * s.t) * (base + rate_integral));
      }
      rep.constants = {{"lambda1_sq", lam1_sq},
                       {"sup_norm_bound_M", M},
                       {"lipschitz_F2_prime", lip},
                       {"gronwall_C", C},
                       {"initial_budget", base}};
      rep.notes.push_back(
          "gronwall_C is an implementation-chosen witness; the analytic argument only "
          "asserts that some k-independent constant exists");
      break;
    }
    case Bound::Step4:
    case Bound::H4Recovery: {
      double needed = 0.0;  // smallest factor K with lhs <= K * (sum of the four squares)
      for (const auto& s : traj.states) {
        const Eigen::VectorXd acc = modal_rhs(system, s);
        const Eigen::VectorXd u = table.synthesize(s.g);
        const Eigen::VectorXd v = table.synthesize(s.gdot);
        const Eigen::VectorXd f = system.forcing_at_nodes(s.t);
        const Eigen::VectorXd F1 = apply(system.f1(), v);
        const Eigen::VectorXd F2 = apply(system.f2(), u);
        const double h4_sq = squared_norm(basis, s.g, Space::H4Star);
        if (which == Bound::Step4) {
          const double sum = weighted_square(quad, f) + weighted_square(quad, F1) +
                             weighted_square(quad, F2) + acc.squaredNorm();
          if (sum > 0.0) needed = std::max(needed, h4_sq / sum);
          rep.lhs.push_back(h4_sq);
          rep.rhs.push_back(2.0 * sum);
        } else {
          const Eigen::VectorXd acc_nodes = table.synthesize(acc);
          const Eigen::VectorXd residual = f - F1 - F2 - acc_nodes;
          rep.lhs.push_back(std::sqrt(h4_sq));
          rep.rhs.push_back(std::sqrt(weighted_square(quad, residual)) + 1e-8);
        }
      }
      if (which == Bound::Step4) {
        // Cauchy-Schwarz on four terms only guarantees K = 4; the stated 2 can fail.
        rep.constants = {{"stated_factor", 2.0}, {"max_factor_needed", needed}};
      }
      break;
    }
  }
  finalize(rep);
  return rep;
}

}  // namespace hinge
