#pragma once

#include "hinge/galerkin_ode.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hinge {

struct EnergyReport {
  double t = 0.0;
  double kinetic = 0.0;           // 1/2 |u'|_{L2}^2
  double elastic = 0.0;           // 1/2 |u|_{H2*}^2
  double potential = 0.0;         // V(u) = int f2(u) dx
  double total = 0.0;
  double dissipation_rate = 0.0;  // (F1(u'), u')
  double work_rate = 0.0;         // (f, u')
};

EnergyReport energy_report(const OdeSystem& system, const ModalState& state);
std::vector<EnergyReport> energy_series(const OdeSystem& system, const Trajectory& traj);

/// E(t_{i+1}) - E(t_i) + int dissipation - int work over output segment i,
/// with trapezoid time integrals on the output cadence.
double identity_residual(const OdeSystem& system, const Trajectory& traj, std::size_t i);
std::vector<double> identity_residuals(const std::vector<EnergyReport>& series);
/// Running sum of the segment residuals, i.e. the residual of the energy
/// identity integrated from 0 to each output time.
std::vector<double> cumulative_identity_residuals(const std::vector<EnergyReport>& series);

enum class Bound { Step2, Step3, Step4, H4Recovery };

std::string_view to_string(Bound b);

struct BoundReport {
  Bound bound = Bound::Step2;
  std::vector<double> times;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> margins;
  double tolerance = 0.0;
  bool passed = true;
  std::map<std::string, double> constants;
  std::vector<std::string> notes;

  double min_margin() const;
};

/// Fills margins, tolerance = 1e-7 (1 + max|rhs|) and the pass flag.
void finalize(BoundReport& report);

/// Audits one a priori estimate along a trajectory.
///  Step2: 1/2|u'|^2 + 1/2|u|_{H2*}^2 <= e^t (E_0 + V(u_0) - c(b-a) + 1/2 int |f|^2)
///  Step3: 1/2|u''|^2 + 1/2|u'|_{H2*}^2 <= e^{Ct}(1/2|u''(0)|^2 + 1/2|u_1|_{H2*}^2 + int |f'|^2),
///         C = 1 + max(1, 1/lambda_1^2) sup_{|s|<=M} |F2'(s)|^2, M a sup-norm bound of u
///  Step4: |u|_{H4*}^2 <= 2(|f|^2 + |F1(u')|^2 + |F2(u)|^2 + |u''|^2)
///  H4Recovery: |u|_{H4*} <= |f - F1(u') - F2(u) - u''|_{L2} + 1e-8
/// u'' always comes from modal_rhs. Step3 throws std::invalid_argument when
/// the forcing lacks a time derivative.
BoundReport check_apriori_bounds(const OdeSystem& system, const Trajectory& traj, Bound which);

/// max over output states of sup_norm_bound(g) (or of gdot).
double displacement_bound(const OdeSystem& system, const Trajectory& traj);
double velocity_bound(const OdeSystem& system, const Trajectory& traj);

}  // namespace hinge
