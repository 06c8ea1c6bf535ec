#pragma once

#include "hinge/energy.hpp"
#include "hinge/galerkin_ode.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hinge {

using InitialFn = std::function<double(double)>;

/// Everything needed to build and run one Galerkin approximation.
struct ProblemSetup {
  Interval interval{0.0, 3.14159265358979323846};
  int k = 8;
  double T = 1.0;
  std::optional<double> dt;            // default_dt(basis) when empty
  Method method = Method::Splitting;
  std::optional<int> output_every;     // about every 0.01 time units when empty
  std::optional<int> quadrature_nodes;
  NonlinearFn f1 = make_nonlinearity("zero");
  NonlinearFn f2 = make_nonlinearity("zero");
  Forcing forcing;
  InitialFn y = [](double) { return 0.0; };
  InitialFn z = [](double) { return 0.0; };

  ProblemSetup with_k(int new_k) const;
  double resolved_dt() const;
  int resolved_output_every() const;
};

/// Shared nonlinear benchmark on (0, pi): F1 = cubic_damping(0.5),
/// F2 = cubic_minus_linear, f = 0.1 sin(x) cos(t), y = sin(x),
/// z = 0.5 sin(2x), T = 5.
ProblemSetup benchmark_setup(int k = 16);

std::shared_ptr<const OdeSystem> build_system(const ProblemSetup& setup);

struct Run {
  std::shared_ptr<const OdeSystem> system;
  Trajectory trajectory;
};

Run run(const ProblemSetup& setup);

/// Runs the setups concurrently; results keep the input order.
std::vector<Run> run_all(const std::vector<ProblemSetup>& setups);

/// A table of (parameter, metrics...) rows.
struct Ladder {
  std::string parameter;
  std::vector<std::string> metric_names;
  std::vector<double> parameters;
  std::vector<std::vector<double>> metrics;  // one row per parameter
};

struct StudyReport {
  std::string study_id;
  std::vector<Ladder> ladders;
  std::map<std::string, double> rates;
  std::map<std::string, double> constants;
  bool passed = false;
  std::vector<std::string> notes;
};

/// Cauchy behavior in k: metric(k_j) = max over output times of
/// |u_{k_{j+1}} - u_{k_j}| in L2 and H2* (smaller field zero padded). All
/// runs share T, dt (default for the largest k), output cadence and method.
/// Passes when every metric strictly decreases along the ladder; pairs that
/// are both at round-off level (<= 1e-12) count as non-increasing.
StudyReport convergence_study(const ProblemSetup& base, const std::vector<int>& k_ladder);

/// Runs u from the base data and v from the data plus eps e_mode, and checks
///   D(t) = 1/2|u'-v'|^2 + 1/2|u-v|_{H2*}^2 <= D(0) e^{Ct} (1 + 1e-6),
/// C = 1 + L^2/lambda_1^2, L = sup_{|s|<=M}|F2'(s)|, M bounding |u|, |v|.
StudyReport uniqueness_experiment(const ProblemSetup& base, double eps, int mode);

/// Manufactured exact solution with the derivatives needed to build f and df/dt.
struct ManufacturedSolution {
  std::string id;
  SpaceTimeFn u, u_t, u_tt, u_ttt, u_xx, u_xxxx, u_xxxxt;

  /// Rejects solutions violating u = u_xx = 0 at either end.
  static ManufacturedSolution validated(ManufacturedSolution candidate,
                                        const Interval& interval);
};

/// Catalog: sine_cos (sin(pi(x-a)/L) cos t), two_mode
/// (sine_cos + 0.25 sin(2 pi (x-a)/L) sin 2t).
ManufacturedSolution make_manufactured(std::string_view id, const Interval& interval);

/// f* = u_tt + F1(u_t) + u_xxxx + F2(u), evaluated pointwise.
Forcing manufactured_forcing(const ManufacturedSolution& sol, const NonlinearFn& f1,
                             const NonlinearFn& f2);

struct MmsOptions {
  bool gate_orders = true;
  std::optional<double> max_error;
};

/// Accepted per-halving error reduction for each integrator.
std::pair<double, double> accepted_reduction(Method method);

/// error(k, dt) = max over output times of |u - u*|_{L2}. Produces a "k"
/// ladder at the smallest dt and a "dt" ladder at the largest k, with the
/// per-halving reduction factors as rates.
StudyReport mms_study(const ProblemSetup& base, std::string_view manufactured_id,
                      const std::vector<int>& k_ladder, const std::vector<double>& dt_ladder,
                      const MmsOptions& options = {});

}  // namespace hinge
