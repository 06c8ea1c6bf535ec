#include "hinge/analysis_harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hinge {

ProblemSetup ProblemSetup::with_k(int new_k) const {
  ProblemSetup s = *this;
  s.k = new_k;
  return s;
}

double ProblemSetup::resolved_dt() const {
  if (dt) return *dt;
  return default_dt(EigenBasis(interval, k));
}

int ProblemSetup::resolved_output_every() const {
  if (output_every) return *output_every;
  return std::max(1, static_cast<int>(std::lround(0.01 / resolved_dt())));
}

ProblemSetup benchmark_setup(int k) {
  ProblemSetup s;
  s.interval = Interval::make(0.0, std::numbers::pi);
  s.k = k;
  s.T = 5.0;
  s.f1 = make_nonlinearity("cubic_damping", std::vector<double>{0.5});
  s.f2 = make_nonlinearity("cubic_minus_linear");
  s.forcing = make_forcing("mode_cos", std::vector<double>{0.1, 1.0, 1.0}, s.interval);
  s.y = make_initial("sine_series", std::vector<double>{1.0}, s.interval);
  s.z = make_initial("sine_series", std::vector<double>{0.0, 0.5}, s.interval);
  return s;
}

std::shared_ptr<const OdeSystem> build_system(const ProblemSetup& setup) {
  auto basis = make_basis(setup.interval, setup.k);
  return std::make_shared<const OdeSystem>(
      basis, Quadrature::for_modes(setup.interval, setup.k, setup.quadrature_nodes), setup.f1,
      setup.f2, setup.forcing);
}

Run run(const ProblemSetup& setup) {
  Run r;
  r.system = build_system(setup);
  const auto initial = project_initial_data(setup.y, setup.z, *r.system);
  r.trajectory = solve(*r.system, initial, setup.T, setup.resolved_dt(), setup.method,
                       setup.resolved_output_every());
  return r;
}

// Independent solves; each owns its state and the systems are immutable.
std::vector<Run> run_all(const std::vector<ProblemSetup>& setups) {
  std::vector<std::future<Run>> futures;
  futures.reserve(setups.size());
  for (const auto& s : setups) futures.push_back(std::async(std::launch::async, run, s));
  std::vector<Run> runs;
  runs.reserve(setups.size());
  for (auto& f : futures) runs.push_back(f.get());
  return runs;
}

namespace {

double ratio(double num, double den) {
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

}  // namespace

// ---------------------------------------------------------------------------

StudyReport convergence_study(const ProblemSetup& base, const std::vector<int>& k_ladder) {
  if (k_ladder.size() < 2) throw std::invalid_argument("convergence ladder needs >= 2 entries");
  for (std::size_t j = 0; j < k_ladder.size(); ++j) {
    if (k_ladder[j] < 1) throw std::invalid_argument("convergence ladder entries must be >= 1");
    if (j > 0 && k_ladder[j] <= k_ladder[j - 1]) {
      throw std::invalid_argument("convergence ladder must be strictly increasing");
    }
  }

  ProblemSetup shared = base.with_k(k_ladder.back());
  shared.dt = shared.resolved_dt();
  shared.output_every = shared.resolved_output_every();

  std::vector<ProblemSetup> setups;
  for (int k : k_ladder) setups.push_back(shared.with_k(k));
  const auto runs = run_all(setups);

  StudyReport rep;
  rep.study_id = "converge_k";
  Ladder ladder{"k", {"l2", "h2star"}, {}, {}};
  for (std::size_t j = 0; j + 1 < runs.size(); ++j) {
    const auto& coarse = runs[j].trajectory.states;
    const auto& fine = runs[j + 1].trajectory.states;
    const auto& fine_basis = runs[j + 1].system->basis();
    if (coarse.size() != fine.size()) throw std::logic_error("ladder runs disagree on output times");
    double l2 = 0.0, h2 = 0.0;
    for (std::size_t n = 0; n < fine.size(); ++n) {
      Eigen::VectorXd diff = fine[n].g;
      diff.head(coarse[n].g.size()) -= coarse[n].g;
      l2 = std::max(l2, std::sqrt(squared_norm(fine_basis, diff, Space::L2)));
      h2 = std::max(h2, std::sqrt(squared_norm(fine_basis, diff, Space::H2Star)));
    }
    ladder.parameters.push_back(k_ladder[j]);
    ladder.metrics.push_back({l2, h2});
  }

  constexpr double round_off = 1e-12;
  rep.passed = true;
  for (std::size_t j = 0; j + 1 < ladder.metrics.size(); ++j) {
    for (std::size_t m = 0; m < 2; ++m) {
      const double a = ladder.metrics[j][m];
      const double b = ladder.metrics[j + 1][m];
      const bool ok = b < a || (a <= round_off && b <= round_off);
      if (!ok) rep.passed = false;
      std::ostringstream key;
      key << ladder.metric_names[m] << "_reduction_k" << k_ladder[j];
      rep.rates[key.str()] = ratio(a, b);
    }
  }
  rep.constants["dt"] = *shared.dt;
  rep.constants["T"] = shared.T;
  rep.constants["output_every"] = *shared.output_every;
  rep.notes.push_back("metric at k_j compares runs k_j and k_{j+1}; rates are not gated");
  rep.ladders.push_back(std::move(ladder));
  return rep;
}

// ---------------------------------------------------------------------------

StudyReport uniqueness_experiment(const ProblemSetup& base, double eps, int mode) {
  if (!(eps >= 0.0)) throw std::invalid_argument("perturbation eps must be non-negative");
  if (mode < 1 || mode > base.k) throw std::out_of_range("perturbation mode outside 1..k");

  const auto system = build_system(base);
  const auto& basis = system->basis();
  const double dt = base.resolved_dt();
  const int every = base.resolved_output_every();

  const ModalState u0 = project_initial_data(base.y, base.z, *system);
  ModalState v0 = u0;
  v0.g[mode - 1] += eps;

  auto fu = std::async(std::launch::async,
                       [&] { return solve(*system, u0, base.T, dt, base.method, every); });
  auto fv = std::async(std::launch::async,
                       [&] { return solve(*system, v0, base.T, dt, base.method, every); });
  const Trajectory tu = fu.get();
  const Trajectory tv = fv.get();

  const double M = std::max(displacement_bound(*system, tu), displacement_bound(*system, tv));
  const double lip = lipschitz_bound(system->f2(), M);
  const double lam1_sq = basis.eigenvalue(1) * basis.eigenvalue(1);
  const double C = 1.0 + lip * lip / lam1_sq;

  StudyReport rep;
  rep.study_id = "uniqueness";
  Ladder ladder{"t", {"D", "envelope", "D_over_D0"}, {}, {}};
  double D0 = 0.0;
  double max_ratio = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  rep.passed = true;
  for (std::size_t n = 0; n < tu.states.size(); ++n) {
    const Eigen::VectorXd dg = tu.states[n].g - tv.states[n].g;
    const Eigen::VectorXd dv = tu.states[n].gdot - tv.states[n].gdot;
    const double D = 0.5 * squared_norm(basis, dv, Space::L2) +
                     0.5 * squared_norm(basis, dg, Space::H2Star);
    if (n == 0) D0 = D;
    const double t = tu.states[n].t;
    const double envelope = D0 * std::exp(C * t) * (1.0 + 1e-6);
    const double r = D0 > 0.0 ? D / D0 : 0.0;
    max_ratio = std::max(max_ratio, r);
    min_ratio = std::min(min_ratio, r);
    if (!(D <= envelope)) rep.passed = false;
    ladder.parameters.push_back(t);
    ladder.metrics.push_back({D, envelope, r});
  }
  rep.constants = {{"eps", eps},
                   {"mode", static_cast<double>(mode)},
                   {"sup_norm_bound_M", M},
                   {"lipschitz_F2", lip},
                   {"lambda1_sq", lam1_sq},
                   {"gronwall_C", C},
                   {"D0", D0},
                   {"max_D_over_D0", max_ratio},
                   {"min_D_over_D0", min_ratio}};
  rep.ladders.push_back(std::move(ladder));
  return rep;
}

// ---------------------------------------------------------------------------

ManufacturedSolution ManufacturedSolution::validated(ManufacturedSolution c,
                                                     const Interval& interval) {
  if (!c.u || !c.u_t || !c.u_tt || !c.u_ttt || !c.u_xx || !c.u_xxxx || !c.u_xxxxt) {
    throw std::invalid_argument("manufactured solution '" + c.id + "' is missing derivatives");
  }
  constexpr double kTimes[] = {0.0, 0.3, 1.1, 2.7};
  for (double t : kTimes) {
    for (double x : {interval.a, interval.b}) {
      if (std::abs(c.u(x, t)) > 1e-9 || std::abs(c.u_xx(x, t)) > 1e-9) {
        std::ostringstream msg;
        msg << "manufactured solution '" << c.id << "' violates the hinged boundary conditions"
            << " at x = " << x << ", t = " << t;
        throw std::invalid_argument(msg.str());
      }
    }
  }
  return c;
}

ManufacturedSolution make_manufactured(std::string_view id, const Interval& interval) {
  const double a = interval.a;
  const double w1 = std::numbers::pi / interval.length();
  const double w2 = 2.0 * w1;
  auto X1 = [=](double x) { return std::sin(w1 * (x - a)); };
  auto X2 = [=](double x) { return std::sin(w2 * (x - a)); };

  ManufacturedSolution s;
  s.id = std::string(id);
  if (id == "sine_cos") {
    s.u = [=](double x, double t) { return X1(x) * std::cos(t); };
    s.u_t = [=](double x, double t) { return -X1(x) * std::sin(t); };
    s.u_tt = [=](double x, double t) { return -X1(x) * std::cos(t); };
    s.u_ttt = [=](double x, double t) { return X1(x) * std::sin(t); };
    s.u_xx = [=](double x, double t) { return -w1 * w1 * X1(x) * std::cos(t); };
    s.u_xxxx = [=](double x, double t) { return std::pow(w1, 4) * X1(x) * std::cos(t); };
    s.u_xxxxt = [=](double x, double t) { return -std::pow(w1, 4) * X1(x) * std::sin(t); };
  } else if (id == "two_mode") {
    const double w1_4 = std::pow(w1, 4);
    const double w2_4 = std::pow(w2, 4);
    s.u = [=](double x, double t) { return X1(x) * std::cos(t) + 0.25 * X2(x) * std::sin(2 * t); };
    s.u_t = [=](double x, double t) {
      return -X1(x) * std::sin(t) + 0.5 * X2(x) * std::cos(2 * t);
    };
    s.u_tt = [=](double x, double t) { return -X1(x) * std::cos(t) - X2(x) * std::sin(2 * t); };
    s.u_ttt = [=](double x, double t) {
      return X1(x) * std::sin(t) - 2.0 * X2(x) * std::cos(2 * t);
    };
    s.u_xx = [=](double x, double t) {
      return -w1 * w1 * X1(x) * std::cos(t) - 0.25 * w2 * w2 * X2(x) * std::sin(2 * t);
    };
    s.u_xxxx = [=](double x, double t) {
      return w1_4 * X1(x) * std::cos(t) + 0.25 * w2_4 * X2(x) * std::sin(2 * t);
    };
    s.u_xxxxt = [=](double x, double t) {
      return -w1_4 * X1(x) * std::sin(t) + 0.5 * w2_4 * X2(x) * std::cos(2 * t);
    };
  } else {
    throw std::invalid_argument("unknown manufactured solution '" + std::string(id) + "'");
  }
  return ManufacturedSolution::validated(std::move(s), interval);
}

Forcing manufactured_forcing(const ManufacturedSolution& sol, const NonlinearFn& f1,
                             const NonlinearFn& f2) {
  Forcing f;
  f.id = "manufactured:" + sol.id;
  f.eval = [sol, f1, f2](double x, double t) {
    return sol.u_tt(x, t) + f1.eval(sol.u_t(x, t)) + sol.u_xxxx(x, t) + f2.eval(sol.u(x, t));
  };
  f.time_deriv = [sol, f1, f2](double x, double t) {
    return sol.u_ttt(x, t) + f1.deriv(sol.u_t(x, t)) * sol.u_tt(x, t) + sol.u_xxxxt(x, t) +
           f2.deriv(sol.u(x, t)) * sol.u_t(x, t);
  };
  return f;
}

std::pair<double, double> accepted_reduction(Method method) {
  return method == Method::Rk4 ? std::pair{12.0, 20.0} : std::pair{3.0, 5.0};
}

StudyReport mms_study(const ProblemSetup& base, std::string_view manufactured_id,
                      const std::vector<int>& k_ladder, const std::vector<double>& dt_ladder,
                      const MmsOptions& options) {
  if (k_ladder.empty() || dt_ladder.empty()) throw std::invalid_argument("mms ladders are empty");
  for (std::size_t j = 1; j < k_ladder.size(); ++j) {
    if (k_ladder[j] <= k_ladder[j - 1]) throw std::invalid_argument("k ladder must increase");
  }
  for (std::size_t j = 0; j < dt_ladder.size(); ++j) {
    if (!(dt_ladder[j] > 0.0)) throw std::invalid_argument("dt ladder entries must be positive");
    if (j > 0 && dt_ladder[j] >= dt_ladder[j - 1]) {
      throw std::invalid_argument("dt ladder must decrease");
    }
  }

  const auto sol = make_manufactured(manufactured_id, base.interval);
  ProblemSetup setup = base;
  setup.forcing = manufactured_forcing(sol, base.f1, base.f2);
  setup.y = [sol](double x) { return sol.u(x, 0.0); };
  setup.z = [sol](double x) { return sol.u_t(x, 0.0); };

  // (k, dt) grid: the k ladder at the finest dt, the dt ladder at the largest k.
  std::vector<std::pair<int, double>> cells;
  for (int k : k_ladder) cells.emplace_back(k, dt_ladder.back());
  for (double dt : dt_ladder) {
    if (dt != dt_ladder.back()) cells.emplace_back(k_ladder.back(), dt);
  }
  std::vector<ProblemSetup> setups;
  for (const auto& [k, dt] : cells) {
    ProblemSetup s = setup.with_k(k);
    s.dt = dt;
    setups.push_back(std::move(s));
  }
  const auto runs = run_all(setups);

  auto error_of = [&](const Run& r) {
    const auto& sys = *r.system;
    const auto nodes = sys.quadrature().nodes();
    const auto w = sys.quadrature().weights();
    double worst = 0.0;
    for (const auto& s : r.trajectory.states) {
      const Eigen::VectorXd u = sys.table().synthesize(s.g);
      double acc = 0.0;
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double d = u[static_cast<Eigen::Index>(q)] - sol.u(nodes[q], s.t);
        acc += w[q] * d * d;
      }
      worst = std::max(worst, std::sqrt(acc));
    }
    return worst;
  };
  std::map<std::pair<int, double>, double> errors;
  for (std::size_t j = 0; j < cells.size(); ++j) errors[cells[j]] = error_of(runs[j]);

  StudyReport rep;
  rep.study_id = "mms";
  Ladder space{"k", {"error_l2"}, {}, {}};
  for (int k : k_ladder) {
    space.parameters.push_back(k);
    space.metrics.push_back({errors.at({k, dt_ladder.back()})});
  }
  Ladder time{"dt", {"error_l2"}, {}, {}};
  for (double dt : dt_ladder) {
    time.parameters.push_back(dt);
    time.metrics.push_back({errors.at({k_ladder.back(), dt})});
  }

  const auto [lo, hi] = accepted_reduction(base.method);
  rep.passed = true;
  for (std::size_t j = 0; j + 1 < dt_ladder.size(); ++j) {
    const double r = ratio(time.metrics[j][0], time.metrics[j + 1][0]);
    std::ostringstream key;
    key << "dt_reduction_" << j;
    rep.rates[key.str()] = r;
    if (options.gate_orders && !(r >= lo && r <= hi)) rep.passed = false;
  }
  double emin = std::numeric_limits<double>::infinity(), emax = 0.0;
  for (const auto& row : space.metrics) {
    emin = std::min(emin, row[0]);
    emax = std::max(emax, row[0]);
  }
  rep.rates["k_spread"] = ratio(emax, emin);
  double max_error = 0.0;
  for (const auto& [cell, e] : errors) max_error = std::max(max_error, e);
  if (options.max_error && !(max_error <= *options.max_error)) rep.passed = false;

  rep.constants = {{"max_error", max_error},
                   {"accepted_reduction_lo", lo},
                   {"accepted_reduction_hi", hi},
                   {"T", base.T}};
  rep.notes.push_back(std::string("method ") + std::string(to_string(base.method)) +
                      ", manufactured solution " + sol.id);
  if (!options.gate_orders) rep.notes.push_back("temporal orders reported, not gated");
  rep.ladders.push_back(std::move(space));
  rep.ladders.push_back(std::move(time));
  return rep;
}

}  // namespace hinge
