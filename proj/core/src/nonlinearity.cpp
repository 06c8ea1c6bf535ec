#include "hinge/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hinge {
namespace {

struct CatalogEntry {
  std::string_view id;
  int n_params;
  bool damping;
  bool restoring;
};

constexpr CatalogEntry kCatalog[] = {
    {"zero", 0, true, true},
    {"linear", 1, true, true},
    {"cubic", 1, true, true},
    {"cubic_minus_linear", 0, false, true},
    {"sine", 0, false, true},
    {"linear_damping", 1, true, false},
    {"cubic_damping", 1, true, false},
};

const CatalogEntry* find_entry(std::string_view id) {
  for (const auto& e : kCatalog)
    if (e.id == id) return &e;
  return nullptr;
}

// Catalog primitives are written from s = 0; shifting by P(anchor) keeps
// f2(anchor) = 0 for any admissible anchor.
struct Closed {
  ScalarFn eval, deriv, primitive;
  double min_primitive;  // global minimum of primitive (from s = 0)
};

Closed closed_form(std::string_view id, double p) {
  if (id == "zero") {
    return {[](double) { return 0.0; }, [](double) { return 0.0; },
            [](double) { return 0.0; }, 0.0};
  }
  if (id == "linear" || id == "linear_damping") {
    return {[p](double s) { return p * s; }, [p](double) { return p; },
            [p](double s) { return 0.5 * p * s * s; }, 0.0};
  }
  if (id == "cubic" || id == "cubic_damping") {
    return {[p](double s) { return p * s * s * s; }, [p](double s) { return 3.0 * p * s * s; },
            [p](double s) { return 0.25 * p * s * s * s * s; }, 0.0};
  }
  if (id == "cubic_minus_linear") {
    return {[](double s) { return s * s * s - s; }, [](double s) { return 3.0 * s * s - 1.0; },
            [](double s) { return 0.25 * s * s * s * s - 0.5 * s * s; }, -0.25};
  }
  // sine
  return {[](double s) { return std::sin(s); }, [](double s) { return std::cos(s); },
          [](double s) { return 1.0 - std::cos(s); }, 0.0};
}

}  // namespace

NonlinearFn make_nonlinearity(std::string_view id, std::span<const double> params,
                              std::optional<double> anchor, std::optional<double> floor,
                              bool require_nonnegative) {
  const auto* entry = find_entry(id);
  if (!entry) throw std::invalid_argument("unknown nonlinearity id '" + std::string(id) + "'");

  std::vector<double> p(params.begin(), params.end());
  if (entry->n_params == 0 && !p.empty()) {
    throw std::invalid_argument("nonlinearity '" + std::string(id) + "' takes no parameters");
  }
  if (entry->n_params == 1) {
    if (p.empty()) p.push_back(1.0);
    if (p.size() != 1) {
      throw std::invalid_argument("nonlinearity '" + std::string(id) +
                                  "' takes exactly one parameter");
    }
    if (!std::isfinite(p[0]) || (require_nonnegative && p[0] < 0.0)) {
      throw std::invalid_argument("nonlinearity '" + std::string(id) +
                                  "' needs a non-negative finite parameter");
    }
  }
  if (floor && *floor > 0.0) throw std::invalid_argument("floor must be non-positive");

  auto closed = closed_form(id, p.empty() ? 0.0 : p[0]);
  const double s_bar = anchor.value_or(0.0);
  if (!std::isfinite(s_bar)) throw std::invalid_argument("anchor must be finite");
  if (std::abs(closed.eval(s_bar)) > 1e-12 * (1.0 + std::abs(s_bar))) {
    throw std::invalid_argument("anchor " + std::to_string(s_bar) + " is not a zero of '" +
                                std::string(id) + "'");
  }

  NonlinearFn fn;
  fn.id = std::string(id);
  fn.params = std::move(p);
  fn.eval = closed.eval;
  fn.deriv = closed.deriv;
  const double shift = closed.primitive(s_bar);
  if (shift == 0.0) {
    fn.primitive = closed.primitive;
  } else {
    fn.primitive = [prim = closed.primitive, shift](double s) { return prim(s) - shift; };
  }
  fn.anchor = s_bar;
  fn.floor = floor.value_or(std::min(0.0, closed.min_primitive - shift));
  return fn;
}

std::vector<std::string> catalog_ids(Role role) {
  std::vector<std::string> ids;
  for (const auto& e : kCatalog) {
    if ((role == Role::Damping && e.damping) || (role == Role::Restoring && e.restoring)) {
      ids.emplace_back(e.id);
    }
  }
  return ids;
}

NonlinearFn make_custom(std::string id, ScalarFn eval, ScalarFn deriv, ScalarFn primitive,
                        double anchor, std::optional<double> floor,
                        std::pair<double, double> floor_search) {
  if (!eval || !deriv) throw std::invalid_argument("custom nonlinearity needs eval and deriv");
  if (floor && *floor > 0.0) throw std::invalid_argument("floor must be non-positive");
  NonlinearFn fn;
  fn.id = std::move(id);
  fn.eval = std::move(eval);
  fn.deriv = std::move(deriv);
  fn.primitive = std::move(primitive);
  fn.anchor = anchor;
  if (floor) {
    fn.floor = *floor;
  } else if (fn.primitive) {
    constexpr int n = 10001;
    const auto [lo, hi] = floor_search;
    double m = 0.0;
    for (int j = 0; j < n; ++j) {
      m = std::min(m, fn.primitive(lo + (hi - lo) * j / (n - 1)));
    }
    fn.floor = m;
    fn.floor_estimated = true;
  }
  return fn;
}

HypothesisReport validate_hypotheses(const NonlinearFn& f1, const NonlinearFn& f2, double lo,
                                     double hi, int n_samples) {
  if (!(lo < hi)) throw std::invalid_argument("validation range needs lo < hi");
  if (n_samples < 2) throw std::invalid_argument("validation needs at least two samples");

  HypothesisReport report;
  auto flag = [&](double s, std::string quantity, double value) {
    report.violations.push_back({s, std::move(quantity), value});
  };

  if (const double v = f1.eval(0.0); std::abs(v) > 1e-12) flag(0.0, "F1(0)", v);
  if (const double v = f2.eval(f2.anchor); std::abs(v) > 1e-12) flag(f2.anchor, "F2(anchor)", v);
  if (!f2.has_primitive()) flag(f2.anchor, "f2 missing", 0.0);

  for (int j = 0; j < n_samples; ++j) {
    const double s = lo + (hi - lo) * j / (n_samples - 1);
    if (const double d = f1.deriv(s); d < -1e-12) flag(s, "F1'", d);
    if (!f2.has_primitive()) continue;
    const double p = f2.primitive(s);
    if (p < f2.floor - 1e-12) flag(s, "f2 - c", p - f2.floor);
    const double h = 1e-5 * std::max(1.0, std::abs(s));
    const double fd = (f2.primitive(s + h) - f2.primitive(s - h)) / (2.0 * h);
    const double F = f2.eval(s);
    if (std::abs(fd - F) > std::max(1e-6, 1e-6 * std::abs(F))) flag(s, "f2' - F2", fd - F);
  }
  report.passed = report.violations.empty();
  return report;
}

double lipschitz_bound(const NonlinearFn& fn, double M) {
  M = std::abs(M);
  double best = std::abs(fn.deriv(0.0));
  best = std::max({best, std::abs(fn.deriv(M)), std::abs(fn.deriv(-M))});
  // Fixed spacing: a larger M only adds sample points.
  constexpr double spacing = 1e-3;
  constexpr long max_points = 200000;
  const double h = std::max(spacing, M / max_points);
  for (long j = 1; j * h < M; ++j) {
    const double s = j * h;
    best = std::max({best, std::abs(fn.deriv(s)), std::abs(fn.deriv(-s))});
  }
  return best;
}

}  // namespace hinge
