#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hinge {

/// Which slot of the beam equation a nonlinearity fills: F1 acts on u_t
/// (damping), F2 acts on u (restoring force).
enum class Role { Damping, Restoring };

using ScalarFn = std::function<double(double)>;

/// Scalar C^1 nonlinearity with closed-form derivative and, for the
/// restoring role, the primitive f2(s) = int_{anchor}^{s} F(t) dt and a
/// declared floor c <= 0 with f2 >= c.
struct NonlinearFn {
  std::string id;
  std::vector<double> params;
  ScalarFn eval;
  ScalarFn deriv;
  ScalarFn primitive;  // empty when the entry has no primitive
  double anchor = 0.0;
  double floor = 0.0;
  bool floor_estimated = false;

  double operator()(double s) const { return eval(s); }
  bool has_primitive() const { return static_cast<bool>(primitive); }
  bool is_zero() const { return id == "zero"; }
};

/// Catalog:
///   zero; linear(m): m s; cubic(a): a s^3; cubic_minus_linear: s^3 - s;
///   sine: sin s; linear_damping(g): g s; cubic_damping(g): g s^3.
/// Single-parameter entries default their parameter to 1 when params is
/// empty. A declared anchor must be a zero of F; a declared floor must be
/// non-positive. Throws std::invalid_argument on unknown ids or bad params.
/// With require_nonnegative = false a negative parameter is accepted so the
/// hypothesis validator can report the resulting violations.
NonlinearFn make_nonlinearity(std::string_view id, std::span<const double> params = {},
                              std::optional<double> anchor = std::nullopt,
                              std::optional<double> floor = std::nullopt,
                              bool require_nonnegative = true);

/// Ids of catalog entries admissible in the given role.
std::vector<std::string> catalog_ids(Role role);

/// Wraps user-supplied callables. Without a declared floor the floor is
/// estimated by grid minimization of the primitive over `floor_search`
/// and flagged as estimated.
NonlinearFn make_custom(std::string id, ScalarFn eval, ScalarFn deriv, ScalarFn primitive = {},
                        double anchor = 0.0, std::optional<double> floor = std::nullopt,
                        std::pair<double, double> floor_search = {-10.0, 10.0});

struct Violation {
  double s;
  std::string quantity;
  double value;
};

struct HypothesisReport {
  bool passed = true;
  std::vector<Violation> violations;
};

/// Sampled check of the existence hypotheses on a uniform grid over [lo, hi]:
/// F1(0) = 0, F1' >= 0, F2(anchor) = 0, f2 >= c, and f2' = F2 by central
/// differences. Failures are collected, never thrown (except for a bad grid).
HypothesisReport validate_hypotheses(const NonlinearFn& f1, const NonlinearFn& f2, double lo,
                                     double hi, int n_samples);

/// sup_{|s| <= M} |F'(s)|, sampled on a fixed-spacing grid containing 0 and
/// +-M so the result is non-decreasing in M.
double lipschitz_bound(const NonlinearFn& fn, double M);

}  // namespace hinge
