#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace hinge {

/// Open interval (a, b) on which the beam lives.
struct Interval {
  double a = 0.0;
  double b = 1.0;

  /// Throws std::invalid_argument unless a < b and both are finite.
  static Interval make(double a, double b);

  double length() const { return b - a; }
  bool contains(double x, double slack = 0.0) const {
    return x >= a - slack && x <= b + slack;
  }
};

enum class Space { L2, H2Star, H4Star };

/// Composite Gauss-Legendre rule with a fixed number of nodes per panel.
class Quadrature {
 public:
  static constexpr int kNodesPerPanel = 10;

  static Quadrature gauss_legendre(const Interval& interval, int panels);

  /// Default density for a k-mode basis: total nodes max(128, 6k), or the
  /// requested total rounded up to a whole number of panels.
  static Quadrature for_modes(const Interval& interval, int k,
                              std::optional<int> total_nodes = std::nullopt);

  static int default_node_count(int k);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  const Interval& interval() const { return interval_; }

  double integrate(const std::function<double(double)>& fn) const;

 private:
  Interval interval_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// L2-normalized Dirichlet eigenpairs of -d^2/dx^2 on the interval:
///   e_i(x) = sqrt(2/L) sin(i pi (x - a) / L),  lambda_i = (i pi / L)^2.
/// Mode indices are 1-based throughout the public interface.
class EigenBasis {
 public:
  EigenBasis(const Interval& interval, int k);

  const Interval& interval() const { return interval_; }
  int size() const { return k_; }
  double norm_factor() const { return norm_factor_; }

  double eigenvalue(int i) const;
  /// Angular wavenumber i pi / L, i.e. sqrt(lambda_i).
  double wavenumber(int i) const;
  const Eigen::VectorXd& eigenvalues() const { return lambdas_; }

  /// d-th spatial derivative of e_i at x, d in 0..4.
  double eval(int i, double x, int deriv_order = 0) const;

 private:
  Interval interval_;
  int k_;
  double norm_factor_;
  Eigen::VectorXd lambdas_;
};

using BasisPtr = std::shared_ptr<const EigenBasis>;

BasisPtr make_basis(const Interval& interval, int k);

/// A function in span{e_1..e_k}, stored by its L2 coefficients.
class SpectralField {
 public:
  SpectralField(BasisPtr basis, Eigen::VectorXd coeffs);
  explicit SpectralField(BasisPtr basis);

  const EigenBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  /// 1-based coefficient access.
  double coeff(int i) const;

  double norm(Space space) const;
  double squared_norm(Space space) const;

 private:
  BasisPtr basis_;
  Eigen::VectorXd coeffs_;
};

/// Spectral squared norms of a raw coefficient vector.
double squared_norm(const EigenBasis& basis, const Eigen::VectorXd& coeffs, Space space);

/// Rigorous bound on sup |sum c_i e_i| over the interval: sqrt(2/L) sum |c_i|.
double sup_norm_bound(const EigenBasis& basis, const Eigen::VectorXd& coeffs);

SpectralField analyze(const std::function<double(double)>& sample_fn, const BasisPtr& basis,
                      const Quadrature& quad);

std::vector<double> synthesize(const SpectralField& field, std::span<const double> xs,
                               int deriv_order = 0);

/// First m coefficients, as a field over an m-mode basis.
SpectralField truncate(const SpectralField& field, int m);

/// Embeds the field into a larger basis on the same interval by zero padding.
SpectralField zero_pad(const SpectralField& field, const BasisPtr& larger);

/// Eigenfunction values at quadrature nodes, used by the nonlinear transform
/// pipeline (synthesize at nodes -> pointwise map -> analyze).
class NodeTable {
 public:
  NodeTable(const EigenBasis& basis, const Quadrature& quad, int deriv_order = 0);

  /// Nodal values sum_i c_i e_i(x_q).
  Eigen::VectorXd synthesize(const Eigen::VectorXd& coeffs) const { return values_ * coeffs; }
  /// Coefficients sum_q w_q v_q e_i(x_q).
  Eigen::VectorXd analyze(const Eigen::VectorXd& nodal) const { return weighted_ * nodal; }

  const Eigen::MatrixXd& values() const { return values_; }
  const Eigen::MatrixXd& weighted_transpose() const { return weighted_; }

 private:
  Eigen::MatrixXd values_;    // Nq x k
  Eigen::MatrixXd weighted_;  // k x Nq
};

}  // namespace hinge
