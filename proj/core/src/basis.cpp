#include "hinge/basis.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hinge {

Interval Interval::make(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw std::invalid_argument("interval requires finite a < b, got (" + std::to_string(a) +
                                ", " + std::to_string(b) + ")");
  }
  return Interval{a, b};
}

// ---------------------------------------------------------------------------
// Quadrature

Quadrature Quadrature::gauss_legendre(const Interval& interval, int panels) {
  if (panels < 1) throw std::invalid_argument("quadrature needs at least one panel");
  Interval::make(interval.a, interval.b);

  using rule = boost::math::quadrature::gauss<double, kNodesPerPanel>;
  const auto& abscissa = rule::abscissa();
  const auto& weights = rule::weights();

  Quadrature q;
  q.interval_ = interval;
  q.nodes_.reserve(static_cast<std::size_t>(panels) * kNodesPerPanel);
  q.weights_.reserve(q.nodes_.capacity());

  const double h = interval.length() / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = interval.a + (p + 0.5) * h;
    const double half = 0.5 * h;
    // Boost stores the non-negative half of the symmetric rule.
    for (std::size_t j = abscissa.size(); j-- > 0;) {
      q.nodes_.push_back(mid - half * abscissa[j]);
      q.weights_.push_back(half * weights[j]);
    }
    for (std::size_t j = 0; j < abscissa.size(); ++j) {
      q.nodes_.push_back(mid + half * abscissa[j]);
      q.weights_.push_back(half * weights[j]);
    }
  }
  return q;
}

int Quadrature::default_node_count(int k) { return std::max(128, 6 * k); }

Quadrature Quadrature::for_modes(const Interval& interval, int k, std::optional<int> total_nodes) {
  const int target = total_nodes.value_or(default_node_count(k));
  if (target < 1) throw std::invalid_argument("quadrature node count must be positive");
  const int panels = (target + kNodesPerPanel - 1) / kNodesPerPanel;
  return gauss_legendre(interval, panels);
}

double Quadrature::integrate(const std::function<double(double)>& fn) const {
  double sum = 0.0;
  for (std::size_t q = 0; q < nodes_.size(); ++q) sum += weights_[q] * fn(nodes_[q]);
  return sum;
}

// ---------------------------------------------------------------------------
// EigenBasis

EigenBasis::EigenBasis(const Interval& interval, int k)
    : interval_(Interval::make(interval.a, interval.b)), k_(k) {
  if (k < 1) throw std::invalid_argument("basis needs k >= 1, got k = " + std::to_string(k));
  norm_factor_ = std::sqrt(2.0 / interval_.length());
  lambdas_.resize(k);
  for (int i = 1; i <= k; ++i) {
    const double w = i * std::numbers::pi / interval_.length();
    lambdas_[i - 1] = w * w;
  }
}

double EigenBasis::eigenvalue(int i) const {
  if (i < 1 || i > k_) {
    throw std::out_of_range("mode index " + std::to_string(i) + " outside 1.." +
                            std::to_string(k_));
  }
  return lambdas_[i - 1];
}

double EigenBasis::wavenumber(int i) const {
  if (i < 1 || i > k_) {
    throw std::out_of_range("mode index " + std::to_string(i) + " outside 1.." +
                            std::to_string(k_));
  }
  return i * std::numbers::pi / interval_.length();
}

double EigenBasis::eval(int i, double x, int deriv_order) const {
  const double w = wavenumber(i);
  if (deriv_order < 0 || deriv_order > 4) {
    throw std::out_of_range("derivative order must be in 0..4");
  }
  if (!interval_.contains(x, 1e-12 * interval_.length())) {
    throw std::out_of_range("x = " + std::to_string(x) + " outside the interval");
  }
  const double theta = w * (x - interval_.a);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  switch (deriv_order) {
    case 0: return norm_factor_ * s;
    case 1: return norm_factor_ * w * c;
    case 2: return -norm_factor_ * w * w * s;
    case 3: return -norm_factor_ * w * w * w * c;
    default: return norm_factor_ * w * w * w * w * s;
  }
}

BasisPtr make_basis(const Interval& interval, int k) {
  return std::make_shared<const EigenBasis>(interval, k);
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(BasisPtr basis, Eigen::VectorXd coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (!basis_) throw std::invalid_argument("spectral field needs a basis");
  if (coeffs_.size() != basis_->size()) {
    throw std::invalid_argument("coefficient count " + std::to_string(coeffs_.size()) +
                                " does not match basis size " +
                                std::to_string(basis_->size()));
  }
}

SpectralField::SpectralField(BasisPtr basis)
    : SpectralField(basis, Eigen::VectorXd::Zero(basis ? basis->size() : 0)) {}

double SpectralField::coeff(int i) const {
  if (i < 1 || i > size()) throw std::out_of_range("coefficient index out of range");
  return coeffs_[i - 1];
}

double SpectralField::squared_norm(Space space) const {
  return hinge::squared_norm(*basis_, coeffs_, space);
}

double SpectralField::norm(Space space) const { return std::sqrt(squared_norm(space)); }

double squared_norm(const EigenBasis& basis, const Eigen::VectorXd& coeffs, Space space) {
  const auto& lam = basis.eigenvalues();
  switch (space) {
    case Space::L2:
      return coeffs.squaredNorm();
    case Space::H2Star:
      return (lam.array() * coeffs.array()).matrix().squaredNorm();
    case Space::H4Star:
      return (lam.array().square() * coeffs.array()).matrix().squaredNorm();
  }
  return 0.0;
}

double sup_norm_bound(const EigenBasis& basis, const Eigen::VectorXd& coeffs) {
  return basis.norm_factor() * coeffs.cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// Transforms

SpectralField analyze(const std::function<double(double)>& sample_fn, const BasisPtr& basis,
                      const Quadrature& quad) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(basis->size());
  const auto nodes = quad.nodes();
  const auto weights = quad.weights();
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const double fw = weights[q] * sample_fn(nodes[q]);
    if (fw == 0.0) continue;
    for (int i = 1; i <= basis->size(); ++i) c[i - 1] += fw * basis->eval(i, nodes[q]);
  }
  return SpectralField(basis, std::move(c));
}

std::vector<double> synthesize(const SpectralField& field, std::span<const double> xs,
                               int deriv_order) {
  const auto& basis = field.basis();
  std::vector<double> out(xs.size(), 0.0);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double sum = 0.0;
    for (int i = 1; i <= basis.size(); ++i) {
      const double c = field.coeffs()[i - 1];
      if (c != 0.0) sum += c * basis.eval(i, xs[j], deriv_order);
    }
    out[j] = sum;
  }
  return out;
}

SpectralField truncate(const SpectralField& field, int m) {
  if (m < 1 || m > field.size()) {
    throw std::out_of_range("truncate to m = " + std::to_string(m) + " needs 1 <= m <= " +
                            std::to_string(field.size()));
  }
  if (m == field.size()) return field;
  return SpectralField(make_basis(field.basis().interval(), m), field.coeffs().head(m));
}

SpectralField zero_pad(const SpectralField& field, const BasisPtr& larger) {
  const auto& I = field.basis().interval();
  const auto& J = larger->interval();
  if (I.a != J.a || I.b != J.b) throw std::invalid_argument("zero_pad across different intervals");
  if (larger->size() < field.size()) throw std::invalid_argument("zero_pad into a smaller basis");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(larger->size());
  c.head(field.size()) = field.coeffs();
  return SpectralField(larger, std::move(c));
}

NodeTable::NodeTable(const EigenBasis& basis, const Quadrature& quad, int deriv_order) {
  const auto nodes = quad.nodes();
  const auto weights = quad.weights();
  const auto nq = static_cast<Eigen::Index>(nodes.size());
  values_.resize(nq, basis.size());
  weighted_.resize(basis.size(), nq);
  for (Eigen::Index q = 0; q < nq; ++q) {
    for (int i = 1; i <= basis.size(); ++i) {
      values_(q, i - 1) = basis.eval(i, nodes[q], deriv_order);
      weighted_(i - 1, q) = weights[q] * basis.eval(i, nodes[q]);
    }
  }
}

}  // namespace hinge
