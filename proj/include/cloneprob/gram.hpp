#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cloneprob {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Thrown for any input that breaks a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numeric knobs shared by the whole library. Gram matrices here are O(1)
/// scaled, so relative and absolute tolerances coincide in practice.
struct Tolerances {
  double psd = 1e-9;            // relative to max(1, spectral norm)
  double null = 1e-9;           // null-space eigenvalue cut, relative to ||G||
  double rank = 1e-10;          // eigenvalues dropped by realize()
  double normalization = 1e-9;  // | ||v|| - 1 | for state vectors
  double hermitian = 1e-12;     // asymmetry absorbed by symmetrization
  double bisection = 1e-12;
};

/// n normalized amplitude vectors of common dimension d.
class StateSet {
 public:
  /// Validates norms and dimensions; throws ValidationError naming the
  /// offending index.
  static StateSet create(std::vector<CVector> vectors,
                         std::vector<std::string> labels = {},
                         double normTol = Tolerances{}.normalization);

  std::size_t size() const { return vectors_.size(); }
  std::size_t dimension() const { return dimension_; }
  const CVector& operator[](std::size_t i) const { return vectors_[i]; }
  const std::vector<CVector>& vectors() const { return vectors_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  StateSet(std::vector<CVector> v, std::vector<std::string> l, std::size_t d)
      : vectors_(std::move(v)), labels_(std::move(l)), dimension_(d) {}

  std::vector<CVector> vectors_;
  std::vector<std::string> labels_;
  std::size_t dimension_;
};

/// Hermitian, unit-diagonal, positive semidefinite overlap matrix.
/// Stored exactly Hermitian: entry(j,i) is the conjugate of entry(i,j).
class GramMatrix {
 public:
  static GramMatrix from_matrix(const CMatrix& m, const Tolerances& tol = {});

  /// (1-c)I + cZ, Z the all-ones matrix.
  static GramMatrix uniform(std::size_t n, double c);
  static GramMatrix identity(std::size_t n);

  std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  explicit GramMatrix(CMatrix m) : entries_(std::move(m)) {}
  CMatrix entries_;
};

struct PsdVerdict {
  bool psd = false;
  double minEigenvalue = 0.0;
  RVector eigenvalues;  // ascending
};

struct NullVector {
  CVector coefficients;  // unit norm
  double residual = 0.0; // ||G b||
};

/// Returns (M + M^dagger)/2, or throws if M is further than
/// tol * ||M|| from Hermitian.
CMatrix hermitize(const CMatrix& m, double tol = Tolerances{}.hermitian);

/// Largest absolute eigenvalue of a Hermitian matrix.
double spectral_norm(const CMatrix& hermitian);

CMatrix all_ones(std::size_t n);

GramMatrix gram_of(const StateSet& states, const Tolerances& tol = {});

/// psd iff lambda_min >= -tol * max(1, ||M||).
PsdVerdict is_psd(const CMatrix& m, double tol = Tolerances{}.psd);

/// Columns of diag(sqrt(lambda)) V^dagger for eigenvalues above the rank
/// threshold; vector dimension equals the numerical rank.
StateSet realize(const GramMatrix& g, const Tolerances& tol = {});

/// Orthonormal basis of the eigenspace with eigenvalues <= tol * ||G||.
std::vector<NullVector> null_space(const GramMatrix& g,
                                   double tol = Tolerances{}.null);

}  // namespace cloneprob
