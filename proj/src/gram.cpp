#include "cloneprob/gram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cloneprob {

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> eigensolve(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigensolver did not converge");
  }
  return solver;
}

}  // namespace

StateSet StateSet::create(std::vector<CVector> vectors,
                          std::vector<std::string> labels, double normTol) {
  if (vectors.empty()) {
    throw ValidationError("state set must contain at least one vector");
  }
  const auto d = static_cast<std::size_t>(vectors.front().size());
  if (d == 0) {
    throw ValidationError("state vectors must have dimension >= 1");
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (static_cast<std::size_t>(vectors[i].size()) != d) {
      std::ostringstream msg;
      msg << "state " << i << " has dimension " << vectors[i].size()
          << ", expected " << d;
      throw ValidationError(msg.str());
    }
    const double norm = vectors[i].norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > normTol) {
      std::ostringstream msg;
      msg << "state " << i << " is not normalized (norm " << norm << ")";
      throw ValidationError(msg.str());
    }
  }
  if (!labels.empty() && labels.size() != vectors.size()) {
    throw ValidationError("label count does not match state count");
  }
  return StateSet(std::move(vectors), std::move(labels), d);
}

GramMatrix GramMatrix::from_matrix(const CMatrix& m, const Tolerances& tol) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ValidationError("Gram matrix must be square and non-empty");
  }
  CMatrix h = hermitize(m, tol.hermitian);
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    if (std::abs(h(i, i) - 1.0) > tol.normalization) {
      std::ostringstream msg;
      msg << "Gram diagonal entry " << i << " is " << h(i, i).real()
          << ", expected 1";
      throw ValidationError(msg.str());
    }
  }
  if (h.cwiseAbs().maxCoeff() > 1.0 + tol.psd) {
    throw ValidationError("Gram matrix has an overlap of modulus > 1");
  }
  const auto verdict = is_psd(h, tol.psd);
  if (!verdict.psd) {
    std::ostringstream msg;
    msg << "Gram matrix is not positive semidefinite (min eigenvalue "
        << verdict.minEigenvalue << ")";
    throw ValidationError(msg.str());
  }
  return GramMatrix(std::move(h));
}

GramMatrix GramMatrix::uniform(std::size_t n, double c) {
  const auto size = static_cast<Eigen::Index>(n);
  CMatrix m = CMatrix::Constant(size, size, Complex(c, 0.0));
  m.diagonal().setOnes();
  return from_matrix(m);
}

GramMatrix GramMatrix::identity(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  return GramMatrix(CMatrix::Identity(size, size));
}

CMatrix hermitize(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw ValidationError("matrix is not square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!std::isfinite(asym) || asym > tol * scale) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian (asymmetry " << asym << ")";
    throw ValidationError(msg.str());
  }
  CMatrix h = (m + m.adjoint()) / 2.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    h(i, i) = Complex(h(i, i).real(), 0.0);
  }
  return h;
}

double spectral_norm(const CMatrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  const RVector ev = eigensolve(hermitian).eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

CMatrix all_ones(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  return CMatrix::Constant(size, size, Complex(1.0, 0.0));
}

GramMatrix gram_of(const StateSet& states, const Tolerances& tol) {
  const auto n = static_cast<Eigen::Index>(states.size());
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& vi = states[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i; j < n; ++j) {
      // Eigen's dot() is conjugate-linear in the first argument.
      g(i, j) = vi.dot(states[static_cast<std::size_t>(j)]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  return GramMatrix::from_matrix(g, tol);
}

PsdVerdict is_psd(const CMatrix& m, double tol) {
  if (tol < 0.0) throw ValidationError("PSD tolerance must be nonnegative");
  const CMatrix h = hermitize(m);
  PsdVerdict verdict;
  if (h.size() == 0) {
    verdict.psd = true;
    return verdict;
  }
  verdict.eigenvalues = eigensolve(h).eigenvalues();
  const Eigen::Index last = verdict.eigenvalues.size() - 1;
  verdict.minEigenvalue = verdict.eigenvalues(0);
  const double norm = std::max(std::abs(verdict.eigenvalues(0)),
                               std::abs(verdict.eigenvalues(last)));
  verdict.psd = verdict.minEigenvalue >= -tol * std::max(1.0, norm);
  return verdict;
}

StateSet realize(const GramMatrix& g, const Tolerances& tol) {
  const auto solver = eigensolve(g.entries());
  const RVector& lambda = solver.eigenvalues();
  const CMatrix& v = solver.eigenvectors();
  const Eigen::Index n = lambda.size();

  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (lambda(k) > tol.rank) kept.push_back(k);
  }
  if (kept.empty()) {
    throw ValidationError("Gram matrix has numerical rank 0");
  }
  // G = V diag(lambda) V^dagger, so state j is column j of
  // diag(sqrt(lambda)) V^dagger restricted to the kept eigenpairs.
  const auto rank = static_cast<Eigen::Index>(kept.size());
  std::vector<CVector> vectors(static_cast<std::size_t>(n), CVector(rank));
  for (Eigen::Index r = 0; r < rank; ++r) {
    const Eigen::Index k = kept[static_cast<std::size_t>(r)];
    const double root = std::sqrt(lambda(k));
    for (Eigen::Index j = 0; j < n; ++j) {
      vectors[static_cast<std::size_t>(j)](r) = root * std::conj(v(j, k));
    }
  }
  // Dropped eigenvalues are below the rank threshold, so norms stay within
  // n * tol.rank of one.
  const double normTol =
      std::max(tol.normalization, 10.0 * static_cast<double>(n) * tol.rank);
  return StateSet::create(std::move(vectors), {}, normTol);
}

std::vector<NullVector> null_space(const GramMatrix& g, double tol) {
  if (tol < 0.0) throw ValidationError("null-space tolerance must be nonnegative");
  const auto solver = eigensolve(g.entries());
  const RVector& lambda = solver.eigenvalues();
  const double norm = std::max(std::abs(lambda(0)),
                               std::abs(lambda(lambda.size() - 1)));
  std::vector<NullVector> basis;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda(k) > tol * norm) break;
    NullVector nv;
    nv.coefficients = solver.eigenvectors().col(k).normalized();
    nv.residual = (g.entries() * nv.coefficients).norm();
    basis.push_back(std::move(nv));
  }
  return basis;
}

}  // namespace cloneprob
