#include "cloneprob/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace cloneprob {

namespace {

void require_same_size(const GramMatrix& input, const GramMatrix& output,
                       std::size_t gammaCount) {
  const std::size_t n = input.size();
  if (output.size() != n || gammaCount != n) {
    std::ostringstream msg;
    msg << "dimension mismatch: input Gram " << n << ", output Gram "
        << output.size() << ", gammas " << gammaCount;
    throw ValidationError(msg.str());
  }
}

void require_probabilities(const std::vector<double>& gammas) {
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] >= 0.0 && gammas[i] <= 1.0)) {
      std::ostringstream msg;
      msg << "gamma[" << i << "] = " << gammas[i] << " is outside [0,1]";
      throw ValidationError(msg.str());
    }
  }
}

FeasibilityReport evaluate(const GramMatrix& input, const GramMatrix& output,
                           const std::vector<double>& gammas,
                           const GramMatrix& flags, double psdTol,
                           FlagSearch search) {
  FeasibilityReport report;
  report.residual = residual_matrix(input, output, gammas, flags);
  const PsdVerdict verdict = is_psd(report.residual, psdTol);
  report.feasible = verdict.psd;
  report.minEigenvalue = verdict.minEigenvalue;
  report.eigenvalues = verdict.eigenvalues;
  report.flagGramUsed = flags;
  report.tolerance = psdTol;
  report.search = search;
  return report;
}

// Optimal flag overlap for two states: the c with |c| <= 1 minimizing
// |X12 - sqrt(g1 g2) O12 c|, which maximizes det(Omega) at fixed diagonal.
GramMatrix best_two_state_flags(const GramMatrix& input,
                                const GramMatrix& output,
                                const std::vector<double>& gammas) {
  const Complex x12 = input(0, 1);
  const Complex o12 = output(0, 1);
  const double reach = std::sqrt(gammas[0] * gammas[1]) * std::abs(o12);
  Complex c(1.0, 0.0);
  if (reach > 0.0) {
    const double modulus = std::min(1.0, std::abs(x12) / reach);
    c = std::polar(modulus, std::arg(x12) - std::arg(o12));
  }
  CMatrix f = CMatrix::Identity(2, 2);
  f(0, 1) = c;
  f(1, 0) = std::conj(c);
  return GramMatrix::from_matrix(f);
}

GramMatrix random_flag_gram(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto size = static_cast<Eigen::Index>(n);
  std::vector<CVector> vectors;
  vectors.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CVector v(size);
    for (Eigen::Index k = 0; k < size; ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      v(k) = Complex(re, im);
    }
    vectors.push_back(v.normalized());
  }
  return gram_of(StateSet::create(std::move(vectors)));
}

}  // namespace

std::string_view to_string(FlagSearch s) {
  switch (s) {
    case FlagSearch::Given: return "given";
    case FlagSearch::Exact: return "exact";
    case FlagSearch::Heuristic: return "heuristic";
  }
  return "unknown";
}

void MachineSpec::validate() const {
  require_same_size(inputGram, outputOverlaps, gammas.size());
  if (flagGram.size() != inputGram.size()) {
    throw ValidationError("flag Gram dimension does not match input Gram");
  }
  require_probabilities(gammas);
}

CMatrix residual_matrix(const GramMatrix& input, const GramMatrix& output,
                        const std::vector<double>& gammas,
                        const GramMatrix& flags) {
  require_same_size(input, output, gammas.size());
  if (flags.size() != input.size()) {
    throw ValidationError("flag Gram dimension does not match input Gram");
  }
  require_probabilities(gammas);
  const auto n = static_cast<Eigen::Index>(input.size());
  RVector roots(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    roots(i) = std::sqrt(gammas[static_cast<std::size_t>(i)]);
  }
  CMatrix omega(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex y = output.entries()(i, j) * flags.entries()(i, j);
      omega(i, j) = input.entries()(i, j) - roots(i) * y * roots(j);
    }
  }
  return omega;
}

FeasibilityReport check(const MachineSpec& spec, double psdTol) {
  spec.validate();
  return evaluate(spec.inputGram, spec.outputOverlaps, spec.gammas,
                  spec.flagGram, psdTol, FlagSearch::Given);
}

FeasibilityReport feasible_any_flags(const GramMatrix& input,
                                     const GramMatrix& output,
                                     const std::vector<double>& gammas,
                                     const FlagSearchOptions& options) {
  require_same_size(input, output, gammas.size());
  require_probabilities(gammas);
  const std::size_t n = input.size();

  if (n == 1) {
    return evaluate(input, output, gammas, GramMatrix::identity(1),
                    options.psdTol, FlagSearch::Exact);
  }
  if (n == 2) {
    return evaluate(input, output, gammas,
                    best_two_state_flags(input, output, gammas),
                    options.psdTol, FlagSearch::Exact);
  }

  std::vector<GramMatrix> candidates;
  candidates.push_back(GramMatrix::from_matrix(all_ones(n)));
  candidates.push_back(GramMatrix::identity(n));
  const double lowest = -1.0 / static_cast<double>(n - 1);
  const std::size_t points = std::max<std::size_t>(options.symmetricGridPoints, 2);
  for (std::size_t k = 0; k < points; ++k) {
    const double c = lowest + (1.0 - lowest) * static_cast<double>(k) /
                                  static_cast<double>(points - 1);
    candidates.push_back(GramMatrix::uniform(n, c));
  }

  FeasibilityReport best;
  bool haveBest = false;
  std::size_t tried = 0;
  auto consider = [&](const GramMatrix& flags) {
    ++tried;
    FeasibilityReport r = evaluate(input, output, gammas, flags,
                                   options.psdTol, FlagSearch::Heuristic);
    if (!haveBest || r.minEigenvalue > best.minEigenvalue || r.feasible) {
      best = std::move(r);
      haveBest = true;
    }
    return best.feasible;
  };

  for (const auto& flags : candidates) {
    if (consider(flags)) {
      best.candidatesTried = tried;
      return best;
    }
  }
  std::mt19937_64 rng(options.seed);
  for (std::size_t s = 0; s < options.randomSamples; ++s) {
    if (consider(random_flag_gram(n, rng))) break;
  }
  best.candidatesTried = tried;
  return best;
}

std::vector<std::size_t> killed_support(const GramMatrix& input,
                                        const GramMatrix& output, double tol) {
  if (input.size() != output.size()) {
    throw ValidationError("dimension mismatch between input and output Grams");
  }
  const PsdVerdict outputs = is_psd(output.entries(), 0.0);
  const double outNorm = outputs.eigenvalues.cwiseAbs().maxCoeff();
  if (outputs.minEigenvalue <= tol * outNorm) {
    throw ValidationError(
        "killed support undefined: output states are linearly dependent");
  }
  std::vector<bool> killed(input.size(), false);
  for (const NullVector& b : null_space(input, tol)) {
    for (std::size_t j = 0; j < input.size(); ++j) {
      if (std::abs(b.coefficients(static_cast<Eigen::Index>(j))) > tol) {
        killed[j] = true;
      }
    }
  }
  std::vector<std::size_t> indices;
  for (std::size_t j = 0; j < killed.size(); ++j) {
    if (killed[j]) indices.push_back(j);
  }
  return indices;
}

std::vector<std::vector<double>> brute_region(const GramMatrix& input,
                                              const GramMatrix& output,
                                              double step,
                                              const FlagSearchOptions& options) {
  const std::size_t n = input.size();
  if (n > 3) {
    throw ValidationError("brute_region is an oracle for n <= 3 only");
  }
  if (output.size() != n) {
    throw ValidationError("dimension mismatch between input and output Grams");
  }
  if (!(step > 0.0 && step <= 1.0)) {
    throw ValidationError("grid step must lie in (0, 1]");
  }
  const auto cells = static_cast<std::size_t>(std::llround(1.0 / step));
  std::vector<double> axis(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) {
    axis[k] = std::min(1.0, static_cast<double>(k) * step);
  }

  std::vector<std::vector<double>> feasible;
  std::vector<std::size_t> index(n, 0);
  std::vector<double> gammas(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) gammas[i] = axis[index[i]];
    if (feasible_any_flags(input, output, gammas, options).feasible) {
      feasible.push_back(gammas);
    }
    // Odometer increment, last index fastest.
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++index[pos] <= cells) break;
      index[pos] = 0;
      if (pos == 0) return feasible;
    }
  }
}

}  // namespace cloneprob
