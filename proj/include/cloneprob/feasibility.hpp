#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "cloneprob/gram.hpp"

namespace cloneprob {

/// A candidate machine {|Phi_i> --gamma_i--> |Psi_i>} together with the
/// overlaps of its success-branch flag states.
struct MachineSpec {
  GramMatrix inputGram;       // X = [<Phi_i|Phi_j>]
  GramMatrix outputOverlaps;  // [<Psi_i|Psi_j>]
  std::vector<double> gammas;
  GramMatrix flagGram;        // [<P_i|P_j>]

  /// Throws ValidationError on dimension mismatch or gamma outside [0,1].
  void validate() const;
};

/// How the flag Gram in a report was obtained.
enum class FlagSearch {
  Given,      // supplied by the caller
  Exact,      // n <= 2 analytic optimum
  Heuristic,  // n >= 3 candidate list plus random sampling; a miss is not a proof
};

std::string_view to_string(FlagSearch s);

struct FeasibilityReport {
  bool feasible = false;
  CMatrix residual;  // Omega = X - sqrt(Gamma) Y sqrt(Gamma)
  double minEigenvalue = 0.0;
  RVector eigenvalues;
  GramMatrix flagGramUsed = GramMatrix::identity(1);
  double tolerance = 0.0;
  FlagSearch search = FlagSearch::Given;
  std::size_t candidatesTried = 1;
};

struct FlagSearchOptions {
  double psdTol = Tolerances{}.psd;
  std::size_t randomSamples = 200;
  std::size_t symmetricGridPoints = 21;
  std::uint64_t seed = 0;
};

/// Y = outputOverlaps .* flagGram, Omega = X - sqrt(G) Y sqrt(G).
CMatrix residual_matrix(const GramMatrix& input, const GramMatrix& output,
                        const std::vector<double>& gammas,
                        const GramMatrix& flags);

FeasibilityReport check(const MachineSpec& spec,
                        double psdTol = Tolerances{}.psd);

/// Searches flag Grams for one that makes Omega PSD. Exact for n <= 2;
/// a heuristic lower bound on feasibility for n >= 3. Returns the first
/// feasible report, otherwise the one with the largest lambda_min.
FeasibilityReport feasible_any_flags(const GramMatrix& input,
                                     const GramMatrix& output,
                                     const std::vector<double>& gammas,
                                     const FlagSearchOptions& options = {});

/// Indices j that every machine must leave at gamma_j = 0 because some
/// linear dependency sum_i b_i |Phi_i> = 0 has b_j != 0 while the outputs
/// are linearly independent. Throws if the outputs are dependent.
std::vector<std::size_t> killed_support(const GramMatrix& input,
                                        const GramMatrix& output,
                                        double tol = Tolerances{}.null);

/// Grid oracle over [0,1]^n (n <= 3): every grid point accepted by
/// feasible_any_flags, in lexicographic grid order.
std::vector<std::vector<double>> brute_region(
    const GramMatrix& input, const GramMatrix& output, double step,
    const FlagSearchOptions& options = {});

}  // namespace cloneprob
