#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "cloneprob/feasibility.hpp"
#include "cloneprob/gram.hpp"

namespace cloneprob {

/// n states sqrt(1-(n-1)z^2)|j> - z sum_{i != j} |i> sharing one real
/// pairwise overlap.
struct SymmetricFamily {
  std::size_t n = 0;
  double z = 0.0;
  double overlap = 0.0;
};

/// Pairwise overlap z[(n-2)z - 2 sqrt(1-(n-1)z^2)] of the family.
double family_overlap(std::size_t n, double z);

/// Largest admissible z, 1/sqrt(n(n-1)), where the overlap reaches -1/(n-1).
double family_z_max(std::size_t n);

/// Explicit vectors of the family for parameter z.
StateSet family_states(std::size_t n, double z);

struct BuiltFamily {
  SymmetricFamily family;
  StateSet states;
};

/// Solves family_overlap(n, z) = targetOverlap for the smallest z by
/// scan-then-bisection and returns the verified state set.
BuiltFamily build_family(std::size_t n, double targetOverlap,
                         double tol = Tolerances{}.bisection);

/// Originals with overlap -|alpha| and supplements with overlap -1/(n-1),
/// uniform priors.
struct GapInstance {
  std::size_t n = 3;
  int m = 2;
  double alphaAbs = 0.1;

  void validate() const;
  double betaAbs() const { return 1.0 / static_cast<double>(n - 1); }
  /// Signed overlap alpha = -|alpha|.
  double alpha() const { return -alphaAbs; }
  double beta() const { return -betaAbs(); }
};

/// Joint input Gram [<psi_i|psi_j><phi_i|phi_j>], built from explicit
/// family states; off-diagonal (+|alpha|)/(n-1).
GramMatrix joint_input_gram(const GapInstance& inst);

/// [<psi_i|psi_j>^k] from the explicit originals.
GramMatrix copies_gram(const GapInstance& inst, int k);

struct LowerBound {
  double bound = 0.0;        // (n-1-|a|)/(n-1-|a|^m)
  double witnessTotal = 0.0; // sum_i gamma_i / n of the witness
  MachineSpec witness;
  FeasibilityReport report;  // check(witness)
};

/// Quantum-communication lower bound with a concrete feasible witness
/// machine (parity-dependent gammas and flag overlaps).
LowerBound scenario1_lower(const GapInstance& inst,
                           double psdTol = Tolerances{}.psd);

/// Classical-communication upper bound (1-|a|)/(1-(n-1)|a|^m).
double scenario2_upper(const GapInstance& inst);

struct GapCertificate {
  GapInstance instance;
  double lowerI = 0.0;
  double upperII = 0.0;
  double gapLowerBound = 0.0;  // closed form
  double identityError = 0.0;  // |lowerI - upperII - gapLowerBound|
  bool positive = false;
  std::string summary() const;
};

/// Throws std::logic_error if the two closed forms disagree beyond 1e-12.
GapCertificate gap_certificate(const GapInstance& inst);

struct Lemma1Report {
  std::size_t n = 0;
  int copies = 0;  // k = m - 1 copies Bob would try to make
  double beta = 0.0;
  std::vector<std::size_t> killed;
  bool allKilled = false;
};

/// Bob alone, holding the supplements, trying to produce m-1 copies.
/// beta defaults to -1/(n-1) when NaN.
Lemma1Report lemma1_demo(std::size_t n, int m, double alphaAbs,
                         double beta = std::numeric_limits<double>::quiet_NaN(),
                         const Tolerances& tol = {});

}  // namespace cloneprob
