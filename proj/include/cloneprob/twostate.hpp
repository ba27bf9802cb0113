#pragma once

#include <array>

#include "cloneprob/gram.hpp"

namespace cloneprob {

/// Overlap moduli of a two-state machine: eta_in = |<Phi_1|Phi_2>|,
/// eta_out = |<Psi_1|Psi_2>|.
struct Region2 {
  double etaIn = 0.0;
  double etaOut = 0.0;

  void validate() const;
  /// eta_in <= eta_out: gamma = (1,1) is reachable.
  bool deterministic() const { return etaIn <= etaOut; }
};

using Pair = std::array<double, 2>;

/// Cloning |psi_i>|phi_i> -> |psi_i>^{(x)m} for two states. Only the moduli
/// of alpha and beta enter any result; phases are accepted and ignored.
struct TwoStateProblem {
  Complex alpha;  // <psi_1|psi_2>
  Complex beta;   // <phi_1|phi_2>
  int m = 2;
  Pair priors{0.5, 0.5};

  void validate() const;
  double etaIn() const;   // |alpha beta|
  double etaOut() const;  // |alpha|^m
  Region2 region() const { return {etaIn(), etaOut()}; }
  /// Bob's machine |phi_i> -> |psi_i>^{(x)(m-1)}.
  Region2 bobRegion() const;
  /// Alice's machine |psi_i> -> |psi_i>^{(x)m}.
  Region2 aliceRegion() const;
};

/// sqrt((1-g1)(1-g2)) - eta_in + eta_out sqrt(g1 g2); nonnegative exactly on
/// the achievable region.
double region_slack(const Region2& r, double g1, double g2);

bool region_feasible(const Region2& r, double g1, double g2,
                     double slack = 1e-12);

/// Largest g2 in [0,1] with (g1, g2) achievable. For eta_in > eta_out, g1 must
/// lie in [0, 1 - eta_in^2].
double boundary_gamma2(const Region2& r, double g1);

/// Largest t with (t*d1, t*d2) achievable and inside the unit square.
/// The region is star-shaped about the origin, so the ray meets it in [0, t].
double ray_boundary(const Region2& r, double d1, double d2);

struct Optimum {
  double value = 0.0;
  Pair argmax{0.0, 0.0};
};

/// max p1 g1 + p2 g2 over the achievable region of problem.region().
Optimum gamma_totmax_2(const TwoStateProblem& problem);

/// Same maximization over an arbitrary two-state region.
Optimum maximize_total(const Region2& r, const Pair& priors);

/// Bob-then-Alice protocol realizing a target pair.
struct Decomposition {
  Pair gammaB{0.0, 0.0};
  Pair gammaA{0.0, 0.0};
  Pair achieved{0.0, 0.0};  // gB + (1 - gB) gA
  Pair target{0.0, 0.0};
  double slackB = 0.0;      // region_slack of gammaB for Bob's machine
  double slackA = 0.0;      // region_slack of gammaA for Alice's machine
};

/// Throws ValidationError if (g1, g2) is not achievable for the joint machine.
Decomposition decompose(const TwoStateProblem& problem, double g1, double g2);

/// Limit of gamma_totmax_2 as m -> infinity (eta_out -> 0): optimal
/// unambiguous discrimination of the product states.
double discrimination_limit(const TwoStateProblem& problem);

}  // namespace cloneprob
