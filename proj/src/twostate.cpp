#include "cloneprob/twostate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace cloneprob {

namespace {

// Substitution filter for roots of the squared boundary equation.
constexpr double kRootFilter = 1e-10;
constexpr double kBisectionTol = 1e-12;

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream msg;
    msg << name << " = " << value << " is outside [0,1]";
    throw ValidationError(msg.str());
  }
}

// Real roots of a x^2 + b x + c = 0 via the cancellation-free formula.
std::vector<double> real_roots(double a, double b, double c) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
  if (std::abs(a) <= 1e-14 * scale) {
    if (std::abs(b) <= 1e-14 * scale) return {};
    return {-c / b};
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc < -1e-12 * scale * scale) return {};
    disc = 0.0;
  }
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) return {0.0};
  return {q / a, c / q};
}

// Largest x in [lo, hi] with pred(x), given pred(lo) and the predicate
// holding on an interval starting at lo.
template <typename Pred>
double bisect_last_true(Pred pred, double lo, double hi) {
  while (hi - lo > kBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

void validate_priors(const Pair& p) {
  if (!(p[0] >= 0.0 && p[1] >= 0.0) || std::abs(p[0] + p[1] - 1.0) > 1e-12) {
    throw ValidationError("priors must be nonnegative and sum to 1");
  }
}

Pair swapped(const Pair& p) { return {p[1], p[0]}; }

}  // namespace

void Region2::validate() const {
  require_unit_interval(etaIn, "eta_in");
  require_unit_interval(etaOut, "eta_out");
}

void TwoStateProblem::validate() const {
  if (!(std::abs(alpha) < 1.0)) {
    throw ValidationError("|alpha| must be < 1 (distinct originals)");
  }
  if (!(std::abs(beta) <= 1.0 + 1e-12)) {
    throw ValidationError("|beta| must be <= 1");
  }
  if (m < 2) throw ValidationError("copy count m must be >= 2");
  validate_priors(priors);
}

double TwoStateProblem::etaIn() const {
  return std::min(1.0, std::abs(alpha) * std::abs(beta));
}

double TwoStateProblem::etaOut() const { return std::pow(std::abs(alpha), m); }

Region2 TwoStateProblem::bobRegion() const {
  return {std::min(1.0, std::abs(beta)), std::pow(std::abs(alpha), m - 1)};
}

Region2 TwoStateProblem::aliceRegion() const {
  return {std::abs(alpha), std::pow(std::abs(alpha), m)};
}

double region_slack(const Region2& r, double g1, double g2) {
  return std::sqrt(std::max(0.0, (1.0 - g1) * (1.0 - g2))) - r.etaIn +
         r.etaOut * std::sqrt(std::max(0.0, g1 * g2));
}

bool region_feasible(const Region2& r, double g1, double g2, double slack) {
  r.validate();
  require_unit_interval(g1, "gamma1");
  require_unit_interval(g2, "gamma2");
  return region_slack(r, g1, g2) >= -slack;
}

double boundary_gamma2(const Region2& r, double g1) {
  r.validate();
  require_unit_interval(g1, "gamma1");
  const double edge = 1.0 - r.etaIn * r.etaIn;
  if (!r.deterministic() && g1 > edge + 1e-12) {
    std::ostringstream msg;
    msg << "gamma1 = " << g1 << " exceeds 1 - eta_in^2 = " << edge;
    throw ValidationError(msg.str());
  }
  if (region_slack(r, g1, 1.0) >= -1e-12) return 1.0;

  // Squared equality as a quadratic in s = sqrt(g2):
  // [(1-g1) + eta_out^2 g1] s^2 - 2 eta_in eta_out sqrt(g1) s
  //   + [eta_in^2 - (1-g1)] = 0.
  const double rg1 = std::sqrt(g1);
  const double a = (1.0 - g1) + r.etaOut * r.etaOut * g1;
  const double b = -2.0 * r.etaIn * r.etaOut * rg1;
  const double c = r.etaIn * r.etaIn - (1.0 - g1);
  std::optional<double> best;
  for (double s : real_roots(a, b, c)) {
    if (s < -1e-12 || s > 1.0 + 1e-12) continue;
    s = std::clamp(s, 0.0, 1.0);
    // Squaring admits roots where eta_in - eta_out sqrt(g1) s < 0; the
    // substitution check discards them.
    if (std::abs(region_slack(r, g1, s * s)) > kRootFilter) continue;
    if (!best || s > *best) best = s;
  }
  if (best) return *best * *best;

  if (region_slack(r, g1, 0.0) >= -1e-12) {
    const double s = bisect_last_true(
        [&](double t) { return region_slack(r, g1, t * t) >= 0.0; }, 0.0, 1.0);
    return s * s;
  }
  std::ostringstream msg;
  msg << "no achievable gamma2 for gamma1 = " << g1;
  throw ValidationError(msg.str());
}

double ray_boundary(const Region2& r, double d1, double d2) {
  r.validate();
  if (!(d1 >= 0.0 && d2 >= 0.0) || (d1 == 0.0 && d2 == 0.0)) {
    throw ValidationError("ray direction must be nonnegative and nonzero");
  }
  const double tMax = 1.0 / std::max(d1, d2);
  auto slackAt = [&](double t) {
    return region_slack(r, std::min(1.0, t * d1), std::min(1.0, t * d2));
  };
  if (slackAt(tMax) >= 0.0) return tMax;

  // Along g = t d the squared equality reads
  // d1 d2 (1 - eta_out^2) t^2 - (d1 + d2 - 2 eta_in eta_out sqrt(d1 d2)) t
  //   + (1 - eta_in^2) = 0.
  const double cross = std::sqrt(d1 * d2);
  const double a = d1 * d2 * (1.0 - r.etaOut * r.etaOut);
  const double b = -(d1 + d2 - 2.0 * r.etaIn * r.etaOut * cross);
  const double c = 1.0 - r.etaIn * r.etaIn;
  std::optional<double> best;
  for (double t : real_roots(a, b, c)) {
    if (t < -1e-12 || t > tMax) continue;
    t = std::max(t, 0.0);
    if (std::abs(slackAt(t)) > kRootFilter) continue;
    if (!best || t < *best) best = t;
  }
  if (best) return *best;
  return bisect_last_true([&](double t) { return slackAt(t) >= 0.0; }, 0.0,
                          tMax);
}

Optimum maximize_total(const Region2& r, const Pair& priors) {
  r.validate();
  validate_priors(priors);
  if (r.deterministic()) return {priors[0] + priors[1], {1.0, 1.0}};

  auto pointAt = [&](double theta) -> Pair {
    const double d1 = std::cos(theta);
    const double d2 = std::sin(theta);
    const double t = ray_boundary(r, std::max(d1, 0.0), std::max(d2, 0.0));
    return {std::clamp(t * d1, 0.0, 1.0), std::clamp(t * d2, 0.0, 1.0)};
  };
  auto objective = [&](double theta) {
    const Pair g = pointAt(theta);
    return priors[0] * g[0] + priors[1] * g[1];
  };

  // The achievable region is convex with a corner at the origin, so the
  // linear objective is unimodal along the outer boundary curve.
  const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = std::numbers::pi / 2.0;
  double u = hi - invPhi * (hi - lo);
  double v = lo + invPhi * (hi - lo);
  double fu = objective(u);
  double fv = objective(v);
  while (hi - lo > 1e-10) {
    if (fu < fv) {
      lo = u;
      u = v;
      fu = fv;
      v = lo + invPhi * (hi - lo);
      fv = objective(v);
    } else {
      hi = v;
      v = u;
      fv = fu;
      u = hi - invPhi * (hi - lo);
      fu = objective(u);
    }
  }

  Optimum best;
  best.value = -1.0;
  for (double theta : {0.0, std::numbers::pi / 2.0, 0.5 * (lo + hi)}) {
    const Pair g = pointAt(theta);
    const double value = priors[0] * g[0] + priors[1] * g[1];
    if (value > best.value) best = {value, g};
  }
  return best;
}

Optimum gamma_totmax_2(const TwoStateProblem& problem) {
  problem.validate();
  return maximize_total(problem.region(), problem.priors);
}

Decomposition decompose(const TwoStateProblem& problem, double g1, double g2) {
  problem.validate();
  require_unit_interval(g1, "gamma1");
  require_unit_interval(g2, "gamma2");
  const Region2 joint = problem.region();
  const Region2 bob = problem.bobRegion();
  const Region2 alice = problem.aliceRegion();
  if (region_slack(joint, g1, g2) < -kRootFilter) {
    std::ostringstream msg;
    msg << "target (" << g1 << ", " << g2
        << ") is not achievable by any joint machine";
    throw ValidationError(msg.str());
  }

  Decomposition d;
  d.target = {g1, g2};
  auto finish = [&](Pair gB, Pair gA) {
    d.gammaB = gB;
    d.gammaA = gA;
    for (int i = 0; i < 2; ++i) {
      d.achieved[i] = gB[i] + (1.0 - gB[i]) * gA[i];
    }
    d.slackB = region_slack(bob, gB[0], gB[1]);
    d.slackA = region_slack(alice, gA[0], gA[1]);
    return d;
  };

  if (g1 == 0.0 && g2 == 0.0) return finish({0.0, 0.0}, {0.0, 0.0});
  if (bob.deterministic()) return finish({1.0, 1.0}, {0.0, 0.0});
  if (alice.deterministic()) return finish({0.0, 0.0}, {1.0, 1.0});

  // Work with the larger coordinate first; mirror at the end.
  const bool swap = g1 < g2;
  const Pair t = swap ? Pair{g2, g1} : Pair{g1, g2};
  const double x = t[1] / t[0];

  // Joint boundary point on the ray through the target, and Bob's boundary
  // point on the same ray.
  const double top = ray_boundary(joint, 1.0, x);
  const double bobTop = ray_boundary(bob, 1.0, x);
  const Pair gB{bobTop, x * bobTop};
  const Pair boundary{top, x * top};
  Pair gA;
  for (int i = 0; i < 2; ++i) {
    gA[i] = std::clamp(1.0 - (1.0 - boundary[i]) / (1.0 - gB[i]), 0.0, 1.0);
  }
  if (swap) return finish(swapped(gB), swapped(gA));
  return finish(gB, gA);
}

double discrimination_limit(const TwoStateProblem& problem) {
  problem.validate();
  return maximize_total(Region2{problem.etaIn(), 0.0}, problem.priors).value;
}

}  // namespace cloneprob
