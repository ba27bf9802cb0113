#include "cloneprob/symmetric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace cloneprob {

namespace {

constexpr std::size_t kScanCells = 1024;

void require_family_size(std::size_t n) {
  if (n < 2) throw ValidationError("symmetric family needs n >= 2");
}

GramMatrix hadamard(const GramMatrix& a, const GramMatrix& b) {
  return GramMatrix::from_matrix(a.entries().cwiseProduct(b.entries()));
}

}  // namespace

double family_overlap(std::size_t n, double z) {
  require_family_size(n);
  const double nd = static_cast<double>(n);
  const double weight = std::sqrt(std::max(0.0, 1.0 - (nd - 1.0) * z * z));
  return z * ((nd - 2.0) * z - 2.0 * weight);
}

double family_z_max(std::size_t n) {
  require_family_size(n);
  const double nd = static_cast<double>(n);
  return 1.0 / std::sqrt(nd * (nd - 1.0));
}

StateSet family_states(std::size_t n, double z) {
  require_family_size(n);
  if (!(z >= 0.0 && z <= family_z_max(n) * (1.0 + 1e-12))) {
    throw ValidationError("family parameter z outside [0, 1/sqrt(n(n-1))]");
  }
  const double nd = static_cast<double>(n);
  const double weight = std::sqrt(std::max(0.0, 1.0 - (nd - 1.0) * z * z));
  const auto size = static_cast<Eigen::Index>(n);
  std::vector<CVector> vectors;
  vectors.reserve(n);
  for (Eigen::Index j = 0; j < size; ++j) {
    CVector v = CVector::Constant(size, Complex(-z, 0.0));
    v(j) = Complex(weight, 0.0);
    vectors.push_back(std::move(v));
  }
  return StateSet::create(std::move(vectors));
}

BuiltFamily build_family(std::size_t n, double targetOverlap, double tol) {
  require_family_size(n);
  const double lowest = -1.0 / static_cast<double>(n - 1);
  if (!(targetOverlap >= lowest - 1e-15 && targetOverlap <= 0.0)) {
    std::ostringstream msg;
    msg << "target overlap " << targetOverlap << " outside [" << lowest
        << ", 0]";
    throw ValidationError(msg.str());
  }
  const double zMax = family_z_max(n);
  auto excess = [&](double z) { return family_overlap(n, z) - targetOverlap; };

  // The overlap is continuous with value 0 at z = 0 and -1/(n-1) at zMax, so
  // a sign change exists; scanning first makes the smallest root win.
  double z = 0.0;
  double prev = 0.0;
  bool found = std::abs(excess(0.0)) <= tol;
  for (std::size_t k = 1; k <= kScanCells && !found; ++k) {
    const double zk = zMax * static_cast<double>(k) / kScanCells;
    const double gk = excess(zk);
    if (std::abs(gk) <= tol) {
      z = zk;
      found = true;
    } else if (gk < 0.0) {
      double lo = prev;
      double hi = zk;
      for (int it = 0; it < 200 && !found; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = excess(mid);
        if (std::abs(gm) <= tol || hi - lo < 1e-17) {
          z = mid;
          found = true;
        } else if (gm > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
    }
    prev = zk;
  }
  if (!found) {
    throw std::logic_error("family parameter bisection failed to converge");
  }

  BuiltFamily built{{n, z, family_overlap(n, z)}, family_states(n, z)};
  const GramMatrix g = gram_of(built.states);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && std::abs(g(i, j) - targetOverlap) > 1e-10) {
        throw std::logic_error("constructed family misses the target overlap");
      }
    }
  }
  return built;
}

void GapInstance::validate() const {
  if (n < 3) {
    throw ValidationError(
        "gap instances need n >= 3 (for n = 2 the two-step protocol is optimal)");
  }
  if (m < 2) throw ValidationError("copy count m must be >= 2");
  if (!(alphaAbs > 0.0 && alphaAbs < betaAbs())) {
    std::ostringstream msg;
    msg << "|alpha| = " << alphaAbs << " must lie in (0, 1/(n-1)) = (0, "
        << betaAbs() << ")";
    throw ValidationError(msg.str());
  }
}

GramMatrix joint_input_gram(const GapInstance& inst) {
  inst.validate();
  const GramMatrix psi = gram_of(build_family(inst.n, inst.alpha()).states);
  const GramMatrix phi = gram_of(build_family(inst.n, inst.beta()).states);
  return hadamard(psi, phi);
}

GramMatrix copies_gram(const GapInstance& inst, int k) {
  if (k < 1) throw ValidationError("copy count must be >= 1");
  const GramMatrix psi = gram_of(build_family(inst.n, inst.alpha()).states);
  return GramMatrix::from_matrix(psi.entries().unaryExpr(
      [k](const Complex& c) { return std::pow(c, k); }));
}

LowerBound scenario1_lower(const GapInstance& inst, double psdTol) {
  inst.validate();
  const double a = inst.alphaAbs;
  const double b = inst.betaAbs();
  const double am = std::pow(a, inst.m);
  const double nm1 = static_cast<double>(inst.n - 1);

  LowerBound lb{.bound = (nm1 - a) / (nm1 - am),
                .witnessTotal = 0.0,
                .witness = {joint_input_gram(inst), copies_gram(inst, inst.m),
                            {}, GramMatrix::identity(inst.n)},
                .report = {}};
  double gamma = 0.0;
  if (inst.m % 2 == 0) {
    // alpha^m > 0: all-ones flags leave a multiple of Z.
    gamma = (1.0 - b * a) / (1.0 - am);
    lb.witness.flagGram = GramMatrix::from_matrix(all_ones(inst.n));
  } else {
    // alpha^m < 0: flags with overlap beta restore a positive product.
    gamma = (1.0 - b * a) / (1.0 - b * am);
    lb.witness.flagGram = GramMatrix::uniform(inst.n, inst.beta());
  }
  lb.witness.gammas.assign(inst.n, gamma);
  lb.witnessTotal = gamma;
  lb.report = check(lb.witness, psdTol);
  return lb;
}

double scenario2_upper(const GapInstance& inst) {
  inst.validate();
  const double a = inst.alphaAbs;
  const double nm1 = static_cast<double>(inst.n - 1);
  return (1.0 - a) / (1.0 - nm1 * std::pow(a, inst.m));
}

GapCertificate gap_certificate(const GapInstance& inst) {
  inst.validate();
  const double a = inst.alphaAbs;
  const double nd = static_cast<double>(inst.n);
  const double am = std::pow(a, inst.m);
  const double am1 = std::pow(a, inst.m - 1);

  GapCertificate cert;
  cert.instance = inst;
  cert.lowerI = (nd - 1.0 - a) / (nd - 1.0 - am);
  cert.upperII = scenario2_upper(inst);
  cert.gapLowerBound = (nd - 2.0) * a * (1.0 + am - nd * am1) /
                       ((nd - 1.0 - am) * (1.0 - (nd - 1.0) * am));
  cert.identityError = std::abs(cert.lowerI - cert.upperII - cert.gapLowerBound);
  if (cert.identityError > 1e-12) {
    throw std::logic_error("gap closed form disagrees with the bound difference");
  }
  cert.positive = cert.gapLowerBound > 0.0;
  return cert;
}

std::string GapCertificate::summary() const {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "n=%zu m=%d |alpha|=%.6g: lower_I=%.6g upper_II=%.6g "
                "gap>=%.6g (%s)",
                instance.n, instance.m, instance.alphaAbs, lowerI, upperII,
                gapLowerBound, positive ? "positive" : "not certified");
  return buf;
}

Lemma1Report lemma1_demo(std::size_t n, int m, double alphaAbs, double beta,
                         const Tolerances& tol) {
  const GapInstance inst{n, m, alphaAbs};
  inst.validate();
  if (std::isnan(beta)) beta = inst.beta();

  Lemma1Report report;
  report.n = n;
  report.copies = m - 1;
  report.beta = beta;
  const GramMatrix phi = gram_of(build_family(n, beta, tol.bisection).states);
  report.killed = killed_support(phi, copies_gram(inst, report.copies), tol.null);
  report.allKilled = report.killed.size() == n;
  return report;
}

}  // namespace cloneprob
