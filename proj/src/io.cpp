#include "cloneprob/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cloneprob::io {

namespace {

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(path + ": missing field '" + key + "'");
  }
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path + ": expected a number");
  return j.get<double>();
}

long long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path + ": expected an integer");
  return j.get<long long>();
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path + ": expected an array");
  return j;
}

Json pair_json(const Pair& p) { return Json::array({p[0], p[1]}); }

Json real_vector(const RVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

void dump_into(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad =
      indent >= 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ')
                  : std::string();
  const std::string closePad =
      indent >= 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ')
                  : std::string();
  const char* newline = indent >= 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += newline;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += newline;
        }
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += indent >= 0 ? ": " : ":";
        dump_into(it.value(), indent, depth + 1, out);
      }
      out += newline;
      out += closePad;
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays ([re, im] pairs, gamma pairs) stay on one line.
      const bool flat = j.size() <= 2 && std::all_of(j.begin(), j.end(),
                                                     [](const Json& e) {
                                                       return e.is_primitive();
                                                     });
      out += "[";
      if (!flat) out += newline;
      bool first = true;
      for (const auto& e : j) {
        if (!first) {
          out += ",";
          if (!flat) out += newline;
          else if (indent >= 0) out += " ";
        }
        first = false;
        if (!flat) out += pad;
        dump_into(e, indent, depth + 1, out);
      }
      if (!flat) {
        out += newline;
        out += closePad;
      }
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) {
    throw SchemaError(path + ": complex numbers are [re, im] arrays");
  }
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const StateSet& s) {
  Json vectors = Json::array();
  for (const auto& v : s.vectors()) {
    Json amps = Json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) amps.push_back(to_json(v(k)));
    vectors.push_back(std::move(amps));
  }
  return {{"dimension", s.dimension()},
          {"vectors", std::move(vectors)},
          {"labels", s.labels()}};
}

Json to_json(const GramMatrix& g) {
  return {{"n", g.size()}, {"entries", to_json(g.entries())}};
}

Json to_json(const MachineSpec& spec) {
  return {{"inputGram", to_json(spec.inputGram)},
          {"outputOverlaps", to_json(spec.outputOverlaps)},
          {"gammas", spec.gammas},
          {"flagGram", to_json(spec.flagGram)}};
}

Json to_json(const FeasibilityReport& r) {
  return {{"feasible", r.feasible},
          {"minEigenvalue", r.minEigenvalue},
          {"eigenvalues", real_vector(r.eigenvalues)},
          {"residual", to_json(r.residual)},
          {"flagGramUsed", to_json(r.flagGramUsed)},
          {"tolerance", r.tolerance},
          {"flagSearch", std::string(to_string(r.search))},
          {"candidatesTried", r.candidatesTried}};
}

Json to_json(const TwoStateProblem& p) {
  return {{"alpha", to_json(p.alpha)},
          {"beta", to_json(p.beta)},
          {"m", p.m},
          {"priors", pair_json(p.priors)}};
}

Json to_json(const Optimum& opt) {
  return {{"gamma_totmax", opt.value}, {"argmax", pair_json(opt.argmax)}};
}

Json to_json(const Decomposition& d) {
  return {{"gammaB", pair_json(d.gammaB)},
          {"gammaA", pair_json(d.gammaA)},
          {"achieved", pair_json(d.achieved)},
          {"target", pair_json(d.target)},
          {"residuals",
           {{"bob", d.slackB},
            {"alice", d.slackA},
            {"achievedMinusTarget",
             pair_json({d.achieved[0] - d.target[0], d.achieved[1] - d.target[1]})}}}};
}

Json to_json(const GapInstance& inst) {
  return {{"n", inst.n}, {"m", inst.m}, {"alpha_abs", inst.alphaAbs}};
}

Json to_json(const GapCertificate& c) {
  return {{"instance", to_json(c.instance)},
          {"lower_I", c.lowerI},
          {"upper_II", c.upperII},
          {"gap_lower_bound", c.gapLowerBound},
          {"identity_error", c.identityError},
          {"positive", c.positive},
          {"summary", c.summary()}};
}

Json to_json(const LowerBound& lb) {
  return {{"bound", lb.bound},
          {"witnessTotal", lb.witnessTotal},
          {"witness", to_json(lb.witness)},
          {"report", to_json(lb.report)}};
}

Json to_json(const Lemma1Report& r) {
  return {{"n", r.n},
          {"copies", r.copies},
          {"beta", r.beta},
          {"killed", r.killed},
          {"allKilled", r.allKilled}};
}

StateSet state_set_from_json(const Json& j) {
  const std::string path = "stateset";
  const long long d = integer(field(j, "dimension", path), path + ".dimension");
  if (d < 1) throw SchemaError(path + ".dimension: must be >= 1");
  const Json& vs = array(field(j, "vectors", path), path + ".vectors");
  std::vector<CVector> vectors;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string vp = at(path + ".vectors", i);
    const Json& amps = array(vs[i], vp);
    if (amps.size() != static_cast<std::size_t>(d)) {
      throw SchemaError(vp + ": expected " + std::to_string(d) + " amplitudes");
    }
    CVector v(d);
    for (std::size_t k = 0; k < amps.size(); ++k) {
      v(static_cast<Eigen::Index>(k)) = complex_from_json(amps[k], at(vp, k));
    }
    vectors.push_back(std::move(v));
  }
  std::vector<std::string> labels;
  if (auto it = j.find("labels"); it != j.end() && !it->is_null()) {
    for (std::size_t i = 0; i < array(*it, path + ".labels").size(); ++i) {
      if (!(*it)[i].is_string()) throw SchemaError(at(path + ".labels", i) + ": expected a string");
      labels.push_back((*it)[i].get<std::string>());
    }
  }
  return StateSet::create(std::move(vectors), std::move(labels));
}

GramMatrix gram_from_json(const Json& j, const std::string& path) {
  const long long n = integer(field(j, "n", path), path + ".n");
  const Json& rows = array(field(j, "entries", path), path + ".entries");
  if (n < 1 || rows.size() != static_cast<std::size_t>(n)) {
    throw SchemaError(path + ".entries: expected " + std::to_string(n) + " rows");
  }
  CMatrix m(n, n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string rp = at(path + ".entries", i);
    const Json& row = array(rows[i], rp);
    if (row.size() != static_cast<std::size_t>(n)) {
      throw SchemaError(rp + ": expected " + std::to_string(n) + " entries");
    }
    for (std::size_t k = 0; k < row.size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          complex_from_json(row[k], at(rp, k));
    }
  }
  return GramMatrix::from_matrix(m);
}

MachineSpec machine_from_json(const Json& j, bool* hasFlags) {
  const std::string path = "machine";
  GramMatrix input = gram_from_json(field(j, "inputGram", path), path + ".inputGram");
  GramMatrix output =
      gram_from_json(field(j, "outputOverlaps", path), path + ".outputOverlaps");
  const Json& gs = array(field(j, "gammas", path), path + ".gammas");
  std::vector<double> gammas;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    gammas.push_back(number(gs[i], at(path + ".gammas", i)));
  }
  const bool flags = j.contains("flagGram") && !j["flagGram"].is_null();
  if (hasFlags) *hasFlags = flags;
  GramMatrix flagGram = flags ? gram_from_json(j["flagGram"], path + ".flagGram")
                              : GramMatrix::identity(input.size());
  MachineSpec spec{std::move(input), std::move(output), std::move(gammas),
                   std::move(flagGram)};
  spec.validate();
  return spec;
}

TwoStateProblem two_state_from_json(const Json& j) {
  const std::string path = "problem";
  TwoStateProblem p;
  p.alpha = complex_from_json(field(j, "alpha", path), path + ".alpha");
  p.beta = complex_from_json(field(j, "beta", path), path + ".beta");
  p.m = static_cast<int>(integer(field(j, "m", path), path + ".m"));
  if (auto it = j.find("priors"); it != j.end()) {
    const Json& pr = array(*it, path + ".priors");
    if (pr.size() != 2) throw SchemaError(path + ".priors: expected two entries");
    p.priors = {number(pr[0], path + ".priors[0]"), number(pr[1], path + ".priors[1]")};
  }
  p.validate();
  return p;
}

GapInstance gap_instance_from_json(const Json& j) {
  const std::string path = "instance";
  const long long n = integer(field(j, "n", path), path + ".n");
  if (n < 0) throw SchemaError(path + ".n: must be nonnegative");
  GapInstance inst{static_cast<std::size_t>(n),
                   static_cast<int>(integer(field(j, "m", path), path + ".m")),
                   number(field(j, "alpha_abs", path), path + ".alpha_abs")};
  inst.validate();
  return inst;
}

std::string dump(const Json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  return out;
}

Json parse(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::ostringstream msg;
    msg << source << ": malformed JSON (" << e.what() << ")";
    throw SchemaError(msg.str());
  }
}

}  // namespace cloneprob::io
