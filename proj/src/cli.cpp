#include "cloneprob/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "cloneprob/feasibility.hpp"
#include "cloneprob/gram.hpp"
#include "cloneprob/io.hpp"
#include "cloneprob/symmetric.hpp"
#include "cloneprob/twostate.hpp"

namespace cloneprob::cli {

namespace {

using io::Json;

// Verdict plus whatever the command wants to print.
struct Outcome {
  int code = kPositive;
  std::string text;
};

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return io::parse(buffer.str(), path);
}

void require_format(const RunConfig& cfg, bool csvAllowed) {
  if (cfg.format == Format::Csv && !csvAllowed) {
    throw ValidationError("--format csv is only available for 'region'");
  }
}

std::string render(const RunConfig& cfg, const Json& j,
                   const std::function<std::string()>& text) {
  if (cfg.format == Format::Text) return text();
  return io::dump(j) + "\n";
}

// --alpha/--beta/--m/--p1 or --problem FILE.
struct ProblemArgs {
  std::string file;
  double alpha = std::nan("");
  double beta = std::nan("");
  int m = 2;
  double p1 = 0.5;

  void attach(CLI::App* sub, bool withPriors) {
    sub->add_option("--problem", file, "TwoStateProblem JSON file");
    sub->add_option("--alpha", alpha, "<psi_1|psi_2> (real)");
    sub->add_option("--beta", beta, "<phi_1|phi_2> (real)");
    sub->add_option("--m", m, "number of copies")->capture_default_str();
    if (withPriors) {
      sub->add_option("--p1", p1, "prior of the first state")->capture_default_str();
    }
  }

  TwoStateProblem resolve() const {
    TwoStateProblem p;
    if (!file.empty()) {
      p = io::two_state_from_json(read_json_file(file));
    } else {
      if (std::isnan(alpha) || std::isnan(beta)) {
        throw ValidationError("give --problem FILE or both --alpha and --beta");
      }
      if (!(p1 >= 0.0 && p1 <= 1.0)) throw ValidationError("--p1 must lie in [0,1]");
      p.alpha = alpha;
      p.beta = beta;
      p.m = m;
      p.priors = {p1, 1.0 - p1};
    }
    p.validate();
    return p;
  }
};

// --n/--m/--alpha-abs or --instance FILE.
struct InstanceArgs {
  std::string file;
  std::size_t n = 3;
  int m = 2;
  double alphaAbs = std::nan("");

  void attach(CLI::App* sub) {
    sub->add_option("--instance", file, "GapInstance JSON file");
    sub->add_option("--n", n, "number of states")->capture_default_str();
    sub->add_option("--m", m, "number of copies")->capture_default_str();
    sub->add_option("--alpha-abs", alphaAbs, "|<psi_i|psi_j>|");
  }

  GapInstance resolve() const {
    if (!file.empty()) return io::gap_instance_from_json(read_json_file(file));
    if (std::isnan(alphaAbs)) {
      throw ValidationError("give --instance FILE or --alpha-abs");
    }
    GapInstance inst{n, m, alphaAbs};
    inst.validate();
    return inst;
  }
};

std::vector<double> parse_gammas(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("--gammas: '" + item + "' is not a number");
    }
  }
  return out;
}

struct FeasibleArgs {
  std::string specFile;
  std::string inputStates;
  std::string outputStates;
  std::string inputGram;
  std::string outputGram;
  std::string flagsFile;
  std::string gammas;
  std::size_t samples = 200;
};

Outcome cmd_feasible(const FeasibleArgs& a, const RunConfig& cfg) {
  require_format(cfg, false);
  std::optional<MachineSpec> spec;
  bool hasFlags = false;
  if (!a.specFile.empty()) {
    spec = io::machine_from_json(read_json_file(a.specFile), &hasFlags);
    if (!a.gammas.empty()) spec->gammas = parse_gammas(a.gammas);
  } else {
    std::optional<GramMatrix> in;
    std::optional<GramMatrix> out;
    if (!a.inputStates.empty() && !a.outputStates.empty()) {
      in = gram_of(io::state_set_from_json(read_json_file(a.inputStates)));
      out = gram_of(io::state_set_from_json(read_json_file(a.outputStates)));
    } else if (!a.inputGram.empty() && !a.outputGram.empty()) {
      in = io::gram_from_json(read_json_file(a.inputGram), a.inputGram);
      out = io::gram_from_json(read_json_file(a.outputGram), a.outputGram);
    } else {
      throw ValidationError(
          "give --spec, --input-states/--output-states, or "
          "--input-gram/--output-gram");
    }
    if (a.gammas.empty()) throw ValidationError("--gammas is required");
    spec = MachineSpec{*in, *out, parse_gammas(a.gammas),
                       GramMatrix::identity(in->size())};
  }
  if (!a.flagsFile.empty()) {
    spec->flagGram = io::gram_from_json(read_json_file(a.flagsFile), a.flagsFile);
    hasFlags = true;
  }

  FlagSearchOptions options;
  options.psdTol = cfg.tolPsd;
  options.seed = cfg.seed;
  options.randomSamples = a.samples;
  const FeasibilityReport report =
      hasFlags ? check(*spec, cfg.tolPsd)
               : feasible_any_flags(spec->inputGram, spec->outputOverlaps,
                                    spec->gammas, options);
  Outcome o;
  o.code = report.feasible ? kPositive : kNegative;
  o.text = render(cfg, io::to_json(report), [&] {
    return std::string("feasible: ") + (report.feasible ? "yes" : "no") +
           "\nmin eigenvalue: " + fmt6(report.minEigenvalue) +
           "\nflag search: " + std::string(to_string(report.search)) + "\n";
  });
  return o;
}

Outcome cmd_region(const ProblemArgs& a, int steps, const RunConfig& cfg) {
  if (steps < 2) throw ValidationError("--steps must be >= 2");
  const TwoStateProblem p = a.resolve();
  const Region2 r = p.region();
  Outcome o;
  std::vector<Pair> points;
  if (!r.deterministic()) {
    // Trace the equality curve by ray angle, from the gamma2 axis to the
    // gamma1 axis.
    for (int k = 0; k <= steps; ++k) {
      const double theta =
          std::numbers::pi / 2.0 * (1.0 - static_cast<double>(k) / steps);
      const double d1 = k == 0 ? 0.0 : std::cos(theta);
      const double d2 = k == steps ? 0.0 : std::sin(theta);
      const double t = ray_boundary(r, d1, d2);
      points.push_back({std::min(1.0, t * d1), std::min(1.0, t * d2)});
    }
  }
  if (cfg.format == Format::Json) {
    Json pts = Json::array();
    for (const auto& pt : points) pts.push_back(Json::array({pt[0], pt[1]}));
    o.text = io::dump(Json{{"problem", io::to_json(p)},
                           {"deterministic", r.deterministic()},
                           {"points", pts}}) +
             "\n";
    return o;
  }
  auto number = cfg.format == Format::Csv ? fmt17 : fmt6;
  o.text = "gamma1,gamma2\n";
  if (r.deterministic()) {
    o.text += "deterministic\n";
    return o;
  }
  for (const auto& pt : points) {
    o.text += number(pt[0]) + "," + number(pt[1]) + "\n";
  }
  return o;
}

Outcome cmd_optimize(const ProblemArgs& a, const RunConfig& cfg) {
  require_format(cfg, false);
  const TwoStateProblem p = a.resolve();
  const Optimum opt = gamma_totmax_2(p);
  Json j = io::to_json(opt);
  j["problem"] = io::to_json(p);
  j["deterministic"] = p.region().deterministic();
  Outcome o;
  o.text = render(cfg, j, [&] {
    return "gamma_totmax: " + fmt6(opt.value) + "\nargmax: (" +
           fmt6(opt.argmax[0]) + ", " + fmt6(opt.argmax[1]) + ")\n";
  });
  return o;
}

Outcome cmd_decompose(const ProblemArgs& a, double g1, double g2,
                      const RunConfig& cfg) {
  require_format(cfg, false);
  const TwoStateProblem p = a.resolve();
  if (!(g1 >= 0.0 && g1 <= 1.0 && g2 >= 0.0 && g2 <= 1.0)) {
    throw ValidationError("--g1 and --g2 must lie in [0,1]");
  }
  Outcome o;
  if (region_slack(p.region(), g1, g2) < -1e-10) {
    o.code = kNegative;
    const Json j{{"feasible", false},
                 {"target", Json::array({g1, g2})},
                 {"slack", region_slack(p.region(), g1, g2)}};
    o.text = render(cfg, j, [&] {
      return "target (" + fmt6(g1) + ", " + fmt6(g2) +
             ") is not achievable\n";
    });
    return o;
  }
  const Decomposition d = decompose(p, g1, g2);
  Json j = io::to_json(d);
  j["feasible"] = true;
  o.text = render(cfg, j, [&] {
    return "Bob   (phi -> psi^(m-1)): (" + fmt6(d.gammaB[0]) + ", " +
           fmt6(d.gammaB[1]) + ")\nAlice (psi -> psi^m):     (" +
           fmt6(d.gammaA[0]) + ", " + fmt6(d.gammaA[1]) + ")\nachieved: (" +
           fmt6(d.achieved[0]) + ", " + fmt6(d.achieved[1]) + ")\n";
  });
  return o;
}

Outcome cmd_gap(const InstanceArgs& a, const RunConfig& cfg) {
  require_format(cfg, false);
  const GapCertificate cert = gap_certificate(a.resolve());
  Outcome o;
  o.code = cert.positive ? kPositive : kNegative;
  o.text = render(cfg, io::to_json(cert), [&] { return cert.summary() + "\n"; });
  return o;
}

Outcome cmd_witness(const InstanceArgs& a, const RunConfig& cfg) {
  require_format(cfg, false);
  const LowerBound lb = scenario1_lower(a.resolve(), cfg.tolPsd);
  Outcome o;
  o.code = lb.report.feasible ? kPositive : kNegative;
  o.text = render(cfg, io::to_json(lb.witness), [&] {
    return "lower bound: " + fmt6(lb.bound) + "\nwitness gamma: " +
           fmt6(lb.witnessTotal) + "\nfeasible: " +
           (lb.report.feasible ? "yes" : "no") + "\n";
  });
  return o;
}

Outcome cmd_realize(const std::string& gramFile, const RunConfig& cfg) {
  require_format(cfg, false);
  const GramMatrix g = io::gram_from_json(read_json_file(gramFile), gramFile);
  const StateSet s = realize(g);
  Outcome o;
  o.text = render(cfg, io::to_json(s), [&] {
    return "realized " + std::to_string(s.size()) + " states in dimension " +
           std::to_string(s.dimension()) + "\n";
  });
  return o;
}

Outcome cmd_lemma1(const InstanceArgs& a, double beta, const RunConfig& cfg) {
  require_format(cfg, false);
  if (!a.file.empty()) {
    throw ValidationError("lemma1 takes --n/--m/--alpha-abs");
  }
  if (std::isnan(a.alphaAbs)) throw ValidationError("--alpha-abs is required");
  Tolerances tol;
  tol.null = cfg.tolNull;
  tol.bisection = cfg.tolBisection;
  const Lemma1Report r = lemma1_demo(a.n, a.m, a.alphaAbs, beta, tol);
  Outcome o;
  o.code = r.allKilled ? kPositive : kNegative;
  o.text = render(cfg, io::to_json(r), [&] {
    std::string killed;
    for (std::size_t j : r.killed) {
      killed += (killed.empty() ? "" : ",") + std::to_string(j);
    }
    return "killed indices: {" + killed + "}\nall killed: " +
           (r.allKilled ? "yes" : "no") + "\n";
  });
  return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Feasibility and optimal success probabilities of probabilistic "
               "cloning machines with supplementary information"};
  app.name("cloneprob");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::optional<double> tolPsd;
  std::string format = "json";
  app.add_option("--tol-psd", tolPsd,
                 "PSD tolerance (relative); falls back to CLONEPROB_TOL_PSD");
  app.add_option("--tol-null", cfg.tolNull, "null-space tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-bisect", cfg.tolBisection, "bisection tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--seed", cfg.seed, "seed for flag-Gram sampling");
  app.add_option("--out", cfg.outFile, "write output to FILE");

  FeasibleArgs feasibleArgs;
  auto* feasible = app.add_subcommand("feasible", "test a machine spec");
  feasible->add_option("--spec", feasibleArgs.specFile, "MachineSpec JSON");
  feasible->add_option("--input-states", feasibleArgs.inputStates, "StateSet JSON");
  feasible->add_option("--output-states", feasibleArgs.outputStates, "StateSet JSON");
  feasible->add_option("--input-gram", feasibleArgs.inputGram, "GramMatrix JSON");
  feasible->add_option("--output-gram", feasibleArgs.outputGram, "GramMatrix JSON");
  feasible->add_option("--flags", feasibleArgs.flagsFile,
                       "flag GramMatrix JSON (omit to search)");
  feasible->add_option("--gammas", feasibleArgs.gammas, "comma-separated gammas");
  feasible->add_option("--samples", feasibleArgs.samples,
                       "random flag Grams tried for n >= 3")
      ->capture_default_str();

  ProblemArgs regionArgs;
  int steps = 100;
  auto* region = app.add_subcommand("region", "boundary of the achievable region (CSV)");
  regionArgs.attach(region, false);
  region->add_option("--steps", steps, "number of segments")->capture_default_str();

  ProblemArgs optimizeArgs;
  auto* optimize = app.add_subcommand("optimize", "maximal prior-weighted success");
  optimizeArgs.attach(optimize, true);

  ProblemArgs decomposeArgs;
  double g1 = std::nan("");
  double g2 = std::nan("");
  auto* decomp = app.add_subcommand("decompose", "Bob-then-Alice protocol for a target");
  decomposeArgs.attach(decomp, false);
  decomp->add_option("--g1", g1, "target gamma1")->required();
  decomp->add_option("--g2", g2, "target gamma2")->required();

  InstanceArgs gapArgs;
  auto* gap = app.add_subcommand("gap", "quantum vs classical communication gap");
  gapArgs.attach(gap);

  InstanceArgs witnessArgs;
  auto* witness = app.add_subcommand("witness", "feasible lower-bound witness machine");
  witnessArgs.attach(witness);

  std::string gramFile;
  auto* realizeCmd = app.add_subcommand("realize", "states with a given Gram matrix");
  realizeCmd->add_option("--gram", gramFile, "GramMatrix JSON")->required();

  InstanceArgs lemmaArgs;
  double lemmaBeta = std::nan("");
  auto* lemma = app.add_subcommand("lemma1", "supports forced to zero for Bob alone");
  lemmaArgs.attach(lemma);
  lemma->add_option("--beta", lemmaBeta, "supplement overlap (default -1/(n-1))");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPositive : kInputError;
  }

  try {
    if (tolPsd) {
      cfg.tolPsd = *tolPsd;
    } else if (const char* env = std::getenv("CLONEPROB_TOL_PSD")) {
      try {
        cfg.tolPsd = std::stod(env);
      } catch (const std::exception&) {
        throw ValidationError("CLONEPROB_TOL_PSD is not a number");
      }
    }
    if (!(cfg.tolPsd > 0.0)) throw ValidationError("PSD tolerance must be positive");
    cfg.format = format == "csv" ? Format::Csv
                 : format == "text" ? Format::Text
                                    : Format::Json;

    Outcome o;
    if (*feasible) o = cmd_feasible(feasibleArgs, cfg);
    else if (*region) o = cmd_region(regionArgs, steps, cfg);
    else if (*optimize) o = cmd_optimize(optimizeArgs, cfg);
    else if (*decomp) o = cmd_decompose(decomposeArgs, g1, g2, cfg);
    else if (*gap) o = cmd_gap(gapArgs, cfg);
    else if (*witness) o = cmd_witness(witnessArgs, cfg);
    else if (*realizeCmd) o = cmd_realize(gramFile, cfg);
    else o = cmd_lemma1(lemmaArgs, lemmaBeta, cfg);

    if (cfg.outFile.empty()) {
      out << o.text;
    } else {
      std::ofstream file(cfg.outFile);
      if (!file) throw ValidationError("cannot write '" + cfg.outFile + "'");
      file << o.text;
    }
    return o.code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace cloneprob::cli
