#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "cloneprob/io.hpp"

using namespace cloneprob;
using io::Json;

namespace {

StateSet random_states(std::mt19937_64& rng, std::size_t n, Eigen::Index d) {
  std::normal_distribution<double> normal;
  std::vector<CVector> vs;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    CVector v(d);
    for (Eigen::Index k = 0; k < d; ++k) v(k) = Complex(normal(rng), normal(rng));
    vs.push_back(v.normalized());
    labels.push_back("s" + std::to_string(i));
  }
  return StateSet::create(std::move(vs), std::move(labels));
}

Json reparse(const Json& j) { return io::parse(io::dump(j), "test"); }

}  // namespace

TEST_SUITE("io") {

TEST_CASE("property: StateSet and GramMatrix survive a dump/parse round trip exactly") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_states(rng, 1 + trial % 5, 1 + trial % 4);
    const StateSet back = io::state_set_from_json(reparse(io::to_json(s)));
    REQUIRE(back.size() == s.size());
    CHECK(back.labels() == s.labels());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(back[i] == s[i]);

    const GramMatrix g = gram_of(s);
    const GramMatrix gb = io::gram_from_json(reparse(io::to_json(g)));
    CHECK(gb.entries() == g.entries());
  }
}

TEST_CASE("MachineSpec, TwoStateProblem and GapInstance round trips") {
  MachineSpec spec{GramMatrix::uniform(3, 0.05), GramMatrix::uniform(3, 0.01),
                   {0.9, 0.8, 0.7}, GramMatrix::uniform(3, 1.0 / 3.0)};
  bool hasFlags = false;
  const MachineSpec back = io::machine_from_json(reparse(io::to_json(spec)), &hasFlags);
  CHECK(hasFlags);
  CHECK(back.gammas == spec.gammas);
  CHECK(back.flagGram.entries() == spec.flagGram.entries());
  CHECK(back.inputGram.entries() == spec.inputGram.entries());

  Json noFlags = io::to_json(spec);
  noFlags.erase("flagGram");
  io::machine_from_json(noFlags, &hasFlags);
  CHECK_FALSE(hasFlags);

  const TwoStateProblem p{Complex(0.3, -0.4), Complex(0.1, 0.7), 3, {0.25, 0.75}};
  const TwoStateProblem pb = io::two_state_from_json(reparse(io::to_json(p)));
  CHECK(pb.alpha == p.alpha);
  CHECK(pb.beta == p.beta);
  CHECK(pb.m == 3);
  CHECK(pb.priors == p.priors);

  const GapInstance inst{4, 3, 0.123456789012345678};
  const GapInstance ib = io::gap_instance_from_json(reparse(io::to_json(inst)));
  CHECK(ib.n == 4);
  CHECK(ib.m == 3);
  CHECK(ib.alphaAbs == inst.alphaAbs);
}

TEST_CASE("dump prints doubles with 17 significant digits") {
  const std::string s = io::dump(Json{{"x", 0.1}}, -1);
  CHECK(s == "{\"x\":0.10000000000000001}");
  CHECK(io::dump(Json::array({1.0 / 3.0, 2}), -1) == "[0.33333333333333331,2]");
  CHECK(io::dump(Json{{"v", std::nan("")}}, -1) == "{\"v\":null}");
  const double tricky = 0.7960668479154466;
  CHECK(std::strtod(io::dump(Json(tricky)).c_str(), nullptr) == tricky);
}

TEST_CASE("dump keeps pairs on one line and nests the rest") {
  const std::string s = io::dump(Json{{"p", Json::array({0.5, 0.25})}});
  CHECK(s.find("[0.5, 0.25]") != std::string::npos);
  CHECK(io::parse(s, "t") == Json{{"p", Json::array({0.5, 0.25})}});
}

TEST_CASE("schema errors name the offending field") {
  auto message = [](auto&& fn) -> std::string {
    try {
      fn();
    } catch (const io::SchemaError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message([] { io::parse("{\"n\": 2,", "spec.json"); }).find("spec.json") != std::string::npos);
  CHECK(message([] { io::gram_from_json(Json{{"n", 2}}); }).find("entries") != std::string::npos);
  CHECK(message([] {
          io::gram_from_json(io::parse(R"({"n": 2, "entries": [[[1,0],[0,0]],[[0,0],1]]})", "t"));
        }).find("gram.entries[1][1]") != std::string::npos);
  CHECK(message([] {
          io::two_state_from_json(io::parse(R"({"alpha": [0.5,0], "beta": [0.5,0], "m": 2.5})", "t"));
        }).find("problem.m") != std::string::npos);
  CHECK(message([] {
          io::state_set_from_json(io::parse(R"({"dimension": 2, "vectors": [[[1,0]]]})", "t"));
        }).find("stateset.vectors[0]") != std::string::npos);
  CHECK(message([] { io::gap_instance_from_json(Json{{"n", 3}, {"m", 2}}); })
            .find("alpha_abs") != std::string::npos);
}

TEST_CASE("semantic errors surface as ValidationError") {
  CHECK_THROWS_AS(
      io::state_set_from_json(io::parse(R"({"dimension": 1, "vectors": [[[2,0]]]})", "t")),
      ValidationError);
  CHECK_THROWS_AS(io::gap_instance_from_json(Json{{"n", 3}, {"m", 2}, {"alpha_abs", 0.7}}),
                  ValidationError);
}

}  // TEST_SUITE
