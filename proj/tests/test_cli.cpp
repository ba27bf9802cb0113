#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cloneprob/cli.hpp"
#include "cloneprob/io.hpp"

using namespace cloneprob;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cloneprob");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("cloneprob_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    rows.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("region: csv trace through the landmarks") {
  const auto r = run({"region", "--alpha", "0.5", "--beta", "1", "--m", "2", "--steps", "2",
                      "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("gamma1,gamma2\n", 0) == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == 0.0);
  CHECK(rows[0][1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rows[1][0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(rows[1][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(rows[2][0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rows[2][1] == 0.0);
}

TEST_CASE("region: every row lies on the boundary and gamma2 is unimodal") {
  const auto r = run({"--format", "csv", "region", "--alpha", "0.5", "--beta", "0.8", "--m", "2",
                      "--steps", "100"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 101);
  std::size_t peak = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double g1 = rows[k][0], g2 = rows[k][1];
    CHECK(std::abs(std::sqrt((1 - g1) * (1 - g2)) - 0.4 + 0.25 * std::sqrt(g1 * g2)) < 1e-9);
    if (rows[k][1] > rows[peak][1]) peak = k;
  }
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (k <= peak) CHECK(rows[k][1] >= rows[k - 1][1] - 1e-15);
    else CHECK(rows[k][1] <= rows[k - 1][1] + 1e-15);
  }
}

TEST_CASE("region: deterministic regime") {
  const auto r = run({"region", "--alpha", "0.5", "--beta", "0.4", "--m", "2", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out == "gamma1,gamma2\ndeterministic\n");
  const auto j = run({"region", "--alpha", "0.5", "--beta", "0.4", "--m", "2"});
  CHECK(io::parse(j.out, "out")["deterministic"] == true);
}

TEST_CASE("optimize and decompose") {
  const auto opt = run({"optimize", "--alpha", "0.5", "--beta", "0.8", "--m", "2"});
  REQUIRE(opt.code == 0);
  CHECK(io::parse(opt.out, "out")["gamma_totmax"].get<double>() == doctest::Approx(0.8));

  const auto dec = run({"decompose", "--alpha", "0.5", "--beta", "0.8", "--g1", "0.8", "--g2", "0.8"});
  REQUIRE(dec.code == 0);
  const auto j = io::parse(dec.out, "out");
  CHECK(j["gammaB"][0].get<double>() == doctest::Approx(0.4));
  CHECK(j["gammaA"][1].get<double>() == doctest::Approx(2.0 / 3.0));

  const auto bad = run({"decompose", "--alpha", "0.5", "--beta", "0.8", "--g1", "0.9", "--g2", "0.9"});
  CHECK(bad.code == 1);
  CHECK(io::parse(bad.out, "out")["feasible"] == false);
}

TEST_CASE("gap, witness and lemma1 exit codes") {
  const auto gap = run({"gap", "--n", "3", "--m", "2", "--alpha-abs", "0.1"});
  CHECK(gap.code == 0);
  CHECK(io::parse(gap.out, "out")["gap_lower_bound"].get<double>() ==
        doctest::Approx(0.036406522407958158).epsilon(1e-12));
  CHECK(run({"gap", "--n", "3", "--m", "2", "--alpha-abs", "0.499"}).code == 1);
  CHECK(run({"gap", "--n", "2", "--m", "2", "--alpha-abs", "0.1"}).code == 2);

  const auto w = run({"witness", "--n", "3", "--m", "2", "--alpha-abs", "0.1"});
  CHECK(w.code == 0);
  // The emitted spec is accepted by `feasible`.
  const std::string spec = temp_file("witness.json", w.out);
  const auto f = run({"feasible", "--spec", spec});
  CHECK(f.code == 0);
  CHECK(io::parse(f.out, "out")["feasible"] == true);

  CHECK(run({"lemma1", "--n", "3", "--m", "2", "--alpha-abs", "0.1"}).code == 0);
  CHECK(run({"lemma1", "--n", "3", "--m", "2", "--alpha-abs", "0.1", "--beta", "-0.45"}).code == 1);
}

TEST_CASE("feasible: grams from files with gammas and flag search") {
  const std::string in = temp_file(
      "in.json", R"({"n": 2, "entries": [[[1,0],[0.5,0]],[[0.5,0],[1,0]]]})");
  const std::string out = temp_file(
      "out.json", R"({"n": 2, "entries": [[[1,0],[0.25,0]],[[0.25,0],[1,0]]]})");
  CHECK(run({"feasible", "--input-gram", in, "--output-gram", out, "--gammas", "0.6,0.6"}).code == 0);
  CHECK(run({"feasible", "--input-gram", in, "--output-gram", out, "--gammas", "0.7,0.7"}).code == 1);
  CHECK(run({"feasible", "--input-gram", in, "--output-gram", out, "--gammas", "0.7"}).code == 2);
  const auto text = run({"--format", "text", "feasible", "--input-gram", in, "--output-gram", out,
                         "--gammas", "0.6,0.6"});
  CHECK(text.out.find("feasible: yes") != std::string::npos);
}

TEST_CASE("realize prints a state set with the requested Gram") {
  const std::string g = temp_file(
      "gram.json", R"({"n": 2, "entries": [[[1,0],[0,0.6]],[[0,-0.6],[1,0]]]})");
  const auto r = run({"realize", "--gram", g});
  REQUIRE(r.code == 0);
  const StateSet s = io::state_set_from_json(io::parse(r.out, "out"));
  CHECK(std::abs(gram_of(s)(0, 1) - Complex(0.0, 0.6)) < 1e-12);
}

TEST_CASE("input errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"gap", "--instance", temp_file("broken.json", "{\"n\": 3,")}).code == 2);
  CHECK(run({"gap", "--instance", "/nonexistent/file.json"}).code == 2);
  CHECK(run({"optimize", "--alpha", "1.5", "--beta", "0.5"}).code == 2);
  CHECK(run({"--format", "csv", "gap", "--n", "3", "--m", "2", "--alpha-abs", "0.1"}).code == 2);
  CHECK(run({"--format", "yaml", "gap", "--n", "3"}).code == 2);
  const auto malformed = run({"gap", "--instance", temp_file("broken2.json", "{\"n\": 3,")});
  CHECK(malformed.err.find("malformed JSON") != std::string::npos);
}

TEST_CASE("outputs are deterministic for a fixed seed") {
  const std::vector<std::string> args{"--seed", "5", "witness", "--n", "4", "--m", "3",
                                      "--alpha-abs", "0.05"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("--out writes to a file") {
  const auto path = (std::filesystem::temp_directory_path() / "cloneprob_test_out.json").string();
  std::filesystem::remove(path);
  const auto r = run({"--out", path, "gap", "--n", "3", "--m", "2", "--alpha-abs", "0.1"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(io::parse(buf.str(), path)["positive"] == true);
}

TEST_CASE("CLONEPROB_TOL_PSD is a fallback for --tol-psd") {
  const std::string in = temp_file(
      "tin.json", R"({"n": 2, "entries": [[[1,0],[0.5,0]],[[0.5,0],[1,0]]]})");
  const std::string out = temp_file(
      "tout.json", R"({"n": 2, "entries": [[[1,0],[0.25,0]],[[0.25,0],[1,0]]]})");
  const std::vector<std::string> args{"feasible", "--input-gram", in, "--output-gram", out,
                                      "--gammas", "0.67,0.67"};
  CHECK(run(args).code == 1);
  ::setenv("CLONEPROB_TOL_PSD", "0.1", 1);
  CHECK(run(args).code == 0);
  auto withFlag = args;
  withFlag.insert(withFlag.begin(), {"--tol-psd", "1e-9"});
  CHECK(run(withFlag).code == 1);
  ::setenv("CLONEPROB_TOL_PSD", "abc", 1);
  CHECK(run(args).code == 2);
  ::unsetenv("CLONEPROB_TOL_PSD");
}

}  // TEST_SUITE
