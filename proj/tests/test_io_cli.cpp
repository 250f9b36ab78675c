#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "qdiv/divergences.hpp"
#include "qdiv/hypothesis.hpp"
#include "qdiv/io.hpp"
#include "qdiv/random.hpp"

using namespace qdiv;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("QDIV_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, got);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string("/tmp/qdiv_test_") + name;
  std::ofstream f(path);
  f << text;
  return path;
}

const char* kRhoJson = R"({"blocks": [[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]]})";
const char* kSigmaJson =
    R"({"blocks": [[[[0.3333333333333333,0],[0,0]],[[0,0],[0.6666666666666667,0]]]]})";

}  // namespace

TEST_CASE("parse_state reads the diagonal example") {
  const FdState s = parse_state_json(kRhoJson);
  CHECK(s.block_count() == 1);
  CHECK(s.block(0).entries()(0, 0).real() == doctest::Approx(0.5));
  CHECK(s.block(0).entries()(1, 1).real() == doctest::Approx(0.5));
  CHECK(s.is_state());
}

TEST_CASE("parse_state rejects malformed JSON") {
  CHECK_THROWS_AS(parse_state_json("{\"blocks\": ["), ParseError);
  CHECK_THROWS_AS(parse_state_json("{}"), ParseError);
  CHECK_THROWS_AS(parse_state_json(R"({"blocks": [[[0.5]]]})"), ParseError);
}

TEST_CASE("parse_state rejects invalid states with named violations") {
  const char* negative = R"({"blocks": [[[[ -0.1,0],[0,0]],[[0,0],[1.1,0]]]]})";
  CHECK_THROWS_WITH_AS(parse_state_json(negative), doctest::Contains("negative eigenvalue"),
                       ValidationError);
  const char* skew = R"({"blocks": [[[[0.5,0],[1,0]],[[0,0],[0.5,0]]]]})";
  CHECK_THROWS_AS(parse_state_json(skew), ValidationError);
}

TEST_CASE("state emit/parse round trip") {
  Rng rng(3);
  std::vector<HermMatrix> blocks{random_density(3, 3, rng), random_psd(2, 1, rng)};
  const FdState state(blocks);
  const FdState back = parse_state_json(emit_state_json(state));
  REQUIRE(back.block_count() == 2);
  for (size_t k = 0; k < 2; ++k)
    CHECK((back.block(k).entries() - state.block(k).entries()).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("subalgebra and chain JSON") {
  const char* link1 = R"({"dim": 2, "unitary": [[[1,0],[0,0]],[[0,0],[1,0]]],
                          "pattern": [[1,2]]})";
  const char* link2 = R"({"dim": 2, "unitary": [[[1,0],[0,0]],[[0,0],[1,0]]],
                          "pattern": [[1,1],[1,1]]})";
  const Subalgebra n = parse_subalgebra_json(link1);
  CHECK(n.ambient_dim() == 2);
  CHECK(n.pattern().size() == 1);
  const std::string chain_text = std::string("{\"links\": [") + link1 + "," + link2 + "]}";
  const SubalgebraChain chain = parse_chain_json(chain_text);
  CHECK(chain.links().size() == 2);
  CHECK_THROWS_AS(
      parse_subalgebra_json(
          R"({"dim": 2, "unitary": [[[1,0],[0,0]],[[0,0],[1,0]]], "pattern": [[1,1]]})"),
      ValidationError);
}

TEST_CASE("measure JSON") {
  const auto atomic = parse_measure_json(R"({"atoms": [[0.3, 0.5], [0.7, 0.5]]})");
  CHECK(atomic.atoms().size() == 2);
  CHECK(atomic.is_probability());
  const auto uniform = parse_measure_json(R"({"density": {"kind": "uniform"}})");
  CHECK(uniform.is_probability(1e-12));
  const auto mixed = parse_measure_json(
      R"({"atoms": [[0.5, 0.5]], "density": {"kind": "uniform", "mass": 0.5}})");
  CHECK(mixed.is_probability(1e-12));
  CHECK_THROWS_AS(parse_measure_json(R"({"density": {"kind": "wavelet"}})"), ParseError);
  CHECK_THROWS_AS(parse_measure_json(R"({"atoms": [[1.5, 1.0]]})"), ValidationError);
}

TEST_CASE("csv formatting uses 12 significant digits and inf literals") {
  CHECK(csv_number(1.0) == "1");
  CHECK(csv_number(ExtReal::pos_inf()) == "inf");
  CHECK(csv_number(ExtReal::neg_inf()) == "-inf");
  CHECK(csv_number(0.12345678901234567) == "0.123456789012");
}

TEST_CASE("cli div matches the library bit for bit") {
  const std::string rho = write_temp("rho.json", kRhoJson);
  const std::string sigma = write_temp("sigma.json", kSigmaJson);
  const auto run = run_cli("div --alpha 2 --rho " + rho + " --sigma " + sigma);
  REQUIRE(run.exit_code == 0);

  const FdState r = parse_state_json(kRhoJson);
  const FdState s = parse_state_json(kSigmaJson);
  const std::string expected =
      "alpha,sandwiched_q,sandwiched_d,standard_d,relative_entropy,dmax,fidelity\n" +
      csv_number(2.0) + "," + csv_number(sandwiched_q(r, s, 2.0)) + "," +
      csv_number(sandwiched_d(r, s, 2.0)) + "," + csv_number(standard_d(r, s, 2.0)) + "," +
      csv_number(relative_entropy(r, s)) + "," + csv_number(dmax(r, s)) + "," +
      csv_number(fidelity(r, s)) + "\n";
  CHECK(run.output == expected);
}

TEST_CASE("cli sce matches the library sequence") {
  const std::string rho = write_temp("rho.json", kRhoJson);
  const std::string sigma = write_temp("sigma.json", kSigmaJson);
  const auto run =
      run_cli("sce --r 0.25 --nmax 64 --classical --rho " + rho + " --sigma " + sigma);
  REQUIRE(run.exit_code == 0);

  const FdState r = parse_state_json(kRhoJson);
  const FdState s = parse_state_json(kSigmaJson);
  const std::vector<int> ns{8, 16, 32, 64};
  const auto seq = sce_sequence(r, s, 0.25, ns, TestingPath::Classical);
  std::string expected = "n,r,alpha_star,sce_value,hoeffding_value\n";
  for (size_t i = 0; i < ns.size(); ++i) {
    const auto res = min_type1(r, s, ns[i], 0.25, TestingPath::Classical);
    expected += std::to_string(ns[i]) + "," + csv_number(0.25) + "," +
                csv_number(res.alpha_star) + "," + csv_number(seq[i]) + "," +
                csv_number(hoeffding_anti_divergence(r, s, 0.25)) + "\n";
  }
  CHECK(run.output == expected);
}

TEST_CASE("cli gicar gap column decreases over the final rows") {
  const std::string mu1 = write_temp("mu1.json", R"({"atoms": [[0.3,0.5],[0.7,0.5]]})");
  const std::string mu2 =
      write_temp("mu2.json", R"({"atoms": [[0.3,0.25],[0.5,0.5],[0.7,0.25]]})");
  const auto run =
      run_cli("gicar --mu1 " + mu1 + " --mu2 " + mu2 + " --alpha 2 --nlist 50,100,200,400");
  REQUIRE(run.exit_code == 0);
  std::vector<double> gaps;
  std::istringstream ss(run.output);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "alpha,n,gicar_q,classical_q,gap");
  while (std::getline(ss, line)) {
    const auto pos = line.rfind(',');
    gaps.push_back(std::stod(line.substr(pos + 1)));
  }
  REQUIRE(gaps.size() == 4);
  CHECK(gaps[3] < gaps[2]);
  CHECK(gaps[2] < gaps[1]);
}

TEST_CASE("cli reports validation failures with exit code 2") {
  const std::string bad = write_temp("bad.json", "{\"blocks\": [");
  const std::string sigma = write_temp("sigma.json", kSigmaJson);
  const auto run = run_cli("div --alpha 2 --rho " + bad + " --sigma " + sigma);
  CHECK(run.exit_code == 2);
  const std::string negative =
      write_temp("neg.json", R"({"blocks": [[[[ -0.1,0],[0,0]],[[0,0],[1.1,0]]]]})");
  const auto run2 = run_cli("div --alpha 2 --rho " + negative + " --sigma " + sigma);
  CHECK(run2.exit_code == 2);
}

TEST_CASE("cli measured output is deterministic for a fixed seed") {
  const std::string rho =
      write_temp("plus.json", R"({"blocks": [[[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]]]})");
  const std::string sigma = write_temp(
      "sigma_nc.json",
      R"({"blocks": [[[[0.6666666666666667,0],[0,0]],[[0,0],[0.3333333333333333,0]]]]})");
  const std::string args = "measured --alpha 2 --seed 7 --rho " + rho + " --sigma " + sigma;
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  REQUIRE(first.exit_code == 0);
  CHECK(first.output == second.output);
}

TEST_CASE("cli --config supplies options and explicit flags override") {
  const std::string rho = write_temp("rho.json", kRhoJson);
  const std::string sigma = write_temp("sigma.json", kSigmaJson);
  const std::string cfg = write_temp(
      "cfg.json", "{\"alpha\": \"2\", \"rho\": \"" + rho + "\", \"sigma\": \"" + sigma + "\"}");
  const auto via_config = run_cli("div --config " + cfg);
  const auto via_flags = run_cli("div --alpha 2 --rho " + rho + " --sigma " + sigma);
  REQUIRE(via_config.exit_code == 0);
  CHECK(via_config.output == via_flags.output);
  const auto overridden = run_cli("div --config " + cfg + " --alpha 3");
  const auto direct = run_cli("div --alpha 3 --rho " + rho + " --sigma " + sigma);
  REQUIRE(overridden.exit_code == 0);
  CHECK(overridden.output == direct.output);
}

TEST_CASE("cli output is identical under QDIV_THREADS parallelism") {
  const std::string rho = write_temp("rho.json", kRhoJson);
  const std::string sigma = write_temp("sigma.json", kSigmaJson);
  const std::string args =
      "div --alpha 0.5,0.75,1.5,2,3,4,8 --rho " + rho + " --sigma " + sigma;
  const auto serial = run_cli(args);
  const char* bin = std::getenv("QDIV_BIN");
  const std::string cmd =
      std::string("QDIV_THREADS=4 ") + bin + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string parallel;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof(buf), pipe)) parallel.append(buf, got);
  const int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(parallel == serial.output);
}

TEST_CASE("cli json format emits the same cells") {
  const std::string rho = write_temp("rho.json", kRhoJson);
  const std::string sigma = write_temp("sigma.json", kSigmaJson);
  const auto run =
      run_cli("cutoff --kappa 0.5 --format json --rho " + rho + " --sigma " + sigma);
  REQUIRE(run.exit_code == 0);
  const FdState r = parse_state_json(kRhoJson);
  const FdState s = parse_state_json(kSigmaJson);
  const std::string expected = std::string("{\"columns\":[\"kappa\",\"cutoff_rate\"],") +
                               "\"rows\":[[\"" + csv_number(0.5) + "\",\"" +
                               csv_number(cutoff_rate(r, s, 0.5)) + "\"]]}\n";
  CHECK(run.output == expected);
}
