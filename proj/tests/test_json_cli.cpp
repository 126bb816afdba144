#include <catch2/catch_amalgamated.hpp>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "chaoskit/json_io.hpp"
#include "support/oracles.hpp"

using namespace chaoskit;

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout only
};

/// Run the command-line tool with the given arguments, stderr silenced.
RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CHAOSKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path temp_file(const std::string& stem, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() /
                    (stem + "." + std::to_string(getpid()) + ".json");
  std::ofstream f(path);
  f << contents;
  f.close();
  return path;
}

}  // namespace

TEST_CASE("kernel JSON round trip is bit exact in exact mode", "[json_cli]") {
  oracles::Rng rng(6060);
  for (int trial = 0; trial < 10; ++trial) {
    const RealKernel rk = oracles::random_real_kernel(rng, 3, 4);
    CHECK(real_kernel_from_json(to_json(rk)) == rk);
    CHECK(real_kernel_from_json(json::parse(to_json(rk).dump())) == rk);

    const ComplexKernel ck = oracles::random_complex_kernel(rng, 2, 2, 4);
    CHECK(complex_kernel_from_json(to_json(ck)) == ck);
    CHECK(complex_kernel_from_json(json::parse(to_json(ck).dump())) == ck);
  }
  // The generic dispatcher picks the right space.
  const ComplexKernel ck = oracles::random_complex_kernel(rng, 1, 2, 3);
  const auto var = kernel_from_json(to_json(ck));
  REQUIRE(std::holds_alternative<ComplexKernel>(var));
  CHECK(std::get<ComplexKernel>(var) == ck);
}

TEST_CASE("floating kernels serialize as plain numbers", "[json_cli]") {
  ComplexKernel k = ComplexKernel::zero(1, 0, Mode::floating);
  ComplexMultiIndex m;
  m.holo[2] = 1;
  k.add_term(m, Scalar::from_double(0.25, -1.5));
  const json j = to_json(k);
  CHECK(j["mode"] == "float");
  CHECK(j["terms"][0]["coef"]["re"].is_number());
  CHECK(complex_kernel_from_json(j) == k);
}

TEST_CASE("malformed JSON reports line and column", "[json_cli]") {
  const std::string text = "{\n  \"space\": \"real\",\n  \"degree\": oops\n}\n";
  try {
    parse_json_text(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.column >= 13);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("schema violations are rejected with context", "[json_cli]") {
  const json base = {{"space", "real"},
                     {"degree", 1},
                     {"mode", "exact"},
                     {"terms", json::array({{{"monomial", {{"U", {{"1", 1}}}}},
                                             {"coef", {{"re", "1"}, {"im", "0"}}}}})}};
  CHECK(real_kernel_from_json(base).degree == 1);

  json bad = base;
  bad["mode"] = "sloppy";
  CHECK_THROWS_AS(real_kernel_from_json(bad), ParseError);

  bad = base;
  bad["terms"][0]["coef"]["re"] = "not-a-number";
  CHECK_THROWS_AS(real_kernel_from_json(bad), ParseError);

  bad = base;
  bad["terms"][0]["coef"]["re"] = 1.0;  // number in exact mode
  CHECK_THROWS_AS(real_kernel_from_json(bad), ParseError);

  bad = base;
  bad["terms"][0]["monomial"]["U"]["0"] = 1;  // nonpositive index
  CHECK_THROWS_AS(real_kernel_from_json(bad), ParseError);

  // Degree mismatch is a domain error (the declared invariant), not a parse error.
  bad = base;
  bad["degree"] = 2;
  CHECK_THROWS_AS(real_kernel_from_json(bad), std::domain_error);
}

TEST_CASE("conversion verb emits the real pair and round trips", "[json_cli]") {
  const json input = {{"space", "complex"},
                      {"bidegree", json::array({1, 1})},
                      {"mode", "exact"},
                      {"terms", json::array({{{"monomial", {{"holo", {1}}, {"anti", {1}}}},
                                             {"coef", {{"re", "1"}, {"im", "0"}}}}})}};
  const auto in_path = temp_file("convert_in", input.dump());
  const RunResult r = run_cli("convert --input " + in_path.string());
  REQUIRE(r.exit_code == 0);
  const json out = json::parse(r.output);
  const RealKernel u = real_kernel_from_json(out["u"]);
  const RealKernel v = real_kernel_from_json(out["v"]);
  RealMultiIndex uu, vv;
  uu.add(BasisLabel::u(1), 2);
  vv.add(BasisLabel::v(1), 2);
  CHECK(u.coeff(uu) == Scalar::one(Mode::exact));
  CHECK(u.coeff(vv) == Scalar::one(Mode::exact));
  CHECK(v.is_zero());

  // Feed the pair back through invert: the original kernel returns.
  const auto pair_path = temp_file("invert_in", out.dump());
  const RunResult r2 = run_cli("invert --input " + pair_path.string());
  REQUIRE(r2.exit_code == 0);
  const json back = json::parse(r2.output);
  CHECK(back["single_chaos"] == 1);
  bool found = false;
  for (const auto& slot : back["slots"]) {
    if (slot["bidegree"] == json::array({1, 1})) {
      CHECK(complex_kernel_from_json(slot) == complex_kernel_from_json(input));
      found = true;
    }
  }
  CHECK(found);
  std::filesystem::remove(in_path);
  std::filesystem::remove(pair_path);
}

TEST_CASE("inversion verb flags multi-chaos kernels", "[json_cli]") {
  const json input = {{"space", "real"},
                      {"degree", 1},
                      {"mode", "exact"},
                      {"terms", json::array({{{"monomial", {{"U", {{"1", 1}}}}},
                                             {"coef", {{"re", "1"}, {"im", "0"}}}}})}};
  const auto path = temp_file("invert_multi", input.dump());
  const RunResult r = run_cli("invert --input " + path.string());
  REQUIRE(r.exit_code == 0);
  const json out = json::parse(r.output);
  CHECK(out["single_chaos"].is_null());
  CHECK(out["verdict"] == "not single-chaos");
  REQUIRE(out["slots"].size() == 2);
  // Slots are (0,1) then (1,0), each carrying coefficient 1/2.
  CHECK(out["slots"][0]["terms"][0]["coef"]["re"] == "1/2");
  CHECK(out["slots"][1]["terms"][0]["coef"]["re"] == "1/2");
  std::filesystem::remove(path);
}

TEST_CASE("density verb reports the degenerate case", "[json_cli]") {
  RunResult r = run_cli("check-density --holo 1 --anti 1");
  REQUIRE(r.exit_code == 0);
  json out = json::parse(r.output);
  CHECK(out["dense"] == false);

  r = run_cli("check-density --holo 1 --anti 2");
  REQUIRE(r.exit_code == 0);
  out = json::parse(r.output);
  CHECK(out["dense"] == true);

  r = run_cli("check-density --holo 1 --holo 2 --anti 1");
  REQUIRE(r.exit_code == 0);
  out = json::parse(r.output);
  CHECK(out["dense"] == true);
}

TEST_CASE("verification verb reports zero discrepancy in exact mode", "[json_cli]") {
  const json input = {{"space", "complex"},
                      {"bidegree", json::array({2, 1})},
                      {"mode", "exact"},
                      {"terms", json::array({{{"monomial", {{"holo", {1, 2}}, {"anti", {2}}}},
                                             {"coef", {{"re", "3/4"}, {"im", "-1/2"}}}}})}};
  const auto path = temp_file("verify_in", input.dump());
  const RunResult r = run_cli("verify --input " + path.string() + " --samples 25 --seed 9");
  REQUIRE(r.exit_code == 0);
  const json out = json::parse(r.output);
  CHECK(out["samples"] == 25);
  CHECK(out["max_discrepancy"] == "0");
  CHECK(out["equal"] == true);
  std::filesystem::remove(path);
}

TEST_CASE("exit codes distinguish parse and domain failures", "[json_cli]") {
  const auto bad_json = temp_file("bad_syntax", "{ not json");
  CHECK(run_cli("convert --input " + bad_json.string()).exit_code == 2);
  std::filesystem::remove(bad_json);

  // Declared bidegree disagrees with the monomial: domain error.
  const json mismatch = {{"space", "complex"},
                         {"bidegree", json::array({2, 0})},
                         {"mode", "exact"},
                         {"terms", json::array({{{"monomial", {{"holo", {1}}, {"anti", {1}}}},
                                                {"coef", {{"re", "1"}, {"im", "0"}}}}})}};
  const auto bad_degree = temp_file("bad_degree", mismatch.dump());
  CHECK(run_cli("convert --input " + bad_degree.string()).exit_code == 1);
  std::filesystem::remove(bad_degree);

  CHECK(run_cli("convert --input /nonexistent/kernel.json").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code != 0);
}

TEST_CASE("simulation verb emits a complete report", "[json_cli]") {
  const RunResult r =
      run_cli("simulate --paths 2000 --dt 0.01 --horizon 2 --seed 4 --convergence-paths 100");
  REQUIRE(r.exit_code == 0);
  const json out = json::parse(r.output);
  CHECK(out["estimates"].contains("mean"));
  CHECK(out["estimates"].contains("mean_sq"));
  CHECK(out["standard_errors"].contains("mean"));
  CHECK(out["standard_errors"].contains("mean_sq"));
  REQUIRE(out["convergence_table"].size() >= 2);
  CHECK(out["convergence_table"][0].contains("dt"));
  CHECK(out["convergence_table"][0].contains("median_abs_error"));
}

TEST_CASE("demonstration verb prints the worked example", "[json_cli]") {
  const RunResult r = run_cli("demo-ou");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("component") != std::string::npos);
  CHECK(r.output.find("(1, 0)") != std::string::npos);  // recovered one-sided kernel
}

TEST_CASE("deterministic outputs for fixed seeds", "[json_cli]") {
  const RunResult a = run_cli("simulate --paths 500 --dt 0.02 --horizon 2 --seed 11");
  const RunResult b = run_cli("simulate --paths 500 --dt 0.02 --horizon 2 --seed 11");
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
}
