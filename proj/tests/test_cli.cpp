// End-to-end checks of the command-line binary (path injected by the build).
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

#ifndef SPARSESEL_CLI_PATH
#define SPARSESEL_CLI_PATH "sparsesel"
#endif

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  fs::path out = fs::temp_directory_path() / "sparsesel_cli_stdout.txt";
  std::string cmd = std::string(SPARSESEL_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(out);
  return {WEXITSTATUS(rc), ss.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("generate, evaluate, bound, and solve pipeline") {
  fs::path dir = fs::temp_directory_path() / "sparsesel_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string inst = (dir / "i.json").string();

  auto gen = run_cli("gen gaussian --n 10 --p 20 --k 2 --seed 7 -o " + inst);
  REQUIRE(gen.exit_code == 0);
  json gen_out = json::parse(gen.stdout_text);
  CHECK(gen_out.at("planted_support").size() == 2);

  auto exact = run_cli("exact -i " + inst + " --k 2");
  REQUIRE(exact.exit_code == 0);
  json exact_out = json::parse(exact.stdout_text);
  double psi = exact_out.at("psi").get<double>();
  CHECK(exact_out.at("num_supports_evaluated").get<int>() == 190);

  auto bound = run_cli("bound -i " + inst + " --k 2 --engine sdp");
  REQUIRE(bound.exit_code == 0);
  double psi_lower = json::parse(bound.stdout_text).at("psi_lower").get<double>();
  CHECK(psi_lower <= psi + 1e-8 * (1.0 + psi));

  auto solve_none = run_cli("solve -i " + inst + " --k 2 --engine none");
  auto solve_sdp = run_cli("solve -i " + inst + " --k 2 --engine sdp --trace " +
                           (dir / "trace.jsonl").string());
  REQUIRE(solve_none.exit_code == 0);
  REQUIRE(solve_sdp.exit_code == 0);
  json rep_none = json::parse(solve_none.stdout_text);
  json rep_sdp = json::parse(solve_sdp.stdout_text);
  CHECK(rep_none.at("best_objective").get<double>() ==
        doctest::Approx(rep_sdp.at("best_objective").get<double>()).epsilon(1e-9));
  CHECK(rep_sdp.at("best_objective").get<double>() == doctest::Approx(psi).epsilon(1e-9));

  // The trace file holds one JSON event per visited node.
  std::ifstream tf(dir / "trace.jsonl");
  std::string line;
  std::int64_t events = 0;
  while (std::getline(tf, line))
    if (!line.empty()) ++events;
  CHECK(events == rep_sdp.at("nodes_visited").get<std::int64_t>());

  auto heur = run_cli("heuristic -i " + inst + " --k 2 --method enhanced --samples 50 --seed 3");
  REQUIRE(heur.exit_code == 0);
  CHECK(json::parse(heur.stdout_text).at("objective").get<double>() >= psi - 1e-9);

  fs::remove_all(dir);
}

TEST_CASE("validation failures exit with code 2") {
  auto missing = run_cli("exact -i /nonexistent.json --k 2");
  CHECK(missing.exit_code == 2);
  auto bad_flag = run_cli("exact --definitely-not-a-flag");
  CHECK(bad_flag.exit_code == 2);
}

TEST_CASE("capacity refusal exits with code 3") {
  fs::path dir = fs::temp_directory_path() / "sparsesel_cli_cap";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string inst = (dir / "i.json").string();
  REQUIRE(run_cli("gen gaussian --n 10 --p 24 --k 2 --seed 1 -o " + inst).exit_code == 0);
  auto res = run_cli("exact -i " + inst + " --k 12 --cap 1000");
  CHECK(res.exit_code == 3);

  // A drained node budget is the same exit class, with the report printed.
  auto budget = run_cli("solve -i " + inst + " --k 2 --engine none --budget 2");
  CHECK(budget.exit_code == 3);
  CHECK(!json::parse(budget.stdout_text).at("optimality_proved").get<bool>());
  fs::remove_all(dir);
}

TEST_CASE("partial experiments exit with code 4") {
  fs::path dir = fs::temp_directory_path() / "sparsesel_cli_partial";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto res = run_cli("experiment --id table1 --out " + (dir / "out").string() +
                     " --table1-row 10,5,2,2 --table1-row 40,20,4,1");
  CHECK(res.exit_code == 4);
  json out = json::parse(res.stdout_text);
  CHECK(out.at("partial").get<bool>());
  CHECK(out.at("skips").size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("matrix subcommands run on generated instances") {
  fs::path dir = fs::temp_directory_path() / "sparsesel_cli_matrix";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string inst = (dir / "i.json").string();
  REQUIRE(run_cli("gen gaussian --n 8 --p 10 --k 2 --seed 3 -o " + inst).exit_code == 0);

  auto speig = run_cli("speig -i " + inst + " --k 2 --op exact");
  REQUIRE(speig.exit_code == 0);
  json se = json::parse(speig.stdout_text);
  CHECK(se.at("support").size() == 2);

  auto greedy = run_cli("speig -i " + inst + " --k 2 --op greedy");
  REQUIRE(greedy.exit_code == 0);
  CHECK(json::parse(greedy.stdout_text).at("value").get<double>() <=
        se.at("value").get<double>() + 1e-9);

  auto relax = run_cli("relax -i " + inst + " --k 2");
  REQUIRE(relax.exit_code == 0);
  json rx = json::parse(relax.stdout_text);
  CHECK(rx.at("dual_value").get<double>() >= se.at("value").get<double>() - 1e-6);
  fs::remove_all(dir);
}

TEST_CASE("config file mirrors flags") {
  fs::path dir = fs::temp_directory_path() / "sparsesel_cli_cfg";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string inst = (dir / "i.json").string();
  REQUIRE(run_cli("gen gaussian --n 8 --p 12 --k 2 --seed 5 -o " + inst).exit_code == 0);

  std::string cfg_path = (dir / "cfg.json").string();
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"exact": {"instance": ")" << inst << R"(", "k": 2}})";
  }
  auto via_config = run_cli("--config " + cfg_path + " exact");
  REQUIRE(via_config.exit_code == 0);
  auto via_flags = run_cli("exact -i " + inst + " --k 2");
  CHECK(json::parse(via_config.stdout_text).at("psi") ==
        json::parse(via_flags.stdout_text).at("psi"));
  fs::remove_all(dir);
}

TEST_CASE("gabor generation feeds the pipeline") {
  fs::path dir = fs::temp_directory_path() / "sparsesel_cli_gabor";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string inst = (dir / "g.json").string();
  auto gen = run_cli("gen gabor --r 4 --atoms 24 --plant-k 2 --seed 9 -o " + inst);
  REQUIRE(gen.exit_code == 0);
  auto exact = run_cli("exact -i " + inst + " --k 2");
  CHECK(exact.exit_code == 0);

  // Explicit patch input: a 4x4 grid flattened row-major.
  std::string patch = (dir / "patch.csv").string();
  {
    std::ofstream pf(patch);
    pf << "0.1, 0.2, 0.3, 0.4\n0.2, 0.4, 0.6, 0.8\n0.3, 0.6, 0.9, 1.2\n0.4, 0.8, 1.2, 1.6\n";
  }
  std::string patched = (dir / "gp.json").string();
  auto gen2 = run_cli("gen gabor --r 4 --atoms 24 --patch-csv " + patch + " -o " + patched);
  REQUIRE(gen2.exit_code == 0);
  auto eval = run_cli("eval -i " + patched + " --support 0,5");
  CHECK(eval.exit_code == 0);
  fs::remove_all(dir);
}

}  // TEST_SUITE
