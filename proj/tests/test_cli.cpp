#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "stablecone/io.hpp"

namespace fs = std::filesystem;
using stablecone::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path workdir() {
  const char* env = std::getenv("STABLECONE_TEST_TMP");
  const fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "stablecone_test_cli";
  fs::create_directories(dir);
  return dir;
}

std::string p(const std::string& name) { return (workdir() / name).string(); }

void emit_fixtures() {
  static bool done = false;
  if (done) return;
  REQUIRE(call({"fixtures", "emit", "star", "--out", workdir().string()}).code == 0);
  REQUIRE(call({"fixtures", "emit", "nodemix", "--out", workdir().string()}).code == 0);
  std::ofstream(p("empty.graph.json")) << R"({"n": 5, "edges": []})";
  done = true;
}

}  // namespace

TEST_CASE("stats") {
  emit_fixtures();
  const Result r = call({"stats", p("star.graph.json"), p("star.model.json")});
  CHECK(r.code == 0);
  CHECK(r.out == "edges=6\nnsp0=0\n");
  CHECK(call({"stats", p("empty.graph.json"), p("star.model.json")}).out == "edges=0\nnsp0=10\n");
}

TEST_CASE("cone") {
  emit_fixtures();
  const Result star = call({"cone", p("star.graph.json"), p("star.model.json")});
  REQUIRE(star.code == 0);
  const auto doc = nlohmann::json::parse(star.out);
  CHECK(doc["facets"].size() == 2);
  CHECK(doc["rays"].size() == 2);

  const Result mix = call({"cone", p("nodemix.graph.json"), p("nodemix.model.json")});
  CHECK(mix.code == 0);
  const auto empty = nlohmann::json::parse(mix.out);
  CHECK(empty["status"] == "Empty");
  CHECK(empty["certificate"]["kind"] == "opposite-pair");

  const Result two = call({"cone", p("star.graph.json"), p("star.model.json"), "--radius", "2", "--matrix-csv",
                           p("m2.csv"), "--out", p("cone2.json")});
  CHECK(two.code == 0);
  CHECK(nlohmann::json::parse(stablecone::read_text(p("cone2.json")))["n_alternatives"] == 210);
  std::ifstream csv(p("m2.csv"));
  std::size_t lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 211);
}

TEST_CASE("check") {
  emit_fixtures();
  const Result stable = call({"check", p("star.graph.json"), p("star.model.json"), "--theta", "-3,-1"});
  REQUIRE(stable.code == 0);
  const auto a = nlohmann::json::parse(stable.out);
  CHECK(a["stable"] == true);
  CHECK(a["n_unstable"] == 0);
  CHECK(a["per_dyad"].size() == 21);
  CHECK(a["cone_status"] == "NonEmpty");

  const auto b = nlohmann::json::parse(call({"check", p("star.graph.json"), p("star.model.json"), "--theta=1,-1"}).out);
  CHECK(b["stable"] == false);
  CHECK(b["n_unstable"] == 15);

  CHECK(call({"check", p("star.graph.json"), p("star.model.json")}).code == 2);
  CHECK(call({"check", p("star.graph.json"), p("star.model.json"), "--theta", "1,2,3"}).code == 2);
}

TEST_CASE("simulate and vulnerability") {
  emit_fixtures();
  const Result zero = call({"simulate", p("star.graph.json"), p("star.model.json"), "--chains", "3", "--steps", "0",
                            "--grid=-8:2:3,-8:2:2"});
  REQUIRE(zero.code == 0);
  std::istringstream rows(zero.out);
  std::string line;
  std::getline(rows, line);
  CHECK(line == "edges,nsp0,fraction_persisted,chains,steps,seed");
  int points = 0;
  while (std::getline(rows, line)) {
    ++points;
    CHECK(line.find(",1,3,0,0") != std::string::npos);
  }
  CHECK(points == 6);
  CHECK(call({"simulate", p("star.graph.json"), p("star.model.json"), "--grid", "1:0:2,0"}).code == 2);
  CHECK(call({"simulate", p("star.graph.json"), p("star.model.json"), "--grid", "0"}).code == 2);

  const Result census = call({"vulnerability", p("star.graph.json"), p("star.model.json"), "--theta", "0,0",
                              "--trajectories", "210", "--seed", "3", "--runs-csv", p("runs.csv")});
  REQUIRE(census.code == 0);
  CHECK(census.out.rfind("i,j,is_edge,d,count,fraction\n", 0) == 0);
  CHECK(census.err.find("timeouts=0") != std::string::npos);
  const Result again = call({"vulnerability", p("star.graph.json"), p("star.model.json"), "--theta", "0,0",
                             "--trajectories", "210", "--seed", "3"});
  CHECK(again.out == census.out);
}

TEST_CASE("exit codes") {
  emit_fixtures();
  CHECK(call({}).code == 2);
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"stats", p("missing.json"), p("star.model.json")}).code == 2);
  std::ofstream(p("bad.graph.json")) << R"({"n": 3, "edges": [[0, 1]], "colour": 1})";
  const Result bad = call({"stats", p("bad.graph.json"), p("star.model.json")});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("colour") != std::string::npos);
  CHECK(call({"fixtures", "emit", "lazega", "--out", workdir().string()}).code == 2);
  CHECK(call({"fixtures", "emit", "lazega", "--data", p("no-such-dir")}).code == 2);
  CHECK(call({"fixtures", "emit", "triangle"}).code == 2);
}

TEST_CASE("reports are byte-stable") {
  emit_fixtures();
  const std::vector<std::string> args{"cone", p("star.graph.json"), p("star.model.json"), "--seed", "5"};
  CHECK(call(args).out == call(args).out);
}
