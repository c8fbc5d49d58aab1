#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "stablecone/error.hpp"
#include "stablecone/fixtures.hpp"
#include "stablecone/io.hpp"

using namespace stablecone;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "stablecone_test_io";
  fs::create_directories(dir);
  return dir / name;
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("graph json round trip") {
  const Fixture fx = fixture_nodemix();
  const std::string once = graph_to_json(fx.graph);
  const Graph back = parse_graph_json(once);
  CHECK(back == fx.graph);
  CHECK(back.attributes() == fx.graph.attributes());
  CHECK(graph_to_json(back) == once);

  // non-canonical input canonicalizes on the first pass
  const Graph messy = parse_graph_json(R"({"n": 4, "edges": [[3,1],[0,2]],
      "attributes": {"w": {"type": "numeric", "values": [1, 2.5, 3, 4]}}})");
  CHECK(messy.edges() == std::vector<Dyad>{Dyad{0, 2}, Dyad{1, 3}});
  const std::string canon = graph_to_json(messy);
  CHECK(graph_to_json(parse_graph_json(canon)) == canon);
}

TEST_CASE("graph json rejects bad input") {
  CHECK_THROWS_AS(parse_graph_json(R"({"n": 3, "edges": [], "extra": 1})"), ParseError);
  CHECK_THROWS_AS(parse_graph_json(R"({"edges": []})"), ParseError);
  CHECK_THROWS_AS(parse_graph_json(R"({"n": 3, "edges": [[0, 5]]})"), InvalidDyadError);
  CHECK_THROWS_AS(parse_graph_json(R"({"n": 3, "edges": [[1, 1]]})"), InvalidDyadError);
  CHECK_THROWS_AS(parse_graph_json(R"({"n": 3, "edges": [[0, 1, 2]]})"), ParseError);
  CHECK_THROWS_AS(parse_graph_json(R"({"n": 2, "attributes": {"a": {"type": "color", "values": [1,2]}}})"),
                  ParseError);
  CHECK_THROWS_AS(parse_graph_json(R"({"n": 2, "attributes": {"a": {"type": "numeric", "values": ["x", 2]}}})"),
                  ParseError);
  CHECK_THROWS_AS(parse_graph_json(R"({"n": 3, "attributes": {"a": {"type": "numeric", "values": [1,2]}}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_graph_json("{\"n\": 3,"), ParseError);
  try {
    parse_graph_json(R"({"n": 3, "edges": [[0, 1], [0, "b"]]})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("graph.edges[1][1]") != std::string::npos);
  }
}

TEST_CASE("model json") {
  const ModelSpec m = parse_model_json(R"({"terms": [
      {"kind": "edges"}, {"kind": "nsp", "d": 0}, {"kind": "gwesp", "decay": 0.75},
      {"kind": "nodematch", "attribute": "office"},
      {"kind": "nodemix", "attribute": "group", "groups": ["A", "B"]},
      {"kind": "nodecov", "attribute": "seniority"}],
      "theta": [1, 2, 3, 4, 5, 6]})");
  CHECK(m.term_names() == std::vector<std::string>{"edges", "nsp0", "gwesp.fixed.0.75", "nodematch.office",
                                                   "nodemix.group.A.B", "nodecov.seniority"});
  CHECK(m.theta[5] == 6);
  const std::string text = model_to_json(m);
  CHECK(model_to_json(parse_model_json(text)) == text);

  CHECK_THROWS_AS(parse_model_json(R"({"terms": [{"kind": "triangles"}]})"), ParseError);
  CHECK_THROWS_AS(parse_model_json(R"({"terms": [{"kind": "nsp"}]})"), ParseError);
  CHECK_THROWS_AS(parse_model_json(R"({"terms": [{"kind": "edges", "d": 1}]})"), ParseError);
  CHECK_THROWS_AS(parse_model_json(R"({"terms": [{"kind": "edges"}], "theta": [1, 2]})"), DimensionError);
  CHECK_THROWS_AS(parse_model_json(R"({"terms": [], "theta": []})"), ValidationError);

  const ModelSpec lazega = lazega_model();
  CHECK(parse_model_json(model_to_json(lazega)).theta == lazega.theta);
}

TEST_CASE("edge list and attribute csv") {
  const fs::path edges = scratch("edges.tsv");
  const fs::path attrs = scratch("attrs.csv");
  put(edges, "# comment\n1\t2\n2\t3\n3\t2\n\n");
  put(attrs, "group,age\nA,30\nB,41.5\n\"A,x\",29\nB,50\n");
  const Graph g = read_edge_list(edges, true, -1, attrs);
  CHECK(g.n_vertices() == 4);
  CHECK(g.edges() == std::vector<Dyad>{Dyad{0, 1}, Dyad{1, 2}});
  CHECK(g.attribute("age").type() == AttributeType::Numeric);
  CHECK(g.attribute("group").categorical()[2] == "A,x");

  const Graph zero = read_edge_list(edges, false, 6);
  CHECK(zero.n_vertices() == 6);
  CHECK(zero.has_edge(1, 2));

  put(edges, "0\t1\n1\tx\n");
  CHECK_THROWS_AS(read_edge_list(edges, false), ParseError);
  put(edges, "0\t1\n1\t1\n");
  CHECK_THROWS_AS(read_edge_list(edges, false), InvalidDyadError);
  put(edges, "0\t1\n");
  CHECK_THROWS_AS(read_edge_list(edges, true), InvalidDyadError);
  put(attrs, "a,b\n1\n");
  CHECK_THROWS_AS(parse_attribute_csv("a,b\n1\n"), ParseError);
}

TEST_CASE("grid specs") {
  const auto axes = parse_grid("-8:2:5,-3");
  REQUIRE(axes.size() == 2);
  CHECK(axes[0].at(0) == -8);
  CHECK(axes[0].at(1) == -5.5);
  CHECK(axes[0].at(4) == 2);
  const auto points = grid_points(axes);
  REQUIRE(points.size() == 5);
  CHECK(points[1] == Eigen::Vector2d(-5.5, -3));
  CHECK(grid_points(parse_grid("0:1:2,0:1:3")).size() == 6);
  CHECK_THROWS_AS(parse_grid("1:0:3"), ParseError);
  CHECK_THROWS_AS(parse_grid("0:1"), ParseError);
  CHECK_THROWS_AS(parse_grid("0:1:0"), ParseError);
  CHECK_THROWS_AS(parse_grid("0:1:1"), ParseError);
  CHECK_THROWS_AS(parse_grid("a:b:c"), ParseError);
}

TEST_CASE("stability report") {
  const Graph star = fixture_star(7);
  const ChangeMatrix m = build_matrix(star, hamming_ball(star, 1), star_model());
  const StabilityReport unstable = stability_report(star, m, Eigen::Vector2d(1, -1));
  CHECK_FALSE(unstable.stable);
  CHECK(unstable.n_alternatives == 21);
  CHECK(unstable.n_unstable == 15);
  CHECK(std::abs(unstable.unstable_fraction - 15.0 / 21) < 1e-12);
  for (std::size_t k = 1; k < unstable.per_alternative.size(); ++k)
    CHECK(unstable.per_alternative[k - 1].d >= unstable.per_alternative[k].d);
  CHECK_FALSE(unstable.per_alternative.front().is_edge);

  const StabilityReport fine = stability_report(star, m, Eigen::Vector2d(-3, -1));
  CHECK(fine.stable);
  CHECK(fine.n_unstable == 0);

  const auto doc = nlohmann::json::parse(stability_report_json(unstable));
  CHECK(doc["per_dyad"].size() == 21);
  CHECK(doc["n_unstable"] == 15);
  CHECK(doc["cone_status"].is_null());
}

TEST_CASE("cone report") {
  const Graph star = fixture_star(7);
  const ChangeMatrix m = build_matrix(star, hamming_ball(star, 1), star_model());
  const std::string text = cone_report_json(solve(m), m);
  CHECK(text == cone_report_json(solve(m), m));
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc["status"] == "NonEmpty");
  CHECK(doc["facets"].size() == 2);
  CHECK(doc["rays"].size() == 2);
  CHECK(doc["facets"][0]["source_dyads"].size() == 6);
  CHECK(doc["certificate"].is_null());
  CHECK(text.find("-0.0") == std::string::npos);
}

TEST_CASE("csv exports") {
  const Graph star = fixture_star(4);
  const ChangeMatrix m = build_matrix(star, hamming_ball(star, 1), star_model());
  CHECK(matrix_csv(m) ==
        "edges,nsp0,dyads\n-1,3,0-1\n-1,3,0-2\n1,0,1-2\n-1,3,0-3\n1,0,1-3\n1,0,2-3\n");

  FirstChange done;
  done.steps = 12;
  done.dyad = Dyad{1, 3};
  done.seed = 5;
  FirstChange late;
  late.seed = 5;
  late.stream = 1;
  CHECK(first_change_csv({done, late}) ==
        "chain,seed,steps_to_change,dyad_i,dyad_j,timeout_flag\n0,5,12,1,3,0\n1,5,,,,1\n");

  PersistenceRow row{Eigen::Vector2d(-8, -3), 0.96};
  CHECK(persistence_csv({"edges", "nsp0"}, {row}, 7, 50, 100000) ==
        "edges,nsp0,fraction_persisted,chains,steps,seed\n-8,-3,0.96,50,100000,7\n");
}

TEST_CASE("atomic writes") {
  const fs::path out = scratch("report.json");
  write_atomic(out, "first");
  write_atomic(out, "second");
  CHECK(read_text(out) == "second");
  for (const auto& entry : fs::directory_iterator(out.parent_path()))
    CHECK(entry.path().filename().string().find(".tmp-") == std::string::npos);
  CHECK_THROWS_AS(write_atomic(scratch("missing/dir/x.json"), "x"), ValidationError);
  CHECK_THROWS_AS(read_text(scratch("nope.json")), ParseError);
}

TEST_CASE("lazega ingest from synthetic files") {
  const fs::path dir = scratch("lazega_synthetic");
  fs::create_directories(dir);
  std::ostringstream work, attr;
  for (int i = 0; i < 36; ++i) {
    for (int j = 0; j < 36; ++j) {
      // mutual ties i ~ i+1; one-sided ties i -> i+2
      const bool tie = std::abs(i - j) == 1 || (j == i + 2);
      work << (tie ? 1 : 0) << (j < 35 ? " " : "\n");
    }
    attr << i + 1 << " 1 " << 1 + i % 2 << " " << 1 + i % 3 << " 10 40 " << 1 + (i / 18) << " 1\n";
  }
  put(dir / "ELwork36.dat", work.str());
  put(dir / "ELattr.dat", attr.str());

  const Fixture mutual = fixture_lazega(dir);
  CHECK(mutual.graph.n_vertices() == 36);
  CHECK(mutual.graph.n_edges() == 35);
  CHECK(fixture_lazega(dir, Symmetrize::Either).graph.n_edges() == 35 + 34);
  CHECK(mutual.graph.attribute("seniority").numeric()[4] == 5);
  CHECK(mutual.graph.attribute("gender").numeric()[3] == 2);
  CHECK(mutual.graph.attribute("office").numeric()[5] == 3);
  CHECK(mutual.graph.attribute("practice").numeric()[20] == 2);
  CHECK(mutual.model.theta == lazega_model().theta);

  const ChangeMatrix m = build_matrix(mutual.graph, hamming_ball(mutual.graph, 1), mutual.model);
  const StabilityReport report = stability_report(mutual.graph, m, mutual.model.theta);
  CHECK(report.n_alternatives == 630);
  CHECK(report.per_alternative.size() == 630);

  put(dir / "ELattr.dat", "1 2 3\n");
  CHECK_THROWS_AS(fixture_lazega(dir), ParseError);
  CHECK_THROWS_AS(fixture_lazega(scratch("lazega_missing")), ParseError);
}

TEST_CASE("lazega ingest from tables") {
  const fs::path dir = scratch("lazega_tables");
  fs::create_directories(dir);
  std::ostringstream edges, attrs;
  for (int i = 0; i + 1 < 36; ++i) edges << i << '\t' << i + 1 << '\n';
  attrs << "seniority,practice,office,gender\n";
  for (int i = 0; i < 36; ++i) attrs << i + 1 << ',' << 1 + i % 2 << ",Boston," << (i % 3 ? "man" : "woman") << '\n';
  put(dir / "edges.tsv", edges.str());
  put(dir / "attributes.csv", attrs.str());
  const Fixture fx = fixture_lazega(dir);
  CHECK(fx.graph.n_edges() == 35);
  CHECK(fx.graph.attribute("office").type() == AttributeType::Categorical);

  std::string no_gender = "seniority,practice,office\n";
  for (int i = 0; i < 36; ++i) no_gender += "1,1,1\n";
  put(dir / "attributes.csv", no_gender);
  try {
    fixture_lazega(dir);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("gender") != std::string::npos);
  }
}
