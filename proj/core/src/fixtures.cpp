#include "stablecone/fixtures.hpp"

#include <sstream>

#include "stablecone/error.hpp"
#include "stablecone/io.hpp"

namespace stablecone {
namespace {

constexpr int kPartners = 36;
constexpr const char* kExpected =
    "expected edges.tsv + attributes.csv (seniority, practice, office, gender) or "
    "ELwork36.dat / ELwork.dat + ELattr.dat (seniority, status, gender, office, years, age, "
    "practice, school)";

std::vector<std::vector<double>> read_matrix(const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(read_text(path));
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string cell;
    while (fields >> cell) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(path.filename().string() + " line " + std::to_string(number) +
                         ": non-numeric field \"" + cell + "\"");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

Fixture from_tables(const std::filesystem::path& dir) {
  Graph raw = read_edge_list(dir / "edges.tsv", false, -1, dir / "attributes.csv");
  for (const char* name : {"seniority", "practice", "office", "gender"}) {
    if (!raw.has_attribute(name)) {
      throw ParseError("attributes.csv: missing column \"" + std::string(name) + "\"; " + kExpected);
    }
  }
  if (raw.n_vertices() != kPartners) {
    throw ParseError("lazega: expected 36 vertices, found " + std::to_string(raw.n_vertices()));
  }
  return {raw, lazega_model()};
}

Fixture from_original(const std::filesystem::path& dir, Symmetrize mode) {
  auto work = dir / "ELwork36.dat";
  if (!std::filesystem::exists(work)) work = dir / "ELwork.dat";
  const auto adjacency = read_matrix(work);
  const auto attr = read_matrix(dir / "ELattr.dat");
  if (adjacency.size() < kPartners || attr.size() < kPartners) {
    throw ParseError("lazega: need at least 36 rows in " + work.filename().string() + " and ELattr.dat; " + kExpected);
  }
  for (int r = 0; r < kPartners; ++r) {
    if (adjacency[static_cast<std::size_t>(r)].size() < kPartners) {
      throw ParseError(work.filename().string() + " line " + std::to_string(r + 1) + ": fewer than 36 columns");
    }
    if (attr[static_cast<std::size_t>(r)].size() < 7) {
      throw ParseError("ELattr.dat line " + std::to_string(r + 1) + ": fewer than 7 columns; " + kExpected);
    }
  }
  std::vector<Dyad> edges;
  for (int j = 1; j < kPartners; ++j) {
    for (int i = 0; i < j; ++i) {
      const bool ij = adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0;
      const bool ji = adjacency[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] != 0;
      if (mode == Symmetrize::Mutual ? (ij && ji) : (ij || ji)) edges.push_back(Dyad{i, j});
    }
  }
  std::vector<double> seniority, gender, office, practice;
  for (int r = 0; r < kPartners; ++r) {
    const auto& row = attr[static_cast<std::size_t>(r)];
    seniority.push_back(row[0]);
    gender.push_back(row[2]);
    office.push_back(row[3]);
    practice.push_back(row[6]);
  }
  AttributeTable table;
  table["seniority"] = Attribute{seniority};
  table["gender"] = Attribute{gender};
  table["office"] = Attribute{office};
  table["practice"] = Attribute{practice};
  return {Graph(kPartners, edges, std::move(table)), lazega_model()};
}

}  // namespace

Graph fixture_star(int v) {
  if (v < 2) throw DomainError("a star needs at least 2 vertices, got " + std::to_string(v));
  std::vector<Dyad> edges;
  for (int k = 1; k < v; ++k) edges.push_back(Dyad{0, k});
  return Graph(v, edges);
}

ModelSpec star_model(const Eigen::VectorXd& theta) {
  ModelSpec m;
  m.terms = {Edges{}, Nsp{0}};
  m.theta = theta;
  m.validate();
  return m;
}

Fixture fixture_nodemix() {
  AttributeTable table;
  table["group"] = Attribute{std::vector<std::string>{"A", "A", "B", "B"}};
  const std::vector<Dyad> edges{Dyad{0, 2}};
  ModelSpec m;
  m.terms = {Edges{}, NodeMix{"group", "A", "B"}};
  return {Graph(4, edges, std::move(table)), m};
}

ModelSpec lazega_model() {
  ModelSpec m;
  m.terms = {Edges{},
             NodeCov{"seniority"},
             NodeCov{"practice"},
             NodeMatch{"practice"},
             NodeMatch{"gender"},
             NodeMatch{"office"},
             Gwesp{0.75}};
  m.theta.resize(7);
  m.theta << -7.375, 0.024, 0.411, 0.761, 0.696, 1.145, 0.937;
  return m;
}

Fixture fixture_lazega(const std::filesystem::path& dir, Symmetrize mode) {
  if (!std::filesystem::is_directory(dir)) {
    throw ParseError("lazega: " + dir.string() + " is not a directory; " + kExpected);
  }
  Fixture out;
  if (std::filesystem::exists(dir / "edges.tsv") && std::filesystem::exists(dir / "attributes.csv")) {
    out = from_tables(dir);
  } else if (std::filesystem::exists(dir / "ELattr.dat") &&
             (std::filesystem::exists(dir / "ELwork36.dat") || std::filesystem::exists(dir / "ELwork.dat"))) {
    out = from_original(dir, mode);
  } else {
    throw ParseError("lazega: no dataset files in " + dir.string() + "; " + kExpected);
  }
  out.model.validate_against(out.graph);
  return out;
}

}  // namespace stablecone
