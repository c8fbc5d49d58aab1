#include "stablecone/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stablecone/error.hpp"
#include "stablecone/format.hpp"

namespace stablecone {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

json parse_document(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!known) throw ParseError(where + ": unknown field \"" + key + "\"");
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

long long as_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
  return v.get<long long>();
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + ": expected a string");
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  return v;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return x;
}

std::optional<long long> parse_integer(std::string_view s) {
  s = trim(s);
  long long x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return x;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cell += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::string(trim(cell)));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(std::string(trim(cell)));
  return cells;
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::string line;
  std::istringstream in{std::string(text)};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ojson vector_json(const Eigen::VectorXd& v) {
  ojson out = ojson::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k] + 0.0);
  return out;
}

ojson dyad_json(const Dyad& d) { return ojson::array({d.i, d.j}); }

ojson toggles_json(const ToggleSet& ts) {
  ojson out = ojson::array();
  for (const auto& d : ts) out.push_back(dyad_json(d));
  return out;
}

bool all_single(const std::vector<ToggleSet>& alternatives) {
  return std::all_of(alternatives.begin(), alternatives.end(),
                     [](const ToggleSet& ts) { return ts.size() == 1; });
}

std::string dump(const ojson& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const auto tmp = dir / ("." + path.filename().string() + ".tmp-" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw ValidationError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ValidationError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

Graph parse_graph_json(std::string_view text) {
  const json doc = parse_document(text, "graph");
  if (!doc.is_object()) throw ParseError("graph: expected a JSON object");
  reject_unknown(doc, {"n", "edges", "attributes"}, "graph");
  const long long n = as_integer(require(doc, "n", "graph"), "graph.n");
  if (n < 0 || n > 1'000'000) throw ParseError("graph.n: out of range");

  std::vector<Dyad> edges;
  if (auto it = doc.find("edges"); it != doc.end()) {
    const auto& arr = as_array(*it, "graph.edges");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string where = "graph.edges[" + std::to_string(k) + "]";
      const auto& pair = as_array(arr[k], where);
      if (pair.size() != 2) throw ParseError(where + ": expected [i, j]");
      const auto a = as_integer(pair[0], where + "[0]");
      const auto b = as_integer(pair[1], where + "[1]");
      if (a < 0 || b < 0 || a >= n || b >= n) throw InvalidDyadError(where + ": vertex out of range");
      edges.push_back(make_dyad(static_cast<int>(a), static_cast<int>(b)));
    }
  }

  AttributeTable attributes;
  if (auto it = doc.find("attributes"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("graph.attributes: expected an object");
    for (const auto& [name, spec] : it->items()) {
      const std::string where = "graph.attributes." + name;
      if (!spec.is_object()) throw ParseError(where + ": expected {type, values}");
      reject_unknown(spec, {"type", "values"}, where);
      const std::string type = as_string(require(spec, "type", where), where + ".type");
      const auto& values = as_array(require(spec, "values", where), where + ".values");
      if (type == "numeric") {
        std::vector<double> column;
        for (std::size_t k = 0; k < values.size(); ++k)
          column.push_back(as_number(values[k], where + ".values[" + std::to_string(k) + "]"));
        attributes[name] = Attribute{std::move(column)};
      } else if (type == "categorical") {
        std::vector<std::string> column;
        for (std::size_t k = 0; k < values.size(); ++k)
          column.push_back(as_string(values[k], where + ".values[" + std::to_string(k) + "]"));
        attributes[name] = Attribute{std::move(column)};
      } else {
        throw ParseError(where + ".type: expected \"numeric\" or \"categorical\"");
      }
    }
  }
  return Graph(static_cast<int>(n), edges, std::move(attributes));
}

Graph read_graph_json(const std::filesystem::path& path) { return parse_graph_json(read_text(path)); }

std::string graph_to_json(const Graph& g) {
  ojson doc;
  doc["n"] = g.n_vertices();
  ojson edges = ojson::array();
  for (const auto& d : g.edges()) edges.push_back(dyad_json(d));
  doc["edges"] = std::move(edges);
  ojson attributes = ojson::object();
  for (const auto& [name, attr] : g.attributes()) {
    ojson spec;
    if (attr.type() == AttributeType::Numeric) {
      spec["type"] = "numeric";
      spec["values"] = attr.numeric();
    } else {
      spec["type"] = "categorical";
      spec["values"] = attr.categorical();
    }
    attributes[name] = std::move(spec);
  }
  doc["attributes"] = std::move(attributes);
  return dump(doc);
}

AttributeTable parse_attribute_csv(std::string_view text) {
  auto lines = lines_of(text);
  std::erase_if(lines, [](const std::string& l) { return trim(l).empty(); });
  if (lines.empty()) throw ParseError("attributes: missing header row");
  const auto header = split_csv_line(lines.front());
  std::set<std::string> seen;
  for (const auto& name : header) {
    if (name.empty()) throw ParseError("attributes line 1: empty column name");
    if (!seen.insert(name).second) throw ParseError("attributes line 1: duplicate column \"" + name + "\"");
  }
  std::vector<std::vector<std::string>> cells(header.size());
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto fields = split_csv_line(lines[row]);
    if (fields.size() != header.size()) {
      throw ParseError("attributes line " + std::to_string(row + 1) + ": expected " +
                       std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < header.size(); ++c) cells[c].push_back(fields[c]);
  }
  AttributeTable table;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::vector<double> numbers;
    bool numeric = true;
    for (const auto& cell : cells[c]) {
      auto x = parse_double(cell);
      if (!x) {
        numeric = false;
        break;
      }
      numbers.push_back(*x);
    }
    if (numeric) {
      table[header[c]] = Attribute{std::move(numbers)};
    } else {
      table[header[c]] = Attribute{std::move(cells[c])};
    }
  }
  return table;
}

Graph read_edge_list(const std::filesystem::path& edges_path, bool one_based, int n_vertices,
                     const std::optional<std::filesystem::path>& attributes_csv) {
  AttributeTable attributes;
  if (attributes_csv) attributes = parse_attribute_csv(read_text(*attributes_csv));
  const auto lines = lines_of(read_text(edges_path));
  std::set<Dyad> edges;
  int max_vertex = -1;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto line = trim(lines[k]);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = edges_path.filename().string() + " line " + std::to_string(k + 1);
    std::istringstream in{std::string(line)};
    std::string a_text, b_text, extra;
    if (!(in >> a_text >> b_text) || (in >> extra)) throw ParseError(where + ": expected `i<TAB>j`");
    auto a = parse_integer(a_text);
    auto b = parse_integer(b_text);
    if (!a || !b) throw ParseError(where + ": vertex indices must be integers");
    if (one_based) {
      --*a;
      --*b;
    }
    if (*a < 0 || *b < 0) {
      throw InvalidDyadError(where + ": negative vertex index" + (one_based ? "" : " (is the file 1-based?)"));
    }
    if (*a == *b) throw InvalidDyadError(where + ": self-loop");
    edges.insert(make_dyad(static_cast<int>(*a), static_cast<int>(*b)));
    max_vertex = std::max<int>(max_vertex, static_cast<int>(std::max(*a, *b)));
  }
  int n = n_vertices;
  if (n < 0) {
    n = max_vertex + 1;
    if (!attributes.empty()) n = std::max<int>(n, static_cast<int>(attributes.begin()->second.size()));
  }
  if (max_vertex >= n) {
    throw InvalidDyadError("edge list mentions vertex " + std::to_string(max_vertex) + " but n = " + std::to_string(n));
  }
  const std::vector<Dyad> list(edges.begin(), edges.end());
  return Graph(n, list, std::move(attributes));
}

ModelSpec parse_model_json(std::string_view text) {
  const json doc = parse_document(text, "model");
  if (!doc.is_object()) throw ParseError("model: expected a JSON object");
  reject_unknown(doc, {"terms", "theta"}, "model");
  ModelSpec m;
  const auto& terms = as_array(require(doc, "terms", "model"), "model.terms");
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string where = "model.terms[" + std::to_string(k) + "]";
    const auto& t = terms[k];
    if (!t.is_object()) throw ParseError(where + ": expected an object");
    const std::string kind = as_string(require(t, "kind", where), where + ".kind");
    if (kind == "edges") {
      reject_unknown(t, {"kind"}, where);
      m.terms.emplace_back(Edges{});
    } else if (kind == "nsp") {
      reject_unknown(t, {"kind", "d"}, where);
      m.terms.emplace_back(Nsp{static_cast<int>(as_integer(require(t, "d", where), where + ".d"))});
    } else if (kind == "gwesp") {
      reject_unknown(t, {"kind", "decay"}, where);
      m.terms.emplace_back(Gwesp{as_number(require(t, "decay", where), where + ".decay")});
    } else if (kind == "nodematch") {
      reject_unknown(t, {"kind", "attribute"}, where);
      m.terms.emplace_back(NodeMatch{as_string(require(t, "attribute", where), where + ".attribute")});
    } else if (kind == "nodemix") {
      reject_unknown(t, {"kind", "attribute", "groups"}, where);
      const auto& groups = as_array(require(t, "groups", where), where + ".groups");
      if (groups.size() != 2) throw ParseError(where + ".groups: expected two group labels");
      m.terms.emplace_back(NodeMix{as_string(require(t, "attribute", where), where + ".attribute"),
                                   as_string(groups[0], where + ".groups[0]"),
                                   as_string(groups[1], where + ".groups[1]")});
    } else if (kind == "nodecov") {
      reject_unknown(t, {"kind", "attribute"}, where);
      m.terms.emplace_back(NodeCov{as_string(require(t, "attribute", where), where + ".attribute")});
    } else {
      throw ParseError(where + ".kind: unknown term kind \"" + kind + "\"");
    }
  }
  if (auto it = doc.find("theta"); it != doc.end()) {
    const auto& arr = as_array(*it, "model.theta");
    m.theta.resize(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t k = 0; k < arr.size(); ++k)
      m.theta[static_cast<Eigen::Index>(k)] = as_number(arr[k], "model.theta[" + std::to_string(k) + "]");
  }
  m.validate();
  return m;
}

ModelSpec read_model_json(const std::filesystem::path& path) { return parse_model_json(read_text(path)); }

std::string model_to_json(const ModelSpec& m) {
  ojson doc;
  ojson terms = ojson::array();
  for (const auto& term : m.terms) {
    ojson t;
    if (std::holds_alternative<Edges>(term)) {
      t["kind"] = "edges";
    } else if (const auto* nsp = std::get_if<Nsp>(&term)) {
      t["kind"] = "nsp";
      t["d"] = nsp->shared;
    } else if (const auto* gw = std::get_if<Gwesp>(&term)) {
      t["kind"] = "gwesp";
      t["decay"] = gw->decay;
    } else if (const auto* nm = std::get_if<NodeMatch>(&term)) {
      t["kind"] = "nodematch";
      t["attribute"] = nm->attribute;
    } else if (const auto* mix = std::get_if<NodeMix>(&term)) {
      t["kind"] = "nodemix";
      t["attribute"] = mix->attribute;
      t["groups"] = {mix->group_a, mix->group_b};
    } else if (const auto* cov = std::get_if<NodeCov>(&term)) {
      t["kind"] = "nodecov";
      t["attribute"] = cov->attribute;
    }
    terms.push_back(std::move(t));
  }
  doc["terms"] = std::move(terms);
  if (m.has_theta()) doc["theta"] = vector_json(m.theta);
  return dump(doc);
}

std::string cone_report_json(const StableCone& cone, const ChangeMatrix& m) {
  const bool single = all_single(m.alternatives);
  auto sources = [&](std::size_t row) {
    ojson out = ojson::array();
    for (auto a : m.provenance[row]) {
      out.push_back(single ? dyad_json(m.alternatives[a].front()) : toggles_json(m.alternatives[a]));
    }
    return out;
  };

  ojson doc;
  doc["status"] = to_string(cone.status);
  doc["terms"] = m.term_names;
  doc["n_alternatives"] = m.n_alternatives();
  doc["n_rows"] = m.n_rows();
  ojson facets = ojson::array();
  for (const auto& h : cone.hrep) {
    ojson f;
    f["normal"] = vector_json(h.normal);
    f["source_row"] = h.source_row;
    f["source_dyads"] = sources(h.source_row);
    facets.push_back(std::move(f));
  }
  doc["facets"] = std::move(facets);
  ojson rays = ojson::array();
  for (const auto& r : cone.vrep) {
    ojson ray;
    ray["direction"] = vector_json(r.direction);
    ray["incidence"] = r.incidence;
    rays.push_back(std::move(ray));
  }
  doc["rays"] = std::move(rays);
  doc["seed"] = cone.seed;
  doc["tolerances"] = ojson{{"incidence", cone.tolerances.incidence},
                            {"parallel", cone.tolerances.parallel},
                            {"rank", cone.tolerances.rank},
                            {"ray_match", cone.tolerances.ray_match},
                            {"membership", cone.tolerances.membership}};
  if (cone.certificate) {
    ojson cert;
    cert["kind"] = to_string(cone.certificate->kind);
    ojson rows = ojson::array();
    for (std::size_t k = 0; k < cone.certificate->rows.size(); ++k) {
      const auto r = cone.certificate->rows[k];
      ojson row;
      row["row"] = r;
      row["normal"] = vector_json(m.rows.row(static_cast<Eigen::Index>(r)).transpose());
      if (k < cone.certificate->weights.size()) row["weight"] = cone.certificate->weights[k];
      row["source_dyads"] = sources(r);
      rows.push_back(std::move(row));
    }
    cert["rows"] = std::move(rows);
    doc["certificate"] = std::move(cert);
  } else {
    doc["certificate"] = nullptr;
  }
  doc["note"] = cone.note;
  return dump(doc);
}

StabilityReport stability_report(const Graph& g, const ChangeMatrix& m, const Eigen::VectorXd& theta,
                                 double tol) {
  const Eigen::VectorXd d = distances(m, theta);
  StabilityReport out;
  out.n_alternatives = m.n_alternatives();
  for (std::size_t a = 0; a < out.n_alternatives; ++a) {
    AlternativeVerdict v;
    v.toggles = m.alternatives[a];
    v.is_edge = std::all_of(v.toggles.begin(), v.toggles.end(), [&](const Dyad& x) { return g.has_edge(x); });
    v.d = d[static_cast<Eigen::Index>(a)];
    v.stable = v.d < -tol;
    if (!v.stable) ++out.n_unstable;
    out.per_alternative.push_back(std::move(v));
  }
  std::stable_sort(out.per_alternative.begin(), out.per_alternative.end(),
                   [](const AlternativeVerdict& x, const AlternativeVerdict& y) { return x.d > y.d; });
  out.stable = out.n_unstable == 0;
  out.unstable_fraction =
      out.n_alternatives == 0 ? 0.0 : static_cast<double>(out.n_unstable) / static_cast<double>(out.n_alternatives);
  return out;
}

std::string stability_report_json(const StabilityReport& report) {
  ojson doc;
  doc["stable"] = report.stable;
  doc["n_alternatives"] = report.n_alternatives;
  doc["n_unstable"] = report.n_unstable;
  doc["unstable_fraction"] = report.unstable_fraction;
  ojson entries = ojson::array();
  for (const auto& v : report.per_alternative) {
    ojson e;
    if (v.toggles.size() == 1) {
      e["i"] = v.toggles.front().i;
      e["j"] = v.toggles.front().j;
    } else {
      e["toggles"] = toggles_json(v.toggles);
    }
    e["is_edge"] = v.is_edge;
    e["d"] = v.d;
    e["stable"] = v.stable;
    entries.push_back(std::move(e));
  }
  doc["per_dyad"] = std::move(entries);
  doc["cone_status"] = report.cone_status ? ojson(to_string(*report.cone_status)) : ojson(nullptr);
  return dump(doc);
}

std::string matrix_csv(const ChangeMatrix& m) {
  std::ostringstream out;
  for (const auto& name : m.term_names) out << csv_escape(name) << ',';
  out << "dyads\n";
  const auto owner = m.row_of_alternative();
  for (std::size_t a = 0; a < owner.size(); ++a) {
    const auto row = m.rows.row(static_cast<Eigen::Index>(owner[a]));
    for (Eigen::Index k = 0; k < row.size(); ++k) out << format_number(row[k]) << ',';
    for (std::size_t t = 0; t < m.alternatives[a].size(); ++t) {
      const auto& d = m.alternatives[a][t];
      out << (t ? ";" : "") << d.i << '-' << d.j;
    }
    out << '\n';
  }
  return out.str();
}

std::string first_change_csv(const std::vector<FirstChange>& runs) {
  std::ostringstream out;
  out << "chain,seed,steps_to_change,dyad_i,dyad_j,timeout_flag\n";
  for (const auto& r : runs) {
    out << r.stream << ',' << r.seed << ',';
    if (r.timed_out()) {
      out << ",,,1\n";
    } else {
      out << *r.steps << ',' << r.dyad->i << ',' << r.dyad->j << ",0\n";
    }
  }
  return out.str();
}

std::string census_csv(const Graph& g, const Census& census, const Eigen::VectorXd& distances) {
  std::ostringstream out;
  out << "i,j,is_edge,d,count,fraction\n";
  const double total = static_cast<double>(census.n_trajectories);
  for (std::size_t k = 0; k < census.counts.size(); ++k) {
    const Dyad d = dyad_from_index(k);
    out << d.i << ',' << d.j << ',' << (g.has_edge(d) ? 1 : 0) << ','
        << format_number(distances[static_cast<Eigen::Index>(k)]) << ',' << census.counts[k] << ','
        << format_number(total > 0 ? static_cast<double>(census.counts[k]) / total : 0.0) << '\n';
  }
  return out.str();
}

double GridAxis::at(std::size_t k) const {
  if (count <= 1) return min;
  if (k + 1 == count) return max;
  return min + (max - min) * static_cast<double>(k) / static_cast<double>(count - 1);
}

std::vector<GridAxis> parse_grid(std::string_view spec) {
  std::vector<GridAxis> axes;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const auto part = trim(spec.substr(start, comma == std::string_view::npos ? spec.npos : comma - start));
    const std::string where = "grid axis " + std::to_string(axes.size() + 1);
    std::vector<std::string_view> fields;
    for (std::size_t s = 0;;) {
      const auto colon = part.find(':', s);
      fields.push_back(part.substr(s, colon == std::string_view::npos ? part.npos : colon - s));
      if (colon == std::string_view::npos) break;
      s = colon + 1;
    }
    GridAxis axis;
    if (fields.size() == 1) {
      auto x = parse_double(fields[0]);
      if (!x) throw ParseError(where + ": expected a number or min:max:count, got \"" + std::string(part) + "\"");
      axis = {*x, *x, 1};
    } else if (fields.size() == 3) {
      auto lo = parse_double(fields[0]);
      auto hi = parse_double(fields[1]);
      auto count = parse_integer(fields[2]);
      if (!lo || !hi || !count) throw ParseError(where + ": expected min:max:count, got \"" + std::string(part) + "\"");
      if (*count < 1) throw ParseError(where + ": count must be at least 1");
      if (*hi < *lo) throw ParseError(where + ": max is below min");
      if (*count == 1 && *lo != *hi) throw ParseError(where + ": a single-point axis needs min == max");
      axis = {*lo, *hi, static_cast<std::size_t>(*count)};
    } else {
      throw ParseError(where + ": expected min:max:count, got \"" + std::string(part) + "\"");
    }
    axes.push_back(axis);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return axes;
}

std::vector<Eigen::VectorXd> grid_points(const std::vector<GridAxis>& axes) {
  std::vector<Eigen::VectorXd> out;
  if (axes.empty()) return out;
  std::vector<std::size_t> pos(axes.size(), 0);
  while (true) {
    Eigen::VectorXd p(static_cast<Eigen::Index>(axes.size()));
    for (std::size_t a = 0; a < axes.size(); ++a) p[static_cast<Eigen::Index>(a)] = axes[a].at(pos[a]);
    out.push_back(std::move(p));
    std::size_t a = axes.size();
    while (a > 0 && ++pos[a - 1] == axes[a - 1].count) pos[--a] = 0;
    if (a == 0) return out;
  }
}

std::string persistence_csv(const std::vector<std::string>& term_names,
                            const std::vector<PersistenceRow>& rows, std::uint64_t seed,
                            std::size_t chains, std::uint64_t steps) {
  std::ostringstream out;
  for (const auto& name : term_names) out << csv_escape(name) << ',';
  out << "fraction_persisted,chains,steps,seed\n";
  for (const auto& row : rows) {
    for (Eigen::Index k = 0; k < row.theta.size(); ++k) out << format_number(row.theta[k]) << ',';
    out << format_number(row.fraction) << ',' << chains << ',' << steps << ',' << seed << '\n';
  }
  return out.str();
}

}  // namespace stablecone
