#include "cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "stablecone/change_matrix.hpp"
#include "stablecone/cone.hpp"
#include "stablecone/dynamics.hpp"
#include "stablecone/error.hpp"
#include "stablecone/fixtures.hpp"
#include "stablecone/format.hpp"
#include "stablecone/io.hpp"

namespace stablecone::cli {
namespace {

namespace fs = std::filesystem;

struct GraphSource {
  std::string path;
  std::string attributes;
  bool one_based = false;
  int n = -1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("graph", path, "Graph JSON, or an edge-list TSV")->required();
    cmd->add_option("--attributes", attributes, "Attribute CSV for an edge-list graph");
    cmd->add_flag("--one-based", one_based, "Edge-list vertices start at 1");
    cmd->add_option("--n", n, "Vertex count for an edge-list graph");
  }

  [[nodiscard]] Graph load() const {
    if (fs::path(path).extension() == ".json") {
      if (!attributes.empty() || one_based || n >= 0) {
        throw ValidationError("--attributes, --one-based and --n apply to edge-list graphs only");
      }
      return read_graph_json(path);
    }
    std::optional<fs::path> attr;
    if (!attributes.empty()) attr = attributes;
    return read_edge_list(path, one_based, n, attr);
  }
};

struct ModelSource {
  std::string path;
  std::string theta;

  void add_to(CLI::App* cmd, bool theta_flag) {
    cmd->add_option("model", path, "Model JSON")->required();
    if (theta_flag) cmd->add_option("--theta", theta, "Override theta, e.g. -3,-1")->allow_extra_args(false);
  }

  [[nodiscard]] ModelSpec load() const {
    ModelSpec m = read_model_json(path);
    if (!theta.empty()) m.theta = parse_theta(theta);
    m.validate();
    return m;
  }
};

class Emitter {
 public:
  Emitter(std::ostream& out) : out_(out) {}

  void add_to(CLI::App* cmd) { cmd->add_option("--out", path_, "Write the report here instead of stdout"); }

  void emit(const std::string& text) const {
    if (path_.empty()) {
      out_ << text;
    } else {
      write_atomic(path_, text);
    }
  }

 private:
  std::ostream& out_;
  std::string path_;
};

ChangeMatrix matrix_for(const Graph& g, const ModelSpec& m, int radius) {
  m.validate_against(g);
  return build_matrix(g, hamming_ball(g, radius), m);
}

void require_theta(const ModelSpec& m) {
  if (!m.has_theta()) throw ValidationError("model has no theta; add one or pass --theta");
}

}  // namespace

Eigen::VectorXd parse_theta(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(cell, &used));
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ParseError("--theta: \"" + cell + "\" is not a number");
    }
  }
  if (values.empty()) throw ParseError("--theta: no values");
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string stats_text(const Graph& g, const ModelSpec& m) {
  const StatVector t = stats(g, m);
  const auto names = m.term_names();
  std::string out;
  for (std::size_t k = 0; k < names.size(); ++k) {
    out += names[k] + "=" + format_number(t[static_cast<Eigen::Index>(k)]) + "\n";
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stable parameter cones of exponential random graph models", "stablecone"};
  app.require_subcommand(1);

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Print the model statistics of a graph");
  GraphSource stats_graph;
  ModelSource stats_model;
  stats_graph.add_to(stats_cmd);
  stats_model.add_to(stats_cmd, false);
  Emitter stats_out(out);
  stats_out.add_to(stats_cmd);

  // cone
  auto* cone_cmd = app.add_subcommand("cone", "Solve for the stable cone over a Hamming ball");
  GraphSource cone_graph;
  ModelSource cone_model;
  int cone_radius = 1;
  std::uint64_t cone_seed = 0;
  bool ignore_flat = false;
  std::string matrix_path;
  cone_graph.add_to(cone_cmd);
  cone_model.add_to(cone_cmd, false);
  cone_cmd->add_option("--radius", cone_radius, "Hamming radius of the alternative set");
  cone_cmd->add_option("--seed", cone_seed, "Seed of the halfspace insertion order");
  cone_cmd->add_flag("--ignore-flat", ignore_flat, "Drop alternatives that tie for every theta");
  cone_cmd->add_option("--matrix-csv", matrix_path, "Also write the change matrix as CSV");
  Emitter cone_out(out);
  cone_out.add_to(cone_cmd);

  // check
  auto* check_cmd = app.add_subcommand("check", "Evaluate stability at the model's theta");
  GraphSource check_graph;
  ModelSource check_model;
  int check_radius = 1;
  std::uint64_t check_seed = 0;
  check_graph.add_to(check_cmd);
  check_model.add_to(check_cmd, true);
  check_cmd->add_option("--radius", check_radius, "Hamming radius of the alternative set");
  check_cmd->add_option("--seed", check_seed, "Seed for the cone solve");
  Emitter check_out(out);
  check_out.add_to(check_cmd);

  // vulnerability
  auto* vuln_cmd = app.add_subcommand("vulnerability", "First-change census under Metropolis dynamics");
  GraphSource vuln_graph;
  ModelSource vuln_model;
  std::size_t trajectories = 100000;
  ChainConfig vuln_cfg;
  std::string runs_path;
  vuln_graph.add_to(vuln_cmd);
  vuln_model.add_to(vuln_cmd, true);
  vuln_cmd->add_option("--trajectories", trajectories, "Number of first-change runs");
  vuln_cmd->add_option("--seed", vuln_cfg.seed, "Base seed; run c uses stream c");
  vuln_cmd->add_option("--max-steps", vuln_cfg.max_steps, "Steps before a run times out");
  vuln_cmd->add_option("--threads", vuln_cfg.threads, "Worker threads (0 = all cores)");
  vuln_cmd->add_option("--runs-csv", runs_path, "Also write one row per run");
  Emitter vuln_out(out);
  vuln_out.add_to(vuln_cmd);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Persistence of the graph over a theta grid");
  GraphSource sim_graph;
  ModelSource sim_model;
  std::size_t chains = 50;
  std::uint64_t steps = 100000;
  std::uint64_t sim_seed = 0;
  unsigned sim_threads = 0;
  std::string grid;
  sim_graph.add_to(sim_cmd);
  sim_model.add_to(sim_cmd, true);
  sim_cmd->add_option("--chains", chains, "Chains per grid point");
  sim_cmd->add_option("--steps", steps, "Metropolis steps per chain");
  sim_cmd->add_option("--seed", sim_seed, "Base seed; chain c uses stream c");
  sim_cmd->add_option("--threads", sim_threads, "Worker threads (0 = all cores)");
  sim_cmd->add_option("--grid", grid, "min:max:count per theta component, comma-separated");
  Emitter sim_out(out);
  sim_out.add_to(sim_cmd);

  // fixtures emit
  auto* fixtures_cmd = app.add_subcommand("fixtures", "Built-in example inputs");
  fixtures_cmd->require_subcommand(1);
  auto* emit_cmd = fixtures_cmd->add_subcommand("emit", "Write <name>.graph.json and <name>.model.json");
  std::string fixture_name;
  std::string fixture_dir = ".";
  int star_size = 7;
  std::string data_dir;
  std::string symmetrize = "mutual";
  emit_cmd->add_option("name", fixture_name, "star, nodemix or lazega")
      ->required()
      ->check(CLI::IsMember({"star", "nodemix", "lazega"}));
  emit_cmd->add_option("--out", fixture_dir, "Output directory");
  emit_cmd->add_option("--n", star_size, "Star size");
  emit_cmd->add_option("--data", data_dir, "Directory with the collaboration dataset (lazega)");
  emit_cmd->add_option("--symmetrize", symmetrize, "mutual or either (lazega adjacency matrices)")
      ->check(CLI::IsMember({"mutual", "either"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (stats_cmd->parsed()) {
      stats_out.emit(stats_text(stats_graph.load(), stats_model.load()));
    } else if (cone_cmd->parsed()) {
      const Graph g = cone_graph.load();
      const ModelSpec m = cone_model.load();
      const ChangeMatrix cm = matrix_for(g, m, cone_radius);
      if (!matrix_path.empty()) write_atomic(matrix_path, matrix_csv(cm));
      SolveOptions options;
      options.seed = cone_seed;
      options.ignore_flat = ignore_flat;
      cone_out.emit(cone_report_json(solve(cm, options), cm));
    } else if (check_cmd->parsed()) {
      const Graph g = check_graph.load();
      const ModelSpec m = check_model.load();
      require_theta(m);
      const ChangeMatrix cm = matrix_for(g, m, check_radius);
      StabilityReport report = stability_report(g, cm, m.theta);
      SolveOptions options;
      options.seed = check_seed;
      report.cone_status = solve(cm, options).status;
      check_out.emit(stability_report_json(report));
    } else if (vuln_cmd->parsed()) {
      const Graph g = vuln_graph.load();
      const ModelSpec m = vuln_model.load();
      require_theta(m);
      const ChangeMatrix cm = matrix_for(g, m, 1);
      const auto runs = first_change_runs(g, m, trajectories, vuln_cfg);
      const Census census = census_from_runs(g.n_vertices(), runs);
      if (!runs_path.empty()) write_atomic(runs_path, first_change_csv(runs));
      vuln_out.emit(census_csv(g, census, distances(cm, m.theta)));
      err << "trajectories=" << census.n_trajectories << " timeouts=" << census.timeouts
          << " mean_steps=" << format_number(census.mean_steps()) << " seed=" << vuln_cfg.seed << "\n";
    } else if (sim_cmd->parsed()) {
      const Graph g = sim_graph.load();
      ModelSpec m = sim_model.load();
      std::vector<Eigen::VectorXd> points;
      if (grid.empty()) {
        require_theta(m);
        points.push_back(m.theta);
      } else {
        points = grid_points(parse_grid(grid));
        if (points.front().size() != static_cast<Eigen::Index>(m.size())) {
          throw DimensionError("--grid has " + std::to_string(points.front().size()) + " axes but the model has " +
                               std::to_string(m.size()) + " terms");
        }
      }
      std::vector<PersistenceRow> rows;
      for (const auto& theta : points) {
        m.theta = theta;
        rows.push_back({theta, persistence_experiment(g, m, chains, steps, sim_seed, sim_threads)});
      }
      sim_out.emit(persistence_csv(m.term_names(), rows, sim_seed, chains, steps));
    } else if (emit_cmd->parsed()) {
      Fixture fx;
      if (fixture_name == "star") {
        fx = {fixture_star(star_size), star_model()};
      } else if (fixture_name == "nodemix") {
        fx = fixture_nodemix();
      } else {
        if (data_dir.empty()) throw ValidationError("fixtures emit lazega needs --data <dir>");
        fx = fixture_lazega(data_dir, symmetrize == "either" ? Symmetrize::Either : Symmetrize::Mutual);
      }
      fs::create_directories(fixture_dir);
      const fs::path base = fs::path(fixture_dir) / fixture_name;
      write_atomic(base.string() + ".graph.json", graph_to_json(fx.graph));
      write_atomic(base.string() + ".model.json", model_to_json(fx.model));
      out << base.string() << ".graph.json\n" << base.string() << ".model.json\n";
    }
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace stablecone::cli
