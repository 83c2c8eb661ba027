#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "innet/error.hpp"
#include "innet/experiment.hpp"
#include "innet/plans.hpp"
#include "innet/trees.hpp"

using namespace innet;

namespace {

// One --<key> flag per config key. Values are applied after the config
// file, so flags win.
struct KeyFlags {
  std::map<std::string, std::string> values;

  void Register(CLI::App* app) {
    for (const auto& key : ConfigKeys()) {
      app->add_option_function<std::string>(
          "--" + key, [this, key](const std::string& v) { values[key] = v; },
          "config key " + key);
    }
  }

  void ApplyTo(ExperimentConfig& cfg) const {
    for (const auto& [key, value] : values) ApplyConfigValue(cfg, key, value);
  }
};

void WriteTo(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  body(out);
}

void PrintGolden(std::ostream& out) {
  const EnergyParams e;
  struct Fixture {
    const char* name;
    NetworkGraph g;
  };
  const Fixture fixtures[] = {
      {"chain", NetworkGraph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}})},
      {"branched", NetworkGraph(4, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}})},
  };
  out << "fixture,centralized,tree_solution,closed_form\n";
  for (const auto& f : fixtures) {
    auto spt = ComputeShortestPaths(f.g);
    auto tree = BuildDct(f.g);
    out << f.name << ',' << CentralizedBaselineEnergy(f.g, spt, e) << ','
        << PlanEnergy(TreeSolution(tree), spt, e).total << ','
        << ClosedFormTreeEnergy(tree, e).total << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Communication structures for in-network SVD in sensor networks"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a random topology");
  std::uint64_t gen_seed = 1;
  int gen_nodes = 30;
  double gen_side = 50.0, gen_range = 30.0;
  std::string gen_out;
  gen->add_option("--topology.seed", gen_seed, "RNG seed");
  gen->add_option("--topology.num_nodes", gen_nodes, "number of nodes, base included");
  gen->add_option("--topology.side", gen_side, "side of the square area in meters");
  gen->add_option("--topology.tx_range", gen_range, "transmission range in meters");
  gen->add_option("-o,--out", gen_out, "output graph file (stdout if omitted)");

  auto* solve = app.add_subcommand("solve", "Run one algorithm on one graph");
  std::string solve_graph, solve_alg, solve_config, tree_out, plan_out;
  KeyFlags solve_flags;
  solve->add_option("--graph", solve_graph, "graph file")->required();
  solve->add_option("--algorithm", solve_alg, "lower_bound, ilp_p1, ilp_p3, lpr, daa, centralized or mdct_p2")
      ->required();
  solve->add_option("--config", solve_config, "config file for energy, constraints and budget");
  solve->add_option("--tree-out", tree_out, "write the routing tree here");
  solve->add_option("--plan-out", plan_out, "write the communication plan here");
  solve_flags.Register(solve);

  auto* experiment = app.add_subcommand("experiment", "Run a full experiment config");
  std::string exp_config;
  KeyFlags exp_flags;
  experiment->add_option("--config", exp_config, "config file");
  exp_flags.Register(experiment);

  auto* golden = app.add_subcommand("golden", "Reproduce the four-node fixture energies");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      auto g = GenerateRandomTopology(gen_seed, gen_nodes, gen_side, gen_range);
      WriteTo(gen_out, [&](std::ostream& out) { WriteGraph(out, g); });
    } else if (*solve) {
      ExperimentConfig cfg;
      if (!solve_config.empty()) cfg = LoadConfigFile(solve_config);
      solve_flags.ApplyTo(cfg);
      auto g = LoadGraphFile(solve_graph);
      cfg.graph_file = solve_graph;
      cfg.algorithms = {ParseAlgorithm(solve_alg)};
      cfg.Validate();
      auto result = RunAlgorithm(g, cfg, cfg.algorithms.front(), 0);
      WriteCsv(std::cout, {result.row});
      if (!tree_out.empty() && result.tree) {
        WriteTo(tree_out, [&](std::ostream& out) { WriteTree(out, *result.tree); });
      }
      if (!plan_out.empty() && result.plan) {
        WriteTo(plan_out, [&](std::ostream& out) { WritePlan(out, *result.plan); });
      }
    } else if (*experiment) {
      ExperimentConfig cfg;
      if (!exp_config.empty()) cfg = LoadConfigFile(exp_config);
      exp_flags.ApplyTo(cfg);
      auto rows = RunExperiment(cfg);
      if (cfg.csv_path.empty()) {
        WriteCsv(std::cout, rows);
      } else {
        EmitCsv(rows, cfg.csv_path);
      }
    } else if (*golden) {
      PrintGolden(std::cout);
    }
  } catch (const Error& err) {
    std::cerr << "error [" << ErrorCodeName(err.code()) << "]: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
