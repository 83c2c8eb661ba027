#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "innet/netmodel.hpp"
#include "innet/plans.hpp"
#include "innet/trees.hpp"

namespace innet {

enum class Algorithm { kLowerBound, kIlpP1, kIlpP3, kLpr, kDaa, kCentralized, kMdctP2 };

std::string_view AlgorithmName(Algorithm a);
// Throws kParse on unknown names.
Algorithm ParseAlgorithm(std::string_view name);

struct ExperimentConfig {
  // topology.*
  int num_nodes = 30;
  double side = 50.0;
  double tx_range = 30.0;
  std::vector<std::uint64_t> seeds = {1};
  // When set, this graph replaces the generated ones and is run once with
  // seed 0.
  std::string graph_file;

  // energy.*
  EnergyParams energy;

  // constraints.*; per_node wins over the uniform n when non-empty.
  int n = 6;
  std::vector<int> n_per_node;
  std::optional<int> n_a;

  std::vector<Algorithm> algorithms;

  // budgets.seconds, applied to each solver call.
  double budget_seconds = 60.0;

  // output.*; an empty path means stdout. Runtimes are left blank unless
  // timing is on so that repeated runs give identical files.
  std::string csv_path;
  bool timing = false;

  // Throws kInvalidArgument.
  void Validate() const;
  DelayConstraints Constraints(int graph_nodes) const;
};

// Every key accepted by the config file, in documentation order.
const std::vector<std::string>& ConfigKeys();

// Throws kParse for unknown keys or malformed values.
void ApplyConfigValue(ExperimentConfig& cfg, std::string_view key, std::string_view value);

// `key = value` lines; `#` starts a comment. Does not validate.
ExperimentConfig ParseConfig(std::istream& in, ExperimentConfig base = {});
ExperimentConfig LoadConfigFile(const std::string& path, ExperimentConfig base = {});

enum class RowStatus {
  kOptimal,
  kHeuristic,
  kBound,
  kBaseline,
  kDelayViolation,  // structure ignores the cluster limits (mdct_p2 only)
  kTimeBudgetExceeded,
  kInfeasible,
  kStalled,
  kError,
};

std::string_view RowStatusName(RowStatus s);
RowStatus ParseRowStatus(std::string_view name);

struct ResultRow {
  std::uint64_t seed = 0;
  std::string algorithm;
  std::optional<double> energy_total;
  std::optional<double> fft_bytes;
  std::optional<double> eig_bytes;
  std::optional<int> tree_height;
  std::optional<int> num_heads;
  std::optional<double> gap_vs_lower_bound;
  std::optional<double> runtime_ms;
  RowStatus status = RowStatus::kError;

  bool operator==(const ResultRow&) const = default;
};

struct AlgorithmOutput {
  ResultRow row;
  std::optional<RoutedTree> tree;
  std::optional<CommPlan> plan;
};

// Runs one algorithm on one graph with the config's energy, constraints and
// budget. Library errors become the row status.
AlgorithmOutput RunAlgorithm(const NetworkGraph& g, const ExperimentConfig& cfg, Algorithm a,
                             std::uint64_t seed);

// Rows sorted by (seed, algorithm name).
std::vector<ResultRow> RunExperiment(const ExperimentConfig& cfg);

void WriteCsv(std::ostream& out, const std::vector<ResultRow>& rows);
// Throws kIo naming the path.
void EmitCsv(const std::vector<ResultRow>& rows, const std::string& path);
// Inverse of WriteCsv. Throws kParse.
std::vector<ResultRow> ReadCsv(std::istream& in);

}  // namespace innet
