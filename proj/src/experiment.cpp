#include "innet/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>
#include <type_traits>
#include <utility>

#include "innet/approx.hpp"
#include "innet/error.hpp"
#include "innet/milp_models.hpp"
#include "innet/text.hpp"

namespace innet {
namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 7> kAlgorithmNames = {{
    {Algorithm::kLowerBound, "lower_bound"},
    {Algorithm::kIlpP1, "ilp_p1"},
    {Algorithm::kIlpP3, "ilp_p3"},
    {Algorithm::kLpr, "lpr"},
    {Algorithm::kDaa, "daa"},
    {Algorithm::kCentralized, "centralized"},
    {Algorithm::kMdctP2, "mdct_p2"},
}};

constexpr std::array<std::pair<RowStatus, std::string_view>, 9> kStatusNames = {{
    {RowStatus::kOptimal, "Optimal"},
    {RowStatus::kHeuristic, "Heuristic"},
    {RowStatus::kBound, "Bound"},
    {RowStatus::kBaseline, "Baseline"},
    {RowStatus::kDelayViolation, "DelayViolation"},
    {RowStatus::kTimeBudgetExceeded, "TimeBudgetExceeded"},
    {RowStatus::kInfeasible, "Infeasible"},
    {RowStatus::kStalled, "Stalled"},
    {RowStatus::kError, "Error"},
}};

std::vector<std::string_view> SplitList(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    const auto cut = text.find_first_of(", \t");
    auto item = text.substr(0, cut);
    if (!item.empty()) out.push_back(item);
    if (cut == std::string_view::npos) break;
    text.remove_prefix(cut + 1);
  }
  return out;
}

// "1-20", "3,5,9" or a mix of both.
std::vector<std::uint64_t> ParseSeeds(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (auto item : SplitList(text)) {
    const auto dash = item.find('-', 1);
    if (dash == std::string_view::npos) {
      const long long s = ParseInt(item);
      if (s < 0) throw Error(ErrorCode::kParse, "negative seed");
      seeds.push_back(static_cast<std::uint64_t>(s));
      continue;
    }
    const long long lo = ParseInt(item.substr(0, dash));
    const long long hi = ParseInt(item.substr(dash + 1));
    if (lo < 0 || hi < lo) throw Error(ErrorCode::kParse, "bad seed range " + std::string(item));
    for (long long s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  }
  return seeds;
}

bool ParseBool(std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error(ErrorCode::kParse, "expected a boolean, got " + std::string(text));
}

int ParseCount(std::string_view text) { return static_cast<int>(ParseInt(text)); }

using Clock = std::chrono::steady_clock;

RowStatus StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasible:
      return RowStatus::kInfeasible;
    case ErrorCode::kTimeBudgetExceeded:
      return RowStatus::kTimeBudgetExceeded;
    case ErrorCode::kStalled:
      return RowStatus::kStalled;
    default:
      return RowStatus::kError;
  }
}

void FillEnergy(ResultRow& row, const EnergyReport& rep, double lb) {
  row.energy_total = rep.total;
  row.fft_bytes = rep.fft_component;
  row.eig_bytes = rep.eig_component;
  row.gap_vs_lower_bound = rep.total / lb;
}

void FillTree(AlgorithmOutput& out, const RoutedTree& t, const ShortestPathTable& spt,
              const EnergyParams& e, double lb) {
  auto plan = TreeSolution(t);
  FillEnergy(out.row, PlanEnergy(plan, spt, e), lb);
  out.row.tree_height = ComputeTreeMetrics(t).height;
  out.row.num_heads = static_cast<int>(plan.heads().size());
  out.tree = t;
  out.plan = std::move(plan);
}

bool RespectsLimits(const RoutedTree& t, const DelayConstraints& c) {
  for (NodeId v = 0; v < t.num_nodes(); ++v) {
    if (t.children_count(v) + 1 > c.n(v)) return false;
  }
  return true;
}

// Tree-building heuristics honour the accuracy bound through repair.
RoutedTree WithAccuracy(const RoutedTree& t, const NetworkGraph& g, const DelayConstraints& c) {
  return c.min_cluster ? RepairAccuracy(t, g, c) : t;
}

void RunInto(AlgorithmOutput& out, const NetworkGraph& g, const ExperimentConfig& cfg,
             Algorithm a) {
  const auto c = cfg.Constraints(g.num_nodes());
  const auto& e = cfg.energy;
  const auto spt = ComputeShortestPaths(g);
  const double lb = LowerBound(g, c, e);
  ResultRow& row = out.row;

  switch (a) {
    case Algorithm::kLowerBound: {
      const int s = (g.num_nodes() + c.max_n() - 1) / c.max_n();
      row.energy_total = lb;
      row.fft_bytes = (g.num_nodes() - 1) * e.fft_bytes * e.e_b();
      row.eig_bytes = lb - *row.fft_bytes;
      row.num_heads = s;
      row.gap_vs_lower_bound = 1.0;
      row.status = RowStatus::kBound;
      return;
    }
    case Algorithm::kCentralized: {
      const double total = CentralizedBaselineEnergy(g, spt, e);
      row.energy_total = total;
      row.fft_bytes = total;
      row.eig_bytes = 0.0;
      row.num_heads = 1;
      row.gap_vs_lower_bound = total / lb;
      row.status = RowStatus::kBaseline;
      return;
    }
    case Algorithm::kDaa:
      FillTree(out, WithAccuracy(Daa(g, c), g, c), spt, e, lb);
      row.status = RowStatus::kHeuristic;
      return;
    case Algorithm::kLpr:
      FillTree(out, WithAccuracy(Lpr(g, c, cfg.budget_seconds), g, c), spt, e, lb);
      row.status = RowStatus::kHeuristic;
      return;
    case Algorithm::kMdctP2: {
      auto t = BuildMdct(g, MdctMode::kExact, cfg.budget_seconds);
      FillTree(out, t, spt, e, lb);
      row.status = RespectsLimits(t, c) ? RowStatus::kHeuristic : RowStatus::kDelayViolation;
      return;
    }
    case Algorithm::kIlpP3: {
      DdctSolveOptions opts;
      opts.time_budget_seconds = cfg.budget_seconds;
      opts.accuracy = c.min_cluster;
      auto res = SolveDdct(g, c, opts);
      if (res.tree) FillTree(out, *res.tree, spt, e, lb);
      switch (res.status) {
        case lp::MilpStatus::kOptimal:
          row.status = RowStatus::kOptimal;
          break;
        case lp::MilpStatus::kTimeBudgetExceeded:
          row.status = RowStatus::kTimeBudgetExceeded;
          break;
        case lp::MilpStatus::kInfeasible:
          row.status = RowStatus::kInfeasible;
          break;
        case lp::MilpStatus::kUnbounded:
          row.status = RowStatus::kError;
          break;
      }
      return;
    }
    case Algorithm::kIlpP1: {
      auto ilp = BuildIlpP1(g, spt, e, c);
      lp::MilpOptions opts;
      opts.time_budget_seconds = cfg.budget_seconds;
      try {
        opts.initial_solution = P1ValuesFromPlan(TreeSolution(WithAccuracy(Daa(g, c), g, c)), ilp.layout);
      } catch (const Error&) {
        // no warm start
      }
      auto sol = lp::SolveMilp(ilp.model, opts);
      if (sol.has_incumbent()) {
        auto plan = ExtractPlanP1(sol, ilp.layout, spt, e, c);
        FillEnergy(row, PlanEnergy(plan, spt, e), lb);
        row.num_heads = static_cast<int>(plan.heads().size());
        out.plan = std::move(plan);
      }
      switch (sol.status) {
        case lp::MilpStatus::kOptimal:
          row.status = RowStatus::kOptimal;
          break;
        case lp::MilpStatus::kTimeBudgetExceeded:
          row.status = RowStatus::kTimeBudgetExceeded;
          break;
        case lp::MilpStatus::kInfeasible:
          row.status = RowStatus::kInfeasible;
          break;
        case lp::MilpStatus::kUnbounded:
          row.status = RowStatus::kError;
          break;
      }
      return;
    }
  }
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

template <typename T>
std::string Opt(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_same_v<T, double>) {
    return FormatDouble(*v);
  } else {
    return std::to_string(*v);
  }
}

// One record; handles quoted fields spanning lines. False at end of input.
bool ReadRecord(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string cur;
  bool quoted = false;
  char ch;
  while (in.get(ch)) {
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          cur += '"';
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (ch == '\n') {
      break;
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  if (quoted) throw Error(ErrorCode::kParse, "unterminated quoted CSV field");
  fields.push_back(std::move(cur));
  return true;
}

template <typename T>
std::optional<T> ParseOpt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if constexpr (std::is_same_v<T, double>) {
    return ParseDouble(s);
  } else {
    return static_cast<T>(ParseInt(s));
  }
}

constexpr std::string_view kCsvHeader =
    "seed,algorithm,energy_total,fft_bytes,eig_bytes,tree_height,num_heads,gap_vs_lower_bound,"
    "runtime_ms,status";

}  // namespace

std::string_view AlgorithmName(Algorithm a) {
  for (const auto& [alg, name] : kAlgorithmNames) {
    if (alg == a) return name;
  }
  return "unknown";
}

Algorithm ParseAlgorithm(std::string_view name) {
  for (const auto& [alg, n] : kAlgorithmNames) {
    if (n == name) return alg;
  }
  throw Error(ErrorCode::kParse, "unknown algorithm " + std::string(name));
}

std::string_view RowStatusName(RowStatus s) {
  for (const auto& [st, name] : kStatusNames) {
    if (st == s) return name;
  }
  return "Error";
}

RowStatus ParseRowStatus(std::string_view name) {
  for (const auto& [st, n] : kStatusNames) {
    if (n == name) return st;
  }
  throw Error(ErrorCode::kParse, "unknown status " + std::string(name));
}

void ExperimentConfig::Validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidArgument, msg); };
  if (algorithms.empty()) fail("at least one algorithm is required");
  if (graph_file.empty()) {
    if (num_nodes < 2) fail("topology.num_nodes must be >= 2");
    if (!(side > 0.0) || !(tx_range > 0.0)) fail("topology.side and topology.tx_range must be > 0");
    if (seeds.empty()) fail("topology.seeds is empty");
  }
  const bool wants_p1 = std::find(algorithms.begin(), algorithms.end(), Algorithm::kIlpP1) != algorithms.end();
  if (wants_p1 && graph_file.empty() && num_nodes > kDefaultP1NodeCap) {
    fail("ilp_p1 needs topology.num_nodes <= " + std::to_string(kDefaultP1NodeCap));
  }
  energy.Validate();
  if (!(budget_seconds > 0.0)) fail("budgets.seconds must be > 0");
  if (n_per_node.empty()) {
    if (n < 1) fail("constraints.n must be >= 1");
    if (n_a && (*n_a < 1 || *n_a > n)) fail("constraints.n_a must lie in [1, n]");
  } else {
    if (graph_file.empty() && static_cast<int>(n_per_node.size()) != num_nodes) {
      fail("constraints.n_per_node needs one entry per node");
    }
    Constraints(static_cast<int>(n_per_node.size())).Validate(static_cast<int>(n_per_node.size()));
  }
}

DelayConstraints ExperimentConfig::Constraints(int graph_nodes) const {
  if (n_per_node.empty()) return DelayConstraints::Uniform(graph_nodes, n, n_a);
  if (static_cast<int>(n_per_node.size()) != graph_nodes) {
    throw Error(ErrorCode::kInvalidArgument, "constraints.n_per_node does not match the graph size");
  }
  DelayConstraints c;
  c.max_cluster = n_per_node;
  c.min_cluster = n_a;
  return c;
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = {
      "topology.num_nodes", "topology.side",      "topology.tx_range",     "topology.seeds",
      "topology.graph_file", "energy.R_bytes",    "energy.r_bytes",        "energy.e_tx",
      "energy.e_rx",        "constraints.n",      "constraints.n_per_node", "constraints.n_a",
      "algorithms",         "budgets.seconds",    "output.csv",            "output.timing",
  };
  return keys;
}

void ApplyConfigValue(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  value = Trim(value);
  if (key == "topology.num_nodes") {
    cfg.num_nodes = ParseCount(value);
  } else if (key == "topology.side") {
    cfg.side = ParseDouble(value);
  } else if (key == "topology.tx_range") {
    cfg.tx_range = ParseDouble(value);
  } else if (key == "topology.seeds") {
    cfg.seeds = ParseSeeds(value);
  } else if (key == "topology.graph_file") {
    cfg.graph_file = std::string(value);
  } else if (key == "energy.R_bytes") {
    cfg.energy.fft_bytes = ParseDouble(value);
  } else if (key == "energy.r_bytes") {
    cfg.energy.eig_bytes = ParseDouble(value);
  } else if (key == "energy.e_tx") {
    cfg.energy.e_tx = ParseDouble(value);
  } else if (key == "energy.e_rx") {
    cfg.energy.e_rx = ParseDouble(value);
  } else if (key == "constraints.n") {
    cfg.n = ParseCount(value);
  } else if (key == "constraints.n_per_node") {
    cfg.n_per_node.clear();
    for (auto item : SplitList(value)) cfg.n_per_node.push_back(ParseCount(item));
  } else if (key == "constraints.n_a") {
    if (value.empty() || value == "none") {
      cfg.n_a.reset();
    } else {
      cfg.n_a = ParseCount(value);
    }
  } else if (key == "algorithms") {
    cfg.algorithms.clear();
    for (auto item : SplitList(value)) {
      const Algorithm a = ParseAlgorithm(item);
      if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), a) == cfg.algorithms.end()) {
        cfg.algorithms.push_back(a);
      }
    }
  } else if (key == "budgets.seconds") {
    cfg.budget_seconds = ParseDouble(value);
  } else if (key == "output.csv") {
    cfg.csv_path = std::string(value);
  } else if (key == "output.timing") {
    cfg.timing = ParseBool(value);
  } else {
    throw Error(ErrorCode::kParse, "unknown config key " + std::string(key));
  }
}

ExperimentConfig ParseConfig(std::istream& in, ExperimentConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = Trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      ApplyConfigValue(base, Trim(view.substr(0, eq)), view.substr(eq + 1));
    } catch (const Error& err) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + err.what());
    }
  }
  return base;
}

ExperimentConfig LoadConfigFile(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file " + path);
  try {
    return ParseConfig(in, std::move(base));
  } catch (const Error& err) {
    throw Error(err.code(), path + ": " + err.what());
  }
}

AlgorithmOutput RunAlgorithm(const NetworkGraph& g, const ExperimentConfig& cfg, Algorithm a,
                             std::uint64_t seed) {
  AlgorithmOutput out;
  out.row.seed = seed;
  out.row.algorithm = std::string(AlgorithmName(a));
  const auto start = Clock::now();
  try {
    RunInto(out, g, cfg, a);
  } catch (const Error& err) {
    out.row.status = StatusFor(err.code());
  }
  if (cfg.timing) {
    out.row.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }
  return out;
}

std::vector<ResultRow> RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  std::vector<ResultRow> rows;
  auto run_graph = [&](const NetworkGraph& g, std::uint64_t seed) {
    for (Algorithm a : cfg.algorithms) rows.push_back(RunAlgorithm(g, cfg, a, seed).row);
  };
  if (!cfg.graph_file.empty()) {
    auto g = LoadGraphFile(cfg.graph_file);
    const bool wants_p1 = std::find(cfg.algorithms.begin(), cfg.algorithms.end(), Algorithm::kIlpP1) !=
                          cfg.algorithms.end();
    if (wants_p1 && g.num_nodes() > kDefaultP1NodeCap) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ilp_p1 needs at most " + std::to_string(kDefaultP1NodeCap) + " nodes; " +
                      cfg.graph_file + " has " + std::to_string(g.num_nodes()));
    }
    run_graph(g, 0);
  } else {
    for (std::uint64_t seed : cfg.seeds) {
      std::optional<NetworkGraph> g;
      try {
        g = GenerateRandomTopology(seed, cfg.num_nodes, cfg.side, cfg.tx_range);
      } catch (const Error&) {
        for (Algorithm a : cfg.algorithms) {
          ResultRow row;
          row.seed = seed;
          row.algorithm = std::string(AlgorithmName(a));
          row.status = RowStatus::kError;
          rows.push_back(row);
        }
        continue;
      }
      run_graph(*g, seed);
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& x, const ResultRow& y) {
    return std::tie(x.seed, x.algorithm) < std::tie(y.seed, y.algorithm);
  });
  return rows;
}

void WriteCsv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.seed << ',' << CsvField(r.algorithm) << ',' << Opt(r.energy_total) << ','
        << Opt(r.fft_bytes) << ',' << Opt(r.eig_bytes) << ',' << Opt(r.tree_height) << ','
        << Opt(r.num_heads) << ',' << Opt(r.gap_vs_lower_bound) << ',' << Opt(r.runtime_ms)
        << ',' << RowStatusName(r.status) << '\n';
  }
}

void EmitCsv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write CSV file " + path);
  WriteCsv(out, rows);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed for CSV file " + path);
}

std::vector<ResultRow> ReadCsv(std::istream& in) {
  std::vector<std::string> fields;
  if (!ReadRecord(in, fields)) throw Error(ErrorCode::kParse, "CSV input is empty");
  std::string header;
  for (std::size_t i = 0; i < fields.size(); ++i) header += (i ? "," : "") + fields[i];
  if (header != kCsvHeader) throw Error(ErrorCode::kParse, "unexpected CSV header");
  std::vector<ResultRow> rows;
  while (ReadRecord(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 10) {
      throw Error(ErrorCode::kParse, "CSV row " + std::to_string(rows.size() + 1) + " has " +
                                         std::to_string(fields.size()) + " fields");
    }
    ResultRow r;
    const long long seed = ParseInt(fields[0]);
    if (seed < 0) throw Error(ErrorCode::kParse, "negative seed in CSV");
    r.seed = static_cast<std::uint64_t>(seed);
    r.algorithm = fields[1];
    r.energy_total = ParseOpt<double>(fields[2]);
    r.fft_bytes = ParseOpt<double>(fields[3]);
    r.eig_bytes = ParseOpt<double>(fields[4]);
    r.tree_height = ParseOpt<int>(fields[5]);
    r.num_heads = ParseOpt<int>(fields[6]);
    r.gap_vs_lower_bound = ParseOpt<double>(fields[7]);
    r.runtime_ms = ParseOpt<double>(fields[8]);
    r.status = ParseRowStatus(fields[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace innet
