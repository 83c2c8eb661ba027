#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "innet/error.hpp"
#include "innet/lpsolve.hpp"

namespace innet::lp {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;
constexpr double kDropTol = 1e-13;
constexpr double kRatioTieTol = 1e-12;

// How one model variable maps onto nonnegative internal columns:
//   value = shift + sign * col            (single column)
//   value = col - col2                    (free variable)
struct ColumnMap {
  int col = -1;
  int col2 = -1;
  double shift = 0.0;
  double sign = 1.0;
};

enum class RunResult { kOptimal, kUnbounded };

// Dense tableau over columns with bounds [0, upper]. Nonbasic columns sit at
// one of their bounds; `beta` holds the current values of basic columns.
class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows),
        n_(cols),
        a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0),
        beta_(static_cast<std::size_t>(rows), 0.0),
        upper_(static_cast<std::size_t>(cols), kInfinity),
        cost_(static_cast<std::size_t>(cols), 0.0),
        d_(static_cast<std::size_t>(cols), 0.0),
        basis_(static_cast<std::size_t>(rows), -1),
        row_of_(static_cast<std::size_t>(cols), -1),
        at_upper_(static_cast<std::size_t>(cols), 0),
        eligible_(static_cast<std::size_t>(cols), 1) {}

  int rows() const { return m_; }
  int cols() const { return n_; }
  double& at(int i, int j) {
    return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
              static_cast<std::size_t>(j)];
  }
  double at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
              static_cast<std::size_t>(j)];
  }
  double* row(int i) {
    return &a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_)];
  }

  std::vector<double>& beta() { return beta_; }
  std::vector<double>& upper() { return upper_; }
  std::vector<double>& cost() { return cost_; }
  std::vector<char>& eligible() { return eligible_; }
  std::vector<int>& basis() { return basis_; }
  std::vector<char>& at_upper() { return at_upper_; }

  void SetBasic(int i, int j) {
    basis_[static_cast<std::size_t>(i)] = j;
    row_of_[static_cast<std::size_t>(j)] = i;
  }
  bool IsBasic(int j) const { return row_of_[static_cast<std::size_t>(j)] >= 0; }

  double ColumnValue(int j) const {
    int r = row_of_[static_cast<std::size_t>(j)];
    if (r >= 0) return beta_[static_cast<std::size_t>(r)];
    return at_upper_[static_cast<std::size_t>(j)] ? upper_[static_cast<std::size_t>(j)] : 0.0;
  }

  void ComputeReducedCosts() {
    d_ = cost_;
    for (int i = 0; i < m_; ++i) {
      const double cb = cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
      if (cb == 0.0) continue;
      const double* r = row(i);
      for (int j = 0; j < n_; ++j) d_[static_cast<std::size_t>(j)] -= cb * r[j];
    }
    for (int i = 0; i < m_; ++i) d_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = 0.0;
  }

  RunResult Run(const SimplexOptions& options, std::int64_t& iterations) {
    int degenerate_run = 0;
    while (true) {
      if (++iterations > options.iteration_limit) {
        throw Error(ErrorCode::kStalled, "simplex iteration limit reached");
      }
      const bool bland = degenerate_run >= options.degenerate_switch;
      const int q = Price(bland);
      if (q < 0) return RunResult::kOptimal;

      const auto uq = static_cast<std::size_t>(q);
      const double dir = at_upper_[uq] ? -1.0 : 1.0;
      double best = kInfinity;
      int leave = -1;
      double leave_alpha = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double alpha = at(i, q) * dir;
        const int b = basis_[static_cast<std::size_t>(i)];
        double ratio;
        if (alpha > kPivotTol) {
          ratio = std::max(0.0, beta_[static_cast<std::size_t>(i)]) / alpha;
        } else if (alpha < -kPivotTol && upper_[static_cast<std::size_t>(b)] < kInfinity) {
          ratio = std::max(0.0, upper_[static_cast<std::size_t>(b)] -
                                    beta_[static_cast<std::size_t>(i)]) / -alpha;
        } else {
          continue;
        }
        bool take = false;
        if (ratio < best - kRatioTieTol) {
          take = true;
        } else if (ratio <= best + kRatioTieTol && leave >= 0) {
          const int cur = basis_[static_cast<std::size_t>(leave)];
          take = bland ? b < cur : std::abs(alpha) > std::abs(leave_alpha);
        }
        if (take) {
          best = ratio;
          leave = i;
          leave_alpha = alpha;
        }
      }
      const double flip = upper_[uq];
      if (leave < 0 && flip == kInfinity) return RunResult::kUnbounded;

      if (flip <= best) {
        // Entering column moves straight to its opposite bound.
        for (int i = 0; i < m_; ++i) {
          beta_[static_cast<std::size_t>(i)] -= at(i, q) * dir * flip;
        }
        at_upper_[uq] = !at_upper_[uq];
        degenerate_run = flip <= kRatioTieTol ? degenerate_run + 1 : 0;
        continue;
      }

      const double step = best;
      for (int i = 0; i < m_; ++i) {
        beta_[static_cast<std::size_t>(i)] -= at(i, q) * dir * step;
      }
      const double entering_value = (at_upper_[uq] ? upper_[uq] : 0.0) + dir * step;
      const int out = basis_[static_cast<std::size_t>(leave)];
      at_upper_[static_cast<std::size_t>(out)] = leave_alpha < 0.0 ? 1 : 0;
      row_of_[static_cast<std::size_t>(out)] = -1;
      beta_[static_cast<std::size_t>(leave)] = entering_value;
      at_upper_[uq] = 0;
      SetBasic(leave, q);
      Pivot(leave, q);
      degenerate_run = step <= kRatioTieTol ? degenerate_run + 1 : 0;
    }
  }

  // Pivots column j into the basis at row r without moving any value; used
  // to drive zero-valued artificials out after phase one.
  void DegeneratePivot(int r, int j) {
    const int out = basis_[static_cast<std::size_t>(r)];
    row_of_[static_cast<std::size_t>(out)] = -1;
    at_upper_[static_cast<std::size_t>(out)] = 0;
    beta_[static_cast<std::size_t>(r)] = ColumnValue(j);
    at_upper_[static_cast<std::size_t>(j)] = 0;
    SetBasic(r, j);
    Pivot(r, j);
  }

  void Pivot(int r, int q) {
    double* pr = row(r);
    const double inv = 1.0 / pr[q];
    nz_.clear();
    for (int j = 0; j < n_; ++j) {
      if (pr[j] == 0.0) continue;
      pr[j] *= inv;
      if (std::abs(pr[j]) < kDropTol) {
        pr[j] = 0.0;
      } else {
        nz_.push_back(j);
      }
    }
    pr[q] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* pi = row(i);
      const double f = pi[q];
      if (f == 0.0) continue;
      for (int j : nz_) {
        double v = pi[j] - f * pr[j];
        pi[j] = std::abs(v) < kDropTol ? 0.0 : v;
      }
      pi[q] = 0.0;
    }
    const double f = d_[static_cast<std::size_t>(q)];
    if (f != 0.0) {
      for (int j : nz_) d_[static_cast<std::size_t>(j)] -= f * pr[j];
    }
    d_[static_cast<std::size_t>(q)] = 0.0;
  }

 private:
  int Price(bool bland) const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < n_; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (row_of_[uj] >= 0 || !eligible_[uj] || upper_[uj] == 0.0) continue;
      const double dj = d_[uj];
      double score = 0.0;
      if (!at_upper_[uj] && dj < -kReducedCostTol) {
        score = -dj;
      } else if (at_upper_[uj] && dj > kReducedCostTol) {
        score = dj;
      } else {
        continue;
      }
      if (bland) return j;
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  int m_;
  int n_;
  std::vector<double> a_;
  std::vector<double> beta_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<double> d_;
  std::vector<int> basis_;
  std::vector<int> row_of_;
  std::vector<char> at_upper_;
  std::vector<char> eligible_;
  std::vector<int> nz_;
};

struct StandardRow {
  std::vector<std::pair<int, double>> coefs;  // internal column, value
  double rhs = 0.0;
  Relation relation = Relation::kLessEqual;
};

}  // namespace

LpSolution SolveLpWithBounds(const MilpModel& model, const std::vector<double>& lo,
                             const std::vector<double>& hi,
                             const SimplexOptions& options) {
  const int nv = model.num_vars();
  LpSolution result;
  for (int j = 0; j < nv; ++j) {
    if (lo[static_cast<std::size_t>(j)] > hi[static_cast<std::size_t>(j)] + kFeasibilityTol) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
  }

  // Map model variables to nonnegative columns.
  std::vector<ColumnMap> map(static_cast<std::size_t>(nv));
  std::vector<double> col_upper;
  std::vector<double> col_cost;
  const double sense = model.sense() == Sense::kMaximize ? -1.0 : 1.0;
  for (int j = 0; j < nv; ++j) {
    const double l = lo[static_cast<std::size_t>(j)];
    const double h = hi[static_cast<std::size_t>(j)];
    const double c = sense * model.variable(j).objective;
    ColumnMap& cm = map[static_cast<std::size_t>(j)];
    if (l > -kInfinity) {
      cm = {static_cast<int>(col_upper.size()), -1, l, 1.0};
      col_upper.push_back(h == kInfinity ? kInfinity : std::max(0.0, h - l));
      col_cost.push_back(c);
    } else if (h < kInfinity) {
      cm = {static_cast<int>(col_upper.size()), -1, h, -1.0};
      col_upper.push_back(kInfinity);
      col_cost.push_back(-c);
    } else {
      cm = {static_cast<int>(col_upper.size()), static_cast<int>(col_upper.size()) + 1, 0.0, 1.0};
      col_upper.push_back(kInfinity);
      col_upper.push_back(kInfinity);
      col_cost.push_back(c);
      col_cost.push_back(-c);
    }
  }
  const int structural = static_cast<int>(col_upper.size());

  // Rewrite rows over the columns, dropping empty ones.
  std::vector<StandardRow> rows;
  std::vector<double> dense(static_cast<std::size_t>(structural), 0.0);
  std::vector<char> mark(static_cast<std::size_t>(structural), 0);
  std::vector<int> touched;
  for (const Constraint& con : model.constraints()) {
    StandardRow row;
    row.relation = con.relation;
    row.rhs = con.rhs;
    touched.clear();
    auto add = [&](int col, double v) {
      if (!mark[static_cast<std::size_t>(col)]) {
        mark[static_cast<std::size_t>(col)] = 1;
        touched.push_back(col);
      }
      dense[static_cast<std::size_t>(col)] += v;
    };
    for (const Term& t : con.terms) {
      if (t.coef == 0.0) continue;
      const ColumnMap& cm = map[static_cast<std::size_t>(t.var)];
      row.rhs -= t.coef * cm.shift;
      add(cm.col, t.coef * cm.sign);
      if (cm.col2 >= 0) add(cm.col2, -t.coef);
    }
    std::sort(touched.begin(), touched.end());
    for (int col : touched) {
      double v = dense[static_cast<std::size_t>(col)];
      dense[static_cast<std::size_t>(col)] = 0.0;
      mark[static_cast<std::size_t>(col)] = 0;
      if (v != 0.0) row.coefs.emplace_back(col, v);
    }
    if (row.coefs.empty()) {
      const bool ok = (con.relation == Relation::kLessEqual && row.rhs >= -kFeasibilityTol) ||
                      (con.relation == Relation::kGreaterEqual && row.rhs <= kFeasibilityTol) ||
                      (con.relation == Relation::kEqual && std::abs(row.rhs) <= kFeasibilityTol);
      if (!ok) {
        result.status = LpStatus::kInfeasible;
        return result;
      }
      continue;
    }
    rows.push_back(std::move(row));
  }

  const int m = static_cast<int>(rows.size());
  int slacks = 0;
  for (const StandardRow& r : rows) {
    if (r.relation != Relation::kEqual) ++slacks;
  }
  // Decide which rows start with their slack basic and which need an
  // artificial column.
  std::vector<int> slack_col(static_cast<std::size_t>(m), -1);
  std::vector<double> row_sign(static_cast<std::size_t>(m), 1.0);
  int artificials = 0;
  {
    int next = structural;
    for (int i = 0; i < m; ++i) {
      const StandardRow& r = rows[static_cast<std::size_t>(i)];
      if (r.relation != Relation::kEqual) slack_col[static_cast<std::size_t>(i)] = next++;
      row_sign[static_cast<std::size_t>(i)] = r.rhs < 0.0 ? -1.0 : 1.0;
      const double slack_coef = r.relation == Relation::kLessEqual ? 1.0 : -1.0;
      const bool slack_basic = r.relation != Relation::kEqual &&
                               slack_coef * row_sign[static_cast<std::size_t>(i)] > 0.0;
      if (!slack_basic) ++artificials;
    }
  }
  const int n_phase1 = structural + slacks + artificials;
  Tableau tab(m, n_phase1);
  for (int j = 0; j < structural; ++j) {
    tab.upper()[static_cast<std::size_t>(j)] = col_upper[static_cast<std::size_t>(j)];
  }
  int art = structural + slacks;
  std::vector<char> is_artificial(static_cast<std::size_t>(n_phase1), 0);
  for (int i = 0; i < m; ++i) {
    const StandardRow& r = rows[static_cast<std::size_t>(i)];
    const double s = row_sign[static_cast<std::size_t>(i)];
    for (auto [col, v] : r.coefs) tab.at(i, col) = s * v;
    tab.beta()[static_cast<std::size_t>(i)] = s * r.rhs;
    bool slack_basic = false;
    if (slack_col[static_cast<std::size_t>(i)] >= 0) {
      const double coef = (r.relation == Relation::kLessEqual ? 1.0 : -1.0) * s;
      tab.at(i, slack_col[static_cast<std::size_t>(i)]) = coef;
      if (coef > 0.0) {
        tab.SetBasic(i, slack_col[static_cast<std::size_t>(i)]);
        slack_basic = true;
      }
    }
    if (!slack_basic) {
      tab.at(i, art) = 1.0;
      is_artificial[static_cast<std::size_t>(art)] = 1;
      tab.cost()[static_cast<std::size_t>(art)] = 1.0;
      tab.SetBasic(i, art);
      ++art;
    }
  }

  std::int64_t iterations = 0;
  std::vector<char> redundant(static_cast<std::size_t>(m), 0);
  if (artificials > 0) {
    tab.ComputeReducedCosts();
    tab.Run(options, iterations);
    double infeas = 0.0;
    double scale = 1.0;
    for (int i = 0; i < m; ++i) {
      scale = std::max(scale, std::abs(rows[static_cast<std::size_t>(i)].rhs));
      if (is_artificial[static_cast<std::size_t>(tab.basis()[static_cast<std::size_t>(i)])]) {
        infeas += std::max(0.0, tab.beta()[static_cast<std::size_t>(i)]);
      }
    }
    if (infeas > kFeasibilityTol * scale) {
      result.status = LpStatus::kInfeasible;
      result.iterations = iterations;
      return result;
    }
    for (int i = 0; i < m; ++i) {
      if (!is_artificial[static_cast<std::size_t>(tab.basis()[static_cast<std::size_t>(i)])]) continue;
      int pick = -1;
      double mag = 1e-7;
      for (int j = 0; j < structural + slacks; ++j) {
        if (tab.IsBasic(j)) continue;
        if (std::abs(tab.at(i, j)) > mag) {
          mag = std::abs(tab.at(i, j));
          pick = j;
        }
      }
      if (pick >= 0) {
        tab.DegeneratePivot(i, pick);
      } else {
        redundant[static_cast<std::size_t>(i)] = 1;
      }
    }
  }

  // Phase two on a compacted tableau without artificial columns.
  const int n2 = structural + slacks;
  int m2 = 0;
  for (int i = 0; i < m; ++i) m2 += redundant[static_cast<std::size_t>(i)] ? 0 : 1;
  Tableau t2(m2, n2);
  {
    int ii = 0;
    for (int i = 0; i < m; ++i) {
      if (redundant[static_cast<std::size_t>(i)]) continue;
      const double* src = tab.row(i);
      std::copy(src, src + n2, t2.row(ii));
      t2.beta()[static_cast<std::size_t>(ii)] = tab.beta()[static_cast<std::size_t>(i)];
      t2.SetBasic(ii, tab.basis()[static_cast<std::size_t>(i)]);
      ++ii;
    }
    for (int j = 0; j < n2; ++j) {
      t2.upper()[static_cast<std::size_t>(j)] = tab.upper()[static_cast<std::size_t>(j)];
      t2.at_upper()[static_cast<std::size_t>(j)] = tab.at_upper()[static_cast<std::size_t>(j)];
      t2.cost()[static_cast<std::size_t>(j)] = j < structural ? col_cost[static_cast<std::size_t>(j)] : 0.0;
    }
  }
  t2.ComputeReducedCosts();
  RunResult rr = t2.Run(options, iterations);
  result.iterations = iterations;
  if (rr == RunResult::kUnbounded) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  result.status = LpStatus::kOptimal;
  result.values.assign(static_cast<std::size_t>(nv), 0.0);
  for (int j = 0; j < nv; ++j) {
    const ColumnMap& cm = map[static_cast<std::size_t>(j)];
    double v;
    if (cm.col2 >= 0) {
      v = t2.ColumnValue(cm.col) - t2.ColumnValue(cm.col2);
    } else {
      v = cm.shift + cm.sign * t2.ColumnValue(cm.col);
    }
    // Snap onto bounds that the value sits on within tolerance.
    const double l = lo[static_cast<std::size_t>(j)];
    const double h = hi[static_cast<std::size_t>(j)];
    if (v < l) v = l;
    if (v > h) v = h;
    result.values[static_cast<std::size_t>(j)] = v;
  }
  result.objective_value = model.EvaluateObjective(result.values);
  return result;
}

LpSolution SolveLp(const MilpModel& model, const SimplexOptions& options) {
  model.Validate();
  std::vector<double> lo(static_cast<std::size_t>(model.num_vars()));
  std::vector<double> hi(static_cast<std::size_t>(model.num_vars()));
  for (int j = 0; j < model.num_vars(); ++j) {
    lo[static_cast<std::size_t>(j)] = model.variable(j).lo;
    hi[static_cast<std::size_t>(j)] = model.variable(j).hi;
  }
  return SolveLpWithBounds(model, lo, hi, options);
}

}  // namespace innet::lp
