#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <string>

#include "innet/error.hpp"
#include "innet/lpsolve.hpp"
#include "innet/text.hpp"

namespace innet::lp {

int MilpModel::AddVariable(double lo, double hi, VarType type, double objective,
                           std::string name) {
  vars_.push_back({lo, hi, type, objective, std::move(name)});
  return static_cast<int>(vars_.size()) - 1;
}

int MilpModel::AddConstraint(std::vector<Term> terms, Relation relation, double rhs,
                             std::string name) {
  rows_.push_back({std::move(terms), relation, rhs, std::move(name)});
  return static_cast<int>(rows_.size()) - 1;
}

void MilpModel::SetObjective(int var, double coef) {
  vars_.at(static_cast<std::size_t>(var)).objective = coef;
}

void MilpModel::SetBounds(int var, double lo, double hi) {
  Variable& v = vars_.at(static_cast<std::size_t>(var));
  v.lo = lo;
  v.hi = hi;
}

void MilpModel::Validate() const {
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const Variable& v = vars_[j];
    if (std::isnan(v.lo) || std::isnan(v.hi) || v.lo > v.hi) {
      throw Error(ErrorCode::kInvalidArgument,
                  "variable " + std::to_string(j) + " has lo > hi");
    }
    if (v.type == VarType::kBinary && (v.lo < 0.0 || v.hi > 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "binary variable " + std::to_string(j) + " bounds exceed [0,1]");
    }
    if (!std::isfinite(v.objective)) {
      throw Error(ErrorCode::kInvalidArgument, "objective coefficient not finite");
    }
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const Term& t : rows_[i].terms) {
      if (t.var < 0 || t.var >= num_vars()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "constraint " + std::to_string(i) + " references unknown variable");
      }
      if (!std::isfinite(t.coef)) {
        throw Error(ErrorCode::kInvalidArgument, "constraint coefficient not finite");
      }
    }
    if (!std::isfinite(rows_[i].rhs)) {
      throw Error(ErrorCode::kInvalidArgument, "constraint rhs not finite");
    }
  }
}

double MilpModel::EvaluateObjective(const std::vector<double>& values) const {
  double total = objective_offset_;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    total += vars_[j].objective * values[j];
  }
  return total;
}

double MilpModel::MaxViolation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max(worst, vars_[j].lo - values[j]);
    worst = std::max(worst, values[j] - vars_[j].hi);
  }
  for (const Constraint& c : rows_) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coef * values[static_cast<std::size_t>(t.var)];
    switch (c.relation) {
      case Relation::kLessEqual: worst = std::max(worst, lhs - c.rhs); break;
      case Relation::kGreaterEqual: worst = std::max(worst, c.rhs - lhs); break;
      case Relation::kEqual: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

bool MilpModel::IsIntegral(const std::vector<double>& values, double tol) const {
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    if (vars_[j].type == VarType::kContinuous) continue;
    if (std::abs(values[j] - std::round(values[j])) > tol) return false;
  }
  return true;
}

namespace {

std::string VarName(const MilpModel& m, int j) {
  const std::string& name = m.variable(j).name;
  std::string out = "v" + std::to_string(j);
  if (!name.empty()) {
    out += '_';
    for (char c : name) {
      out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
    }
  }
  return out;
}

void WriteTerms(std::ostream& out, const MilpModel& m,
                const std::vector<std::pair<int, double>>& terms) {
  if (terms.empty()) {
    out << " 0 " << VarName(m, 0);
    return;
  }
  for (auto [j, c] : terms) {
    out << (c < 0 ? " - " : " + ") << FormatDouble(std::abs(c)) << ' ' << VarName(m, j);
  }
}

}  // namespace

void WriteLpFormat(std::ostream& out, const MilpModel& model) {
  out << "\\ generated by innet\n";
  out << (model.sense() == Sense::kMinimize ? "Minimize\n" : "Maximize\n");
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.variable(j).objective != 0.0) obj.emplace_back(j, model.variable(j).objective);
  }
  out << " obj:";
  WriteTerms(out, model, obj);
  out << "\nSubject To\n";
  for (int i = 0; i < model.num_constraints(); ++i) {
    const Constraint& c = model.constraint(i);
    std::vector<std::pair<int, double>> terms;
    for (const Term& t : c.terms) terms.emplace_back(t.var, t.coef);
    out << " c" << i << ':';
    WriteTerms(out, model, terms);
    switch (c.relation) {
      case Relation::kLessEqual: out << " <= "; break;
      case Relation::kGreaterEqual: out << " >= "; break;
      case Relation::kEqual: out << " = "; break;
    }
    out << FormatDouble(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const Variable& v = model.variable(j);
    out << ' ';
    if (v.lo == -kInfinity && v.hi == kInfinity) {
      out << VarName(model, j) << " free\n";
      continue;
    }
    out << (v.lo == -kInfinity ? "-inf" : FormatDouble(v.lo)) << " <= " << VarName(model, j)
        << " <= " << (v.hi == kInfinity ? "+inf" : FormatDouble(v.hi)) << '\n';
  }
  std::vector<int> general;
  std::vector<int> binary;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.variable(j).type == VarType::kBinary) binary.push_back(j);
    if (model.variable(j).type == VarType::kInteger) general.push_back(j);
  }
  if (!general.empty()) {
    out << "General\n";
    for (int j : general) out << ' ' << VarName(model, j) << '\n';
  }
  if (!binary.empty()) {
    out << "Binary\n";
    for (int j : binary) out << ' ' << VarName(model, j) << '\n';
  }
  out << "End\n";
}

std::string StatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "Optimal";
    case LpStatus::kInfeasible: return "Infeasible";
    case LpStatus::kUnbounded: return "Unbounded";
  }
  return "Unknown";
}

std::string StatusName(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal: return "Optimal";
    case MilpStatus::kInfeasible: return "Infeasible";
    case MilpStatus::kUnbounded: return "Unbounded";
    case MilpStatus::kTimeBudgetExceeded: return "TimeBudgetExceeded";
  }
  return "Unknown";
}

}  // namespace innet::lp
