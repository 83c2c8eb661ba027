#include "innet/text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "innet/error.hpp"

namespace innet {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kTopologyUnconnectable: return "TopologyUnconnectable";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kTimeBudgetExceeded: return "TimeBudgetExceeded";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kStalled: return "Stalled";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kInvalidPlan: return "InvalidPlan";
    case ErrorCode::kInconsistentSolution: return "InconsistentSolution";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

std::string FormatDouble(double value) {
  if (value == 0.0) return "0";  // folds -0 as well
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    throw Error(ErrorCode::kInvalidArgument, "cannot format number");
  }
  return std::string(buf, end);
}

double ParseDouble(std::string_view token) {
  token = Trim(token);
  if (token == "inf" || token == "+inf") return HUGE_VAL;
  if (token == "-inf") return -HUGE_VAL;
  double value = 0.0;
  const char* first = token.data();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kParse,
                "expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

long long ParseInt(std::string_view token) {
  token = Trim(token);
  long long value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kParse,
                "expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view Trim(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return text.substr(b, e - b);
}

}  // namespace innet
