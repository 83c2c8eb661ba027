#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace innet {

enum class ErrorCode {
  kInvalidArgument,
  kTopologyUnconnectable,
  kDisconnectedGraph,
  kTimeBudgetExceeded,
  kInfeasible,
  kStalled,
  kInstanceTooLarge,
  kInvalidPlan,
  kInconsistentSolution,
  kParse,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (the experiment harness in particular) can turn it into a row
// status instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace innet
