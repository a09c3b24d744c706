#pragma once

#include <stdexcept>
#include <string>

namespace swflow {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NotHurwitz : Error {
  explicit NotHurwitz(const std::string& w) : Error(w) {}
};
struct SingularSystem : Error {
  explicit SingularSystem(const std::string& w) : Error(w) {}
};
struct SingularA : Error {
  explicit SingularA(const std::string& w) : Error(w) {}
};
struct ConvergenceFailure : Error {
  explicit ConvergenceFailure(const std::string& w) : Error(w) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& w) : Error(w) {}
};
struct NotSolvable : Error {
  explicit NotSolvable(const std::string& w) : Error(w) {}
};
struct InvalidRate : Error {
  explicit InvalidRate(const std::string& w) : Error(w) {}
};
struct OutOfHorizon : Error {
  explicit OutOfHorizon(const std::string& w) : Error(w) {}
};
struct TimerOutOfRange : Error {
  explicit TimerOutOfRange(const std::string& w) : Error(w) {}
};
struct JumpNotEnabled : Error {
  explicit JumpNotEnabled(const std::string& w) : Error(w) {}
};
struct StiffnessBudgetExceeded : Error {
  explicit StiffnessBudgetExceeded(const std::string& w) : Error(w) {}
};
struct EmptyVarrhoWindow : Error {
  explicit EmptyVarrhoWindow(const std::string& w) : Error(w) {}
};
struct RestartConditionViolated : Error {
  explicit RestartConditionViolated(const std::string& w) : Error(w) {}
};
struct UnknownExperiment : Error {
  explicit UnknownExperiment(const std::string& w) : Error(w) {}
};
struct ParseError : Error {
  int line = -1;
  int column = -1;
  ParseError(const std::string& w, int line_, int column_)
      : Error(w), line(line_), column(column_) {}
  explicit ParseError(const std::string& w) : Error(w) {}
};

}  // namespace swflow
