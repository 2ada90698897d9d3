#pragma once

#include <stdexcept>
#include <string>

namespace chillops {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes, mirrored by the CLI error categories.
enum class ExitCode : int {
  Ok = 0,
  Config = 2,
  Input = 3,
  Infeasible = 4,
  Training = 5,
};

/// Base error carrying the exit-code category. The CLI prints these as
/// `error[<category>]: <message>` on a single line.
class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ExitCode code() const { return code_; }
  const char* category() const {
    switch (code_) {
      case ExitCode::Config: return "config";
      case ExitCode::Input: return "input";
      case ExitCode::Infeasible: return "infeasible";
      case ExitCode::Training: return "training";
      default: return "ok";
    }
  }

 private:
  ExitCode code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(ExitCode::Config, m) {}
};
struct InputError : Error {
  explicit InputError(const std::string& m) : Error(ExitCode::Input, m) {}
};
struct InfeasibleError : Error {
  explicit InfeasibleError(const std::string& m) : Error(ExitCode::Infeasible, m) {}
};
struct TrainingError : Error {
  explicit TrainingError(const std::string& m) : Error(ExitCode::Training, m) {}
};

}  // namespace chillops
