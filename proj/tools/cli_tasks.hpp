#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace isscert::cli {

inline constexpr const char* kToolVersion = "0.1.0";

struct Artifact {
  std::string name;  // file name inside the output directory
  std::string body;
};

struct TaskContext {
  nlohmann::json config;
  std::uint64_t seed = 1;
  std::optional<double> tol;
};

struct TaskOutcome {
  bool pass = true;
  nlohmann::json verdicts = nlohmann::json::object();
  nlohmann::json margins = nlohmann::json::object();
  nlohmann::json details = nlohmann::json::object();
  std::vector<Artifact> artifacts;
};

// Tasks accepted by each subcommand; `report` renders an existing report.
std::vector<std::string> tasks_for(const std::string& subcommand);

// Dispatches on config["task"]. Library exceptions propagate; the caller maps
// them to exit codes.
TaskOutcome run_task(const TaskContext& ctx);

}  // namespace isscert::cli
