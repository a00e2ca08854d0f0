#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rlab {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides the scenario
  int parallel_sweeps = 1;  // threads for independent sweep points
  std::optional<std::uint64_t> seed_override;    // RESOLVENT_LAB_SEED
};

struct TaskOutcome {
  std::string label;
  std::string task;
  bool passed = true;
  std::vector<std::string> checks;     // "ok: ..." / "FAIL: ..." lines
  std::vector<std::string> artifacts;  // files written under the output dir
  double seconds = 0.0;
};

struct ScenarioReport {
  std::string name;
  std::filesystem::path out_dir;
  std::vector<TaskOutcome> tasks;

  bool all_passed() const {
    for (const auto& t : tasks)
      if (!t.passed) return false;
    return true;
  }
  /// First failing check line, for the exit message.
  std::string first_failure() const;
};

/// Loads a scenario config, runs its tasks in order, writes per-task
/// artifacts plus manifest.json into the output directory.  Throws
/// ConfigError / NumericalAssertion / SingularOperatorError; tolerance
/// assertions inside tasks do not throw, they mark the outcome failed.
ScenarioReport run_scenario(const std::filesystem::path& scenario_file,
                            const RunOptions& opts = {});

std::vector<std::string> known_tasks();
/// Parameter schema for one task; throws ConfigError with the task list when
/// the name is unknown.
std::string describe_task(const std::string& task);
/// Sorted *.json names under the directory.
std::vector<std::string> bundled_scenarios(const std::filesystem::path& dir);

}  // namespace rlab
