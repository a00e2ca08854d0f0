#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rlab/errors.hpp"
#include "rlab/scenario.hpp"

namespace {

std::filesystem::path scenarios_dir() {
  if (const char* env = std::getenv("RESOLVENT_LAB_SCENARIOS")) return env;
  std::error_code ec;
  auto exe = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    auto beside = exe.parent_path() / "scenarios";
    if (std::filesystem::is_directory(beside)) return beside;
  }
  return "scenarios";
}

int run_command(const std::string& file, int parallel,
                const std::string& out_dir) {
  rlab::RunOptions opts;
  opts.parallel_sweeps = parallel;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (const char* env = std::getenv("RESOLVENT_LAB_SEED"))
    opts.seed_override = std::strtoull(env, nullptr, 10);

  rlab::ScenarioReport report = rlab::run_scenario(file, opts);
  for (const auto& t : report.tasks) {
    std::cout << (t.passed ? "[pass] " : "[FAIL] ") << t.label << " ("
              << t.task << ")\n";
    for (const auto& c : t.checks) std::cout << "  " << c << "\n";
  }
  std::cout << "artifacts: " << report.out_dir.string() << "\n";
  if (!report.all_passed())
    throw rlab::NumericalAssertion(report.first_failure());
  return 0;
}

int list_command() {
  const auto dir = scenarios_dir();
  const auto names = rlab::bundled_scenarios(dir);
  if (names.empty()) {
    std::cout << "no bundled scenarios under " << dir.string()
              << " (set RESOLVENT_LAB_SCENARIOS)\n";
    return 0;
  }
  for (const auto& n : names) std::cout << n << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "resolvent-lab: a numerical laboratory for projected resolvents "
      "(z0 I - Gamma1 B Gamma1)^{-1} and their certificates"};
  app.require_subcommand(1);

  std::string file, task, out_dir;
  int parallel = 1;

  auto* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("file", file, "scenario JSON path")->required();
  run->add_option("--parallel-sweeps", parallel,
                  "threads for independent sweep points");
  run->add_option("--out", out_dir, "output directory override");

  app.add_subcommand("list-scenarios", "list the bundled scenarios");

  auto* describe = app.add_subcommand("describe", "print a task's schema");
  describe->add_option("task", task, "task name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(file, parallel, out_dir);
    if (describe->parsed()) {
      std::cout << rlab::describe_task(task) << "\n";
      return 0;
    }
    return list_command();
  } catch (const rlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rlab::SingularOperatorError& e) {
    std::cerr << "singular operator: " << e.what() << "\n";
    return 4;
  } catch (const rlab::DimensionCapError& e) {
    std::cerr << "dimension cap: " << e.what() << "\n";
    return 2;
  } catch (const rlab::NumericalAssertion& e) {
    std::cerr << "numerical assertion failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
