#include "pipeline.hpp"
#include "registry.hpp"
#include "report.hpp"
#include "scenario.hpp"

#include <birkhoff/error.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace bt = birkhoff::tools;

namespace {

int schema_failure(const bt::SchemaError& e) {
  std::cerr << e.to_json().dump() << "\n";
  return 2;
}

// Parse plus semantic checks; both report as schema errors.
bt::Scenario checked_scenario(const std::string& path) {
  bt::Scenario s = bt::load_scenario(path);
  if (auto problems = bt::semantic_problems(s); !problems.empty()) throw bt::SchemaError(problems);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff attractors of dissipative annulus maps"};
  app.require_subcommand(1);

  std::string file;
  std::optional<unsigned> threads;
  std::string output;

  auto* run = app.add_subcommand("run", "Run a scenario and write its output directory");
  run->add_option("scenario", file, "Scenario JSON file")->required();
  run->add_option("--threads", threads, "Worker threads (overrides the scenario)");
  run->add_option("--output", output, "Output directory (default: <root>/<scenario output>)");

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", file, "Scenario JSON file")->required();

  auto* describe = app.add_subcommand("describe-scenario", "Print the normalized scenario");
  describe->add_option("scenario", file, "Scenario JSON file")->required();

  auto* list = app.add_subcommand("list-maps", "List the available maps and their parameters");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& m : bt::map_catalog()) {
        std::cout << m.name << "  " << m.summary << "\n";
        for (const auto& [k, v] : m.defaults)
          std::cout << "    " << k << " = " << bt::format_number(v) << "\n";
      }
      return 0;
    }
    const bt::Scenario s = checked_scenario(file);
    if (validate->parsed()) {
      std::cout << "ok " << s.name << "\n";
      return 0;
    }
    if (describe->parsed()) {
      std::cout << bt::to_json(s).dump(2) << "\n";
      return 0;
    }
    const std::filesystem::path dir =
        output.empty() ? bt::output_root() / (s.output.empty() ? s.name : s.output)
                       : std::filesystem::path(output);
    const bt::RunResult r = bt::run_scenario(s, dir, threads);
    for (const auto& c : r.checks)
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << bt::format_number(c.value)
                << " tol=" << bt::format_number(c.tolerance)
                << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
    std::cout << "output " << r.directory.string() << "\n";
    return r.pass() ? 0 : 1;
  } catch (const bt::SchemaError& e) {
    return schema_failure(e);
  } catch (const birkhoff::Error& e) {
    if (e.kind() == birkhoff::ErrorKind::Schema) return schema_failure(bt::SchemaError(std::vector<bt::Diagnostic>{{"", e.what()}}));
    std::cerr << "error: " << birkhoff::to_string(e.kind()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
