// carnot: scenario runner for step-2 Carnot groups of class B.
//
//   carnot <area> <operation> --spec group.json [--scenario s.json] --out prefix [--seed N]
//
// Writes prefix.csv, prefix.summary.json and, for radius series, prefix.plot.dat.
// Exit status: 0 success, 2 invariant failure, 1 error.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "carnot/error.hpp"
#include "carnot/scenario.hpp"

namespace {

struct Options {
  std::string spec;
  std::string scenario;
  std::string out;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--spec", o.spec, "group spec file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--scenario", o.scenario, "scenario parameters (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output path prefix")->required();
  cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Step-2 Carnot groups of class B: intrinsic graphs and intrinsic PDE checks"};
  app.require_subcommand(1);
  Options opts;
  std::map<CLI::App*, std::string> ops;
  std::map<std::string, CLI::App*> areas;
  for (const std::string& name : carnot::operation_names()) {
    const auto space = name.find(' ');
    const std::string area = name.substr(0, space);
    const std::string op = name.substr(space + 1);
    if (!areas.count(area)) {
      areas[area] = app.add_subcommand(area, area + " operations");
      areas[area]->require_subcommand(1);
    }
    CLI::App* cmd = areas[area]->add_subcommand(op, name);
    add_common(cmd, opts);
    ops[cmd] = name;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  std::string operation;
  for (const auto& [cmd, name] : ops)
    if (cmd->parsed()) operation = name;
  carnot::Scenario sc;
  sc.operation = operation;
  sc.spec_path = opts.spec;
  sc.out_prefix = opts.out;
  sc.seed = opts.seed;
  try {
    sc.params = carnot::load_scenario_params(opts.scenario);
  } catch (const carnot::Error& e) {
    std::cerr << "error [" << carnot::to_string(e.code()) << "]: " << e.what() << "\n";
    return 1;
  }
  return carnot::run_scenario(sc, std::cerr);
}
