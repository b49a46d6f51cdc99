// procview: check, simulate, analyse and export .pspec process specifications.

#include <iostream>

#include <CLI11.hpp>

#include "procview/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = procview::cli;
  CLI::App app{"Process-view specifications: check, simulate, analyse and export"};
  app.name("procview");
  app.require_subcommand(1);

  std::string check_file;
  auto* check = app.add_subcommand("check", "Parse and validate a .pspec file");
  check->add_option("file", check_file, "Specification file")->required()->check(CLI::ExistingFile);

  cli::SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run a composition against an environment");
  simulate->add_option("file", sim.file, "Specification file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--compose", sim.compose, "Composition name")->required();
  simulate->add_option("--env", sim.env, "Environment name")->required();
  simulate->add_option("--horizon", sim.horizon, "Number of ticks")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--trace-out", sim.trace_out, "Write the trace here instead of stdout");
  simulate->add_option("--format", sim.format, "Trace format")->check(CLI::IsMember({"text", "structured"}));

  cli::WcetOptions wc;
  auto* wcet = app.add_subcommand("wcet", "Compositional worst-case execution time");
  wcet->add_option("file", wc.file, "Specification file")->required()->check(CLI::ExistingFile);
  wcet->add_option("--compose", wc.compose, "Composition name")->required();
  wcet->add_option("--bounds", wc.bounds, "Elementary bounds")->check(CLI::IsMember({"declared", "measured"}));
  wcet->add_option("--connector-cost", wc.connector_cost, "Connector latency model")
      ->check(CLI::IsMember({"zero", "measured"}));
  wcet->add_option("--horizon", wc.horizon, "Horizon for measured bounds")->check(CLI::PositiveNumber);

  cli::ActivityOptions act;
  auto* activity = app.add_subcommand("activity", "Evaluate an activity predicate on a simulated trace");
  activity->add_option("file", act.file, "Specification file")->required()->check(CLI::ExistingFile);
  activity->add_option("--compose", act.compose, "Composition name")->required();
  activity->add_option("--env", act.env, "Environment name")->required();
  activity->add_option("--query", act.query, "Query, e.g. active(P) or on(P, y)@3")->required();
  activity->add_option("--horizon", act.horizon, "Number of ticks")->check(CLI::PositiveNumber);

  cli::ExportOptions ex;
  auto* exp = app.add_subcommand("export", "Export a composition as DOT or PNML");
  exp->add_option("file", ex.file, "Specification file")->required()->check(CLI::ExistingFile);
  exp->add_option("--compose", ex.compose, "Composition name")->required();
  exp->add_option("--to", ex.to, "Output format")->required()->check(CLI::IsMember({"dot", "pnml"}));
  exp->add_option("--out", ex.out_path, "Output path, `-` for stdout")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return cli::kUsage;
  }

  if (*check) return cli::check(check_file, std::cout, std::cerr);
  if (*simulate) return cli::simulate(sim, std::cout, std::cerr);
  if (*wcet) return cli::wcet(wc, std::cout, std::cerr);
  if (*activity) return cli::activity(act, std::cout, std::cerr);
  return cli::export_cmd(ex, std::cout, std::cerr);
}
