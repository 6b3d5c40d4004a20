#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "biofilm/commands.hpp"
#include "biofilm/config.hpp"
#include "biofilm/error.hpp"

int main(int argc, char** argv) {
  using namespace biofilm;
  CLI::App app{"biofilm-fbp: free boundary biofilm models"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::size_t jobs = 1;
  bool print_defaults = false;
  for (const char* name : {"simulate", "steady", "stability", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "config file");
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);
    sub->add_flag("--print-defaults", print_defaults, "print the default config and exit");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  if (print_defaults) {
    std::cout << emit_config(RunConfig{});
    return kExitOk;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  if (config_path.empty()) {
    std::cerr << "error: --config is required\n";
    return kExitConfig;
  }
  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  const std::string out = out_dir.empty() ? cfg.out_dir : out_dir;
  const CommandResult r = run_command(command, cfg, out, jobs);
  if (!r.message.empty()) std::cerr << r.message << (r.message.back() == '\n' ? "" : "\n");
  return r.exit_code;
}
