#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rupture_echo: wave-equation source trains - simulate, identify, reconstruct"};
  app.require_subcommand(1);

  recho::cli::CommonArgs args;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "run configuration (JSON)")->required();
    cmd->add_option("--out", args.out_dir, "output directory")->default_val("out");
    cmd->add_option("--seed", args.seed, "seed for randomized sampling")->default_val(0);
    cmd->add_flag("--force", args.force, "bypass condition gates");
  };

  CLI::App* sim = app.add_subcommand("simulate", "forward-solve and record boundary data");
  add_common(sim);

  CLI::App* ident = app.add_subcommand("identify", "recover source times and supports");
  add_common(ident);
  ident->add_option("--records", args.records_dir, "directory with simulate outputs");

  CLI::App* rec = app.add_subcommand("reconstruct", "recover source profiles by peeling");
  add_common(rec);
  rec->add_option("--records", args.records_dir, "directory with simulate outputs");
  rec->add_option("--events", args.events_path, "events JSON from identify");
  rec->add_flag("--truth-centers", args.truth_centers,
                "use configured source times/centers instead of events");

  CLI::App* chk = app.add_subcommand("check", "report hypothesis margins");
  add_common(chk);

  CLI11_PARSE(app, argc, argv);

  try {
    recho::cli::CommandOutcome outcome;
    if (sim->parsed()) outcome = recho::cli::cmd_simulate(args);
    else if (ident->parsed()) outcome = recho::cli::cmd_identify(args);
    else if (rec->parsed()) outcome = recho::cli::cmd_reconstruct(args);
    else outcome = recho::cli::cmd_check(args);
    return recho::cli::report(outcome);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
