// bellcrypt: run the protocols, check the identity suite, evaluate cheating
// strategies, and replay transcripts.

#include <CLI11.hpp>

#include <iostream>

#include "bellcrypt/cli.hpp"
#include "commands.hpp"

using namespace bellcrypt;
using namespace bellcrypt::cli;

int main(int argc, char** argv) {
  CLI::App app{"Bell-state cryptographic protocol simulator"};
  app.require_subcommand(1);

  std::string fault;
  auto* identities = app.add_subcommand("identities", "check the algebraic identity suite");
  identities->add_option("--inject-fault", fault, "corrupt the label tables first (omega3-sign)");

  commands::ConfigFlags run_flags, attack_flags;
  auto* run = app.add_subcommand("run", "execute a protocol and write its transcript");
  run_flags.attach(run);
  auto* attack = app.add_subcommand("attack", "evaluate a cheating strategy against its catalogued bound");
  attack_flags.attach(attack);

  std::string replay_path;
  int replay_jobs = 1;
  auto* replay = app.add_subcommand("replay", "re-execute a transcript and compare");
  replay->add_option("transcript", replay_path, "transcript file")->required();
  replay->add_option("--jobs", replay_jobs, "worker threads for enumeration")->check(CLI::Range(1, 256));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*identities) return commands::identities(fault);
    if (*run) return commands::run(run_flags);
    if (*attack) return commands::attack(attack_flags);
    if (*replay) return commands::replay(replay_path, replay_jobs);
  } catch (const commands::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    // unknown strategy, invalid hooks, malformed values
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
