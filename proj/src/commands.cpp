#include "commands.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "bellcrypt/bellcrypt.hpp"
#include "bellcrypt/cli.hpp"

namespace bellcrypt::commands {

using namespace bellcrypt::cli;

void ConfigFlags::attach(CLI::App* app) {
  const std::pair<const char*, const char*> keys[] = {
      {"protocol", "bc | ct | ot | tpsc | qss | qds | mpsc"},
      {"mu", "Bell label of the A-C pair"},
      {"nu", "Bell label of the C-B pair"},
      {"secret", "0 | 1 | + | - | qubit:<theta>,<phi> | bit string (qds)"},
      {"inputs", "comma-separated two-bit inputs, e.g. 10,01,11"},
      {"k", "message length for qds"},
      {"seed", "RNG seed (required for sample mode)"},
      {"mode", "sample | sample:<n> | enumerate"},
      {"strategy", "cheating strategy from the catalog, or honest"},
      {"outcomes", "forced Bell outcomes cc:aa per iteration"},
  };
  for (const auto& [key, help] : keys) options[key] = app->add_option("--" + std::string(key), values[key], help);
  app->add_option("--config", config_path, "key=value config document; flags override it");
  app->add_option("--out", out, "output file ('none' to skip)");
  app->add_option("--jobs", jobs, "worker threads for enumeration")->check(CLI::Range(1, 256));
}

RunConfig ConfigFlags::build(const std::string& default_mode) const {
  RunConfig cfg;
  bool mode_given = false;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot read config '" + config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = RunConfig::parse(ss.str());
    std::istringstream lines(ss.str());
    for (std::string l; std::getline(lines, l);)
      if (bellcrypt::detail::trim(l).rfind("mode", 0) == 0) mode_given = true;
  }
  if (!mode_given) cfg.set("mode", default_mode);
  for (const auto& [key, opt] : options)
    if (opt->count() > 0) cfg.set(key, values.at(key));
  if (cfg.mode.kind == RunMode::Kind::Sample && !cfg.seed) throw ConfigError("--seed is required in sample mode");
  return cfg;
}

namespace {

void print_table(const RunSummary& sum) {
  constexpr std::size_t kMaxRows = 256;
  std::cout << std::left << std::setw(7) << "cell" << std::setw(14) << "path" << std::setw(9) << "weight"
            << std::setw(14) << "cc" << std::setw(14) << "aa"
            << "verdict\n";
  for (std::size_t i = 0; i < sum.rows.size() && i < kMaxRows; ++i) {
    const auto& r = sum.rows[i];
    std::cout << std::left << std::setw(7) << r.index << std::setw(14) << r.path << std::setw(9) << r.weight
              << std::setw(14) << r.cc << std::setw(14) << r.aa << r.verdict << "\n";
  }
  if (sum.rows.size() > kMaxRows) std::cout << "... " << sum.rows.size() - kMaxRows << " more rows in the transcript\n";
}

}  // namespace

int identities(const std::string& fault) {
  AlgebraTables tables = algebra();
  if (fault == "omega3-sign") {
    tables = tables.with_omega3_sign_fault();
  } else if (!fault.empty()) {
    std::cerr << "error: unknown fault '" << fault << "' (known: omega3-sign)\n";
    return kUsage;
  }
  const auto results = run_identity_suite(tables);
  for (const auto& r : results) std::cout << r.line() << "\n";
  const bool ok = all_passed(results);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (ok ? "all identities hold" : std::to_string(failed) + " identities failed") << "\n";
  return ok ? kPass : kIdentityFailure;
}

int run(const ConfigFlags& flags) {
  const RunConfig cfg = flags.build("sample");
  const std::string path = flags.out.empty() ? cfg.protocol + ".transcript" : flags.out;
  std::ofstream file;
  if (path != "none") {
    file.open(path, std::ios::binary);
    if (!file) throw IoError("cannot write '" + path + "'");
  }
  auto sink = [&](const std::string& l) {
    if (file.is_open()) file << l << '\n';
  };
  const RunSummary sum = render_runs(cfg, sink, flags.jobs);
  if (file.is_open()) {
    file.close();
    if (!file) throw IoError("failed writing '" + path + "'");
  }
  std::cout << "protocol " << cfg.protocol << "  mode " << cfg.mode.str() << "  strategy " << cfg.strategy << "\n";
  if (sum.rows.size() == 1) {
    std::cout << "verdict " << sum.rows.front().verdict << "\n";
  } else {
    print_table(sum);
  }
  std::cout << "cells " << sum.cells << "  accepted " << sum.accepted << "  rejected " << sum.cells - sum.accepted
            << "\n";
  if (file.is_open() || path != "none") std::cout << "transcript " << path << " (" << sum.events << " events)\n";
  return sum.accepted == sum.cells ? kPass : kRejected;
}

int attack(const ConfigFlags& flags) {
  RunConfig cfg = flags.build("enumerate");
  if (cfg.strategy == "honest" && flags.options.at("strategy")->count() == 0 && flags.config_path.empty())
    throw ConfigError("attack needs --strategy");
  const CheatStrategy strategy = find_strategy(cfg, cfg.strategy);
  const SecurityReport rep = run_strategy(cfg, strategy, cfg.mode, flags.jobs);
  std::cout << "strategy | protocol | exact | decimal | bound\n";
  std::cout << rep.summary_row() << "\n";
  if (!rep.view_distance && !rep.recovered_distance)
    std::cout << "detected " << rep.detected << "/" << rep.size
              << (rep.mode == "enumerate" ? " cells" : " trials") << "\n";
  std::cout << "expected " << rep.expected.str() << "\n";
  std::cout << "scope " << rep.scope << "\n";
  if (!flags.out.empty() && flags.out != "none") {
    std::ofstream file(flags.out, std::ios::binary);
    if (!file) throw IoError("cannot write '" + flags.out + "'");
    file << rep.to_text();
    if (!file) throw IoError("failed writing '" + flags.out + "'");
  }
  return rep.within_bound ? kPass : kBoundViolation;
}

int replay(const std::string& path, int jobs) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read transcript '" + path + "'");
  const ReplayResult r = replay_transcript(in, jobs);
  if (r.identical) {
    std::cout << "replay identical (" << r.lines << " lines)\n";
    return kPass;
  }
  std::cout << "replay mismatch at line " << *r.first_line;
  if (r.first_event) std::cout << " (event " << *r.first_event << ")";
  std::cout << "\n  recorded: " << r.recorded << "\n  expected: " << r.expected << "\n";
  return kReplayMismatch;
}

}  // namespace bellcrypt::commands
