#pragma once

// Subcommand implementations behind the bellcrypt tool.

#include <CLI11.hpp>

#include <map>
#include <stdexcept>
#include <string>

#include "bellcrypt/config.hpp"

namespace bellcrypt::commands {

/// File that could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flags shared by `run` and `attack`; each maps to a RunConfig key.
struct ConfigFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  std::string out;
  int jobs = 1;

  void attach(CLI::App* app);
  /// The config file (if any), then `default_mode` unless the file sets one, then flags.
  RunConfig build(const std::string& default_mode) const;
};

int identities(const std::string& fault);
int run(const ConfigFlags& flags);
int attack(const ConfigFlags& flags);
int replay(const std::string& path, int jobs);

}  // namespace bellcrypt::commands
