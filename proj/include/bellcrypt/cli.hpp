#pragma once

// Command-line plumbing shared by tools/bellcrypt and the tests: exit codes,
// transcript rendering, and replay.

#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bellcrypt/adversary.hpp"
#include "bellcrypt/config.hpp"
#include "bellcrypt/protocols.hpp"

namespace bellcrypt::cli {

/// Process exit codes. Stable; documented in the README.
enum ExitCode : int {
  kPass = 0,
  kUsage = 2,            // bad flags, config errors, unknown strategy
  kIo = 3,               // unreadable or unwritable file
  kRejected = 4,         // a protocol run rejected
  kIdentityFailure = 5,  // identity suite failure
  kBoundViolation = 6,   // attack report outside the catalogued bound
  kReplayMismatch = 7,   // replay diverged from the recorded transcript
};

inline constexpr std::string_view kTranscriptHeader = "PWV1 transcript";

inline HookSet hooks_for(const RunConfig& cfg) {
  if (cfg.strategy == "honest") return {};
  return find_strategy(cfg, cfg.strategy).hooks;
}

/// One row of the human-readable run table.
struct CellRow {
  std::size_t index = 0;
  std::string path;
  std::string weight;
  std::string cc;
  std::string aa;
  std::string verdict;
};

struct RunSummary {
  std::size_t cells = 0;
  std::size_t accepted = 0;
  std::size_t events = 0;
  std::vector<CellRow> rows;
};

namespace detail {

inline std::string join_path(const std::vector<int>& path) {
  if (path.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) s += (i ? "." : "") + std::to_string(path[i]);
  return s;
}

inline CellRow make_row(std::size_t index, std::string path, std::string weight, const RunResult& r) {
  CellRow row{index, std::move(path), std::move(weight), {}, {}, r.verdict.str()};
  for (std::size_t i = 0; i < r.contexts.size(); ++i) {
    row.cc += (i ? "," : "") + r.contexts[i].cc.str();
    row.aa += (i ? "," : "") + r.contexts[i].aa.str();
  }
  if (row.cc.empty()) row.cc = row.aa = "-";
  return row;
}

template <class Sink>
void emit_run(const CellRow& row, const RunResult& r, Sink& line, RunSummary& sum) {
  line("cell " + std::to_string(row.index) + " path " + row.path + " weight " + row.weight);
  for (const auto& l : r.transcript.lines()) line(l);
  line("verdict " + r.verdict.str());
  for (const auto& [who, v] : r.recipients) line("recipient " + who + " " + v.str());
  ++sum.cells;
  sum.events += r.transcript.events.size();
  if (r.verdict.accepted()) ++sum.accepted;
}

}  // namespace detail

/// Executes `cfg` and hands every line of its transcript file to `line`.
/// Enumerate mode writes one block per execution path; sample:<n> one per trial.
template <class Sink>
RunSummary render_runs(const RunConfig& cfg, Sink&& line, int jobs = 1, bool keep_rows = true) {
  const HookSet hooks = hooks_for(cfg);
  RunSummary sum;
  line(std::string(kTranscriptHeader));
  for (const auto& [k, v] : cfg.entries()) line("config " + k + "=" + v);
  if (cfg.mode.kind == RunMode::Kind::Enumerate) {
    enumerate_runs(
        cfg,
        [&](const CellInfo& cell, RunResult&& r) {
          std::ostringstream w;
          if (cell.exact) {
            w << cell.exact->str();
          } else {
            w.precision(17);
            w << cell.weight;
          }
          auto row = detail::make_row(cell.index, detail::join_path(cell.path), w.str(), r);
          detail::emit_run(row, r, line, sum);
          if (keep_rows) sum.rows.push_back(std::move(row));
        },
        hooks, jobs);
  } else {
    if (!cfg.seed) throw ConfigError("--seed is required in sample mode");
    for (std::uint64_t t = 0; t < cfg.mode.trials; ++t) {
      const RunResult r = run_sampled(cfg, hooks, t);
      auto row = detail::make_row(t, "trial", "1/" + std::to_string(cfg.mode.trials), r);
      detail::emit_run(row, r, line, sum);
      if (keep_rows) sum.rows.push_back(std::move(row));
    }
  }
  return sum;
}

/// Reads the config block at the head of a transcript.
inline RunConfig read_transcript_config(std::istream& in, std::vector<std::string>& consumed) {
  std::string header;
  if (!std::getline(in, header) || header != kTranscriptHeader)
    throw ConfigError("not a transcript: missing '" + std::string(kTranscriptHeader) + "' header");
  consumed.push_back(header);
  RunConfig cfg;
  while (in.peek() == 'c') {
    std::string l;
    std::getline(in, l);
    if (l.rfind("config ", 0) != 0) {
      consumed.push_back(l);
      break;
    }
    consumed.push_back(l);
    const auto body = l.substr(7);
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("bad config line '" + l + "'");
    cfg.set(body.substr(0, eq), body.substr(eq + 1));
  }
  return cfg;
}

struct ReplayResult {
  bool identical = true;
  std::size_t lines = 0;
  std::optional<std::size_t> first_line;   // 0-based line index of the first difference
  std::optional<std::size_t> first_event;  // 0-based event index, when the difference is in an event line
  std::string expected;                    // regenerated line
  std::string recorded;                    // line in the file
};

/// Re-executes the recorded config and compares every line.
inline ReplayResult replay_transcript(std::istream& in, int jobs = 1) {
  std::vector<std::string> head;
  const RunConfig cfg = read_transcript_config(in, head);
  std::vector<std::string> recorded = std::move(head);
  for (std::string l; std::getline(in, l);) recorded.push_back(std::move(l));

  ReplayResult res;
  std::size_t i = 0, events = 0;
  auto compare = [&](const std::string& expected) {
    const bool is_event = expected.rfind("event ", 0) == 0;
    if (res.identical && (i >= recorded.size() || recorded[i] != expected)) {
      res.identical = false;
      res.first_line = i;
      if (is_event || (i < recorded.size() && recorded[i].rfind("event ", 0) == 0)) res.first_event = events;
      res.expected = expected;
      res.recorded = i < recorded.size() ? recorded[i] : "<end of file>";
    }
    if (is_event) ++events;
    ++i;
  };
  render_runs(cfg, compare, jobs, false);
  if (res.identical && i != recorded.size()) {
    res.identical = false;
    res.first_line = i;
    res.expected = "<end of transcript>";
    res.recorded = recorded[i];
  }
  res.lines = recorded.size();
  return res;
}

}  // namespace bellcrypt::cli
