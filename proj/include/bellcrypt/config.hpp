#pragma once

// Run configuration: a plain key=value document that fully determines a run.
//
//   protocol=bc            bc | ct | ot | tpsc | qss | qds | mpsc
//   mu=0 nu=2              Bell labels of the two pre-shared pairs
//   secret=1               0 | 1 | + | - | qubit:<theta>,<phi> | bit string (qds)
//   inputs=10,01,11        two-bit inputs (tpsc: a,b; mpsc: a,b,c; ot: Bob's cc)
//   k=4                    message length (qds)
//   seed=7
//   outcomes=sample        or forced Bell outcomes cc:aa per iteration, e.g. 00:01,11:10
//   strategy=honest
//   mode=sample            sample | sample:<n> | enumerate

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bellcrypt/bell_algebra.hpp"
#include "bellcrypt/randomness.hpp"
#include "bellcrypt/state.hpp"

namespace bellcrypt {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& protocol_names() {
  static const std::vector<std::string> names{"bc", "ct", "ot", "tpsc", "qss", "qds", "mpsc"};
  return names;
}

struct ForcedOutcome {
  BellLabel cc;
  BellLabel aa;
  bool operator==(const ForcedOutcome&) const = default;
};

struct RunMode {
  enum class Kind { Sample, Enumerate };
  Kind kind = Kind::Sample;
  std::uint64_t trials = 1;

  std::string str() const {
    if (kind == Kind::Enumerate) return "enumerate";
    return trials == 1 ? "sample" : "sample:" + std::to_string(trials);
  }
  bool operator==(const RunMode&) const = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

inline double parse_double(std::string_view key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + v + "'");
  }
}

inline BellLabel parse_label(std::string_view key, std::string_view v) {
  const auto n = parse_u64(key, v);
  if (n > 3) throw ConfigError(std::string(key) + ": Bell label must be 0..3");
  return BellLabel{static_cast<int>(n)};
}

inline TwoBits parse_two_bits(std::string_view key, std::string_view v) {
  try {
    return TwoBits::parse(v);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

}  // namespace detail

struct RunConfig {
  std::string protocol = "bc";
  BellLabel mu{0};
  BellLabel nu{0};
  std::string secret = "0";
  std::vector<TwoBits> inputs;
  int k = 1;
  std::optional<std::uint64_t> seed;
  std::vector<ForcedOutcome> outcomes;  // empty means sample/enumerate freely
  std::string strategy = "honest";
  RunMode mode;

  bool operator==(const RunConfig&) const = default;

  std::uint64_t seed_or_zero() const { return seed.value_or(0); }

  /// Canonical key=value serialization, one key per line, fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const {
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("protocol", protocol);
    e.emplace_back("mu", std::to_string(mu.index()));
    e.emplace_back("nu", std::to_string(nu.index()));
    e.emplace_back("secret", secret);
    std::string in;
    for (std::size_t i = 0; i < inputs.size(); ++i) in += (i ? "," : "") + inputs[i].str();
    e.emplace_back("inputs", in.empty() ? "-" : in);
    e.emplace_back("k", std::to_string(k));
    e.emplace_back("seed", seed ? std::to_string(*seed) : "-");
    std::string oc;
    for (std::size_t i = 0; i < outcomes.size(); ++i)
      oc += (i ? "," : "") + outcomes[i].cc.bits().str() + ":" + outcomes[i].aa.bits().str();
    e.emplace_back("outcomes", oc.empty() ? "sample" : oc);
    e.emplace_back("strategy", strategy);
    e.emplace_back("mode", mode.str());
    return e;
  }

  std::string str() const {
    std::string s;
    for (const auto& [k_, v] : entries()) s += k_ + "=" + v + "\n";
    return s;
  }

  std::uint64_t run_id() const { return fnv1a(str()); }

  /// Forced Bell labels in the order the protocol consumes them: cc then aa per iteration.
  std::vector<BellLabel> forced_bsm() const {
    std::vector<BellLabel> f;
    for (const auto& o : outcomes) {
      f.push_back(o.cc);
      f.push_back(o.aa);
    }
    return f;
  }

  void set(std::string_view key, const std::string& value) {
    if (key == "protocol") {
      bool known = false;
      for (const auto& n : protocol_names()) known |= (n == value);
      if (!known) throw ConfigError("unknown protocol '" + value + "'");
      protocol = value;
    } else if (key == "mu") {
      mu = detail::parse_label(key, value);
    } else if (key == "nu") {
      nu = detail::parse_label(key, value);
    } else if (key == "secret") {
      if (value.empty()) throw ConfigError("secret: empty value");
      secret = value;
    } else if (key == "inputs") {
      inputs.clear();
      if (value != "-" && !value.empty())
        for (const auto& part : detail::split(value, ',')) inputs.push_back(detail::parse_two_bits(key, part));
    } else if (key == "k") {
      const auto n = detail::parse_u64(key, value);
      if (n < 1 || n > 16) throw ConfigError("k: must be in 1..16");
      k = static_cast<int>(n);
    } else if (key == "seed") {
      if (value == "-")
        seed.reset();
      else
        seed = detail::parse_u64(key, value);
    } else if (key == "outcomes") {
      outcomes.clear();
      if (value != "sample") {
        for (const auto& part : detail::split(value, ',')) {
          const auto colon = part.find(':');
          if (colon == std::string::npos) throw ConfigError("outcomes: expected cc:aa, got '" + part + "'");
          outcomes.push_back({bell_from_bits(detail::parse_two_bits(key, part.substr(0, colon))),
                              bell_from_bits(detail::parse_two_bits(key, part.substr(colon + 1)))});
        }
      }
    } else if (key == "strategy") {
      if (value.empty()) throw ConfigError("strategy: empty value");
      strategy = value;
    } else if (key == "mode") {
      if (value == "enumerate") {
        mode = {RunMode::Kind::Enumerate, 1};
      } else if (value == "sample") {
        mode = {RunMode::Kind::Sample, 1};
      } else if (value.rfind("sample:", 0) == 0) {
        const auto n = detail::parse_u64(key, std::string_view(value).substr(7));
        if (n == 0) throw ConfigError("mode: sample count must be positive");
        mode = {RunMode::Kind::Sample, n};
      } else {
        throw ConfigError("mode: expected sample, sample:<n> or enumerate, got '" + value + "'");
      }
    } else {
      throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
  }

  static RunConfig parse(std::string_view text) {
    RunConfig c;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = detail::trim(line);
      if (t.empty() || t[0] == '#') continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
      c.set(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
    return c;
  }
};

/// A parsed secret: a computational-basis bit or a general qubit.
struct Secret {
  StateVector state;
  std::optional<bool> bit;
};

inline Secret parse_secret(const std::string& s) {
  if (s == "0" || s == "1") return {StateVector::computational(s == "1"), s == "1"};
  const double r = 1.0 / std::sqrt(2.0);
  if (s == "+") return {StateVector::qubit(r, r), std::nullopt};
  if (s == "-") return {StateVector::qubit(r, -r), std::nullopt};
  if (s.rfind("qubit:", 0) == 0) {
    const auto parts = detail::split(std::string_view(s).substr(6), ',');
    if (parts.size() != 2) throw ConfigError("secret: expected qubit:<theta>,<phi>");
    return {StateVector::bloch(detail::parse_double("secret", parts[0]), detail::parse_double("secret", parts[1])),
            std::nullopt};
  }
  throw ConfigError("secret: expected 0, 1, +, - or qubit:<theta>,<phi>, got '" + s + "'");
}

inline std::vector<bool> parse_message(const std::string& s) {
  if (s.empty() || s.size() > 16) throw ConfigError("secret: message must be 1..16 bits");
  std::vector<bool> m;
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw ConfigError("secret: message must be a bit string, got '" + s + "'");
    m.push_back(ch == '1');
  }
  return m;
}

}  // namespace bellcrypt
