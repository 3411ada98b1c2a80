#pragma once

// Cheating-strategy catalog and the security harness: exact detection probabilities
// by enumeration (or Monte Carlo estimates), observer view distances, and the
// one-time-pad certificate.

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bellcrypt/config.hpp"
#include "bellcrypt/hooks.hpp"
#include "bellcrypt/protocols.hpp"
#include "bellcrypt/rational.hpp"
#include "bellcrypt/state.hpp"

namespace bellcrypt {

inline constexpr std::string_view kScopeNote =
    "certifies only the enumerated deviation family (Pauli substitution, qubit substitution, bit flips, "
    "skipped measurement, withheld messages); entangled-ancilla and quantum-memory attacks are not modeled";

class UnknownStrategy : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two configurations that differ only in one secret field.
///   field = "secret"          value0/value1 replace the secret
///   field = "input:<i>"       value0/value1 replace two-bit input i
///   field = "input:<i>:hi"    value0/value1 ("0"/"1") replace the first bit of input i
struct SecretVariation {
  std::string field = "secret";
  std::string value0 = "0";
  std::string value1 = "1";
};

struct Expectation {
  enum class Kind { Detection, ViewDistanceZero, RecoveredMixed };
  Kind kind = Kind::Detection;
  Rational detection;       // Detection: exact expected probability
  std::string point;        // ViewDistanceZero: snapshot name; RecoveredMixed: state name
  SecretVariation variation;

  std::string str() const {
    switch (kind) {
      case Kind::Detection: return "detection = " + detection.str();
      case Kind::ViewDistanceZero: return "view distance at " + point + " over " + variation.field + " = 0";
      case Kind::RecoveredMixed: return "averaged " + point + " = I/2";
    }
    return {};
  }
};

struct CheatStrategy {
  std::string name;
  std::string protocol;
  std::string target;  // deviating controller, or the passive observer
  HookSet hooks;
  Expectation expected;
  std::string description;
};

namespace detail {

inline Expectation detection(std::uint64_t num, std::uint64_t den) {
  Expectation e;
  e.kind = Expectation::Kind::Detection;
  e.detection = Rational(num, den);
  return e;
}

inline Expectation view_zero(std::string point, SecretVariation v) {
  Expectation e;
  e.kind = Expectation::Kind::ViewDistanceZero;
  e.point = std::move(point);
  e.variation = std::move(v);
  return e;
}

inline Expectation mixed(std::string state) {
  Expectation e;
  e.kind = Expectation::Kind::RecoveredMixed;
  e.point = std::move(state);
  return e;
}

inline Deviation flips(std::vector<std::uint64_t> masks) { return {DeviationKind::FlipBits, std::move(masks)}; }

}  // namespace detail

/// The strategies available for a configuration's protocol. Bounds are the security
/// claims being gated; some are known not to hold for the concrete verifier.
inline std::vector<CheatStrategy> strategy_catalog(const RunConfig& cfg) {
  using detail::detection;
  using detail::flips;
  using detail::view_zero;
  using K = DeviationKind;
  const std::string& p = cfg.protocol;
  std::vector<CheatStrategy> out;
  out.push_back({"honest", p, "none", {}, detection(0, 1), "no deviation"});
  auto add = [&](std::string name, std::string target, HookSet hooks, Expectation e, std::string desc) {
    out.push_back({std::move(name), p, std::move(target), std::move(hooks), std::move(e), std::move(desc)});
  };
  if (p == "bc") {
    add("reveal-flip", "alice", {{"alice.reveal.secret", flips({1})}}, detection(1, 1),
        "Alice reveals the opposite bit");
    add("aa-substitute", "alice", {{"alice.reveal.aa", flips({1, 2, 3})}}, detection(1, 1),
        "Alice reveals a different aa' (each nonzero XOR mask)");
    add("flip-and-shift", "alice", {{"alice.reveal.secret", flips({1})}, {"alice.reveal.aa", flips({1})}},
        detection(1, 1), "Alice reveals the opposite bit together with a' flipped");
    add("withhold-reveal", "alice", {{"alice.reveal", {K::Withhold}}}, detection(1, 1), "Alice never reveals");
    add("bob-pre-reveal", "bob", {}, view_zero("bob.pre_reveal", {}), "Bob's view before the reveal");
  } else if (p == "ct" || p == "ot") {
    add(p + "-fixed-qubit", "bob", {{"bob.send", {K::SubstituteQubit, {0, 1, 2, 3, 4, 5, 6, 7}}}}, detection(1, 2),
        "Bob sends sigma_L|b> instead of his transformed qubit");
    add("bob-substitute", "bob", {{"bob.apply", {K::SubstitutePauli, {0, 1, 2, 3}}}}, detection(1, 2),
        "Bob applies a fixed Pauli instead of sigma_c");
    if (p == "ot") {
      add("bob-passive", "bob", {}, view_zero("bob.final", {}), "Bob's view of Alice's bit");
      add("alice-passive", "alice", {}, view_zero("alice.final", {"input:0", "01", "11"}),
          "Alice's view of Bob's message c for signature c'=1");
    }
  } else if (p == "tpsc") {
    add("announce-flip", "alice", {{"alice.announce.f", flips({1})}}, detection(1, 1),
        "Alice announces the complement of f");
    add("alice-on-b1", "alice", {}, view_zero("alice.final", {"input:1:hi", "0", "1"}),
        "Alice's view of Bob's message bit");
    add("bob-on-a1", "bob", {}, view_zero("bob.final", {"input:0:hi", "0", "1"}), "Bob's view of Alice's message bit");
  } else if (p == "qss") {
    add("charlie-skip-bsm", "charlie", {{"charlie.bsm", {K::SkipMeasurement}}}, detail::mixed("charlie.recovered"),
        "Charlie keeps his halves to intercept the teleported state");
    add("charlie-withhold", "charlie", {{"charlie.share", {K::Withhold}}}, detection(1, 1),
        "Charlie withholds cc'");
    add("bob-alone", "bob", {}, view_zero("bob.single_share", {}), "Bob with his qubit and aa' but no cc'");
    add("charlie-alone", "charlie", {}, view_zero("charlie.final", {}), "Charlie with cc' only");
  } else if (p == "qds") {
    std::vector<std::uint64_t> masks;
    for (int i = 0; i < cfg.k; ++i) masks.push_back(std::uint64_t{1} << i);
    add("bob-forge", "bob", {{"bob.forward.message", flips(masks)}}, detection(1, 1),
        "Bob flips one message bit before forwarding");
    add("alice-repudiate", "alice", {{"alice.send.message", flips(masks)}}, detection(1, 1),
        "Alice sends a message differing in one bit from the signed one");
  } else if (p == "mpsc") {
    for (const char* who : {"alice", "bob", "charlie"})
      add(std::string(who) + "-signature-flip", who, {{std::string(who) + ".signature", flips({1})}},
          detection(1, 1), "announced signature bit flipped");
    add("announce-flip", "charlie", {{"charlie.announce.f", flips({1})}}, detection(1, 1),
        "Charlie announces the complement of f");
    add("alice-on-bob", "alice", {}, view_zero("alice.final", {"input:1:hi", "0", "1"}), "Alice's view of b1");
    add("bob-on-charlie", "bob", {}, view_zero("bob.final", {"input:2:hi", "0", "1"}), "Bob's view of c1");
    add("charlie-on-alice", "charlie", {}, view_zero("charlie.final", {"input:0:hi", "0", "1"}),
        "Charlie's view of a1");
  }
  return out;
}

inline CheatStrategy find_strategy(const RunConfig& cfg, const std::string& name) {
  for (auto& s : strategy_catalog(cfg))
    if (s.name == name) return s;
  throw UnknownStrategy("no strategy '" + name + "' for protocol " + cfg.protocol);
}

/// The two configurations of a variation.
inline std::pair<RunConfig, RunConfig> vary(const RunConfig& cfg, const SecretVariation& v) {
  std::pair<RunConfig, RunConfig> out{cfg, cfg};
  auto apply = [&](RunConfig& c, const std::string& value) {
    if (v.field == "secret") {
      c.set("secret", value);
      return;
    }
    const auto parts = detail::split(v.field, ':');
    if (parts.size() < 2 || parts[0] != "input") throw ConfigError("unknown secret field '" + v.field + "'");
    const auto i = detail::parse_u64("variation", parts[1]);
    if (i >= c.inputs.size()) throw ConfigError("variation names input " + parts[1] + " but the config has fewer");
    if (parts.size() == 2) {
      c.inputs[i] = detail::parse_two_bits("variation", value);
    } else if (parts.size() == 3 && parts[2] == "hi" && (value == "0" || value == "1")) {
      c.inputs[i].hi = value == "1";
    } else {
      throw ConfigError("bad variation '" + v.field + "=" + value + "'");
    }
  };
  apply(out.first, v.value0);
  apply(out.second, v.value1);
  return out;
}

/// Block-diagonal mixture over classical keys: key -> sum of w * rho.
using ViewMixture = std::map<std::string, Eigen::MatrixXcd>;

inline ViewMixture accumulate_view(const RunConfig& cfg, const std::string& point, int jobs = 1) {
  ViewMixture mix;
  enumerate_runs(
      cfg,
      [&](const CellInfo& cell, RunResult&& r) {
        const auto it = r.views.find(point);
        if (it == r.views.end()) throw std::invalid_argument("protocol " + cfg.protocol + " has no view '" + point + "'");
        auto& block = mix[it->second.classical];
        const auto& m = it->second.quantum.matrix();
        if (block.size() == 0) block = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
        if (block.rows() != m.rows()) throw std::logic_error("view dimension changed under one classical key");
        block += cell.weight * m;
      },
      {}, jobs);
  return mix;
}

inline double mixture_distance(const ViewMixture& a, const ViewMixture& b) {
  double d = 0.0;
  for (const auto& [key, m] : a) {
    const auto it = b.find(key);
    if (it == b.end() || it->second.rows() != m.rows()) {
      d += half_trace_norm(m);
      if (it != b.end()) d += half_trace_norm(it->second);
    } else {
      d += half_trace_norm(m - it->second);
    }
  }
  for (const auto& [key, m] : b)
    if (!a.count(key)) d += half_trace_norm(m);
  return d;
}

/// Trace distance between an observer's complete views under two configurations that
/// differ only in a secret field (secret or inputs).
inline double view_distance(const RunConfig& c0, const RunConfig& c1, const std::string& point, int jobs = 1) {
  RunConfig a = c0, b = c1;
  a.secret = b.secret;
  a.inputs = b.inputs;
  if (!(a == b)) {
    for (std::size_t i = 0; i < a.entries().size(); ++i)
      if (a.entries()[i] != b.entries()[i])
        throw ConfigError("configs differ in a non-secret field: " + a.entries()[i].first);
  }
  return mixture_distance(accumulate_view(c0, point, jobs), accumulate_view(c1, point, jobs));
}

inline double view_distance(const RunConfig& cfg, const std::string& point, const SecretVariation& v, int jobs = 1) {
  const auto [c0, c1] = vary(cfg, v);
  return view_distance(c0, c1, point, jobs);
}

struct CellOutcome {
  std::size_t index;
  std::vector<int> path;
  double weight;
  std::string verdict;
};

struct SecurityReport {
  std::string strategy;
  std::string protocol;
  std::string mode;
  std::uint64_t size = 0;  // enumerated cells or sampled trials
  std::uint64_t detected = 0;
  std::optional<Rational> detection_exact;
  double detection = 0.0;
  double standard_error = 0.0;
  std::optional<double> view_distance;
  std::optional<double> recovered_distance;
  Expectation expected;
  bool within_bound = false;
  std::string scope{kScopeNote};
  std::vector<CellOutcome> cells;

  std::string exact_or_estimate() const {
    if (detection_exact) return detection_exact->str();
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << detection << "+-" << standard_error;
    return os.str();
  }

  std::string summary_row() const {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    os << strategy << " | " << protocol << " | ";
    if (view_distance) {
      os << "view distance | " << *view_distance;
    } else if (recovered_distance) {
      os << "distance from I/2 | " << *recovered_distance;
    } else {
      os << exact_or_estimate() << " | " << detection;
    }
    os << " | " << (within_bound ? "within bound" : "BOUND VIOLATED");
    return os.str();
  }

  std::string to_text() const {
    std::ostringstream os;
    os << kTranscriptVersion << " report\n";
    os << "strategy " << strategy << "\n";
    os << "protocol " << protocol << "\n";
    os << "mode " << mode << "\n";
    os << "size " << size << "\n";
    os.precision(17);
    if (view_distance) {
      os << "view_distance " << *view_distance << "\n";
    } else if (recovered_distance) {
      os << "recovered_distance " << *recovered_distance << "\n";
    } else {
      os << "detected " << detected << " of " << size << "\n";
      os << "detection " << exact_or_estimate() << " " << detection << "\n";
    }
    os << "expected " << expected.str() << "\n";
    os << "within_bound " << (within_bound ? "yes" : "no") << "\n";
    os << "scope " << scope << "\n";
    for (const auto& c : cells) {
      os << "cell " << c.index << " ";
      for (std::size_t i = 0; i < c.path.size(); ++i) os << (i ? "." : "") << c.path[i];
      if (c.path.empty()) os << "-";
      os << " " << c.weight << " " << c.verdict << "\n";
    }
    os << "summary " << summary_row() << "\n";
    return os.str();
  }
};

namespace detail {

inline void judge(SecurityReport& rep) {
  switch (rep.expected.kind) {
    case Expectation::Kind::Detection:
      if (rep.detection_exact) {
        rep.within_bound = *rep.detection_exact == rep.expected.detection;
      } else {
        const double v = rep.expected.detection.value();
        const double n = static_cast<double>(rep.size);
        const double sigma = std::sqrt(v * (1 - v) / n);
        rep.within_bound = sigma == 0.0 ? rep.detection == v : std::abs(rep.detection - v) <= 3 * sigma;
      }
      break;
    case Expectation::Kind::ViewDistanceZero: rep.within_bound = *rep.view_distance <= kEqualityTol; break;
    case Expectation::Kind::RecoveredMixed: rep.within_bound = *rep.recovered_distance <= kEqualityTol; break;
  }
}

}  // namespace detail

/// Evaluates a strategy. Enumeration gives exact probabilities; sampling runs n trials
/// with streams derived from the configured seed. View distances always enumerate.
inline SecurityReport run_strategy(const RunConfig& cfg, const CheatStrategy& strategy, RunMode mode, int jobs = 1) {
  if (strategy.protocol != cfg.protocol)
    throw UnknownStrategy("strategy " + strategy.name + " belongs to " + strategy.protocol);
  validate_hooks(strategy.hooks, hook_points(cfg.protocol), cfg.protocol);
  SecurityReport rep;
  rep.strategy = strategy.name;
  rep.protocol = cfg.protocol;
  rep.expected = strategy.expected;
  rep.mode = mode.str();

  if (strategy.expected.kind == Expectation::Kind::ViewDistanceZero) {
    rep.mode = "enumerate";
    const auto [c0, c1] = vary(cfg, strategy.expected.variation);
    const auto m0 = accumulate_view(c0, strategy.expected.point, jobs);
    const auto m1 = accumulate_view(c1, strategy.expected.point, jobs);
    rep.view_distance = mixture_distance(m0, m1);
    rep.size = m0.size() + m1.size();
    detail::judge(rep);
    return rep;
  }

  if (mode.kind == RunMode::Kind::Enumerate) {
    std::optional<Rational> exact = Rational(0, 1);
    double p = 0.0;
    std::optional<Eigen::MatrixXcd> avg;
    const std::size_t n = enumerate_runs(
        cfg,
        [&](const CellInfo& cell, RunResult&& r) {
          const bool rejected = !r.verdict.accepted();
          if (rejected) {
            ++rep.detected;
            p += cell.weight;
            if (exact && cell.exact) {
              exact = *exact + *cell.exact;
            } else {
              exact.reset();
            }
          } else if (!cell.exact) {
            exact.reset();
          }
          if (strategy.expected.kind == Expectation::Kind::RecoveredMixed) {
            const auto it = r.states.find(strategy.expected.point);
            if (it == r.states.end()) throw std::logic_error("run produced no state '" + strategy.expected.point + "'");
            if (!avg) avg = Eigen::MatrixXcd::Zero(it->second.matrix().rows(), it->second.matrix().cols());
            *avg += cell.weight * it->second.matrix();
          }
          rep.cells.push_back({cell.index, cell.path, cell.weight, r.verdict.str()});
        },
        strategy.hooks, jobs);
    rep.size = n;
    rep.detection = p;
    rep.detection_exact = exact;
    if (avg) {
      const int nq = static_cast<int>(std::log2(static_cast<double>(avg->rows())) + 0.5);
      rep.recovered_distance = max_entry_distance(DensityMatrix(nq, *avg), DensityMatrix::maximally_mixed(nq));
    }
  } else {
    if (!cfg.seed) throw ConfigError("sampled evaluation needs a seed");
    if (strategy.expected.kind == Expectation::Kind::RecoveredMixed)
      throw ConfigError("recovered-state checks require enumerate mode");
    const std::uint64_t trials = mode.trials;
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(trials)));
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(workers), 0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t t = static_cast<std::uint64_t>(w); t < trials; t += static_cast<std::uint64_t>(workers))
            if (!run_sampled(cfg, strategy.hooks, t + 1).verdict.accepted()) ++counts[static_cast<std::size_t>(w)];
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto c : counts) rep.detected += c;
    rep.size = trials;
    rep.detection = static_cast<double>(rep.detected) / static_cast<double>(trials);
    rep.standard_error = std::sqrt(rep.detection * (1 - rep.detection) / static_cast<double>(trials));
  }
  detail::judge(rep);
  return rep;
}

/// True iff sum p U U^dagger = I and the p-weighted twirl of every probe state
/// (|0>, |1>, |+>, |+i>) is I/2.
inline bool otp_certify(const std::vector<PauliLabel>& ops, const std::vector<double>& probs) {
  if (ops.empty() || ops.size() != probs.size()) return false;
  double total = 0.0;
  for (double p : probs) {
    if (p < 0.0) return false;
    total += p;
  }
  if (std::abs(total - 1.0) > kEqualityTol) return false;
  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const Eigen::Matrix2cd u = to_complex(pauli_matrix(ops[i]));
    sum += probs[i] * u * u.adjoint();
  }
  if ((sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > kEqualityTol) return false;
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<StateVector> probes{StateVector::computational(false), StateVector::computational(true),
                                        StateVector::qubit(r, r), StateVector::qubit(r, Complex(0, r))};
  for (const auto& psi : probes) {
    std::vector<StateVector> images;
    for (auto op : ops) images.push_back(StateVector(1, apply_pauli(psi, op, 0).amplitudes()));
    if (!is_maximally_mixed(mixture_density(images, probs))) return false;
  }
  return true;
}

}  // namespace bellcrypt
