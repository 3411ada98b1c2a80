#pragma once

// Per-run state shared by the protocol implementations: parties and their casting
// onto stations, the quantum system (a set of independent registers whose wires
// are held by parties), the transcript, and observer view snapshots.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bellcrypt/config.hpp"
#include "bellcrypt/framework.hpp"
#include "bellcrypt/hooks.hpp"
#include "bellcrypt/randomness.hpp"
#include "bellcrypt/state.hpp"
#include "bellcrypt/transcript.hpp"

namespace bellcrypt {

enum class Station { A, B, C };

struct PartyId {
  Station station;
  std::string controller;

  std::string str() const {
    static constexpr char names[] = {'A', 'B', 'C'};
    return controller + "@" + names[static_cast<int>(station)];
  }
};

/// Assignment of stations to controllers. Two-party protocols put B and C under Bob.
struct Casting {
  PartyId a;
  PartyId b;
  PartyId c;

  static Casting two_party() { return {{Station::A, "alice"}, {Station::B, "bob"}, {Station::C, "bob"}}; }
  static Casting three_party() { return {{Station::A, "alice"}, {Station::B, "bob"}, {Station::C, "charlie"}}; }
};

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

/// Independent registers addressed by global wire ids.
class QuantumSystem {
 public:
  /// Adds a register; wire i of `s` gets the next free id and is held by holders[i].
  int add(const StateVector& s, const std::vector<std::string>& holders) {
    if (static_cast<int>(holders.size()) != s.n_qubits()) throw std::invalid_argument("one holder per qubit");
    const int first = static_cast<int>(wires_.size());
    Register r{s, {}};
    for (int i = 0; i < s.n_qubits(); ++i) {
      r.wires.push_back(first + i);
      wires_.push_back({static_cast<int>(regs_.size()), i, holders[static_cast<std::size_t>(i)]});
    }
    regs_.push_back(std::move(r));
    return first;
  }

  int add(const StateVector& s, const std::string& holder) {
    return add(s, std::vector<std::string>(static_cast<std::size_t>(s.n_qubits()), holder));
  }

  void apply(int wire, PauliLabel rho) {
    auto& w = info(wire);
    auto& r = regs_[static_cast<std::size_t>(w.reg)];
    r.state = apply_pauli(r.state, rho, w.local);
  }

  /// Bell measurement of two wires of one register; the register keeps its width.
  TwoBits bsm(int w1, int w2, Randomness& rnd) {
    const auto& i1 = info(w1);
    const auto& i2 = info(w2);
    if (i1.reg != i2.reg) throw std::invalid_argument("Bell measurement across independent registers");
    auto& r = regs_[static_cast<std::size_t>(i1.reg)];
    const std::pair<int, int> pair{i1.local, i2.local};
    const auto probs = bell_probabilities(r.state, pair);
    const int mu = rnd.choose(ChoiceKind::Bsm, probs, "nature");
    auto res = bsm_forced(r.state, pair, BellLabel{mu});
    r.state = std::move(res.state);
    return res.outcome.bits;
  }

  /// Computational-basis measurement of one wire.
  bool measure(int wire, Randomness& rnd) {
    const auto& w = info(wire);
    auto& r = regs_[static_cast<std::size_t>(w.reg)];
    const auto probs = z_probabilities(r.state, w.local);
    const bool bit = rnd.choose(ChoiceKind::Measurement, probs, "nature") == 1;
    r.state = measure_z_forced(r.state, w.local, bit).state;
    return bit;
  }

  void transfer(int wire, const std::string& to) { info(wire).holder = to; }
  const std::string& holder(int wire) const { return info(wire).holder; }
  int wire_count() const { return static_cast<int>(wires_.size()); }

  /// Reduced density of the listed wires (product across registers, in wire-id order).
  DensityMatrix density(std::vector<int> wires) const {
    std::sort(wires.begin(), wires.end());
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Ones(1, 1);
    int n = 0;
    for (std::size_t r = 0; r < regs_.size(); ++r) {
      std::vector<int> local;
      for (int w : wires)
        if (info(w).reg == static_cast<int>(r)) local.push_back(info(w).local);
      if (local.empty()) continue;
      acc = kron(acc, reduced_density(regs_[r].state, std::span<const int>(local)).matrix());
      n += static_cast<int>(local.size());
    }
    return DensityMatrix(n, std::move(acc));
  }

  DensityMatrix held_density(std::string_view party) const {
    std::vector<int> held;
    for (std::size_t w = 0; w < wires_.size(); ++w)
      if (wires_[w].holder == party) held.push_back(static_cast<int>(w));
    return density(held);
  }

 private:
  struct Register {
    StateVector state;
    std::vector<int> wires;
  };
  struct WireInfo {
    int reg;
    int local;
    std::string holder;
  };

  WireInfo& info(int wire) {
    if (wire < 0 || wire >= static_cast<int>(wires_.size())) throw std::out_of_range("unknown wire");
    return wires_[static_cast<std::size_t>(wire)];
  }
  const WireInfo& info(int wire) const {
    if (wire < 0 || wire >= static_cast<int>(wires_.size())) throw std::out_of_range("unknown wire");
    return wires_[static_cast<std::size_t>(wire)];
  }

  std::vector<Register> regs_;
  std::vector<WireInfo> wires_;
};

/// What an observer has seen (visible events) and holds (reduced quantum state).
struct ViewSnapshot {
  std::string classical;
  DensityMatrix quantum;
};

/// The post-common-steps state of one iteration of the three-station system.
struct SharedContext {
  BellLabel mu;
  BellLabel nu;
  TwoBits cc;
  TwoBits aa;
  std::optional<bool> psi_prime;  // B's computational-basis result, when measured
  int base = 0;                   // global id of wire 0 of this iteration's register

  int wire(int w) const { return base + w; }
  PauliLabel tau() const { return infer_tau(aa, cc, mu, nu); }
};

class Session {
 public:
  Session(const RunConfig& cfg, Randomness& rnd, Hooks& hooks, Casting cast)
      : cfg(cfg), rnd(rnd), hooks(hooks), cast(std::move(cast)) {
    transcript.run_id = cfg.run_id();
  }

  void log(int step, const PartyId& actor, std::string action, Bytes payload, Channel ch) {
    transcript.append({step, actor.str(), std::move(action), std::move(payload), std::move(ch)});
  }

  void snapshot(const std::string& point, const std::string& party) {
    views.insert_or_assign(point, ViewSnapshot{transcript.view_of(party), q.held_density(party)});
  }

  const RunConfig& cfg;
  Randomness& rnd;
  Hooks& hooks;
  Casting cast;
  QuantumSystem q;
  ProtocolTranscript transcript;
  std::map<std::string, ViewSnapshot> views;
};

inline std::uint8_t byte(bool b) { return b ? 1 : 0; }
inline std::uint8_t byte(TwoBits t) { return static_cast<std::uint8_t>(t.index()); }

/// Adds the register |psi> (x) Psi^mu (x) Psi^nu with the standard wire holders.
inline SharedContext begin_iteration(Session& s, BellLabel mu, BellLabel nu, const StateVector& psi) {
  SharedContext ctx{mu, nu, {}, {}, std::nullopt, 0};
  const auto& c = s.cast;
  ctx.base = s.q.add(unified_register(psi, mu, nu),
                     {c.a.controller, c.a.controller, c.c.controller, c.c.controller, c.b.controller});
  return ctx;
}

/// Step 1: station C measures its two halves.
inline void step_swap(Session& s, SharedContext& ctx) {
  ctx.cc = s.q.bsm(ctx.wire(wire::c_near_a), ctx.wire(wire::c_near_b), s.rnd);
  s.log(1, s.cast.c, "bsm", {byte(ctx.cc)}, Channel::local(s.cast.c.controller));
}

/// Step 2: station A teleports the payload over its half of Psi^mu.
inline void step_teleport(Session& s, SharedContext& ctx) {
  ctx.aa = s.q.bsm(ctx.wire(wire::payload), ctx.wire(wire::a_half), s.rnd);
  s.log(2, s.cast.a, "bsm", {byte(ctx.aa)}, Channel::local(s.cast.a.controller));
}

/// Step 3: station B measures its qubit.
inline void step_measure_b(Session& s, SharedContext& ctx) {
  ctx.psi_prime = s.q.measure(ctx.wire(wire::b_half), s.rnd);
  s.log(3, s.cast.b, "measure", {byte(*ctx.psi_prime)}, Channel::local(s.cast.b.controller));
}

/// Steps 1-3 shared by every protocol.
inline SharedContext common_steps(Session& s, BellLabel mu, BellLabel nu, const StateVector& psi, bool measure_b) {
  if (psi.n_qubits() != 1) throw std::invalid_argument("payload must be a single qubit");
  SharedContext ctx = begin_iteration(s, mu, nu, psi);
  step_swap(s, ctx);
  step_teleport(s, ctx);
  if (measure_b) step_measure_b(s, ctx);
  return ctx;
}

}  // namespace bellcrypt
