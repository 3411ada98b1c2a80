#pragma once

// The seven protocols built on the three-station system. Each run function takes a
// configuration, a Randomness source and deviation hooks, and returns the verdict,
// the transcript and the data needed by the security harness.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellcrypt/config.hpp"
#include "bellcrypt/framework.hpp"
#include "bellcrypt/hooks.hpp"
#include "bellcrypt/randomness.hpp"
#include "bellcrypt/session.hpp"
#include "bellcrypt/state.hpp"
#include "bellcrypt/transcript.hpp"

namespace bellcrypt {

struct Verdict {
  enum class Kind { Accept, Reject };
  Kind kind = Kind::Accept;
  std::string value;   // accepted value: bit, bit string, or empty
  std::string reason;  // machine-readable reject code
  std::string detail;

  static Verdict accept(std::string v = {}) { return {Kind::Accept, std::move(v), {}, {}}; }
  static Verdict reject(std::string reason, std::string detail = {}) {
    return {Kind::Reject, {}, std::move(reason), std::move(detail)};
  }
  bool accepted() const { return kind == Kind::Accept; }
  std::string str() const {
    if (accepted()) return value.empty() ? "accept" : "accept " + value;
    return "reject " + reason + (detail.empty() ? "" : " " + detail);
  }
  bool operator==(const Verdict&) const = default;
};

struct RunResult {
  Verdict verdict;
  std::map<std::string, Verdict> recipients;  // per-recipient verdicts (qds, mpsc)
  ProtocolTranscript transcript;
  std::map<std::string, ViewSnapshot> views;
  std::vector<SharedContext> contexts;  // one per iteration
  std::map<std::string, bool> masks;    // input-masking coins, by party
  std::map<std::string, DensityMatrix> states;
  std::map<std::string, double> metrics;
};

inline std::string bit_str(bool b) { return b ? "1" : "0"; }

/// XOR of the arguments.
template <class... B>
constexpr bool parity(B... bits) {
  return (false != ... != static_cast<bool>(bits));
}

namespace detail {

inline bool require_bit_secret(const RunConfig& cfg) {
  const Secret s = parse_secret(cfg.secret);
  if (!s.bit) throw ConfigError(cfg.protocol + ": secret must be 0 or 1");
  return *s.bit;
}

inline void require_inputs(const RunConfig& cfg, std::size_t n) {
  if (cfg.inputs.size() != n)
    throw ConfigError(cfg.protocol + ": expected " + std::to_string(n) + " two-bit inputs, got " +
                      std::to_string(cfg.inputs.size()));
}

inline void require_zero_labels(const RunConfig& cfg) {
  if (cfg.mu.index() != 0 || cfg.nu.index() != 0)
    throw ConfigError(cfg.protocol + ": the shared pairs are publicly fixed to mu=nu=0");
}

inline RunResult finish(Session& s, RunResult out) {
  out.transcript = std::move(s.transcript);
  out.views = std::move(s.views);
  return out;
}

}  // namespace detail

/// Deviation points declared by each protocol.
inline const std::vector<HookPoint>& hook_points(const std::string& protocol) {
  using K = DeviationKind;
  static const std::map<std::string, std::vector<HookPoint>> table{
      {"bc",
       {{"alice.reveal", K::Withhold}, {"alice.reveal.secret", K::FlipBits}, {"alice.reveal.aa", K::FlipBits}}},
      {"ct", {{"bob.apply", K::SubstitutePauli}, {"bob.send", K::SubstituteQubit}}},
      {"ot", {{"bob.apply", K::SubstitutePauli}, {"bob.send", K::SubstituteQubit}}},
      {"tpsc", {{"bob.apply", K::SubstitutePauli}, {"alice.announce.f", K::FlipBits}}},
      {"qss",
       {{"charlie.bsm", K::SkipMeasurement},
        {"charlie.share", K::Withhold},
        {"bob.ack", K::Withhold},
        {"charlie.ack", K::Withhold}}},
      {"qds", {{"alice.send.message", K::FlipBits}, {"bob.forward.message", K::FlipBits}}},
      {"mpsc",
       {{"alice.signature", K::FlipBits},
        {"bob.signature", K::FlipBits},
        {"charlie.signature", K::FlipBits},
        {"charlie.announce.f", K::FlipBits}}},
  };
  const auto it = table.find(protocol);
  if (it == table.end()) throw ConfigError("unknown protocol '" + protocol + "'");
  return it->second;
}

/// Bit commitment. Alice commits psi; stations B and C belong to Bob, nu is Bob's secret.
inline RunResult run_bc(const RunConfig& cfg, Randomness& rnd, Hooks& hooks) {
  const bool psi = detail::require_bit_secret(cfg);
  Session s(cfg, rnd, hooks, Casting::two_party());
  RunResult out;
  const auto& A = s.cast.a;
  const auto& B = s.cast.b;
  s.log(0, A, "input", {byte(psi)}, Channel::local("alice"));
  SharedContext ctx = common_steps(s, cfg.mu, cfg.nu, StateVector::computational(psi), true);
  out.contexts.push_back(ctx);

  // 4: psi'' = sigma_z^a sigma_x^a' |psi>
  const int w = s.q.add(StateVector::computational(psi), "alice");
  s.q.apply(w, PauliLabel{ctx.aa.index()});
  s.q.transfer(w, "bob");
  s.log(4, A, "send", {static_cast<std::uint8_t>(w)}, Channel::quantum("alice", "bob"));
  // 5
  const bool psi2 = s.q.measure(w, rnd);
  s.log(5, B, "measure", {byte(psi2)}, Channel::local("bob"));
  s.snapshot("bob.pre_reveal", "bob");
  s.snapshot("alice.pre_reveal", "alice");

  // 6: the reveal carries psi and aa' classically
  if (hooks.withhold("alice.reveal")) {
    out.verdict = Verdict::reject("transcript_incomplete", "no reveal");
    s.log(7, B, "verdict", {0}, Channel::local("bob"));
    return detail::finish(s, std::move(out));
  }
  const bool revealed = hooks.flip_bit("alice.reveal.secret", psi);
  const TwoBits aa_rev = hooks.flip_bits("alice.reveal.aa", ctx.aa);
  s.log(6, A, "reveal", {byte(revealed), byte(aa_rev)}, Channel::classical("alice", "bob"));
  s.snapshot("bob.final", "bob");

  const PauliLabel tau = infer_tau(aa_rev, ctx.cc, cfg.mu, cfg.nu);
  const bool parity_ok = psi2 == (revealed != aa_rev.lo);
  const bool tau_ok = *ctx.psi_prime == (revealed != tau.x_bit());
  s.log(7, B, "verify", {byte(parity_ok), byte(tau_ok)}, Channel::local("bob"));
  // The z-bit of aa' is a phase on a basis state and cannot be checked by measurement.
  s.log(7, B, "phase_unverified", {byte(aa_rev.hi)}, Channel::local("bob"));
  out.verdict = parity_ok && tau_ok ? Verdict::accept(bit_str(revealed)) : Verdict::reject("commit_mismatch");
  s.log(7, B, "verdict", {byte(out.verdict.accepted())}, Channel::local("bob"));
  return detail::finish(s, std::move(out));
}

namespace detail {

/// Coin tossing and oblivious transfer share the dataflow: Bob applies sigma_c to his
/// qubit and hands it to Alice, who undoes sigma_a and checks she recovers psi.
inline RunResult run_ct_like(const RunConfig& cfg, Randomness& rnd, Hooks& hooks, bool oblivious) {
  require_zero_labels(cfg);
  const bool psi = require_bit_secret(cfg);
  if (!oblivious && !cfg.inputs.empty()) throw ConfigError("ct: takes no inputs");
  if (oblivious && cfg.inputs.size() > 1) throw ConfigError("ot: at most one input (Bob's cc)");
  Session s(cfg, rnd, hooks, Casting::two_party());
  RunResult out;
  const auto& A = s.cast.a;
  const auto& B = s.cast.b;
  s.log(0, A, "input", {byte(psi)}, Channel::local("alice"));
  SharedContext ctx = common_steps(s, cfg.mu, cfg.nu, StateVector::computational(psi), true);
  out.contexts.push_back(ctx);

  // 4
  const PauliLabel sigma_c = hooks.pauli("bob.apply", PauliLabel{ctx.cc.index()});
  int w = ctx.wire(wire::b_half);
  s.q.apply(w, sigma_c);
  if (auto sub = hooks.substitute_qubit("bob.send")) w = s.q.add(*sub, "bob");
  s.q.transfer(w, "alice");
  s.log(4, B, "send", {static_cast<std::uint8_t>(w)}, Channel::quantum("bob", "alice"));

  // verification
  s.q.apply(w, PauliLabel{ctx.aa.index()});
  const bool r = s.q.measure(w, rnd);
  s.log(5, A, "measure", {byte(r)}, Channel::local("alice"));
  const bool valid = r == psi;
  if (oblivious) {
    if (valid) {
      out.verdict = Verdict::accept(bit_str(r));
      s.log(6, A, "accept", {}, Channel::classical("alice", "bob"));
    } else {
      out.verdict = Verdict::reject("challenge");
      s.log(6, A, "challenge", {}, Channel::classical("alice", "bob"));
    }
  } else {
    if (valid) {
      const bool coin = r != ctx.aa.lo;
      out.verdict = Verdict::accept(bit_str(coin));
      s.log(6, A, "announce", {byte(coin)}, Channel::broadcast("alice"));
    } else {
      out.verdict = Verdict::reject("invalid");
      s.log(6, A, "invalid", {}, Channel::broadcast("alice"));
    }
  }
  s.snapshot("bob.final", "bob");
  s.snapshot("alice.final", "alice");
  return finish(s, std::move(out));
}

}  // namespace detail

inline RunResult run_ct(const RunConfig& cfg, Randomness& rnd, Hooks& hooks) {
  return detail::run_ct_like(cfg, rnd, hooks, false);
}

inline RunResult run_ot(const RunConfig& cfg, Randomness& rnd, Hooks& hooks) {
  return detail::run_ct_like(cfg, rnd, hooks, true);
}

/// Two-sided two-party computation on public psi with inputs a = a1a2, b = b1b2.
inline RunResult run_tpsc(const RunConfig& cfg, Randomness& rnd, Hooks& hooks) {
  const bool psi = detail::require_bit_secret(cfg);
  detail::require_inputs(cfg, 2);
  const TwoBits a = cfg.inputs[0];
  const TwoBits b = cfg.inputs[1];
  Session s(cfg, rnd, hooks, Casting::two_party());
  RunResult out;
  const auto& A = s.cast.a;
  const auto& B = s.cast.b;
  s.log(0, A, "input", {byte(a)}, Channel::local("alice"));
  s.log(0, B, "input", {byte(b)}, Channel::local("bob"));

  const bool ma = rnd.coin("alice");
  const PauliLabel sigma_a = code2_encode(a.hi != ma, a.lo);
  s.log(0, A, "mask", {byte(ma)}, Channel::local("alice"));
  out.masks["alice"] = ma;

  SharedContext ctx = begin_iteration(s, cfg.mu, cfg.nu, StateVector::computational(psi));
  step_swap(s, ctx);
  // 2: Alice encodes her input before teleporting, and sends psi'' alongside.
  s.q.apply(ctx.wire(wire::payload), sigma_a);
  step_teleport(s, ctx);
  const int w2 = s.q.add(StateVector::computational(psi), "alice");
  s.q.apply(w2, sigma_a);
  s.q.apply(w2, PauliLabel{ctx.aa.index()});
  s.q.transfer(w2, "bob");
  s.log(2, A, "send", {static_cast<std::uint8_t>(w2)}, Channel::quantum("alice", "bob"));

  // 3: Bob measures both qubits, applies sigma_b then sigma'_c and returns his qubit.
  step_measure_b(s, ctx);
  const bool psi2 = s.q.measure(w2, rnd);
  s.log(3, B, "measure", {byte(psi2)}, Channel::local("bob"));
  const bool mb = rnd.coin("bob");
  s.log(3, B, "mask", {byte(mb)}, Channel::local("bob"));
  out.masks["bob"] = mb;
  const PauliLabel sigma_b = hooks.pauli("bob.apply", code2_encode(b.hi != mb, b.lo));
  const int wb = ctx.wire(wire::b_half);
  s.q.apply(wb, sigma_b);
  s.q.apply(wb, PauliLabel{ctx.cc.index()});
  s.q.transfer(wb, "alice");
  s.log(3, B, "send", {static_cast<std::uint8_t>(wb)}, Channel::quantum("bob", "alice"));

  // 4: Alice applies sigma'_a, measures, announces aa' and f.
  s.q.apply(wb, PauliLabel{ctx.aa.index()});
  const bool f = s.q.measure(wb, rnd);
  s.log(4, A, "measure", {byte(f)}, Channel::local("alice"));
  const bool f_announced = hooks.flip_bit("alice.announce.f", f);
  s.log(4, A, "announce", {byte(ctx.aa), byte(f_announced)}, Channel::broadcast("alice"));
  out.contexts.push_back(ctx);

  // Alice learns Bob's x-bit b2; Bob learns Alice's a2 and recomputes f himself.
  const bool b2_seen = parity(f, psi, a.lo, cfg.mu.x_bit(), cfg.nu.x_bit());
  s.log(5, A, "infer", {byte(b2_seen)}, Channel::local("alice"));
  const bool a2_seen = parity(psi2, psi, ctx.aa.lo);
  const bool tau_ok = *ctx.psi_prime == parity(psi, a2_seen, ctx.tau().x_bit());
  const bool f_bob = parity(*ctx.psi_prime, b.lo, ctx.cc.lo, ctx.aa.lo);
  s.log(5, B, "infer", {byte(a2_seen)}, Channel::local("bob"));
  s.log(5, B, "verify", {byte(tau_ok), byte(f_bob == f_announced)}, Channel::local("bob"));
  out.metrics["f_alice"] = f;
  out.metrics["f_bob"] = f_bob;
  out.verdict = tau_ok && f_bob == f_announced ? Verdict::accept(bit_str(f_announced))
                                               : Verdict::reject("inconsistent_views");
  s.snapshot("alice.final", "alice");
  s.snapshot("bob.final", "bob");
  return detail::finish(s, std::move(out));
}

/// (2,2) sharing of a qubit: Bob holds sigma^tau|psi>, Alice's aa' goes to Bob only,
/// and Charlie's cc' completes the decryption key.
inline RunResult run_qss(const RunConfig& cfg, Randomness& rnd, Hooks& hooks) {
  const Secret secret = parse_secret(cfg.secret);
  Session s(cfg, rnd, hooks, Casting::three_party());
  RunResult out;
  const auto& A = s.cast.a;
  const auto& B = s.cast.b;
  const auto& C = s.cast.c;
  if (secret.bit) s.log(0, A, "input", {byte(*secret.bit)}, Channel::local("alice"));

  SharedContext ctx = begin_iteration(s, cfg.mu, cfg.nu, secret.state);
  const bool skipped = hooks.skip("charlie.bsm");
  if (skipped) {
    s.log(1, C, "hold", {}, Channel::local("charlie"));
  } else {
    step_swap(s, ctx);
  }
  step_teleport(s, ctx);
  if (skipped) out.states.insert_or_assign("charlie.recovered", s.q.density({ctx.wire(wire::c_near_a)}));

  // Acknowledgement tokens before Alice releases aa'.
  const bool bob_ack = !hooks.withhold("bob.ack");
  const bool charlie_ack = !hooks.withhold("charlie.ack");
  if (bob_ack) s.log(3, B, "ack", {}, Channel::classical("bob", "alice"));
  if (charlie_ack) s.log(3, C, "ack", {}, Channel::classical("charlie", "alice"));
  const bool aa_sent = bob_ack && charlie_ack;
  if (aa_sent) s.log(4, A, "share", {byte(ctx.aa)}, Channel::classical("alice", "bob"));
  s.snapshot("bob.single_share", "bob");

  const bool cc_sent = !skipped && !hooks.withhold("charlie.share");
  if (cc_sent) s.log(5, C, "share", {byte(ctx.cc)}, Channel::classical("charlie", "bob"));
  s.snapshot("charlie.final", "charlie");
  s.snapshot("bob.final", "bob");
  out.contexts.push_back(ctx);

  if (!aa_sent || !cc_sent) {
    out.verdict = Verdict::reject("insufficient_shares", !aa_sent ? "missing aa" : "missing cc");
    s.log(6, B, "verdict", {0}, Channel::local("bob"));
    return detail::finish(s, std::move(out));
  }
  // sigma_tau is real orthogonal, so its inverse is its transpose: the same label up to sign.
  const PauliLabel tau = ctx.tau();
  s.q.apply(ctx.wire(wire::b_half), tau);
  s.log(6, B, "decode", {static_cast<std::uint8_t>(tau.index())}, Channel::local("bob"));
  const DensityMatrix rec = s.q.density({ctx.wire(wire::b_half)});
  const double fid = (secret.state.amplitudes().adjoint() * rec.matrix() * secret.state.amplitudes())(0, 0).real();
  out.states.insert_or_assign("bob.recovered", rec);
  out.metrics["fidelity"] = fid;
  out.verdict = Verdict::accept();
  s.log(6, B, "verdict", {1}, Channel::local("bob"));
  return detail::finish(s, std::move(out));
}

/// The secret split of QDS positions between Bob (S_b) and Charlie (S_c).
struct ShareSplit {
  std::vector<int> bob;      // positions where Charlie sends cc' to Bob
  std::vector<int> charlie;  // positions where Bob sends psi' to Charlie
};

/// Random order and cut drawn from Bob's private stream. With k = 1 both check position 0.
inline ShareSplit qds_split(int k, std::uint64_t seed) {
  ShareSplit sp;
  if (k == 1) {
    sp.bob = {0};
    sp.charlie = {0};
    return sp;
  }
  Rng rng = Rng::derive(seed, fnv1a("bob.split"));
  std::vector<int> order(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = k - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  const int cut = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k - 1)));
  sp.bob.assign(order.begin(), order.begin() + cut);
  sp.charlie.assign(order.begin() + cut, order.end());
  std::sort(sp.bob.begin(), sp.bob.end());
  std::sort(sp.charlie.begin(), sp.charlie.end());
  return sp;
}

/// Digital signature on a k-bit message, one independent system per bit.
inline RunResult run_qds(const RunConfig& cfg, Randomness& rnd, Hooks& hooks) {
  const std::vector<bool> msg = parse_message(cfg.secret);
  const int k = static_cast<int>(msg.size());
  if (cfg.k != k) throw ConfigError("qds: k=" + std::to_string(cfg.k) + " but the message has " + std::to_string(k) + " bits");
  Session s(cfg, rnd, hooks, Casting::three_party());
  RunResult out;
  const auto& A = s.cast.a;
  const auto& B = s.cast.b;
  const auto& C = s.cast.c;
  auto pack = [](const std::vector<bool>& bits) {
    Bytes b;
    for (bool v : bits) b.push_back(byte(v));
    return b;
  };
  s.log(0, A, "input", pack(msg), Channel::local("alice"));

  std::vector<bool> psi3(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const auto pos = static_cast<std::uint8_t>(i);
    SharedContext ctx = common_steps(s, cfg.mu, cfg.nu, StateVector::computational(msg[static_cast<std::size_t>(i)]), true);
    // 4: sigma_z^a sigma_x^a' |m_i> to Charlie
    const int w = s.q.add(StateVector::computational(msg[static_cast<std::size_t>(i)]), "alice");
    s.q.apply(w, PauliLabel{ctx.aa.index()});
    s.q.transfer(w, "charlie");
    s.log(4, A, "send", {pos, static_cast<std::uint8_t>(w)}, Channel::quantum("alice", "charlie"));
    // 5
    psi3[static_cast<std::size_t>(i)] = s.q.measure(w, rnd);
    s.log(5, C, "measure", {pos, byte(psi3[static_cast<std::size_t>(i)])}, Channel::local("charlie"));
    out.contexts.push_back(ctx);
  }

  // 6: partial exchange of shares, order agreed between Bob and Charlie only.
  const ShareSplit split = qds_split(k, cfg.seed_or_zero());
  Bytes split_payload;
  for (int i : split.bob) split_payload.push_back(static_cast<std::uint8_t>(i));
  s.log(6, B, "split", split_payload, Channel::classical("bob", "charlie"));
  for (int i : split.charlie)
    s.log(6, B, "share", {static_cast<std::uint8_t>(i), byte(*out.contexts[static_cast<std::size_t>(i)].psi_prime)},
          Channel::classical("bob", "charlie"));
  for (int i : split.bob)
    s.log(6, C, "share", {static_cast<std::uint8_t>(i), byte(out.contexts[static_cast<std::size_t>(i)].cc)},
          Channel::classical("charlie", "bob"));

  // Verification: Alice sends the message with every aa' to Bob.
  std::uint64_t packed = 0;
  for (int i = 0; i < k; ++i) packed |= std::uint64_t{msg[static_cast<std::size_t>(i)]} << i;
  const std::uint64_t sent = hooks.flip("alice.send.message", packed);
  std::vector<bool> m_sent(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) m_sent[static_cast<std::size_t>(i)] = ((sent >> i) & 1) != 0;
  Bytes sign_payload = pack(m_sent);
  for (const auto& ctx : out.contexts) sign_payload.push_back(byte(ctx.aa));
  s.log(7, A, "sign", sign_payload, Channel::classical("alice", "bob"));

  std::vector<int> bob_fail;
  for (int i : split.bob) {
    const auto& ctx = out.contexts[static_cast<std::size_t>(i)];
    if (*ctx.psi_prime != (m_sent[static_cast<std::size_t>(i)] != ctx.tau().x_bit())) bob_fail.push_back(i);
  }
  auto positions = [](const std::vector<int>& v) {
    std::string t = "at";
    for (int i : v) t += " " + std::to_string(i);
    return t;
  };
  if (!bob_fail.empty()) {
    s.log(8, B, "verdict", {0}, Channel::local("bob"));
    out.recipients["bob"] = Verdict::reject("repudiation", positions(bob_fail));
    out.recipients["charlie"] = Verdict::reject("transcript_incomplete", "not forwarded");
    out.verdict = out.recipients["bob"];
    return detail::finish(s, std::move(out));
  }
  s.log(8, B, "verdict", {1}, Channel::local("bob"));
  out.recipients["bob"] = Verdict::accept([&] {
    std::string t;
    for (bool v : m_sent) t += bit_str(v);
    return t;
  }());

  const std::uint64_t fwd = hooks.flip("bob.forward.message", sent);
  std::vector<bool> m_fwd(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) m_fwd[static_cast<std::size_t>(i)] = ((fwd >> i) & 1) != 0;
  Bytes fwd_payload = pack(m_fwd);
  for (const auto& ctx : out.contexts) fwd_payload.push_back(byte(ctx.aa));
  s.log(9, B, "forward", fwd_payload, Channel::classical("bob", "charlie"));

  std::vector<int> charlie_fail;
  for (int i = 0; i < k; ++i) {
    const auto& ctx = out.contexts[static_cast<std::size_t>(i)];
    const bool m = m_fwd[static_cast<std::size_t>(i)];
    bool ok = psi3[static_cast<std::size_t>(i)] == (m != ctx.aa.lo);
    if (std::find(split.charlie.begin(), split.charlie.end(), i) != split.charlie.end())
      ok = ok && *ctx.psi_prime == (m != ctx.tau().x_bit());
    if (!ok) charlie_fail.push_back(i);
  }
  if (!charlie_fail.empty()) {
    s.log(10, C, "verdict", {0}, Channel::local("charlie"));
    out.recipients["charlie"] = Verdict::reject("forgery", positions(charlie_fail));
    out.metrics["charlie.first_failure"] = charlie_fail.front();
    out.verdict = out.recipients["charlie"];
    return detail::finish(s, std::move(out));
  }
  s.log(10, C, "verdict", {1}, Channel::local("charlie"));
  std::string accepted;
  for (bool v : m_fwd) accepted += bit_str(v);
  out.recipients["charlie"] = Verdict::accept(accepted);
  out.verdict = Verdict::accept(accepted);
  return detail::finish(s, std::move(out));
}

/// Three-party computation on public psi. Charlie also applies the correction for his
/// own outcome cc', so the result depends only on announced data and every party can
/// check it once the signature bits are public.
inline RunResult run_mpsc(const RunConfig& cfg, Randomness& rnd, Hooks& hooks) {
  const bool psi = detail::require_bit_secret(cfg);
  detail::require_inputs(cfg, 3);
  const TwoBits a = cfg.inputs[0], b = cfg.inputs[1], c = cfg.inputs[2];
  Session s(cfg, rnd, hooks, Casting::three_party());
  RunResult out;
  const auto& A = s.cast.a;
  const auto& B = s.cast.b;
  const auto& C = s.cast.c;
  s.log(0, A, "input", {byte(a)}, Channel::local("alice"));
  s.log(0, B, "input", {byte(b)}, Channel::local("bob"));
  s.log(0, C, "input", {byte(c)}, Channel::local("charlie"));

  SharedContext ctx = begin_iteration(s, cfg.mu, cfg.nu, StateVector::computational(psi));
  // 1
  step_swap(s, ctx);
  // 2
  const bool ma = rnd.coin("alice");
  out.masks["alice"] = ma;
  s.log(2, A, "mask", {byte(ma)}, Channel::local("alice"));
  s.q.apply(ctx.wire(wire::payload), code2_encode(a.hi != ma, a.lo));
  step_teleport(s, ctx);
  s.log(2, A, "announce", {byte(ctx.aa)}, Channel::broadcast("alice"));
  // 3
  step_measure_b(s, ctx);
  const bool mb = rnd.coin("bob");
  out.masks["bob"] = mb;
  s.log(3, B, "mask", {byte(mb)}, Channel::local("bob"));
  const int wb = ctx.wire(wire::b_half);
  s.q.apply(wb, code2_encode(b.hi != mb, b.lo));
  s.q.transfer(wb, "charlie");
  s.log(3, B, "send", {static_cast<std::uint8_t>(wb)}, Channel::quantum("bob", "charlie"));
  // 4
  const bool mc = rnd.coin("charlie");
  out.masks["charlie"] = mc;
  s.log(4, C, "mask", {byte(mc)}, Channel::local("charlie"));
  s.q.apply(wb, code2_encode(c.hi != mc, c.lo));
  s.q.apply(wb, PauliLabel{ctx.cc.index()});
  const bool f = s.q.measure(wb, rnd);
  s.log(4, C, "measure", {byte(f)}, Channel::local("charlie"));
  const bool f_announced = hooks.flip_bit("charlie.announce.f", f);
  s.log(4, C, "announce", {byte(f_announced)}, Channel::broadcast("charlie"));
  out.contexts.push_back(ctx);

  // Verification: signatures are announced, then each party checks individually.
  const bool sa = hooks.flip_bit("alice.signature", a.lo);
  const bool sb = hooks.flip_bit("bob.signature", b.lo);
  const bool sc = hooks.flip_bit("charlie.signature", c.lo);
  s.log(5, A, "signature", {byte(sa)}, Channel::broadcast("alice"));
  s.log(5, B, "signature", {byte(sb)}, Channel::broadcast("bob"));
  s.log(5, C, "signature", {byte(sc)}, Channel::broadcast("charlie"));
  const bool offset = parity(psi, ctx.aa.lo, cfg.mu.x_bit(), cfg.nu.x_bit());
  // Each party trusts its own signature bit and the announced ones of the others.
  struct Check {
    const PartyId* who;
    bool own_a, own_b, own_c;
  };
  const Check checks[] = {{&A, a.lo, sb, sc}, {&B, sa, b.lo, sc}, {&C, sa, sb, c.lo}};
  std::string failed;
  for (const auto& chk : checks) {
    const bool expected = parity(offset, chk.own_a, chk.own_b, chk.own_c);
    const bool ok = expected == f_announced;
    s.log(6, *chk.who, "verify", {byte(ok)}, Channel::local(chk.who->controller));
    out.recipients[chk.who->controller] = ok ? Verdict::accept(bit_str(f_announced)) : Verdict::reject("verification_failed");
    if (!ok) failed += (failed.empty() ? "" : ",") + chk.who->controller;
  }
  out.metrics["f"] = f;
  out.verdict = failed.empty() ? Verdict::accept(bit_str(f_announced)) : Verdict::reject("verification_failed", failed);
  s.snapshot("alice.final", "alice");
  s.snapshot("bob.final", "bob");
  s.snapshot("charlie.final", "charlie");
  return detail::finish(s, std::move(out));
}

/// Forced Bell outcomes for a configuration: the explicit list, or Bob's cc for ot.
inline std::vector<BellLabel> forced_outcomes(const RunConfig& cfg) {
  auto forced = cfg.forced_bsm();
  if (cfg.protocol == "ot" && cfg.inputs.size() == 1) {
    const BellLabel cc = bell_from_bits(cfg.inputs[0]);
    if (forced.empty()) forced.push_back(cc);
    else if (forced.front() != cc) throw ConfigError("ot: forced cc disagrees with Bob's input");
  }
  const std::size_t per_run = cfg.protocol == "qds" ? static_cast<std::size_t>(cfg.k) : 1;
  if (!cfg.outcomes.empty() && cfg.outcomes.size() != per_run)
    throw ConfigError("outcomes: expected " + std::to_string(per_run) + " cc:aa pairs");
  return forced;
}

/// One run of the configured protocol with the given deviations.
inline RunResult run_protocol(const RunConfig& cfg, Randomness& rnd, const HookSet& deviations = {}) {
  validate_hooks(deviations, hook_points(cfg.protocol), cfg.protocol);
  Hooks hooks(&deviations, &rnd);
  if (cfg.protocol == "bc") return run_bc(cfg, rnd, hooks);
  if (cfg.protocol == "ct") return run_ct(cfg, rnd, hooks);
  if (cfg.protocol == "ot") return run_ot(cfg, rnd, hooks);
  if (cfg.protocol == "tpsc") return run_tpsc(cfg, rnd, hooks);
  if (cfg.protocol == "qss") return run_qss(cfg, rnd, hooks);
  if (cfg.protocol == "qds") return run_qds(cfg, rnd, hooks);
  if (cfg.protocol == "mpsc") return run_mpsc(cfg, rnd, hooks);
  throw ConfigError("unknown protocol '" + cfg.protocol + "'");
}

/// Sampled run from the configured seed (honoring forced outcomes).
inline RunResult run_sampled(const RunConfig& cfg, const HookSet& deviations = {}, std::uint64_t trial = 0) {
  Randomness rnd = Randomness::sampled(trial == 0 ? cfg.seed_or_zero() : Rng::derive(cfg.seed_or_zero(), trial).seed());
  rnd.force_bsm(forced_outcomes(cfg));
  return run_protocol(cfg, rnd, deviations);
}

/// Every nonzero-probability execution, in depth-first order.
template <class Visit>
std::size_t enumerate_runs(const RunConfig& cfg, Visit visit, const HookSet& deviations = {}, int jobs = 1) {
  auto run = [&cfg, &deviations](Randomness& rnd) { return run_protocol(cfg, rnd, deviations); };
  return enumerate_paths(run, visit, forced_outcomes(cfg), jobs);
}

}  // namespace bellcrypt
