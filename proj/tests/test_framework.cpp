#include <catch_amalgamated.hpp>

#include <set>

#include "bellcrypt/framework.hpp"
#include "bellcrypt/identities.hpp"
#include "oracle.hpp"

using namespace bellcrypt;

namespace {

oracle::Vec as_oracle(const StateVector& s) {
  oracle::Vec v;
  for (Eigen::Index i = 0; i < s.dim(); ++i) v.push_back(s[i]);
  return v;
}

/// <bell_k| on qubits (q, q+1) of an n-qubit vector, by explicit index loops.
oracle::Vec contract_adjacent(const oracle::Vec& v, int n, int q, int k) {
  const auto b = oracle::bell(k);
  const std::size_t out_dim = std::size_t{1} << (n - 2);
  oracle::Vec out(out_dim, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int b0 = static_cast<int>((i >> (n - 1 - q)) & 1), b1 = static_cast<int>((i >> (n - 2 - q)) & 1);
    const std::size_t high = i >> (n - q), low = i & ((std::size_t{1} << (n - 2 - q)) - 1);
    const std::size_t j = (high << (n - 2 - q)) | low;
    out[j] += std::conj(b[static_cast<std::size_t>(b0 * 2 + b1)]) * v[i];
  }
  return out;
}

}  // namespace

TEST_CASE("correlation table: B holds sigma_tau psi with tau the xor of all labels") {
  const auto payloads = random_payloads(77, 3);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      for (int aa = 0; aa < 4; ++aa) {
        for (int cc = 0; cc < 4; ++cc) {
          const auto t = infer_tau(TwoBits::from_index(aa), TwoBits::from_index(cc), BellLabel{mu}, BellLabel{nu});
          CHECK(t.index() == oracle::tau(aa, cc, mu, nu));
          for (const auto& psi : payloads) {
            // naive: psi (x) bell(mu) (x) bell(nu), contract C's pair then A's pair
            const auto full = oracle::kron(oracle::kron(as_oracle(psi), oracle::bell(mu)), oracle::bell(nu));
            const auto after_c = contract_adjacent(full, 5, 2, cc);
            const auto after_a = contract_adjacent(after_c, 3, 0, aa);
            const auto expect = oracle::mul(oracle::pauli(oracle::tau(aa, cc, mu, nu)), as_oracle(psi));
            // equal up to a sign and the 1/4 amplitude
            oracle::Vec scaled{after_a[0] * 4.0, after_a[1] * 4.0};
            CHECK(oracle::sign_relation(scaled, expect, 1e-12) != 0);
          }
        }
      }
    }
  }
}

TEST_CASE("swapping leaves A and B in the xor label") {
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int cc = 0; cc < 4; ++cc) {
        CHECK(swapped_label(TwoBits::from_index(cc), BellLabel{mu}, BellLabel{nu}).index() == (mu ^ nu ^ cc));
        const auto probs = swap_outcome_probabilities(BellLabel{mu}, BellLabel{nu});
        CHECK(std::abs(probs[static_cast<std::size_t>(cc)] - 0.25) < 1e-15);
      }
}

TEST_CASE("teleportation correction is the xor of outcome and channel") {
  for (int ch = 0; ch < 4; ++ch)
    for (int aa = 0; aa < 4; ++aa) CHECK(teleport_tau(TwoBits::from_index(aa), BellLabel{ch}).index() == (aa ^ ch));
}

TEST_CASE("simulated protocol steps agree with the table") {
  const auto psi = random_payloads(3, 1).front();
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      for (int cc = 0; cc < 4; ++cc) {
        for (int aa = 0; aa < 4; ++aa) {
          auto s = unified_register(psi, BellLabel{mu}, BellLabel{nu});
          s = entanglement_swap_forced(s, kStationCPair, BellLabel{cc}).state;
          s = teleport_forced(s, wire::payload, {wire::a_half, wire::c_near_a}, BellLabel{aa}).state;
          const auto b = reduced_density(s, {wire::b_half});
          const auto t = infer_tau(TwoBits::from_index(aa), TwoBits::from_index(cc), BellLabel{mu}, BellLabel{nu});
          CHECK(max_entry_distance(b, projector(apply_pauli(psi, t, 0))) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("the three expansions reconstruct their states") {
  const auto payloads = random_payloads(kIdentitySeed, kRandomPayloads);
  double worst = 0;
  for (auto mu : kBells) {
    for (auto nu : kBells) {
      const auto t5 = expand_unified(mu, nu, payloads[0]);
      CHECK(t5.size() == 16);
      for (const auto& psi : payloads)
        worst = std::max(worst, max_amplitude_residual(recombine(expand_unified(mu, nu, psi), 0.25),
                                                       unified_register(psi, mu, nu)));
      worst = std::max(worst, max_amplitude_residual(recombine(expand_swapping(mu, nu), 0.5),
                                                     make_register({StateVector::bell(mu), StateVector::bell(nu)})));
    }
    for (const auto& psi : payloads)
      worst = std::max(worst, max_amplitude_residual(recombine(expand_teleportation(psi, mu), 0.5),
                                                     make_register({psi, StateVector::bell(mu)})));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("decomposition terms: labels follow the algebra, corrections are signs") {
  const auto psi = random_payloads(1, 1).front();
  for (auto mu : kBells) {
    for (auto nu : kBells) {
      std::set<std::pair<int, int>> seen;
      for (const auto& t : expand_unified(mu, nu, psi)) {
        CHECK((t.sign_correction == 1 || t.sign_correction == -1));
        seen.insert({t.tau.index(), t.rho.index()});
        CHECK(std::abs(t.term.amplitudes().norm() - 1.0) < 1e-12);
      }
      CHECK(seen.size() == 16);
    }
  }
}

TEST_CASE("a corrupted omega_3 phase breaks the unified decomposition") {
  const auto bad = algebra().with_omega3_sign_fault();
  const auto psi = random_payloads(2, 1).front();
  double worst = 0;
  for (auto mu : kBells)
    for (auto nu : kBells)
      worst = std::max(worst, max_amplitude_residual(recombine(expand_unified(mu, nu, psi, bad), 0.25),
                                                     unified_register(psi, mu, nu)));
  CHECK(worst > 0.1);
}
