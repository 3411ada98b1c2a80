#pragma once

// The algebraic identity suite: every exact and numeric invariant of the operator
// algebra and the three-station framework, each reported with its worst residual.

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bellcrypt/adversary.hpp"
#include "bellcrypt/bell_algebra.hpp"
#include "bellcrypt/framework.hpp"
#include "bellcrypt/rng.hpp"
#include "bellcrypt/state.hpp"

namespace bellcrypt {

inline constexpr std::uint64_t kIdentitySeed = 20240917;
inline constexpr int kRandomPayloads = 20;

struct IdentityResult {
  std::string name;
  std::string statement;
  std::size_t cases = 0;
  double max_residual = 0.0;
  bool passed = true;
  std::string detail;

  std::string line() const {
    std::ostringstream os;
    os << (passed ? "PASS " : "FAIL ") << name << "  cases=" << cases << "  max_residual=";
    os.precision(3);
    os << std::scientific << max_residual;
    if (!detail.empty()) os << "  " << detail;
    return os.str();
  }
};

/// Haar-distributed single-qubit states from a fixed seed.
inline std::vector<StateVector> random_payloads(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<StateVector> out;
  for (int i = 0; i < count; ++i) {
    const double theta = std::acos(1.0 - 2.0 * rng.uniform());
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    out.push_back(StateVector::bloch(theta, phi));
  }
  return out;
}

namespace detail {

class IdentityCheck {
 public:
  IdentityCheck(std::string name, std::string statement, double tol) : tol_(tol) {
    r_.name = std::move(name);
    r_.statement = std::move(statement);
  }

  void record(double residual) {
    ++r_.cases;
    if (!(residual <= r_.max_residual)) r_.max_residual = residual;  // also captures NaN
    if (!(residual <= tol_)) r_.passed = false;
  }
  void require(bool ok) { record(ok ? 0.0 : 1.0); }
  void note(std::string d) { r_.detail = std::move(d); }
  IdentityResult done() { return std::move(r_); }

 private:
  double tol_;
  IdentityResult r_;
};

inline Eigen::VectorXcd signed_bell(const Signed<BellLabel>& s) {
  return double(s.phase) * StateVector::bell(s.label).amplitudes();
}

}  // namespace detail

/// Runs the full suite against `alg` (normally the generated tables; a corrupted
/// copy demonstrates that the suite catches faults).
inline std::vector<IdentityResult> run_identity_suite(const AlgebraTables& alg = algebra(),
                                                      std::uint64_t seed = kIdentitySeed) {
  using detail::IdentityCheck;
  std::vector<IdentityResult> out;
  const auto payloads = random_payloads(seed, kRandomPayloads);
  const auto& ft = framework_tables();

  {
    IdentityCheck c("omega-orthonormality", "Tr(Omega_r Omega_r'^T) = 4 delta", 0.0);
    for (auto r : kPaulis)
      for (auto r2 : kPaulis) c.record(std::abs(omega_inner(r, r2) - (r == r2 ? 4 : 0)));
    out.push_back(c.done());
  }
  {
    IdentityCheck c("omega-completeness", "sum_r Omega_r Omega_r^T = 4 I", 0.0);
    IntMatrix<4> sum{};
    for (auto r : kPaulis) {
      const auto p = omega_matrix(r) * transpose(omega_matrix(r));
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) sum[i][j] += p[i][j];
    }
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) c.record(std::abs(sum[i][j] - (i == j ? 4 : 0)));
    out.push_back(c.done());
  }
  {
    IdentityCheck c("omega-bell-collapse", "Omega_r Psi^r = +Psi^0", 0.0);
    for (auto r : kPaulis) {
      const auto s = alg.apply(r, BellLabel{r.index()});
      c.require(s.label == BellLabel{0} && s.phase == 1);
    }
    out.push_back(c.done());
  }
  {
    IdentityCheck c("omega-bell-table", "Omega_r Psi^m = phase Psi^m' matches the matrix product", 0.0);
    for (auto r : kPaulis) {
      for (auto m : kBells) {
        const auto s = alg.apply(r, m);
        c.require(detail::equal_up_to_sign(omega_matrix(r) * bell_vector_scaled(m), bell_vector_scaled(s.label),
                                           s.phase));
      }
    }
    out.push_back(c.done());
  }
  {
    IdentityCheck c("pauli-composition", "sigma_a sigma_b = phase sigma_(a xor b)", 0.0);
    for (auto a : kPaulis) {
      for (auto b : kPaulis) {
        const auto s = alg.compose(a, b);
        c.require(s.label == label_xor(a, b) &&
                  detail::equal_up_to_sign(pauli_matrix(a) * pauli_matrix(b), pauli_matrix(s.label), s.phase));
        for (auto d : kPaulis) {
          // associativity up to the product of phases
          const auto ab = alg.compose(a, b), ab_d = alg.compose(ab.label, d);
          const auto bd = alg.compose(b, d), a_bd = alg.compose(a, bd.label);
          c.require(ab_d.label == a_bd.label && ab.phase * ab_d.phase == bd.phase * a_bd.phase);
        }
      }
    }
    out.push_back(c.done());
  }
  {
    IdentityCheck c("unified-decomposition",
                    "|psi> Psi^mu Psi^nu = 1/4 sum_(tau,rho) (Omega_tau Omega_rho Psi^mu)(Omega_rho Psi^nu)(sigma_tau psi)",
                    kEqualityTol);
    for (auto mu : kBells)
      for (auto nu : kBells)
        for (const auto& psi : payloads)
          c.record(max_amplitude_residual(recombine(expand_unified(mu, nu, psi, alg), 0.25),
                                          unified_register(psi, mu, nu)));
    out.push_back(c.done());
  }
  {
    IdentityCheck c("swapping-expansion", "Psi^mu Psi^nu = 1/2 sum_rho (Omega_rho Psi^mu)(Omega_rho Psi^nu)",
                    kEqualityTol);
    for (auto mu : kBells)
      for (auto nu : kBells)
        c.record(max_amplitude_residual(recombine(expand_swapping(mu, nu, alg), 0.5),
                                        make_register({StateVector::bell(mu), StateVector::bell(nu)})));
    out.push_back(c.done());
  }
  {
    IdentityCheck c("teleportation-expansion", "|psi> Psi^mu = 1/2 sum_tau (Omega_tau Psi^mu)(sigma_tau psi)",
                    kEqualityTol);
    for (auto ch : kBells)
      for (const auto& psi : payloads)
        c.record(max_amplitude_residual(recombine(expand_teleportation(psi, ch, alg), 0.5),
                                        make_register({psi, StateVector::bell(ch)})));
    out.push_back(c.done());
  }
  {
    IdentityCheck c("correlation-table", "B holds sigma_tau(aa,cc,mu,nu) |psi> after both Bell measurements",
                    kEqualityTol);
    for (auto mu : kBells) {
      for (auto nu : kBells) {
        for (auto a : kBells) {
          for (auto cc : kBells) {
            const auto& psi = payloads[static_cast<std::size_t>((mu.index() * 4 + nu.index()) % kRandomPayloads)];
            const StateVector after = contract_bell(
                contract_bell(unified_register(psi, mu, nu), kStationCPair, cc), kStationAPair, a);
            const StateVector expected = apply_pauli(psi, infer_tau(a.bits(), cc.bits(), mu, nu), 0);
            const double norm = after.amplitudes().norm();
            c.record(std::abs(norm - 0.25) + (1.0 - std::norm(expected.amplitudes().dot(after.amplitudes())) /
                                                        (norm * norm)));
          }
        }
      }
    }
    out.push_back(c.done());
  }
  {
    IdentityCheck c("swap-uniformity", "C's Bell outcome on Psi^mu Psi^nu has probability 1/4", kEqualityTol);
    for (auto mu : kBells)
      for (auto nu : kBells)
        for (double p : swap_outcome_probabilities(mu, nu)) c.record(std::abs(p - 0.25));
    out.push_back(c.done());
  }
  {
    IdentityCheck c("teleport-uniformity", "A's Bell outcome when teleporting has probability 1/4", kEqualityTol);
    for (auto ch : kBells)
      for (const auto& psi : payloads)
        for (double p : teleport_outcome_probabilities(psi, ch)) c.record(std::abs(p - 0.25));
    out.push_back(c.done());
  }
  {
    IdentityCheck c("swap-mixedness", "A and B's pair averaged over C's outcome is I/4", kEqualityTol);
    for (auto mu : kBells) {
      for (auto nu : kBells) {
        const StateVector pairs = make_register({StateVector::bell(mu), StateVector::bell(nu)});
        const auto probs = bell_probabilities(pairs, {1, 2});
        Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(4, 4);
        for (auto cc : kBells) {
          const auto r = bsm_forced(pairs, {1, 2}, cc);
          avg += probs[static_cast<std::size_t>(cc.index())] * reduced_density(r.state, {0, 3}).matrix();
        }
        c.record(max_entry_distance(DensityMatrix(2, avg), DensityMatrix::maximally_mixed(2)));
      }
    }
    out.push_back(c.done());
  }
  {
    IdentityCheck c("teleport-mixedness", "the far qubit averaged over A's outcome is I/2", kEqualityTol);
    for (auto ch : kBells) {
      for (const auto& psi : payloads) {
        const StateVector reg = make_register({psi, StateVector::bell(ch)});
        const auto probs = bell_probabilities(reg, {0, 1});
        Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(2, 2);
        for (auto a : kBells) {
          if (probs[static_cast<std::size_t>(a.index())] < kZeroProbability) continue;
          const auto r = bsm_forced(reg, {0, 1}, a);
          avg += probs[static_cast<std::size_t>(a.index())] * reduced_density(r.state, {2}).matrix();
        }
        c.record(max_entry_distance(DensityMatrix(1, avg), DensityMatrix::maximally_mixed(1)));
      }
    }
    out.push_back(c.done());
  }
  {
    IdentityCheck c("one-time-pad", "only the uniform four-Pauli set twirls every state to I/2", 0.0);
    for (unsigned mask = 1; mask < 16; ++mask) {
      std::vector<PauliLabel> ops;
      for (auto r : kPaulis)
        if (mask & (1U << r.index())) ops.push_back(r);
      const std::vector<double> probs(ops.size(), 1.0 / static_cast<double>(ops.size()));
      c.require(otp_certify(ops, probs) == (mask == 15));
    }
    out.push_back(c.done());
  }
  {
    IdentityCheck c("pauli-product-identity", "sigma_z^a sigma_x^a' sigma_z^c sigma_x^c' sigma_tau = +-I at mu=nu=0",
                    0.0);
    std::string phases;
    for (auto aa : kBells) {
      for (auto cc : kBells) {
        const auto ab = aa.bits(), cb = cc.bits();
        const auto tau = infer_tau(ab, cb, BellLabel{0}, BellLabel{0});
        const auto m = pauli_matrix(pauli_from_exponents(ab.hi, false)) *
                       pauli_matrix(pauli_from_exponents(false, ab.lo)) *
                       pauli_matrix(pauli_from_exponents(cb.hi, false)) *
                       pauli_matrix(pauli_from_exponents(false, cb.lo)) * pauli_matrix(tau);
        const bool plus = detail::equal_up_to_sign(m, identity_matrix<2>(), 1);
        const bool minus = detail::equal_up_to_sign(m, identity_matrix<2>(), -1);
        c.require(plus || minus);
        phases += plus ? '+' : (minus ? '-' : '?');
      }
    }
    c.note("phases(aa,cc)=" + phases);
    out.push_back(c.done());
  }
  {
    IdentityCheck c("framework-sign-consistency", "sign corrections are +-1 and labels agree with the tables", 0.0);
    for (auto mu : kBells)
      for (auto nu : kBells)
        for (auto t : kPaulis)
          for (auto r : kPaulis) {
            const int s = ft.unified_sign[mu.index()][nu.index()][t.index()][r.index()];
            c.require(s == 1 || s == -1);
          }
    out.push_back(c.done());
  }
  return out;
}

inline bool all_passed(const std::vector<IdentityResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace bellcrypt
