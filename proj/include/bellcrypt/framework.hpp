#pragma once

// Entanglement swapping, teleportation and the sixteen-term decomposition of the
// three-station system |psi> (x) Psi^mu (x) Psi^nu.
//
// Wire layout of the five-qubit system:
//   0: payload |psi> at station A
//   1: A half of Psi^mu      2: C half of Psi^mu
//   3: C half of Psi^nu      4: B half of Psi^nu
// Station C measures (2, 3); station A measures (0, 1); wire 4 is B's qubit.

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellcrypt/bell_algebra.hpp"
#include "bellcrypt/state.hpp"

namespace bellcrypt {

namespace wire {
inline constexpr int payload = 0;
inline constexpr int a_half = 1;
inline constexpr int c_near_a = 2;
inline constexpr int c_near_b = 3;
inline constexpr int b_half = 4;
}  // namespace wire

inline constexpr std::pair<int, int> kStationAPair{wire::payload, wire::a_half};
inline constexpr std::pair<int, int> kStationCPair{wire::c_near_a, wire::c_near_b};

inline StateVector unified_register(const StateVector& psi, BellLabel mu, BellLabel nu) {
  if (psi.n_qubits() != 1) throw std::invalid_argument("payload must be a single qubit");
  return make_register({psi, StateVector::bell(mu), StateVector::bell(nu)});
}

namespace detail {

/// Finds (tau, s) with the 2x2 matrix m = (s * scale) sigma_tau, or throws.
inline std::pair<PauliLabel, int> match_signed_pauli(const Eigen::Matrix2cd& m, double scale) {
  for (auto tau : kPaulis) {
    const Eigen::Matrix2cd p = to_complex(pauli_matrix(tau)) * scale;
    for (int s : {1, -1}) {
      if ((m - double(s) * p).cwiseAbs().maxCoeff() < 1e-12) return {tau, s};
    }
  }
  throw std::logic_error("residual operator is not a signed Pauli");
}

inline std::pair<BellLabel, int> match_signed_bell(const StateVector& v, double scale) {
  for (auto mu : kBells) {
    const Eigen::VectorXcd b = StateVector::bell(mu).amplitudes() * scale;
    for (int s : {1, -1}) {
      if ((v.amplitudes() - double(s) * b).cwiseAbs().maxCoeff() < 1e-12) return {mu, s};
    }
  }
  throw std::logic_error("residual state is not a signed Bell state");
}

/// Columns are the images of |0> and |1> under a linear map built by `f`.
template <class F>
Eigen::Matrix2cd operator_on_payload(F&& f) {
  Eigen::Matrix2cd m;
  for (int b = 0; b < 2; ++b) {
    const StateVector out = f(StateVector::computational(b == 1));
    if (out.n_qubits() != 1) throw std::logic_error("payload map must return one qubit");
    m(0, b) = out[0];
    m(1, b) = out[1];
  }
  return m;
}

}  // namespace detail

/// Correlation and sign tables of the three-station system, generated once by
/// contracting the Bell projections and checked against the label algebra.
struct FrameworkTables {
  template <class T>
  using T4 = std::array<std::array<std::array<std::array<T, 4>, 4>, 4>, 4>;
  template <class T>
  using T3 = std::array<std::array<std::array<T, 4>, 4>, 4>;
  template <class T>
  using T2 = std::array<std::array<T, 4>, 4>;

  /// tau[mu][nu][aa][cc]: B's qubit is sigma_tau |psi> up to the sign in residual_sign.
  T4<PauliLabel> tau{};
  /// <Psi^aa|_{01} <Psi^cc|_{23} applied to the system equals residual_sign / 4 * sigma_tau.
  T4<int> residual_sign{};
  /// Sign correction of term (tau, rho) of the printed sixteen-term expansion.
  T4<int> unified_sign{};

  /// swapped[mu][nu][cc]: Bell label shared by A and B after C's outcome cc.
  T3<BellLabel> swapped{};
  T3<int> swap_residual_sign{};
  /// Sign correction of term rho of the printed swapping expansion.
  T3<int> swapping_sign{};

  /// teleport_tau[channel][aa]: far qubit is sigma_tau |psi> after A's outcome aa.
  T2<PauliLabel> teleport_tau{};
  T2<int> teleport_residual_sign{};
  /// Sign correction of term tau of the printed teleportation expansion.
  T2<int> teleportation_sign{};

  static FrameworkTables generate(const AlgebraTables& alg) {
    FrameworkTables t;
    for (auto mu : kBells) {
      for (auto nu : kBells) {
        for (auto a : kBells) {
          for (auto c : kBells) {
            const auto m = detail::operator_on_payload([&](const StateVector& psi) {
              return contract_bell(contract_bell(unified_register(psi, mu, nu), kStationCPair, c), {0, 1}, a);
            });
            const auto [tau, s] = detail::match_signed_pauli(m, 0.25);
            t.tau[mu.index()][nu.index()][a.index()][c.index()] = tau;
            t.residual_sign[mu.index()][nu.index()][a.index()][c.index()] = s;
          }
        }
        for (auto tau : kPaulis) {
          for (auto rho : kPaulis) {
            const auto af = alg.apply(tau, alg.apply(rho, mu));
            const auto cf = alg.apply(rho, nu);
            const int ai = af.label.index(), ci = cf.label.index();
            if (t.tau[mu.index()][nu.index()][ai][ci] != tau)
              throw std::logic_error("decomposition labels disagree with the contracted correlation table");
            t.unified_sign[mu.index()][nu.index()][tau.index()][rho.index()] =
                t.residual_sign[mu.index()][nu.index()][ai][ci] * af.phase * cf.phase;
          }
        }

        const StateVector pairs = make_register({StateVector::bell(mu), StateVector::bell(nu)});
        for (auto c : kBells) {
          const auto [d, s] = detail::match_signed_bell(contract_bell(pairs, {1, 2}, c), 0.5);
          t.swapped[mu.index()][nu.index()][c.index()] = d;
          t.swap_residual_sign[mu.index()][nu.index()][c.index()] = s;
        }
        for (auto rho : kPaulis) {
          const auto ab = alg.apply(rho, mu);
          const auto cf = alg.apply(rho, nu);
          if (t.swapped[mu.index()][nu.index()][cf.label.index()] != ab.label)
            throw std::logic_error("swapping expansion labels disagree with the contraction");
          t.swapping_sign[mu.index()][nu.index()][rho.index()] =
              t.swap_residual_sign[mu.index()][nu.index()][cf.label.index()] * ab.phase * cf.phase;
        }
      }

      for (auto a : kBells) {
        const auto m = detail::operator_on_payload([&](const StateVector& psi) {
          return contract_bell(make_register({psi, StateVector::bell(mu)}), {0, 1}, a);
        });
        const auto [tau, s] = detail::match_signed_pauli(m, 0.5);
        t.teleport_tau[mu.index()][a.index()] = tau;
        t.teleport_residual_sign[mu.index()][a.index()] = s;
      }
      for (auto tau : kPaulis) {
        const auto af = alg.apply(tau, mu);
        if (t.teleport_tau[mu.index()][af.label.index()] != tau)
          throw std::logic_error("teleportation expansion labels disagree with the contraction");
        t.teleportation_sign[mu.index()][tau.index()] = t.teleport_residual_sign[mu.index()][af.label.index()] * af.phase;
      }
    }
    return t;
  }
};

inline const FrameworkTables& framework_tables() {
  static const FrameworkTables tables = FrameworkTables::generate(algebra());
  return tables;
}

/// The Pauli relating B's qubit to the payload after C reports cc and A reports aa.
inline PauliLabel infer_tau(TwoBits aa, TwoBits cc, BellLabel mu, BellLabel nu) {
  return framework_tables().tau[mu.index()][nu.index()][aa.index()][cc.index()];
}

/// Bell label left between A and B when C's BSM on Psi^mu (x) Psi^nu yields cc.
inline BellLabel swapped_label(TwoBits cc, BellLabel mu, BellLabel nu) {
  return framework_tables().swapped[mu.index()][nu.index()][cc.index()];
}

/// The Pauli on the far qubit after teleporting over Psi^channel with A's outcome aa.
inline PauliLabel teleport_tau(TwoBits aa, BellLabel channel) {
  return framework_tables().teleport_tau[channel.index()][aa.index()];
}

/// BSM on C's two qubits, entangling the two outer halves.
inline BsmResult entanglement_swap(const StateVector& s, std::pair<int, int> c_pair, Rng& rng) {
  return bsm(s, c_pair, rng);
}

inline BsmResult entanglement_swap_forced(const StateVector& s, std::pair<int, int> c_pair, BellLabel outcome) {
  return bsm_forced(s, c_pair, outcome);
}

/// BSM on (source, near half of the channel). The far half then carries sigma_tau |psi>.
inline BsmResult teleport(const StateVector& s, int source, std::pair<int, int> channel_pair, Rng& rng) {
  return bsm(s, {source, channel_pair.first}, rng);
}

inline BsmResult teleport_forced(const StateVector& s, int source, std::pair<int, int> channel_pair,
                                 BellLabel outcome) {
  return bsm_forced(s, {source, channel_pair.first}, outcome);
}

/// Analytic outcome distribution of C's BSM on Psi^mu (x) Psi^nu.
inline std::array<double, 4> swap_outcome_probabilities(BellLabel mu, BellLabel nu) {
  return bell_probabilities(make_register({StateVector::bell(mu), StateVector::bell(nu)}), {1, 2});
}

/// Analytic outcome distribution of A's BSM when teleporting psi over Psi^channel.
inline std::array<double, 4> teleport_outcome_probabilities(const StateVector& psi, BellLabel channel) {
  return bell_probabilities(make_register({psi, StateVector::bell(channel)}), {0, 1});
}

struct DecompositionTerm {
  PauliLabel tau;  // teleportation index (identity for the swapping expansion)
  PauliLabel rho;  // swapping index (identity for the teleportation expansion)
  int sign_correction;
  StateVector term;  // the printed product term, unweighted
};

/// The sixteen product terms (Omega_tau Omega_rho Psi^mu)_{01} (x) (Omega_rho Psi^nu)_{23} (x)
/// (sigma_tau psi)_4. Sum of sign_correction * term / 4 reproduces the input system.
/// Factor phases come from `alg`; sign corrections are the generated ones.
inline std::vector<DecompositionTerm> expand_unified(BellLabel mu, BellLabel nu, const StateVector& psi,
                                                 const AlgebraTables& alg = algebra()) {
  if (psi.n_qubits() != 1) throw std::invalid_argument("payload must be a single qubit");
  const auto& ft = framework_tables();
  std::vector<DecompositionTerm> terms;
  terms.reserve(16);
  for (auto tau : kPaulis) {
    for (auto rho : kPaulis) {
      const auto af = alg.apply(tau, alg.apply(rho, mu));
      const auto cf = alg.apply(rho, nu);
      const StateVector a_state =
          StateVector::unnormalized(2, double(af.phase) * StateVector::bell(af.label).amplitudes());
      const StateVector c_state =
          StateVector::unnormalized(2, double(cf.phase) * StateVector::bell(cf.label).amplitudes());
      terms.push_back({tau, rho, ft.unified_sign[mu.index()][nu.index()][tau.index()][rho.index()],
                       make_register({a_state, c_state, apply_pauli(psi, tau, 0)})});
    }
  }
  return terms;
}

/// (Omega_rho Psi^mu) on wires (0, 3) with (Omega_rho Psi^nu) on wires (1, 2), in wire order.
inline std::vector<DecompositionTerm> expand_swapping(BellLabel mu, BellLabel nu, const AlgebraTables& alg = algebra()) {
  const auto& ft = framework_tables();
  std::vector<DecompositionTerm> terms;
  for (auto rho : kPaulis) {
    const auto ab = alg.apply(rho, mu);
    const auto cf = alg.apply(rho, nu);
    const StateVector product = make_register(
        {StateVector::unnormalized(2, double(ab.phase) * StateVector::bell(ab.label).amplitudes()),
         StateVector::unnormalized(2, double(cf.phase) * StateVector::bell(cf.label).amplitudes())});
    // product qubits are (A, B, C1, C2); wire order is (A, C1, C2, B).
    terms.push_back({PauliLabel{0}, rho, ft.swapping_sign[mu.index()][nu.index()][rho.index()],
                     permute_qubits(product, {0, 2, 3, 1})});
  }
  return terms;
}

/// (Omega_tau Psi^channel)_{01} (x) (sigma_tau psi)_2.
inline std::vector<DecompositionTerm> expand_teleportation(const StateVector& psi, BellLabel channel,
                                                  const AlgebraTables& alg = algebra()) {
  if (psi.n_qubits() != 1) throw std::invalid_argument("payload must be a single qubit");
  const auto& ft = framework_tables();
  std::vector<DecompositionTerm> terms;
  for (auto tau : kPaulis) {
    const auto af = alg.apply(tau, channel);
    terms.push_back({tau, PauliLabel{0}, ft.teleportation_sign[channel.index()][tau.index()],
                     make_register({StateVector::unnormalized(
                                        2, double(af.phase) * StateVector::bell(af.label).amplitudes()),
                                    apply_pauli(psi, tau, 0)})});
  }
  return terms;
}

/// Sum of sign_correction * term * weight.
inline StateVector recombine(const std::vector<DecompositionTerm>& terms, double weight) {
  if (terms.empty()) throw std::invalid_argument("nothing to recombine");
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(terms.front().term.dim());
  for (const auto& t : terms) acc += double(t.sign_correction) * weight * t.term.amplitudes();
  return StateVector::unnormalized(terms.front().term.n_qubits(), std::move(acc));
}

}  // namespace bellcrypt
