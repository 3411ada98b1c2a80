#pragma once

// Small dense state-vector engine. Qubit 0 is the most significant bit of the
// basis index: for n qubits, qubit q of basis index i is (i >> (n - 1 - q)) & 1.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellcrypt/bell_algebra.hpp"
#include "bellcrypt/rng.hpp"

namespace bellcrypt {

using Complex = std::complex<double>;

inline constexpr double kEqualityTol = 1e-12;
inline constexpr double kPsdSlack = 1e-10;
inline constexpr int kMaxQubits = 10;

/// Thrown when a forced measurement outcome has zero probability.
class ZeroProbabilityBranch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StateVector {
 public:
  /// Validates size and unit norm.
  StateVector(int n_qubits, Eigen::VectorXcd amplitudes) : n_(n_qubits), amps_(std::move(amplitudes)) {
    check_size();
    if (std::abs(norm() - 1.0) > 1e-12)
      throw std::invalid_argument("state vector is not normalized (norm " + std::to_string(norm()) + ")");
  }

  /// Skips the normalization check; for intermediate projections.
  static StateVector unnormalized(int n_qubits, Eigen::VectorXcd amplitudes) {
    StateVector s;
    s.n_ = n_qubits;
    s.amps_ = std::move(amplitudes);
    s.check_size();
    return s;
  }

  static StateVector basis(int n_qubits, std::uint64_t index) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) throw std::invalid_argument("unsupported qubit count");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
    if (index >= static_cast<std::uint64_t>(v.size())) throw std::out_of_range("basis index out of range");
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(n_qubits, std::move(v));
  }

  /// Single qubit alpha|0> + beta|1>, normalized here.
  static StateVector qubit(Complex alpha, Complex beta) {
    const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (n == 0.0) throw std::invalid_argument("zero qubit amplitudes");
    Eigen::VectorXcd v(2);
    v << alpha / n, beta / n;
    return StateVector(1, std::move(v));
  }

  /// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
  static StateVector bloch(double theta, double phi) {
    return qubit(std::cos(theta / 2), std::polar(std::sin(theta / 2), phi));
  }

  static StateVector computational(bool bit) { return basis(1, bit ? 1 : 0); }

  static StateVector bell(BellLabel mu) {
    const auto scaled = bell_vector_scaled(mu);
    Eigen::VectorXcd v(4);
    for (int i = 0; i < 4; ++i) v(i) = scaled[i] / std::sqrt(2.0);
    return StateVector(2, std::move(v));
  }

  int n_qubits() const { return n_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex operator[](Eigen::Index i) const { return amps_(i); }
  double norm() const { return amps_.norm(); }

  StateVector normalized() const {
    const double n = norm();
    if (n < 1e-15) throw ZeroProbabilityBranch("cannot normalize a zero vector");
    return StateVector(n_, amps_ / n);
  }

 private:
  StateVector() = default;
  void check_size() const {
    if (n_ < 1 || n_ > kMaxQubits) throw std::invalid_argument("unsupported qubit count " + std::to_string(n_));
    if (amps_.size() != (Eigen::Index{1} << n_)) throw std::invalid_argument("amplitude count does not match 2^n");
  }

  int n_ = 0;
  Eigen::VectorXcd amps_;
};

inline int qubit_bit(std::uint64_t index, int n, int q) { return static_cast<int>((index >> (n - 1 - q)) & 1U); }

inline void check_qubit(const StateVector& s, int q) {
  if (q < 0 || q >= s.n_qubits())
    throw std::out_of_range("qubit index " + std::to_string(q) + " out of range for " +
                            std::to_string(s.n_qubits()) + "-qubit state");
}

inline void check_pair(const StateVector& s, std::pair<int, int> pair) {
  check_qubit(s, pair.first);
  check_qubit(s, pair.second);
  if (pair.first == pair.second) throw std::invalid_argument("Bell pair needs two distinct qubits");
}

/// Tensor product in listed order.
inline StateVector make_register(std::span<const StateVector> parts) {
  if (parts.empty()) throw std::invalid_argument("make_register needs at least one part");
  int n = 0;
  for (const auto& p : parts) n += p.n_qubits();
  if (n > kMaxQubits) throw std::invalid_argument("register exceeds " + std::to_string(kMaxQubits) + " qubits");
  Eigen::VectorXcd acc = parts.front().amplitudes();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto& b = parts[k].amplitudes();
    Eigen::VectorXcd next(acc.size() * b.size());
    for (Eigen::Index i = 0; i < acc.size(); ++i) next.segment(i * b.size(), b.size()) = acc(i) * b;
    acc = std::move(next);
  }
  return StateVector::unnormalized(n, std::move(acc));
}

inline StateVector make_register(std::initializer_list<StateVector> parts) {
  return make_register(std::span<const StateVector>(parts.begin(), parts.size()));
}

inline Eigen::Matrix2cd to_complex(const IntMatrix<2>& m) {
  Eigen::Matrix2cd c;
  c << double(m[0][0]), double(m[0][1]), double(m[1][0]), double(m[1][1]);
  return c;
}

inline StateVector apply_single(const StateVector& s, const Eigen::Matrix2cd& u, int q) {
  check_qubit(s, q);
  const int n = s.n_qubits();
  const std::uint64_t stride = std::uint64_t{1} << (n - 1 - q);
  Eigen::VectorXcd out = s.amplitudes();
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(s.dim()); ++i) {
    if (i & stride) continue;
    const auto i0 = static_cast<Eigen::Index>(i), i1 = static_cast<Eigen::Index>(i | stride);
    const Complex a0 = s[i0], a1 = s[i1];
    out(i0) = u(0, 0) * a0 + u(0, 1) * a1;
    out(i1) = u(1, 0) * a0 + u(1, 1) * a1;
  }
  return StateVector::unnormalized(n, std::move(out));
}

inline StateVector apply_pauli(const StateVector& s, PauliLabel rho, int q) {
  return apply_single(s, to_complex(pauli_matrix(rho)), q);
}

/// <Psi^mu|_pair applied to the state, contracting the pair away. Unnormalized;
/// exact (sign included) when the pair is already in Psi^mu.
inline StateVector contract_bell(const StateVector& s, std::pair<int, int> pair, BellLabel mu) {
  check_pair(s, pair);
  const int n = s.n_qubits();
  if (n < 3) throw std::invalid_argument("contract_bell needs at least one qubit left over");
  const auto bell = bell_vector_scaled(mu);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(Eigen::Index{1} << (n - 2));
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(s.dim()); ++i) {
    const int b = 2 * qubit_bit(i, n, pair.first) + qubit_bit(i, n, pair.second);
    if (bell[b] == 0) continue;
    std::uint64_t rest = 0;
    for (int q = 0; q < n; ++q) {
      if (q == pair.first || q == pair.second) continue;
      rest = (rest << 1) | static_cast<std::uint64_t>(qubit_bit(i, n, q));
    }
    out(static_cast<Eigen::Index>(rest)) += r * bell[b] * s[static_cast<Eigen::Index>(i)];
  }
  return StateVector::unnormalized(n - 2, std::move(out));
}

/// (|Psi^mu><Psi^mu|_pair (x) I) applied to the state; unnormalized, width preserved.
inline StateVector project_bell(const StateVector& s, std::pair<int, int> pair, BellLabel mu) {
  check_pair(s, pair);
  const int n = s.n_qubits();
  const auto bell = bell_vector_scaled(mu);
  const std::uint64_t m1 = std::uint64_t{1} << (n - 1 - pair.first);
  const std::uint64_t m2 = std::uint64_t{1} << (n - 1 - pair.second);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(s.dim());
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(s.dim()); ++i) {
    if ((i & m1) || (i & m2)) continue;  // visit each 4-block once via its 00 member
    const std::array<std::uint64_t, 4> idx{i, i | m2, i | m1, i | m1 | m2};
    Complex overlap = 0;
    for (int b = 0; b < 4; ++b) overlap += 0.5 * bell[b] * s[static_cast<Eigen::Index>(idx[b])];
    for (int b = 0; b < 4; ++b) out(static_cast<Eigen::Index>(idx[b])) = overlap * double(bell[b]);
  }
  return StateVector::unnormalized(n, std::move(out));
}

inline std::array<double, 4> bell_probabilities(const StateVector& s, std::pair<int, int> pair) {
  std::array<double, 4> p{};
  for (auto mu : kBells) p[mu.index()] = project_bell(s, pair, mu).amplitudes().squaredNorm();
  return p;
}

struct BsmOutcome {
  TwoBits bits;
  std::pair<int, int> measured_pair;
  BellLabel label() const { return bell_from_bits(bits); }
};

struct BsmResult {
  BsmOutcome outcome;
  StateVector state;
  double probability;
};

/// Post-selection: project onto the chosen Bell outcome and renormalize.
inline BsmResult bsm_forced(const StateVector& s, std::pair<int, int> pair, BellLabel mu) {
  StateVector projected = project_bell(s, pair, mu);
  const double p = projected.amplitudes().squaredNorm();
  if (p < 1e-15)
    throw ZeroProbabilityBranch("Bell outcome " + std::to_string(mu.index()) + " has zero probability");
  return {BsmOutcome{mu.bits(), pair}, projected.normalized(), p};
}

/// Born-rule sampled label for a probability vector; one uniform draw.
template <std::size_t N>
int sample_index(const std::array<double, N>& probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  int last_nonzero = 0;
  for (std::size_t k = 0; k < N; ++k) {
    if (probs[k] <= 0.0) continue;
    last_nonzero = static_cast<int>(k);
    acc += probs[k];
    if (u < acc) return static_cast<int>(k);
  }
  return last_nonzero;
}

inline BsmResult bsm(const StateVector& s, std::pair<int, int> pair, Rng& rng) {
  const auto probs = bell_probabilities(s, pair);
  return bsm_forced(s, pair, BellLabel{sample_index(probs, rng)});
}

inline std::array<double, 2> z_probabilities(const StateVector& s, int q) {
  check_qubit(s, q);
  std::array<double, 2> p{};
  for (Eigen::Index i = 0; i < s.dim(); ++i)
    p[qubit_bit(static_cast<std::uint64_t>(i), s.n_qubits(), q)] += std::norm(s[i]);
  return p;
}

struct ZResult {
  bool bit;
  StateVector state;
  double probability;
};

inline ZResult measure_z_forced(const StateVector& s, int q, bool bit) {
  check_qubit(s, q);
  Eigen::VectorXcd v = s.amplitudes();
  for (Eigen::Index i = 0; i < s.dim(); ++i)
    if (qubit_bit(static_cast<std::uint64_t>(i), s.n_qubits(), q) != int(bit)) v(i) = 0;
  const double p = v.squaredNorm();
  if (p < 1e-15) throw ZeroProbabilityBranch("computational-basis outcome has zero probability");
  return {bit, StateVector(s.n_qubits(), v / std::sqrt(p)), p};
}

inline ZResult measure_z(const StateVector& s, int q, Rng& rng) {
  return measure_z_forced(s, q, sample_index(z_probabilities(s, q), rng) == 1);
}

/// Result qubit k is input qubit order[k].
inline StateVector permute_qubits(const StateVector& s, std::span<const int> order) {
  const int n = s.n_qubits();
  if (static_cast<int>(order.size()) != n) throw std::invalid_argument("permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (int o : order) {
    if (o < 0 || o >= n || seen[o]) throw std::invalid_argument("not a permutation");
    seen[o] = true;
  }
  Eigen::VectorXcd out(s.dim());
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(s.dim()); ++i) {
    std::uint64_t j = 0;
    for (int k = 0; k < n; ++k) j = (j << 1) | static_cast<std::uint64_t>(qubit_bit(i, n, order[k]));
    out(static_cast<Eigen::Index>(j)) = s[static_cast<Eigen::Index>(i)];
  }
  return StateVector::unnormalized(n, std::move(out));
}

inline StateVector permute_qubits(const StateVector& s, std::initializer_list<int> order) {
  return permute_qubits(s, std::span<const int>(order.begin(), order.size()));
}

/// Inner product <a|b>.
inline Complex inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner product dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left operand
}

inline double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

/// Equality up to a global phase: |<a|b>| = 1 within tol (both assumed normalized).
inline bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol = kEqualityTol) {
  return a.dim() == b.dim() && std::abs(std::abs(inner(a, b)) - 1.0) <= tol;
}

inline double max_amplitude_residual(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("residual dimension mismatch");
  return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

class DensityMatrix {
 public:
  DensityMatrix(int n_qubits, Eigen::MatrixXcd entries) : n_(n_qubits), m_(std::move(entries)) {
    if (n_ < 0 || m_.rows() != (Eigen::Index{1} << n_) || m_.cols() != m_.rows())
      throw std::invalid_argument("density matrix shape does not match 2^n");
  }

  static DensityMatrix maximally_mixed(int n_qubits) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    return DensityMatrix(n_qubits, Eigen::MatrixXcd::Identity(d, d) / double(d));
  }

  int n_qubits() const { return n_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// Hermitian within 1e-12, unit trace within 1e-12, PSD up to kPsdSlack.
  bool is_valid() const {
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > kEqualityTol) return false;
    if (std::abs(m_.trace() - Complex(1.0)) > kEqualityTol) return false;
    return min_eigenvalue() >= -kPsdSlack;
  }

 private:
  int n_;
  Eigen::MatrixXcd m_;
};

inline DensityMatrix projector(const StateVector& s) {
  return DensityMatrix(s.n_qubits(), s.amplitudes() * s.amplitudes().adjoint());
}

/// Sum_i p_i |s_i><s_i|.
inline DensityMatrix mixture_density(std::span<const StateVector> states, std::span<const double> probs) {
  if (states.empty() || states.size() != probs.size())
    throw std::invalid_argument("mixture needs one probability per state");
  double total = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("negative mixture weight");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture probabilities do not sum to 1");
  const int n = states.front().n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(states.front().dim(), states.front().dim());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].n_qubits() != n) throw std::invalid_argument("mixture states differ in dimension");
    m += probs[i] * states[i].amplitudes() * states[i].amplitudes().adjoint();
  }
  return DensityMatrix(n, std::move(m));
}

inline double max_entry_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("density dimension mismatch");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

/// True iff every entry is within tol of I / 2^n.
inline bool is_maximally_mixed(const DensityMatrix& dm, double tol = kEqualityTol) {
  return max_entry_distance(dm, DensityMatrix::maximally_mixed(dm.n_qubits())) <= tol;
}

/// Half the trace norm of a Hermitian matrix.
inline double half_trace_norm(const Eigen::MatrixXcd& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("density dimension mismatch");
  return half_trace_norm(a.matrix() - b.matrix());
}

/// Partial trace keeping `keep` (in the listed order).
inline DensityMatrix reduced_density(const StateVector& s, std::span<const int> keep) {
  const int n = s.n_qubits();
  for (int q : keep) check_qubit(s, q);
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  std::vector<int> order(keep.begin(), keep.end());
  order.insert(order.end(), traced.begin(), traced.end());
  const StateVector permuted = permute_qubits(s, order);
  const Eigen::Index dk = Eigen::Index{1} << keep.size();
  const Eigen::Index dt = Eigen::Index{1} << traced.size();
  // Row-major reshape: amplitude(k * dt + t) -> M(k, t); rho = M M^dagger.
  Eigen::MatrixXcd mat(dk, dt);
  for (Eigen::Index k = 0; k < dk; ++k)
    for (Eigen::Index t = 0; t < dt; ++t) mat(k, t) = permuted[k * dt + t];
  return DensityMatrix(static_cast<int>(keep.size()), mat * mat.adjoint());
}

inline DensityMatrix reduced_density(const StateVector& s, std::initializer_list<int> keep) {
  return reduced_density(s, std::span<const int>(keep.begin(), keep.size()));
}

}  // namespace bellcrypt
