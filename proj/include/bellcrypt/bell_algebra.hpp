#pragma once

// Exact label algebra for the four real Pauli operators, the Omega = I (x) sigma
// operators acting on the second half of a Bell pair, and the four Bell states.
//
// Label ordering is NOT the textbook (I, X, Y, Z) ordering:
//   0 -> identity, 1 -> sigma_x, 2 -> sigma_z, 3 -> sigma_z sigma_x = [[0,1],[-1,0]]
// With that ordering the label index is the two-bit string (z, x), and sigma_label
// equals sigma_z^z sigma_x^x exactly (no hidden phase).

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bellcrypt {

/// Classical two-bit string. `hi` is the first printed bit, `lo` the second.
struct TwoBits {
  bool hi = false;
  bool lo = false;

  constexpr TwoBits() = default;
  constexpr TwoBits(bool h, bool l) : hi(h), lo(l) {}

  static constexpr TwoBits from_index(int v) {
    if (v < 0 || v > 3) throw std::out_of_range("TwoBits index out of range: " + std::to_string(v));
    return TwoBits{(v & 2) != 0, (v & 1) != 0};
  }
  static TwoBits parse(std::string_view s) {
    if (s.size() != 2 || (s[0] != '0' && s[0] != '1') || (s[1] != '0' && s[1] != '1'))
      throw std::invalid_argument("expected a two-bit string like 01, got '" + std::string(s) + "'");
    return TwoBits{s[0] == '1', s[1] == '1'};
  }

  constexpr int index() const { return (hi ? 2 : 0) | (lo ? 1 : 0); }
  std::string str() const { return {hi ? '1' : '0', lo ? '1' : '0'}; }

  constexpr TwoBits operator^(TwoBits o) const { return TwoBits{hi != o.hi, lo != o.lo}; }
  constexpr bool operator==(const TwoBits&) const = default;
};

namespace detail {
template <class Tag>
class Label4 {
 public:
  constexpr Label4() = default;
  constexpr explicit Label4(int index) : index_(checked(index)) {}

  constexpr int index() const { return index_; }
  /// Code-I bits of this label.
  constexpr TwoBits bits() const { return TwoBits::from_index(index_); }
  /// Exponent of sigma_z in sigma_z^z sigma_x^x.
  constexpr bool z_bit() const { return (index_ & 2) != 0; }
  /// Exponent of sigma_x; flips a computational-basis bit.
  constexpr bool x_bit() const { return (index_ & 1) != 0; }

  constexpr bool operator==(const Label4&) const = default;
  constexpr auto operator<=>(const Label4&) const = default;

 private:
  static constexpr int checked(int i) {
    if (i < 0 || i > 3) throw std::out_of_range("label index must be in 0..3, got " + std::to_string(i));
    return i;
  }
  int index_ = 0;
};
struct PauliTag {};
struct BellTag {};
}  // namespace detail

using PauliLabel = detail::Label4<detail::PauliTag>;
using BellLabel = detail::Label4<detail::BellTag>;

inline constexpr std::array<PauliLabel, 4> kPaulis{PauliLabel{0}, PauliLabel{1}, PauliLabel{2}, PauliLabel{3}};
inline constexpr std::array<BellLabel, 4> kBells{BellLabel{0}, BellLabel{1}, BellLabel{2}, BellLabel{3}};

/// An operator or state label together with the +-1 phase the all-real algebra produces.
template <class Label>
struct Signed {
  Label label;
  int phase = 1;
  constexpr bool operator==(const Signed&) const = default;
};

template <std::size_t N>
using IntMatrix = std::array<std::array<int, N>, N>;
template <std::size_t N>
using IntVector = std::array<int, N>;

template <std::size_t N>
constexpr IntMatrix<N> identity_matrix() {
  IntMatrix<N> m{};
  for (std::size_t i = 0; i < N; ++i) m[i][i] = 1;
  return m;
}

template <std::size_t N>
constexpr IntMatrix<N> operator*(const IntMatrix<N>& a, const IntMatrix<N>& b) {
  IntMatrix<N> c{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k)
      for (std::size_t j = 0; j < N; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

template <std::size_t N>
constexpr IntVector<N> operator*(const IntMatrix<N>& a, const IntVector<N>& v) {
  IntVector<N> r{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r[i] += a[i][j] * v[j];
  return r;
}

template <std::size_t N>
constexpr IntMatrix<N> transpose(const IntMatrix<N>& a) {
  IntMatrix<N> t{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) t[j][i] = a[i][j];
  return t;
}

template <std::size_t N>
constexpr int trace(const IntMatrix<N>& a) {
  int t = 0;
  for (std::size_t i = 0; i < N; ++i) t += a[i][i];
  return t;
}

template <std::size_t N>
constexpr IntMatrix<2 * N> kron(const IntMatrix<2>& a, const IntMatrix<N>& b) {
  IntMatrix<2 * N> k{};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t p = 0; p < N; ++p)
        for (std::size_t q = 0; q < N; ++q) k[i * N + p][j * N + q] = a[i][j] * b[p][q];
  return k;
}

constexpr IntMatrix<2> pauli_matrix(PauliLabel rho) {
  switch (rho.index()) {
    case 0: return {{{1, 0}, {0, 1}}};
    case 1: return {{{0, 1}, {1, 0}}};
    case 2: return {{{1, 0}, {0, -1}}};
    default: return {{{0, 1}, {-1, 0}}};
  }
}

/// Omega_rho = sigma_0 (x) sigma_rho.
constexpr IntMatrix<4> omega_matrix(PauliLabel rho) { return kron(identity_matrix<2>(), pauli_matrix(rho)); }

/// Bell vector scaled by sqrt(2); amplitudes are these entries divided by sqrt(2).
/// Basis order |00>, |01>, |10>, |11> with the first qubit most significant.
constexpr IntVector<4> bell_vector_scaled(BellLabel mu) {
  switch (mu.index()) {
    case 0: return {1, 0, 0, 1};
    case 1: return {0, 1, 1, 0};
    case 2: return {1, 0, 0, -1};
    default: return {0, 1, -1, 0};
  }
}

/// Tr(Omega_rho Omega_rho'^T).
constexpr int omega_inner(PauliLabel rho, PauliLabel rho2) {
  return trace(omega_matrix(rho) * transpose(omega_matrix(rho2)));
}

namespace detail {
template <std::size_t N>
constexpr bool equal_up_to_sign(const IntMatrix<N>& a, const IntMatrix<N>& b, int sign) {
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (a[i][j] != sign * b[i][j]) return false;
  return true;
}
template <std::size_t N>
constexpr bool equal_up_to_sign(const IntVector<N>& a, const IntVector<N>& b, int sign) {
  for (std::size_t i = 0; i < N; ++i)
    if (a[i] != sign * b[i]) return false;
  return true;
}
}  // namespace detail

/// Lookup tables for the label algebra, generated from the integer matrices.
struct AlgebraTables {
  /// omega_on_bell[rho][mu]: Omega_rho Psi^mu = phase * Psi^label.
  std::array<std::array<Signed<BellLabel>, 4>, 4> omega_on_bell{};
  /// pauli_product[r1][r2]: sigma_r1 sigma_r2 = phase * sigma_label.
  std::array<std::array<Signed<PauliLabel>, 4>, 4> pauli_product{};

  static AlgebraTables generate() {
    AlgebraTables t;
    for (auto rho : kPaulis) {
      for (auto mu : kBells) {
        const auto image = omega_matrix(rho) * bell_vector_scaled(mu);
        bool found = false;
        for (auto nu : kBells) {
          for (int sign : {1, -1}) {
            if (!found && detail::equal_up_to_sign(image, bell_vector_scaled(nu), sign)) {
              t.omega_on_bell[rho.index()][mu.index()] = {nu, sign};
              found = true;
            }
          }
        }
        if (!found) throw std::logic_error("Omega image of a Bell state is not a signed Bell state");
      }
      for (auto rho2 : kPaulis) {
        const auto product = pauli_matrix(rho) * pauli_matrix(rho2);
        bool found = false;
        for (auto r3 : kPaulis) {
          for (int sign : {1, -1}) {
            if (!found && detail::equal_up_to_sign(product, pauli_matrix(r3), sign)) {
              t.pauli_product[rho.index()][rho2.index()] = {r3, sign};
              found = true;
            }
          }
        }
        if (!found) throw std::logic_error("Pauli product is not a signed Pauli");
      }
    }
    return t;
  }

  /// Copy of these tables with the phase of every Omega_3 entry negated.
  /// Exists only so the identity suite can demonstrate that it catches table corruption.
  AlgebraTables with_omega3_sign_fault() const {
    AlgebraTables f = *this;
    for (auto& entry : f.omega_on_bell[3]) entry.phase = -entry.phase;
    return f;
  }

  Signed<BellLabel> apply(PauliLabel rho, BellLabel mu) const { return omega_on_bell[rho.index()][mu.index()]; }
  Signed<BellLabel> apply(PauliLabel rho, Signed<BellLabel> s) const {
    auto r = apply(rho, s.label);
    return {r.label, r.phase * s.phase};
  }
  Signed<PauliLabel> compose(PauliLabel a, PauliLabel b) const { return pauli_product[a.index()][b.index()]; }
};

inline const AlgebraTables& algebra() {
  static const AlgebraTables tables = AlgebraTables::generate();
  return tables;
}

inline Signed<BellLabel> apply_omega_to_bell(PauliLabel rho, BellLabel mu) { return algebra().apply(rho, mu); }

inline Signed<PauliLabel> pauli_compose(PauliLabel a, PauliLabel b) { return algebra().compose(a, b); }

/// Code-I: 00 -> sigma_0, 01 -> sigma_1, 10 -> sigma_2, 11 -> sigma_3.
constexpr PauliLabel code1_encode(TwoBits ms) { return PauliLabel{ms.index()}; }
constexpr TwoBits code1_decode(PauliLabel rho) { return rho.bits(); }

/// Code-II: sigma_ms = sigma_z^m sigma_x^s.
constexpr PauliLabel code2_encode(bool m, bool s) { return PauliLabel{(m ? 2 : 0) | (s ? 1 : 0)}; }

/// Label of sigma_z^z sigma_x^x; identical to Code-II with (m, s) = (z, x).
constexpr PauliLabel pauli_from_exponents(bool z, bool x) { return code2_encode(z, x); }

/// Label of a BSM outcome under Code-I.
constexpr BellLabel bell_from_bits(TwoBits b) { return BellLabel{b.index()}; }

/// Label-level XOR, the Klein four-group law underlying pauli_compose.
template <class L>
constexpr L label_xor(L a, L b) {
  return L{a.index() ^ b.index()};
}

}  // namespace bellcrypt
