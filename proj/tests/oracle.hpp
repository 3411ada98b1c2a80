#pragma once

// Naive reference implementations for the tests. Plain nested vectors, literal
// matrices, full-operator construction; nothing here uses the library's tables.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;
using Mat = std::vector<std::vector<C>>;

inline const double kR = 1.0 / std::sqrt(2.0);

inline Mat identity(std::size_t n) {
  Mat m(n, std::vector<C>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

/// 0: I, 1: X, 2: Z, 3: ZX.
inline Mat pauli(int k) {
  switch (k) {
    case 0: return {{1, 0}, {0, 1}};
    case 1: return {{0, 1}, {1, 0}};
    case 2: return {{1, 0}, {0, -1}};
    case 3: return {{0, 1}, {-1, 0}};
  }
  throw std::invalid_argument("pauli index");
}

/// (00+11), (01+10), (00-11), (01-10), each over sqrt 2.
inline Vec bell(int k) {
  switch (k) {
    case 0: return {kR, 0, 0, kR};
    case 1: return {0, kR, kR, 0};
    case 2: return {kR, 0, 0, -kR};
    case 3: return {0, kR, -kR, 0};
  }
  throw std::invalid_argument("bell index");
}

inline Mat mul(const Mat& a, const Mat& b) {
  Mat r(a.size(), std::vector<C>(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline Vec mul(const Mat& a, const Vec& v) {
  Vec r(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
  return r;
}

inline Mat transpose(const Mat& a) {
  Mat r(a[0].size(), std::vector<C>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
  return r;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.size() * b.size(), std::vector<C>(a[0].size() * b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k)
        for (std::size_t l = 0; l < b[0].size(); ++l) r[i * b.size() + k][j * b[0].size() + l] = a[i][j] * b[k][l];
  return r;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec r;
  for (const auto& x : a)
    for (const auto& y : b) r.push_back(x * y);
  return r;
}

inline double trace_re(const Mat& a) {
  double t = 0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i].real();
  return t;
}

inline Mat omega(int k) { return kron(identity(2), pauli(k)); }

/// Full operator: `u` on qubit q of n, identity elsewhere (qubit 0 most significant).
inline Mat on_qubit(const Mat& u, int q, int n) {
  Mat r = {{1}};
  for (int i = 0; i < n; ++i) r = kron(r, i == q ? u : identity(2));
  return r;
}

inline double max_diff(const Vec& a, const Vec& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double max_diff(const Mat& a, const Mat& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

/// If v = s * w for a sign s in {+1, -1}, returns s; else 0.
inline int sign_relation(const Vec& v, const Vec& w, double tol = 1e-12) {
  for (int s : {1, -1}) {
    bool ok = true;
    for (std::size_t i = 0; i < v.size() && ok; ++i) ok = std::abs(v[i] - double(s) * w[i]) <= tol;
    if (ok) return s;
  }
  return 0;
}

/// Label XOR on the two-bit indices.
inline int label_xor(int a, int b) { return a ^ b; }

/// The Pauli index relating B's qubit to the payload: the XOR of all four Bell labels.
inline int tau(int aa, int cc, int mu, int nu) { return aa ^ cc ^ mu ^ nu; }

/// sigma_z^m sigma_x^s.
inline Mat code2(bool m, bool s) { return mul(m ? pauli(2) : pauli(0), s ? pauli(1) : pauli(0)); }

/// Computational-basis outcome of a qubit state that is +-|0> or +-|1> (up to phase).
inline bool z_outcome(const Vec& v) {
  if (std::abs(v[1]) < 1e-12 && std::abs(std::abs(v[0]) - 1) < 1e-12) return false;
  if (std::abs(v[0]) < 1e-12 && std::abs(std::abs(v[1]) - 1) < 1e-12) return true;
  throw std::logic_error("oracle state is not a basis state");
}

inline Vec basis_qubit(bool b) { return b ? Vec{0, 1} : Vec{1, 0}; }

/// Two-party computation: Alice's encoded qubit travels through the teleportation
/// relation, Bob's encoding, and both Bell corrections before Alice measures.
inline bool tpsc_f(bool psi, bool a_m, bool a_s, bool b_m, bool b_s, int mu, int nu, int aa, int cc) {
  Mat op = code2(a_m, a_s);
  op = mul(pauli(tau(aa, cc, mu, nu)), op);
  op = mul(code2(b_m, b_s), op);
  op = mul(pauli(cc), op);
  op = mul(pauli(aa), op);
  return z_outcome(mul(op, basis_qubit(psi)));
}

/// Three-party computation: A's, B's and C's encodings with the swapping correction.
inline bool mpsc_f(bool psi, bool a_m, bool a_s, bool b_m, bool b_s, bool c_m, bool c_s, int mu, int nu, int aa,
                   int cc) {
  Mat op = code2(a_m, a_s);
  op = mul(pauli(tau(aa, cc, mu, nu)), op);
  op = mul(code2(b_m, b_s), op);
  op = mul(code2(c_m, c_s), op);
  op = mul(pauli(cc), op);
  return z_outcome(mul(op, basis_qubit(psi)));
}

}  // namespace oracle
