#include <catch_amalgamated.hpp>

#include "bellcrypt/bell_algebra.hpp"
#include "oracle.hpp"

using namespace bellcrypt;

namespace {

oracle::Mat as_oracle(const IntMatrix<2>& m) {
  return {{double(m[0][0]), double(m[0][1])}, {double(m[1][0]), double(m[1][1])}};
}
oracle::Mat as_oracle(const IntMatrix<4>& m) {
  oracle::Mat r(4, std::vector<oracle::C>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r[i][j] = double(m[i][j]);
  return r;
}

}  // namespace

TEST_CASE("pauli matrices follow the I, X, Z, ZX ordering") {
  for (int k = 0; k < 4; ++k) CHECK(oracle::max_diff(as_oracle(pauli_matrix(PauliLabel{k})), oracle::pauli(k)) == 0.0);
  CHECK(pauli_matrix(PauliLabel{3}) == IntMatrix<2>{{{0, 1}, {-1, 0}}});
  CHECK(pauli_matrix(PauliLabel{0}) == identity_matrix<2>());
  for (auto r : kPaulis) CHECK(pauli_matrix(r) * transpose(pauli_matrix(r)) == identity_matrix<2>());
}

TEST_CASE("omega matrices are identity kron pauli") {
  for (int k = 0; k < 4; ++k) CHECK(oracle::max_diff(as_oracle(omega_matrix(PauliLabel{k})), oracle::omega(k)) == 0.0);
  const auto o1 = omega_matrix(PauliLabel{1});
  for (auto [i, j] : {std::pair{0, 1}, {1, 0}, {2, 3}, {3, 2}}) CHECK(o1[i][j] == 1);
  int ones = 0;
  for (auto& row : o1)
    for (int v : row) ones += v;
  CHECK(ones == 4);
  CHECK(omega_matrix(PauliLabel{2}) == IntMatrix<4>{{{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}}});
  CHECK(omega_matrix(PauliLabel{0}) == identity_matrix<4>());
  CHECK(trace(omega_matrix(PauliLabel{0})) == 4);
  for (int k = 1; k < 4; ++k) CHECK(trace(omega_matrix(PauliLabel{k})) == 0);
}

TEST_CASE("omega inner products are 4 delta and sum to 4I") {
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double ref = oracle::trace_re(oracle::mul(oracle::omega(a), oracle::transpose(oracle::omega(b))));
      CHECK(omega_inner(PauliLabel{a}, PauliLabel{b}) == (a == b ? 4 : 0));
      CHECK(omega_inner(PauliLabel{a}, PauliLabel{b}) == ref);
    }
  }
  CHECK(omega_inner(PauliLabel{1}, PauliLabel{2}) == 0);
}

TEST_CASE("bell vectors are orthonormal and match the literal states") {
  for (int m = 0; m < 4; ++m) {
    const auto v = bell_vector_scaled(BellLabel{m});
    const auto ref = oracle::bell(m);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(v[i] * oracle::kR - ref[i]) < 1e-15);
    for (int n = 0; n < 4; ++n) {
      const auto w = bell_vector_scaled(BellLabel{n});
      int dot = 0;
      for (std::size_t i = 0; i < 4; ++i) dot += v[i] * w[i];
      CHECK(dot == (m == n ? 2 : 0));
    }
  }
}

TEST_CASE("omega action on bell states matches the matrix product") {
  for (int r = 0; r < 4; ++r) {
    for (int m = 0; m < 4; ++m) {
      const auto s = apply_omega_to_bell(PauliLabel{r}, BellLabel{m});
      const auto image = oracle::mul(oracle::omega(r), oracle::bell(m));
      CHECK(oracle::sign_relation(image, oracle::bell(s.label.index())) == s.phase);
    }
  }
  for (auto r : kPaulis) {
    const auto s = apply_omega_to_bell(r, BellLabel{r.index()});
    CHECK(s.label == BellLabel{0});
    CHECK(s.phase == 1);
  }
  CHECK(apply_omega_to_bell(PauliLabel{1}, BellLabel{1}).label == BellLabel{0});
  CHECK(apply_omega_to_bell(PauliLabel{0}, BellLabel{2}).label == BellLabel{2});
  CHECK(apply_omega_to_bell(PauliLabel{0}, BellLabel{2}).phase == 1);
  CHECK(apply_omega_to_bell(PauliLabel{3}, BellLabel{0}).label == BellLabel{3});
  CHECK(apply_omega_to_bell(PauliLabel{3}, BellLabel{0}).phase == -1);
}

TEST_CASE("pauli composition is xor on labels with tracked sign") {
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const auto s = pauli_compose(PauliLabel{a}, PauliLabel{b});
      CHECK(s.label.index() == (a ^ b));
      const auto prod = oracle::mul(oracle::pauli(a), oracle::pauli(b));
      const auto target = oracle::pauli(s.label.index());
      oracle::Mat scaled = target;
      for (auto& row : scaled)
        for (auto& v : row) v *= double(s.phase);
      CHECK(oracle::max_diff(prod, scaled) == 0.0);
    }
  }
  CHECK(pauli_compose(PauliLabel{1}, PauliLabel{1}).label == PauliLabel{0});
  CHECK(pauli_compose(PauliLabel{1}, PauliLabel{1}).phase == 1);
  CHECK(pauli_compose(PauliLabel{1}, PauliLabel{2}).label == PauliLabel{3});
  CHECK(pauli_compose(PauliLabel{1}, PauliLabel{2}).phase == -1);
  CHECK(pauli_compose(PauliLabel{2}, PauliLabel{1}).phase == 1);
}

TEST_CASE("code-I and code-II encodings") {
  CHECK(code1_encode(TwoBits::parse("00")) == PauliLabel{0});
  CHECK(code1_encode(TwoBits::parse("11")) == PauliLabel{3});
  for (int i = 0; i < 4; ++i) CHECK(code1_decode(code1_encode(TwoBits::from_index(i))) == TwoBits::from_index(i));
  CHECK(code2_encode(false, false) == PauliLabel{0});
  CHECK(code2_encode(true, false) == PauliLabel{2});
  CHECK(code2_encode(true, true) == PauliLabel{3});
  CHECK(code2_encode(false, true) == PauliLabel{1});
  for (bool m : {false, true})
    for (bool s : {false, true})
      CHECK(oracle::max_diff(as_oracle(pauli_matrix(code2_encode(m, s))), oracle::code2(m, s)) == 0.0);
}

TEST_CASE("labels reject out-of-range indices") {
  CHECK_THROWS_AS(PauliLabel{4}, std::out_of_range);
  CHECK_THROWS_AS(BellLabel{-1}, std::out_of_range);
  CHECK_THROWS_AS(TwoBits::parse("2"), std::invalid_argument);
  CHECK_THROWS_AS(TwoBits::from_index(7), std::out_of_range);
}

TEST_CASE("the fault-injected table differs only in omega_3 phases") {
  const auto& good = algebra();
  const auto bad = good.with_omega3_sign_fault();
  for (auto r : kPaulis) {
    for (auto m : kBells) {
      CHECK(bad.apply(r, m).label == good.apply(r, m).label);
      CHECK(bad.apply(r, m).phase == (r.index() == 3 ? -1 : 1) * good.apply(r, m).phase);
    }
  }
}
