#include <catch_amalgamated.hpp>

#include "bellcrypt/identities.hpp"
#include "bellcrypt/state.hpp"
#include "oracle.hpp"

using namespace bellcrypt;

namespace {

oracle::Vec as_oracle(const StateVector& s) {
  oracle::Vec v;
  for (Eigen::Index i = 0; i < s.dim(); ++i) v.push_back(s[i]);
  return v;
}

}  // namespace

TEST_CASE("register construction is the kronecker product") {
  const auto psi = random_payloads(5, 1).front();
  const auto reg = make_register({psi, StateVector::bell(BellLabel{2})});
  CHECK(reg.n_qubits() == 3);
  CHECK(oracle::max_diff(as_oracle(reg), oracle::kron(as_oracle(psi), oracle::bell(2))) < 1e-15);
}

TEST_CASE("single-qubit paulis act on the addressed wire") {
  const auto reg = make_register({StateVector::computational(false), StateVector::bell(BellLabel{1})});
  for (int q = 0; q < 3; ++q) {
    for (int k = 0; k < 4; ++k) {
      const auto out = apply_pauli(reg, PauliLabel{k}, q);
      const auto ref = oracle::mul(oracle::on_qubit(oracle::pauli(k), q, 3), as_oracle(reg));
      CHECK(oracle::max_diff(as_oracle(out), ref) < 1e-15);
    }
  }
}

TEST_CASE("bell measurement probabilities and collapse") {
  // |0> teleported over Psi^0: every outcome has probability 1/4
  const auto reg = make_register({StateVector::computational(false), StateVector::bell(BellLabel{0})});
  for (double p : bell_probabilities(reg, {0, 1})) CHECK(std::abs(p - 0.25) < 1e-15);
  for (auto mu : kBells) {
    const auto r = bsm_forced(reg, {0, 1}, mu);
    CHECK(std::abs(r.probability - 0.25) < 1e-15);
    CHECK(std::abs(r.state.amplitudes().norm() - 1.0) < 1e-12);
    // the measured pair is left in Psi^mu
    const auto rho = reduced_density(r.state, {0, 1});
    CHECK(max_entry_distance(rho, projector(StateVector::bell(mu))) < 1e-12);
  }
  // a pair already in Psi^2 measures as 2 with certainty
  const auto probs = bell_probabilities(StateVector::bell(BellLabel{2}), {0, 1});
  CHECK(probs[2] == Catch::Approx(1.0));
  CHECK_THROWS_AS(bsm_forced(StateVector::bell(BellLabel{2}), {0, 1}, BellLabel{0}), ZeroProbabilityBranch);
}

TEST_CASE("computational measurement") {
  const auto plus = StateVector::qubit(oracle::kR, oracle::kR);
  const auto p = z_probabilities(plus, 0);
  CHECK(p[0] == Catch::Approx(0.5));
  CHECK(measure_z_forced(plus, 0, true).state[1].real() == Catch::Approx(1.0));
  CHECK_THROWS_AS(measure_z_forced(StateVector::computational(false), 0, true), ZeroProbabilityBranch);
}

TEST_CASE("seeded sampling is reproducible") {
  const auto reg = make_register({StateVector::computational(true), StateVector::bell(BellLabel{3})});
  Rng a(42), b(42);
  for (int i = 0; i < 50; ++i) CHECK(bsm(reg, {0, 1}, a).outcome.label() == bsm(reg, {0, 1}, b).outcome.label());
}

TEST_CASE("density matrices, partial traces and distances") {
  const auto bell = StateVector::bell(BellLabel{0});
  const auto half = reduced_density(bell, {0});
  CHECK(half.is_valid());
  CHECK(is_maximally_mixed(half));
  CHECK(trace_distance(projector(StateVector::computational(false)), projector(StateVector::computational(true))) ==
        Catch::Approx(1.0));
  const std::vector<StateVector> four{StateVector::bell(BellLabel{0}), StateVector::bell(BellLabel{1}),
                                      StateVector::bell(BellLabel{2}), StateVector::bell(BellLabel{3})};
  CHECK(is_maximally_mixed(mixture_density(four, std::vector<double>(4, 0.25))));
  CHECK_THROWS_AS(mixture_density(four, std::vector<double>(4, 0.3)), std::invalid_argument);
}

TEST_CASE("phase-insensitive equality") {
  const auto psi = random_payloads(9, 1).front();
  const StateVector rotated(1, psi.amplitudes() * std::polar(1.0, 0.7));
  CHECK(equal_up_to_phase(psi, rotated));
  CHECK(max_amplitude_residual(psi, rotated) > 0.1);
  CHECK_FALSE(equal_up_to_phase(psi, apply_pauli(psi, PauliLabel{1}, 0)));
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS(StateVector::unnormalized(2, Eigen::VectorXcd::Zero(3)));
  CHECK_THROWS(bell_probabilities(StateVector::bell(BellLabel{0}), {0, 0}));
  CHECK_THROWS(apply_pauli(StateVector::computational(false), PauliLabel{1}, 1));
}
