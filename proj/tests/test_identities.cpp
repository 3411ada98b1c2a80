#include <catch_amalgamated.hpp>

#include <set>

#include "bellcrypt/identities.hpp"

using namespace bellcrypt;

TEST_CASE("the identity suite passes on the generated tables") {
  const auto results = run_identity_suite();
  CHECK(results.size() >= 15);
  for (const auto& r : results) {
    INFO(r.line());
    CHECK(r.passed);
    CHECK(r.max_residual < 1e-12);
    CHECK(r.cases > 0);
  }
  CHECK(all_passed(results));
}

TEST_CASE("an omega_3 sign fault is caught by name") {
  const auto results = run_identity_suite(algebra().with_omega3_sign_fault());
  CHECK_FALSE(all_passed(results));
  std::set<std::string> failed;
  for (const auto& r : results)
    if (!r.passed) failed.insert(r.name);
  CHECK(failed.count("unified-decomposition") == 1);
  CHECK(failed.count("omega-bell-table") == 1);
  CHECK(failed.count("omega-orthonormality") == 0);
}

TEST_CASE("payload generation is seeded") {
  const auto a = random_payloads(4, 5), b = random_payloads(4, 5), c = random_payloads(5, 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a[i].amplitudes() == b[i].amplitudes());
    CHECK(std::abs(a[i].amplitudes().norm() - 1.0) < 1e-12);
  }
  CHECK(a[0].amplitudes() != c[0].amplitudes());
}

TEST_CASE("the product identity records its phases") {
  for (const auto& r : run_identity_suite()) {
    if (r.name != "pauli-product-identity") continue;
    CHECK(r.cases == 16);
    CHECK(r.detail.rfind("phases(aa,cc)=", 0) == 0);
    CHECK(r.detail.size() == std::string("phases(aa,cc)=").size() + 16);
  }
}
