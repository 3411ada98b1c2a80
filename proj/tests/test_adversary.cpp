#include <catch_amalgamated.hpp>

#include <tuple>

#include "bellcrypt/adversary.hpp"

using namespace bellcrypt;

namespace {

RunConfig config(const std::string& text) { return RunConfig::parse(text); }
const RunMode kEnumerate{RunMode::Kind::Enumerate, 1};

}  // namespace

TEST_CASE("binding attacks on commitment") {
  const auto cfg = config("protocol=bc\nsecret=1");
  const auto flip = run_strategy(cfg, find_strategy(cfg, "reveal-flip"), kEnumerate);
  CHECK(flip.detection_exact == Rational(1, 1));
  CHECK(flip.detected == 16);
  CHECK(flip.size == 16);
  CHECK(flip.within_bound);

  // z-only substitutions of aa' leave every check Bob can make unchanged
  const auto sub = run_strategy(cfg, find_strategy(cfg, "aa-substitute"), kEnumerate);
  CHECK(sub.detection_exact == Rational(2, 3));
  CHECK_FALSE(sub.within_bound);
  CHECK(sub.cells.size() == 48);

  // opening the other bit together with a' flipped passes both checks
  const auto shift = run_strategy(cfg, find_strategy(cfg, "flip-and-shift"), kEnumerate);
  CHECK(shift.detection_exact == Rational(0, 1));
  CHECK_FALSE(shift.within_bound);
}

TEST_CASE("null strategy reproduces honest runs") {
  for (const char* text : {"protocol=bc\nsecret=0", "protocol=ct\nsecret=1", "protocol=mpsc\nsecret=1\ninputs=01,10,11"}) {
    const auto cfg = config(text);
    const auto rep = run_strategy(cfg, find_strategy(cfg, "honest"), kEnumerate);
    CHECK(rep.detection_exact == Rational(0, 1));
    std::vector<std::string> honest;
    enumerate_runs(cfg, [&](const CellInfo&, RunResult&& r) { honest.push_back(r.verdict.str()); });
    REQUIRE(honest.size() == rep.cells.size());
    for (std::size_t i = 0; i < honest.size(); ++i) CHECK(rep.cells[i].verdict == honest[i]);
  }
}

TEST_CASE("coin tossing substitutions are caught half the time") {
  const auto cfg = config("protocol=ct\nsecret=0\nseed=17");
  for (const char* name : {"ct-fixed-qubit", "bob-substitute"}) {
    const auto s = find_strategy(cfg, name);
    const auto exact = run_strategy(cfg, s, kEnumerate);
    CHECK(exact.detection_exact == Rational(1, 2));
    const auto sampled = run_strategy(cfg, s, {RunMode::Kind::Sample, 10000}, 2);
    CHECK(sampled.size == 10000);
    CHECK_FALSE(sampled.detection_exact.has_value());
    CHECK(std::abs(sampled.detection - 0.5) <= 3 * std::sqrt(0.25 / 10000));
    CHECK(sampled.within_bound);
  }
}

TEST_CASE("fixed-qubit substitution: every variant is caught for some committed bit") {
  // Against a fixed qubit, Alice's check fails for at least one of the two secrets
  // in every (variant, outcome) cell.
  std::map<std::tuple<std::uint64_t, int, int>, int> caught;
  const auto strategy = find_strategy(config("protocol=ct"), "ct-fixed-qubit");
  for (std::uint64_t v : strategy.hooks.at("bob.send").variants) {
    const HookSet single{{"bob.send", {DeviationKind::SubstituteQubit, {v}}}};
    for (const char* psi : {"0", "1"}) {
      enumerate_runs(
          config(std::string("protocol=ct\nsecret=") + psi),
          [&](const CellInfo&, RunResult&& r) {
            caught[{v, r.contexts[0].cc.index(), r.contexts[0].aa.index()}] += r.verdict.accepted() ? 0 : 1;
          },
          single);
    }
  }
  CHECK(caught.size() == 8 * 16);
  for (const auto& [path, n] : caught) CHECK(n >= 1);
}

TEST_CASE("sampled estimates are reproducible and independent of jobs") {
  const auto cfg = config("protocol=ct\nsecret=1\nseed=99");
  const auto s = find_strategy(cfg, "bob-substitute");
  const auto a = run_strategy(cfg, s, {RunMode::Kind::Sample, 2000}, 1);
  const auto b = run_strategy(cfg, s, {RunMode::Kind::Sample, 2000}, 3);
  CHECK(a.detected == b.detected);
  auto no_seed = cfg;
  no_seed.seed.reset();
  CHECK_THROWS_AS(run_strategy(no_seed, s, {RunMode::Kind::Sample, 10}), ConfigError);
}

TEST_CASE("hiding suite") {
  struct Case {
    const char* text;
    const char* strategy;
  };
  for (const auto& c : {Case{"protocol=bc\nsecret=0", "bob-pre-reveal"}, Case{"protocol=ot\ninputs=01", "bob-passive"},
                        Case{"protocol=ot\nsecret=1\ninputs=01", "alice-passive"},
                        Case{"protocol=tpsc\nsecret=0\ninputs=01,10", "alice-on-b1"},
                        Case{"protocol=tpsc\nsecret=1\ninputs=01,10", "bob-on-a1"},
                        Case{"protocol=qss\nsecret=0", "bob-alone"}, Case{"protocol=qss\nsecret=0", "charlie-alone"},
                        Case{"protocol=mpsc\nsecret=0\ninputs=01,10,11", "alice-on-bob"},
                        Case{"protocol=mpsc\nsecret=1\ninputs=11,00,01", "bob-on-charlie"},
                        Case{"protocol=mpsc\nsecret=0\ninputs=10,11,00", "charlie-on-alice"}}) {
    const auto cfg = config(c.text);
    const auto rep = run_strategy(cfg, find_strategy(cfg, c.strategy), kEnumerate);
    INFO(c.text << " " << c.strategy);
    REQUIRE(rep.view_distance.has_value());
    CHECK(*rep.view_distance <= 1e-12);
    CHECK(rep.within_bound);
  }
}

TEST_CASE("view distance detects what an observer does learn") {
  const auto cfg = config("protocol=bc\nsecret=0");
  // Alice on her own secret
  CHECK(view_distance(cfg, "alice.pre_reveal", SecretVariation{}) == Catch::Approx(1.0));
  // Bob after the reveal
  CHECK(view_distance(cfg, "bob.final", SecretVariation{}) == Catch::Approx(1.0));
  // QSS: Bob holding both shares
  CHECK(view_distance(config("protocol=qss\nsecret=0"), "bob.final", SecretVariation{}) == Catch::Approx(1.0));
  // TPSC: Alice does learn Bob's second bit
  CHECK(view_distance(config("protocol=tpsc\nsecret=0\ninputs=00,00"), "alice.final",
                      SecretVariation{"input:1", "00", "01"}) == Catch::Approx(1.0));
}

TEST_CASE("view distance requires configs that differ only in secrets") {
  const auto a = config("protocol=bc\nsecret=0");
  auto b = config("protocol=bc\nsecret=1\nmu=2");
  CHECK_THROWS_WITH(view_distance(a, b, "bob.pre_reveal"), Catch::Matchers::ContainsSubstring("mu"));
  CHECK_THROWS(view_distance(a, config("protocol=bc\nsecret=1"), "nobody.ever"));
}

TEST_CASE("secret sharing: skipping the swap leaves Charlie a maximally mixed qubit") {
  for (const char* secret : {"0", "+", "qubit:0.3,2.0"}) {
    const auto cfg = config(std::string("protocol=qss\nsecret=") + secret);
    const auto rep = run_strategy(cfg, find_strategy(cfg, "charlie-skip-bsm"), kEnumerate);
    REQUIRE(rep.recovered_distance.has_value());
    CHECK(*rep.recovered_distance <= 1e-12);
    CHECK(rep.within_bound);
  }
}

TEST_CASE("signature forgery and repudiation are always caught") {
  const auto cfg = config("protocol=qds\nk=2\nsecret=10\nseed=8");
  for (const char* name : {"bob-forge", "alice-repudiate"}) {
    const auto rep = run_strategy(cfg, find_strategy(cfg, name), kEnumerate);
    CHECK(rep.detection_exact == Rational(1, 1));
    CHECK(rep.size == 2 * 16 * 16);
  }
}

TEST_CASE("one-time pad certification") {
  const std::vector<PauliLabel> all{PauliLabel{0}, PauliLabel{1}, PauliLabel{2}, PauliLabel{3}};
  CHECK(otp_certify(all, {0.25, 0.25, 0.25, 0.25}));
  CHECK_FALSE(otp_certify({PauliLabel{0}, PauliLabel{1}}, {0.5, 0.5}));
  CHECK_FALSE(otp_certify({PauliLabel{0}}, {1.0}));
  CHECK_FALSE(otp_certify(all, {0.4, 0.2, 0.2, 0.2}));
  CHECK_FALSE(otp_certify(all, {0.25, 0.25, 0.25}));
}

TEST_CASE("catalog lookups and reports") {
  const auto cfg = config("protocol=bc\nsecret=1");
  CHECK_THROWS_AS(find_strategy(cfg, "nope"), UnknownStrategy);
  CHECK_THROWS_AS(run_strategy(config("protocol=ct"), find_strategy(cfg, "reveal-flip"), kEnumerate),
                  UnknownStrategy);
  for (const auto& p : protocol_names()) {
    auto c = cfg;
    c.protocol = p;
    for (const auto& s : strategy_catalog(c)) CHECK_NOTHROW(validate_hooks(s.hooks, hook_points(p), p));
  }
  const auto text = run_strategy(cfg, find_strategy(cfg, "reveal-flip"), kEnumerate).to_text();
  CHECK(text.rfind("PWV1 report\n", 0) == 0);
  CHECK(text.find("detection 1/1") != std::string::npos);
  CHECK(text.find("scope ") != std::string::npos);
  CHECK(text.find("summary reveal-flip | bc | 1/1 | 1.000000 | within bound") != std::string::npos);
}
