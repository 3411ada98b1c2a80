#include <catch_amalgamated.hpp>

#include <sstream>

#include "bellcrypt/cli.hpp"

using namespace bellcrypt;
using namespace bellcrypt::cli;

namespace {

std::string render(const RunConfig& cfg, int jobs = 1) {
  std::string out;
  render_runs(cfg, [&](const std::string& l) { out += l + "\n"; }, jobs);
  return out;
}

}  // namespace

TEST_CASE("transcript files start with the version header and the config") {
  const auto cfg = RunConfig::parse("protocol=bc\nsecret=1\nseed=7");
  const auto text = render(cfg);
  CHECK(text.rfind("PWV1 transcript\nconfig protocol=bc\n", 0) == 0);
  CHECK(text.find("verdict accept 1\n") != std::string::npos);
  CHECK(text == render(cfg));
}

TEST_CASE("enumerated transcripts list every cell with its exact weight") {
  const auto cfg = RunConfig::parse("protocol=ct\nsecret=0\nmode=enumerate");
  std::vector<std::string> cells;
  const auto sum = render_runs(cfg, [&](const std::string& l) {
    if (l.rfind("cell ", 0) == 0) cells.push_back(l);
  });
  CHECK(sum.cells == 16);
  CHECK(sum.accepted == 16);
  CHECK(cells.size() == 16);
  CHECK(cells.front().find("weight 1/16") != std::string::npos);
  CHECK(render(cfg, 1) == render(cfg, 4));
}

TEST_CASE("sample mode needs a seed") {
  CHECK_THROWS_AS(render(RunConfig::parse("protocol=bc")), ConfigError);
}

TEST_CASE("replay: fresh transcripts are identical for every protocol") {
  for (const char* text : {"protocol=bc\nsecret=1\nseed=7", "protocol=ct\nsecret=0\nseed=2",
                           "protocol=ot\nsecret=1\ninputs=11\nseed=3", "protocol=tpsc\nsecret=0\ninputs=10,01\nseed=4",
                           "protocol=qss\nsecret=qubit:0.5,0.25\nseed=5", "protocol=qds\nk=3\nsecret=011\nseed=6",
                           "protocol=mpsc\nsecret=1\ninputs=10,01,11\nseed=7\nmode=sample:5",
                           "protocol=bc\nsecret=0\nmode=enumerate\nstrategy=aa-substitute"}) {
    std::istringstream in(render(RunConfig::parse(text)));
    const auto r = replay_transcript(in);
    INFO(text);
    CHECK(r.identical);
  }
}

TEST_CASE("replay reports the first divergent event") {
  const auto text = render(RunConfig::parse("protocol=tpsc\nsecret=0\ninputs=10,01\nseed=4"));
  std::vector<std::string> lines;
  std::istringstream split(text);
  for (std::string l; std::getline(split, l);) lines.push_back(l);
  std::size_t event = 0;
  for (auto& l : lines) {
    if (l.rfind("event ", 0) != 0) continue;
    if (event++ == 3) {
      // fields: event <id> <step> <actor> <action> <payload> <channel>
      std::istringstream f(l);
      std::vector<std::string> w;
      for (std::string x; f >> x;) w.push_back(x);
      w[5][0] = w[5][0] == '0' ? '1' : '0';
      l.clear();
      for (std::size_t i = 0; i < w.size(); ++i) l += (i ? " " : "") + w[i];
    }
  }
  std::string edited;
  for (const auto& l : lines) edited += l + "\n";
  std::istringstream in(edited);
  const auto r = replay_transcript(in);
  CHECK_FALSE(r.identical);
  REQUIRE(r.first_event.has_value());
  CHECK(*r.first_event == 3);

  std::istringstream truncated(text.substr(0, text.size() / 2));
  CHECK_FALSE(replay_transcript(truncated).identical);
  std::istringstream extended(text + "event 0 0 x y - local:x\n");
  CHECK_FALSE(replay_transcript(extended).identical);
}

TEST_CASE("replay rejects non-transcripts and bad config blocks") {
  std::istringstream junk("hello\n");
  CHECK_THROWS_AS(replay_transcript(junk), ConfigError);
  std::istringstream bad("PWV1 transcript\nconfig protocol=zzz\n");
  CHECK_THROWS_AS(replay_transcript(bad), ConfigError);
}

TEST_CASE("strategy names resolve through the catalog") {
  CHECK(hooks_for(RunConfig::parse("protocol=bc")).empty());
  CHECK(hooks_for(RunConfig::parse("protocol=bc\nstrategy=reveal-flip")).count("alice.reveal.secret") == 1);
  CHECK_THROWS_AS(hooks_for(RunConfig::parse("protocol=bc\nstrategy=bob-forge")), UnknownStrategy);
}
