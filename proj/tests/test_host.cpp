#include <gtest/gtest.h>

#include "checks.hpp"
#include "pg/server/host.hpp"
#include "support.hpp"

using namespace pg;
using namespace pg::server;
using pgt::kT0;
using pgt::pid;

namespace {

struct Lobby {
  explicit Lobby(GameConfig cfg = pgt::worked_example_config(), HostOptions opts = HostOptions{0, false})
      : host("g", std::move(cfg), TranscriptLog{}, kT0, opts) {}

  GameHost::JoinOutcome join(const std::string& name, const std::string& kind = "HUMAN") {
    auto r = host.handle_join({{"name", name}, {"kind", kind}}, now);
    if (r.player) tokens[*r.player] = r.reply["payload"]["token"];
    collect(r.out);
    return r;
  }
  std::vector<Outbound> send(int who, json frame) {
    auto out = host.dispatch(pid(who), frame, now);
    collect(out);
    return out;
  }
  std::vector<Outbound> tick_to_deadline() {
    now = std::max(now, *host.next_deadline());
    auto out = host.tick(now);
    collect(out);
    return out;
  }
  void collect(const std::vector<Outbound>& out) {
    for (const auto& o : out)
      if (!o.to) broadcast.push_back(o.frame);
  }

  GameHost host;
  TimestampMs now = kT0;
  std::map<PlayerId, std::string> tokens;
  std::vector<json> broadcast;
};

json frame(const std::string& type, json payload = json::object()) { return json{{"type", type}, {"payload", payload}}; }

json submit(int round, const std::vector<std::string>& words) {
  json entries = json::array();
  for (std::size_t i = 0; i < words.size(); ++i) entries.push_back({{"category", i}, {"word", words[i]}});
  return frame("SUBMIT_WORDS", {{"round", round}, {"entries", entries}});
}

const json* find_type(const std::vector<Outbound>& out, const std::string& type) {
  for (const auto& o : out)
    if (o.frame["type"] == type) return &o.frame;
  return nullptr;
}

std::string error_code(const std::vector<Outbound>& out) {
  const json* e = find_type(out, "ERROR");
  return e ? e->at("payload").at("code").get<std::string>() : "";
}

// Five players (p5 artificial), started, p1 holding the worked-example words.
Lobby running_lobby() {
  Lobby l;
  for (const char* n : {"Ada", "Bo", "Cy", "Di"}) l.join(n);
  l.join("Bot", "ARTIFICIAL");
  l.collect(l.host.start(l.now));
  l.send(1, submit(1, pgt::worked_example_words()));
  return l;
}

}  // namespace

TEST(HandleJoin, FirstJoinGetsWelcome) {
  Lobby l;
  const auto r = l.join("Ada");
  ASSERT_TRUE(r.player);
  EXPECT_EQ(r.reply["type"], "WELCOME");
  const auto& p = r.reply["payload"];
  EXPECT_EQ(p["player_id"], "p1");
  EXPECT_EQ(p["roster"].size(), 1u);
  EXPECT_FALSE(p["token"].get<std::string>().empty());
  EXPECT_EQ(p["config"], json(l.host.state().config));
  ASSERT_NE(find_type(r.out, "ROSTER"), nullptr);
  EXPECT_EQ(find_type(r.out, "ROSTER")->at("payload")["roster"].size(), 1u);
}

TEST(HandleJoin, SeventhJoinIsGameFull) {
  Lobby l;
  for (int i = 1; i <= 6; ++i) ASSERT_TRUE(l.join("h" + std::to_string(i)).player);
  const auto r = l.join("h7");
  EXPECT_FALSE(r.player);
  EXPECT_EQ(r.reply["payload"]["code"], "GameFull");
  EXPECT_EQ(l.host.state().participants.size(), 6u);
}

TEST(HandleJoin, NameTakenIgnoresCase) {
  Lobby l;
  l.join("Ada");
  EXPECT_EQ(l.join(" ada ").reply["payload"]["code"], "NameTaken");
  EXPECT_EQ(l.join("").reply["payload"]["code"], "BadFrame");
  EXPECT_EQ(l.join("Eve", "ROBOT").reply["payload"]["code"], "BadFrame");
}

TEST(HandleJoin, TokenReconnectRestoresSameParticipant) {
  auto l = running_lobby();
  l.collect(l.host.disconnect(pid(2), l.now));
  EXPECT_FALSE(l.host.state().participant(pid(2))->connected);
  const auto r = l.host.handle_join({{"token", l.tokens.at(pid(2))}, {"name", "whoever"}, {"kind", "ARTIFICIAL"}}, l.now);
  ASSERT_TRUE(r.player);
  EXPECT_EQ(*r.player, pid(2));
  EXPECT_EQ(r.reply["payload"]["player_id"], "p2");
  const auto* p = l.host.state().participant(pid(2));
  EXPECT_TRUE(p->connected);
  EXPECT_EQ(p->display_name, "Bo");
  EXPECT_EQ(p->kind, Kind::Human);
  // The snapshot shows the rejoiner's own slots only.
  EXPECT_EQ(r.reply["payload"]["snapshot"]["round"]["phase"], "SUBMISSION");
  EXPECT_FALSE(r.reply["payload"]["snapshot"]["round"].contains("entries"));
}

TEST(HandleJoin, MidGameJoinNeedsToken) {
  auto l = running_lobby();
  EXPECT_EQ(l.join("Late").reply["payload"]["code"], "GameStartedNoToken");
  const auto bad = l.host.handle_join({{"token", "not-a-token"}}, l.now);
  EXPECT_EQ(bad.reply["payload"]["code"], "BadToken");
}

TEST(Dispatch, SubmitDuringSubmissionIsAcked) {
  Lobby l;
  for (const char* n : {"Ada", "Bo", "Cy"}) l.join(n);
  l.join("Bot", "ARTIFICIAL");
  l.host.start(l.now);
  const auto out = l.send(2, submit(1, {"fig"}));
  const json* ack = find_type(out, "SUBMITTED");
  ASSERT_NE(ack, nullptr);
  EXPECT_EQ(ack->at("payload")["player"], "p2");
  EXPECT_FALSE(ack->dump().find("fig") != std::string::npos);  // the word itself stays hidden
  EXPECT_EQ(l.host.state().current->submissions.at(pid(2))[0].raw, "fig");
}

TEST(Dispatch, VoteDuringDebateIsWrongPhase) {
  auto l = running_lobby();
  l.tick_to_deadline();
  l.send(2, frame("CHALLENGE", {{"round", 1}, {"author", "p1"}, {"category", 5}}));
  l.tick_to_deadline();
  ASSERT_EQ(l.host.state().current->phase, Phase::Debate);
  const auto before = snapshot_json(l.host.state(), pid(3)).dump();
  const auto log_before = l.host.log().events().size();
  const auto seq_before = l.host.last_seq();
  json v = frame("VOTE", {{"word_ref", {{"round", 1}, {"author", "p1"}, {"category", 5}}}, {"choice", "REJECT"}});
  v["seq"] = 41;
  const auto out = l.send(3, v);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].to, pid(3));
  EXPECT_EQ(out[0].frame["payload"]["code"], "WrongPhase");
  EXPECT_EQ(out[0].frame["payload"]["ref_seq"], 41);
  EXPECT_EQ(snapshot_json(l.host.state(), pid(3)).dump(), before);
  EXPECT_EQ(l.host.log().events().size(), log_before);
  EXPECT_EQ(l.host.last_seq(), seq_before);
}

TEST(Dispatch, MalformedFramesAreBadFrame) {
  auto l = running_lobby();
  EXPECT_EQ(error_code(l.send(2, json::array())), "BadFrame");
  EXPECT_EQ(error_code(l.send(2, frame("DANCE"))), "BadFrame");
  EXPECT_EQ(error_code(l.send(2, frame("SUBMIT_WORDS", {{"round", "one"}}))), "BadFrame");
  EXPECT_EQ(error_code(l.send(2, frame("JOIN", {{"name", "x"}, {"kind", "ARTIFICIAL"}}))), "BadFrame");
  EXPECT_EQ(error_code(l.send(9, frame("LEAVE"))), "NotJoined");
  EXPECT_EQ(l.host.state().participant(pid(2))->kind, Kind::Human);
}

TEST(Dispatch, KindCannotChangeAfterWelcome) {
  auto l = running_lobby();
  l.send(1, frame("JOIN", {{"name", "Ada"}, {"kind", "ARTIFICIAL"}}));
  l.host.disconnect(pid(1), l.now);
  l.host.handle_join({{"token", l.tokens.at(pid(1))}, {"kind", "ARTIFICIAL"}}, l.now);
  for (const char* t : {"SUBMIT_WORDS", "CHALLENGE", "ARGUMENT", "VOTE", "LEAVE"})
    l.send(4, frame(t, {{"kind", "ARTIFICIAL"}}));
  EXPECT_EQ(l.host.state().participant(pid(1))->kind, Kind::Human);
  EXPECT_EQ(l.host.state().participant(pid(4))->kind, Kind::Human);
  EXPECT_EQ(l.host.state().participant(pid(5))->kind, Kind::Artificial);
}

TEST(Dispatch, RacingSubmissionsApplyInArrivalOrder) {
  auto play = [](bool p2_first, TimestampMs jitter) {
    Lobby l;
    for (const char* n : {"Ada", "Bo", "Cy"}) l.join(n);
    l.join("Bot", "ARTIFICIAL");
    l.host.start(l.now);
    const json a = submit(1, {"fig", "Fiji"}), b = submit(1, {"fig", "France"});
    l.now += jitter;
    if (p2_first) {
      l.send(2, b);
      l.send(1, a);
    } else {
      l.send(1, a);
      l.send(2, b);
    }
    std::vector<std::string> order;
    for (const auto& e : l.host.log().events())
      if (e.kind == "SUBMIT_WORDS") order.push_back(e.payload["player_id"]);
    while (!l.host.state().over()) l.tick_to_deadline();
    return std::make_pair(order, scoreboard_json(l.host.state().scoreboard).dump());
  };
  const auto x = play(true, 5), y = play(true, 900);
  EXPECT_EQ(x.first, (std::vector<std::string>{"p2", "p1"}));
  EXPECT_EQ(x, y);
  const auto z = play(false, 5);
  EXPECT_EQ(z.first, (std::vector<std::string>{"p1", "p2"}));
  EXPECT_EQ(z.second, x.second);
}

TEST(Tick, ThreeToOneTallyIsApproved) {
  auto l = running_lobby();
  const auto reveal = l.tick_to_deadline();
  ASSERT_NE(find_type(reveal, "REVEAL"), nullptr);
  EXPECT_EQ(find_type(reveal, "REVEAL")->at("payload")["entries"].size(), 30u);
  l.send(2, frame("CHALLENGE", {{"round", 1}, {"author", "p1"}, {"category", 5}}));
  const auto debate = l.tick_to_deadline();
  ASSERT_NE(find_type(debate, "DEBATE_OPEN"), nullptr);
  const json ref = find_type(debate, "DEBATE_OPEN")->at("payload")["word_ref"];
  EXPECT_EQ(ref, json({{"round", 1}, {"author", "p1"}, {"category", 5}}));
  const auto arg = l.send(1, frame("ARGUMENT", {{"word_ref", ref}, {"text", "fuchsia is a purplish red"}}));
  ASSERT_NE(find_type(arg, "ARGUMENT"), nullptr);
  EXPECT_EQ(find_type(arg, "ARGUMENT")->at("payload")["text"], "fuchsia is a purplish red");
  ASSERT_NE(find_type(l.tick_to_deadline(), "VOTE_OPEN"), nullptr);
  l.send(2, frame("VOTE", {{"word_ref", ref}, {"choice", "REJECT"}}));
  for (int p : {3, 4, 5}) l.send(p, frame("VOTE", {{"word_ref", ref}, {"choice", "APPROVE"}}));
  const auto closed = l.tick_to_deadline();
  const json* tally = find_type(closed, "TALLY");
  ASSERT_NE(tally, nullptr);
  EXPECT_EQ(tally->at("payload")["approve"], 3);
  EXPECT_EQ(tally->at("payload")["reject"], 1);
  EXPECT_EQ(tally->at("payload")["outcome"], "APPROVED");
  const json* scores = find_type(closed, "SCORES");
  ASSERT_NE(scores, nullptr);
  EXPECT_EQ(scores->at("payload")["board"]["p1"], 12);
}

TEST(Tick, TimeUpBroadcastsGameOver) {
  GameConfig cfg = checks::twelve_config();
  cfg.max_game_seconds = 400;
  Lobby l(cfg);
  for (const char* n : {"Ada", "Bo", "Cy"}) l.join(n);
  l.join("Bot", "ARTIFICIAL");
  l.host.start(l.now);
  l.send(1, submit(1, {"fig"}));
  l.now = kT0 + 30LL * 60 * 1000;
  const auto out = l.host.tick(l.now);
  l.collect(out);
  const json* over = find_type(out, "GAME_OVER");
  ASSERT_NE(over, nullptr);
  EXPECT_EQ(over->at("payload")["reason"], "TIME_UP");
  EXPECT_EQ(over->at("payload")["ranking"].size(), 4u);
  EXPECT_EQ(over->at("payload"), codec::result_json(*l.host.state().result));
  EXPECT_LE(l.host.state().result->ranking.size(), 4u);
  EXPECT_EQ(error_code(l.send(2, submit(1, {"fig"}))), "GameOver");
  EXPECT_TRUE(l.host.tick(l.now + 1'000'000).empty());
}

TEST(Host, BroadcastSeqIsGaplessAndLiveMatchesReplay) {
  auto factory = checks::default_factory();
  GameConfig cfg = checks::twelve_config();
  cfg.max_rounds = 2;
  Lobby l(cfg, HostOptions{5'000, true});
  l.join("Ada");
  for (const char* p : {"lexicon", "contrarian", "random"}) {
    std::vector<Outbound> out;
    l.host.seat_bot(factory.make(bot::BotSlot{p, ""}, p, 5), l.now, &out);
    l.collect(out);
  }
  ASSERT_FALSE(l.host.state().started());
  ASSERT_EQ(*l.host.next_deadline(), kT0 + 5'000);
  l.tick_to_deadline();
  ASSERT_TRUE(l.host.state().started());
  l.send(1, submit(1, {"fig", "Fiji"}));
  std::string last_board;
  while (!l.host.state().over()) l.tick_to_deadline();

  ASSERT_FALSE(l.broadcast.empty());
  for (std::size_t i = 0; i < l.broadcast.size(); ++i) {
    EXPECT_EQ(l.broadcast[i]["seq"], i + 1);
    EXPECT_EQ(l.broadcast[i]["game"], "g");
    if (l.broadcast[i]["type"] == "SCORES") last_board = l.broadcast[i]["payload"]["board"].dump();
  }
  EXPECT_EQ(l.broadcast.back()["type"], "GAME_OVER");
  const auto r = replay(l.host.log().events());
  EXPECT_EQ(scoreboard_json(r.state.scoreboard).dump(), last_board);
  EXPECT_EQ(codec::result_json(*r.state.result), codec::result_json(*l.host.state().result));
}

TEST(Host, DisconnectDoesNotStallTheGame) {
  auto l = running_lobby();
  for (int p = 1; p <= 5; ++p) l.host.disconnect(pid(p), l.now);
  int guard = 0;
  while (!l.host.state().over() && guard++ < 100) l.tick_to_deadline();
  EXPECT_TRUE(l.host.state().over());
  EXPECT_EQ(l.host.state().scoreboard.at(pid(1)), 12);
}

TEST(Host, AutostartWhenFull) {
  Lobby l(pgt::worked_example_config(), HostOptions{60'000, true});
  for (const char* n : {"a", "b", "c", "d", "e"}) l.join(n);
  EXPECT_FALSE(l.host.next_deadline());  // no artificial participant yet
  l.join("f", "ARTIFICIAL");
  EXPECT_TRUE(l.host.state().started());
}
