#include <gtest/gtest.h>

#include "checks.hpp"
#include "support.hpp"

using namespace pg;
using pgt::pid;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::CorruptLog;
}

RoundState f_round(int players = 5, std::size_t categories = 6) {
  return make_round(1, "F", pgt::roster(players), categories, pgt::kT0 + 180'000);
}

}  // namespace

TEST(DrawLetter, SeededAndDeterministic) {
  const auto alphabet = GameConfig{}.alphabet;
  Rng a(42), b(42);
  const auto l1 = draw_letter(a, {}, alphabet);
  EXPECT_EQ(l1, draw_letter(b, {}, alphabet));
  EXPECT_NE(std::find(alphabet.begin(), alphabet.end(), l1), alphabet.end());
}

TEST(DrawLetter, SingleRemainingAndExhausted) {
  const auto alphabet = GameConfig{}.alphabet;
  std::set<std::string> used(alphabet.begin(), alphabet.end());
  used.erase("F");
  Rng rng(1);
  EXPECT_EQ(draw_letter(rng, used, alphabet), "F");
  used.insert("F");
  EXPECT_EQ(code_of([&] { draw_letter(rng, used, alphabet); }), ErrorCode::AlphabetExhausted);
}

TEST(OpenRound, StartRules) {
  GameConfig cfg;
  {
    pgt::Table t(cfg, 5, 1);
    const auto ts = t.start();
    const auto* rs = pgt::find_of<RoundStarted>(ts);
    ASSERT_NE(rs, nullptr);
    EXPECT_EQ(rs->round, 1);
    EXPECT_EQ(t.round().phase, Phase::Submission);
    EXPECT_EQ(rs->deadline, pgt::kT0 + 180'000);
  }
  {
    pgt::Table t(cfg, 3, 1);
    EXPECT_EQ(code_of([&] { t.start(); }), ErrorCode::NotEnoughPlayers);
  }
  {
    pgt::Table t(cfg, 5, 0);
    EXPECT_EQ(code_of([&] { t.start(); }), ErrorCode::NoArtificialParticipant);
  }
}

TEST(OpenRound, NextRoundAfterScoring) {
  GameConfig cfg;
  pgt::Table t(cfg, 5, 1);
  t.start();
  t.advance();
  const auto ts = t.advance();
  ASSERT_NE(pgt::find_of<Scored>(ts), nullptr);
  const auto* rs = pgt::find_of<RoundStarted>(ts);
  ASSERT_NE(rs, nullptr);
  EXPECT_EQ(rs->round, 2);
  EXPECT_EQ(t.round().phase, Phase::Submission);
  EXPECT_NE(t.state().letter_sequence[0], t.state().letter_sequence[1]);
}

TEST(AcceptSubmission, StoresLastWriteWinsAndDeadline) {
  RoundState r = f_round();
  const auto words = pgt::items(pgt::worked_example_words());
  accept_submission(r, pid(1), words, pgt::kT0);
  for (const auto& e : r.submissions.at(pid(1))) EXPECT_EQ(e.status, WordStatus::Pending);
  EXPECT_EQ(r.submissions.at(pid(1))[1].raw, "France");

  const std::vector<SubmissionItem> again = {{1, "Finland"}};
  accept_submission(r, pid(1), again, pgt::kT0 + 1000);
  EXPECT_EQ(r.submissions.at(pid(1))[1].raw, "Finland");
  EXPECT_EQ(r.submissions.at(pid(1))[0].raw, "fruit");

  EXPECT_EQ(code_of([&] { accept_submission(r, pid(1), again, pgt::kT0 + 180'000); }), ErrorCode::DeadlinePassed);
  const std::vector<SubmissionItem> bad = {{0, "fig"}, {6, "fog"}};
  EXPECT_EQ(code_of([&] { accept_submission(r, pid(2), bad, pgt::kT0); }), ErrorCode::UnknownCategory);
  EXPECT_TRUE(r.submissions.at(pid(2))[0].blank()) << "a rejected batch must not be partially applied";
  EXPECT_EQ(code_of([&] { accept_submission(r, pid(9), again, pgt::kT0); }), ErrorCode::UnknownPlayer);
}

TEST(CloseSubmissions, LetterCheckAndBlanks) {
  RoundState r = f_round();
  accept_submission(r, pid(1), pgt::items(pgt::worked_example_words()), pgt::kT0);
  const std::vector<SubmissionItem> grape = {{0, "grape"}};
  accept_submission(r, pid(2), grape, pgt::kT0);
  close_submissions(r, pgt::kT0 + 300'000);
  EXPECT_EQ(r.phase, Phase::Reveal);
  for (const auto& e : r.submissions.at(pid(1))) EXPECT_EQ(e.status, WordStatus::Pending);
  EXPECT_EQ(r.submissions.at(pid(2))[0].status, WordStatus::AutoRejected);
  EXPECT_EQ(r.submissions.at(pid(2))[1].status, WordStatus::AutoRejected);  // blank
}

TEST(RaiseChallenge, ContestIdempotentAndSelf) {
  const auto people = pgt::roster(5);
  RoundState r = f_round();
  accept_submission(r, pid(1), pgt::items(pgt::worked_example_words()), pgt::kT0);
  close_submissions(r, 0);
  const WordRef fuchsia{1, pid(1), 5};
  raise_challenge(r, people, pid(2), fuchsia);
  EXPECT_EQ(r.find(fuchsia)->status, WordStatus::Contested);
  raise_challenge(r, people, pid(2), fuchsia);
  EXPECT_EQ(r.contested_queue.size(), 1u);
  EXPECT_EQ(r.challengers.at(fuchsia).size(), 1u);
  EXPECT_EQ(code_of([&] { raise_challenge(r, people, pid(1), WordRef{1, pid(1), 0}); }), ErrorCode::SelfChallenge);
  EXPECT_EQ(code_of([&] { raise_challenge(r, people, pid(2), WordRef{1, pid(1), 9}); }), ErrorCode::UnknownWord);
  EXPECT_EQ(code_of([&] { raise_challenge(r, people, pid(2), WordRef{1, pid(3), 0}); }), ErrorCode::NotChallengeable);
}

TEST(CloseReveal, Outcomes) {
  const auto people = pgt::roster(5);
  {
    RoundState r = f_round();
    accept_submission(r, pid(1), pgt::items(pgt::worked_example_words()), pgt::kT0);
    close_submissions(r, 0);
    close_reveal(r, 0);
    EXPECT_EQ(r.phase, Phase::Scored);
    for (const auto& e : r.submissions.at(pid(1))) EXPECT_EQ(e.status, WordStatus::UncontestedApproved);
    EXPECT_EQ(r.submissions.at(pid(2))[0].status, WordStatus::AutoRejected);
  }
  {
    RoundState r = f_round();
    accept_submission(r, pid(1), pgt::items(pgt::worked_example_words()), pgt::kT0);
    close_submissions(r, 0);
    raise_challenge(r, people, pid(2), WordRef{1, pid(1), 5});
    raise_challenge(r, people, pid(3), WordRef{1, pid(1), 3});
    close_reveal(r, 99);
    EXPECT_EQ(r.phase, Phase::Debate);
    EXPECT_EQ(r.contested_queue.size(), 2u);
    EXPECT_EQ(r.phase_deadline_ms, 99);
  }
}

TEST(RecordArgument, TranscriptAndErrors) {
  const auto people = pgt::roster(5);
  RoundState r = f_round();
  accept_submission(r, pid(1), pgt::items(pgt::worked_example_words()), pgt::kT0);
  close_submissions(r, 0);
  const WordRef fuchsia{1, pid(1), 5};
  raise_challenge(r, people, pid(2), fuchsia);
  close_reveal(r, 0);
  record_argument(r, people, pid(1), fuchsia, "fuchsia is a purplish red, so a color", 1);
  EXPECT_EQ(r.transcript.size(), 1u);
  EXPECT_EQ(code_of([&] { record_argument(r, people, pid(1), WordRef{1, pid(1), 0}, "x", 2); }), ErrorCode::WrongWord);
  EXPECT_EQ(code_of([&] { record_argument(r, people, pid(1), fuchsia, "  ", 2); }), ErrorCode::EmptyArgument);
  EXPECT_EQ(code_of([&] { record_argument(r, people, pid(1), fuchsia, std::string(2001, 'a'), 2); }), ErrorCode::TooLong);
  EXPECT_NO_THROW(record_argument(r, people, pid(3), fuchsia, std::string(2000, 'a'), 2));
}

TEST(RecordArgument, Floor) {
  const auto people = pgt::roster(5);
  RoundState r = f_round();
  accept_submission(r, pid(1), pgt::items(pgt::worked_example_words()), pgt::kT0);
  close_submissions(r, 0);
  const WordRef fuchsia{1, pid(1), 5};
  raise_challenge(r, people, pid(2), fuchsia);
  close_reveal(r, 0);
  for (int i = 0; i < 3; ++i) record_argument(r, people, pid(1), fuchsia, "yes", 1);
  EXPECT_EQ(code_of([&] { record_argument(r, people, pid(1), fuchsia, "yes", 1); }), ErrorCode::FloorExhausted);
  for (int i = 0; i < 3; ++i) record_argument(r, people, pid(2), fuchsia, "no", 1);
  EXPECT_EQ(code_of([&] { record_argument(r, people, pid(2), fuchsia, "no", 1); }), ErrorCode::FloorExhausted);
  record_argument(r, people, pid(4), fuchsia, "heckle", 1);
  EXPECT_EQ(code_of([&] { record_argument(r, people, pid(4), fuchsia, "again", 1); }), ErrorCode::FloorExhausted);
}

TEST(CastVote, RecordsOverwritesRejectsStrangers) {
  const auto people = pgt::roster(5);
  RoundState r = f_round();
  accept_submission(r, pid(1), pgt::items(pgt::worked_example_words()), pgt::kT0);
  close_submissions(r, 0);
  const WordRef fuchsia{1, pid(1), 5};
  raise_challenge(r, people, pid(2), fuchsia);
  close_reveal(r, 0);
  EXPECT_EQ(code_of([&] { cast_vote(r, people, pid(2), fuchsia, Choice::Reject); }), ErrorCode::WrongPhase);
  open_vote(r, 0);
  for (int i = 1; i <= 4; ++i) cast_vote(r, people, pid(i), fuchsia, Choice::Approve);
  EXPECT_EQ(r.ballots.at(fuchsia).size(), 4u);
  cast_vote(r, people, pid(3), fuchsia, Choice::Reject);
  EXPECT_EQ(r.ballots.at(fuchsia).at(pid(3)), Choice::Reject);
  EXPECT_EQ(code_of([&] { cast_vote(r, people, PlayerId("spectator"), fuchsia, Choice::Approve); }), ErrorCode::UnknownVoter);
  EXPECT_EQ(code_of([&] { cast_vote(r, people, pid(2), WordRef{1, pid(1), 0}, Choice::Approve); }), ErrorCode::WrongWord);
}

TEST(TallyVotes, Examples) {
  const auto people = pgt::roster(5);
  std::map<PlayerId, Choice> b = {{pid(1), Choice::Approve}, {pid(2), Choice::Approve}, {pid(3), Choice::Approve}, {pid(4), Choice::Reject}};
  EXPECT_EQ(tally_votes(b, people).outcome, Outcome::Approved);
  b = {{pid(1), Choice::Approve}, {pid(2), Choice::Approve}, {pid(3), Choice::Reject}, {pid(4), Choice::Reject}};
  EXPECT_EQ(tally_votes(b, people).outcome, Outcome::Rejected);
  EXPECT_EQ(tally_votes({}, people).outcome, Outcome::Rejected);
  b = {{PlayerId("ghost"), Choice::Approve}};
  EXPECT_EQ(tally_votes(b, people).approve, 0);
}

TEST(TallyVotes, ExhaustiveFourToSixVoters) {
  for (int n = 4; n <= 6; ++n) {
    const auto r = checks::majority_exhaustive(n);
    EXPECT_TRUE(r.ok) << r.detail;
  }
}

TEST(ScoreRound, Examples) {
  const auto people = pgt::roster(5);
  auto settle = [&](RoundState& r) {
    close_submissions(r, 0);
    close_reveal(r, 0);
  };
  {
    RoundState r = f_round();
    accept_submission(r, pid(1), pgt::items(pgt::worked_example_words()), pgt::kT0);
    settle(r);
    int total = 0, twos = 0;
    for (const auto& e : score_round(r))
      if (e.player == pid(1)) {
        total += e.points;
        twos += e.points == 2;
      }
    EXPECT_EQ(total, 12);
    EXPECT_EQ(twos, 6);
  }
  {
    RoundState r = f_round();
    const std::vector<SubmissionItem> fr = {{1, "france"}};
    accept_submission(r, pid(1), fr, pgt::kT0);
    accept_submission(r, pid(2), fr, pgt::kT0);
    settle(r);
    for (const auto& e : score_round(r))
      if (e.category_index == 1 && (e.player == pid(1) || e.player == pid(2))) EXPECT_EQ(e.points, 1);
  }
  {
    RoundState r = f_round();
    const std::vector<SubmissionItem> fr = {{1, "france"}};
    accept_submission(r, pid(1), fr, pgt::kT0);
    accept_submission(r, pid(2), fr, pgt::kT0);
    close_submissions(r, 0);
    raise_challenge(r, people, pid(3), WordRef{1, pid(2), 1});
    close_reveal(r, 0);
    open_vote(r, 0);
    cast_vote(r, people, pid(3), WordRef{1, pid(2), 1}, Choice::Reject);
    close_vote(r, people, 0);
    EXPECT_EQ(r.phase, Phase::Scored);
    for (const auto& e : score_round(r)) {
      if (e.category_index != 1) continue;
      if (e.player == pid(1)) EXPECT_EQ(e.points, 2);
      if (e.player == pid(2)) EXPECT_EQ(e.points, 0);
    }
  }
  {
    RoundState r = f_round();
    EXPECT_EQ(code_of([&] { score_round(r); }), ErrorCode::NonTerminalEntry);
  }
}

TEST(CheckTermination, Examples) {
  GameConfig cfg;
  const auto people = pgt::roster(4);
  Scoreboard board = {{pid(1), 21}, {pid(2), 5}, {pid(3), 3}, {pid(4), 2}};
  auto r = check_termination(board, people, 60, 3, cfg);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->reason, EndReason::Victory);
  EXPECT_EQ(r->winners, std::vector<PlayerId>{pid(1)});
  EXPECT_EQ(r->ranking.front().player, pid(1));

  const auto two = pgt::roster(2);
  r = check_termination({{pid(1), 10}, {pid(2), 10}}, two, 1800, 5, cfg);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->reason, EndReason::TimeUp);
  EXPECT_EQ(r->winners, (std::vector<PlayerId>{pid(1), pid(2)}));

  EXPECT_FALSE(check_termination({{pid(1), 8}, {pid(2), 5}}, two, 600, 2, cfg));
  r = check_termination({{pid(1), 8}, {pid(2), 5}}, two, 600, 26, cfg);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->reason, EndReason::MaxRounds);
  r = check_termination({{pid(1), 8}, {pid(2), 5}}, two, 600, 2, cfg, true);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->reason, EndReason::AlphabetExhausted);
}

TEST(Scoring, SmallInstanceOracle) {
  long n = 0;
  const auto r = checks::scoring_small_instances(std::string(PG_TEST_FIXTURES) + "/small_lexicon.tsv", &n);
  EXPECT_TRUE(r.ok) << r.detail;
  EXPECT_GT(n, 0);
}

TEST(Scoring, ApprovedKindsAreEquivalent) {
  // UNCONTESTED_APPROVED and APPROVED score and share alike.
  RoundState r = f_round(2, 1);
  for (auto& [id, slots] : r.submissions) {
    slots[0].raw = "fig";
    slots[0].normalized = "fig";
  }
  r.phase = Phase::Scored;
  r.submissions.at(pid(1))[0].status = WordStatus::UncontestedApproved;
  r.submissions.at(pid(2))[0].status = WordStatus::Approved;
  for (const auto& e : score_round(r)) EXPECT_EQ(e.points, 1);
  r.submissions.at(pid(2))[0].status = WordStatus::Rejected;
  for (const auto& e : score_round(r)) EXPECT_EQ(e.points, e.player == pid(1) ? 2 : 0);
}
