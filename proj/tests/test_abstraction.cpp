#include <gtest/gtest.h>

#include "checks.hpp"
#include "inexa/abstraction.hpp"
#include "inexa/discovery.hpp"
#include "inexa/errors.hpp"
#include "inexa/ocel_json.hpp"
#include "inexa/replay.hpp"
#include "inexa/soundness.hpp"
#include "oracles.hpp"

using namespace inexa;
using abstraction::make_record;
using net::BlockKind;
using ocel::AbstractionKind;
using ocel::ObjectType;

namespace {

const ObjectType kBank = ObjectType::parse("workflow:bank");
const ObjectType kClient = ObjectType::parse("workflow:client");
const ObjectType kLc = ObjectType::parse("workflow:lc:finalize account opening");
const std::set<std::string> kAccountSteps = {"t5", "t6", "t7", "t8"};

struct Fixture {
  ocel::EventLog log = testkit::load_fixture("bank_account_augmented.json");
  net::AcceptingOCPN original = discovery::discover(log);
  net::AcceptingOCPN upper = abstraction::overlay(log, original);
};

std::vector<std::string> labels(const net::AcceptingOCPN& n) {
  std::vector<std::string> out;
  for (const auto& [id, t] : n.transitions()) {
    if (t.label) out.push_back(*t.label);
  }
  return out;
}

// Single-type model with one block of the given shape between "a" and "z".
net::AcceptingOCPN single(const std::vector<std::vector<std::string>>& traces) {
  return discovery::discover(testkit::log_from_traces("workflow:case", traces));
}

std::string aggregate_label(const std::vector<std::vector<std::string>>& traces, AbstractionKind kind,
                            std::set<std::string> members) {
  auto n = single(traces);
  std::set<std::string> ids;
  for (const auto& [id, t] : n.transitions()) {
    if (t.label && members.contains(*t.label)) ids.insert(id);
  }
  auto out = abstraction::apply_abstraction(n, make_record(kind, ObjectType::parse("workflow:case"), ids));
  for (const auto& [id, t] : out.transitions()) {
    if (!t.members.empty()) return *t.label;
  }
  return "";
}

}  // namespace

TEST(Repository, SevenEntries) {
  const auto& repo = abstraction::Repository::standard();
  EXPECT_EQ(repo.size(), 7u);
  for (auto k : {AbstractionKind::Caa, AbstractionKind::Csa, AbstractionKind::Cla, AbstractionKind::Seq,
                 AbstractionKind::Xor, AbstractionKind::And, AbstractionKind::Loop}) {
    EXPECT_NE(repo.find(k), nullptr);
  }
}

TEST(Abstraction, Describe) {
  EXPECT_EQ(abstraction::describe(make_record(AbstractionKind::Seq, kBank, kAccountSteps)),
            "Sequence control-flow structure of bank {t5, t6, t7, t8}");
}

TEST(Sese, SequenceOfAccountSteps) {
  Fixture f;
  EXPECT_TRUE(abstraction::is_sese(f.upper, kBank, kAccountSteps, BlockKind::Seq));
  EXPECT_FALSE(abstraction::is_sese(f.upper, kBank, kAccountSteps, BlockKind::And));
  EXPECT_FALSE(abstraction::is_sese(f.upper, kBank, {"t5"}, BlockKind::Seq));
  EXPECT_FALSE(abstraction::is_sese(f.upper, kBank, {"t5", "t7"}, BlockKind::Seq));
  EXPECT_FALSE(abstraction::is_sese(f.upper, kBank, {"t5", "t6", "t7"}, BlockKind::Seq));
}

TEST(Admissible, Fixture) {
  Fixture f;
  EXPECT_TRUE(abstraction::admissible(f.upper, make_record(AbstractionKind::Seq, kBank, kAccountSteps)));
  EXPECT_FALSE(abstraction::admissible(f.upper, make_record(AbstractionKind::Seq, kBank, {"t5", "t7"})));
  EXPECT_FALSE(abstraction::admissible(f.upper, make_record(AbstractionKind::Xor, kBank, kAccountSteps)));
  EXPECT_TRUE(abstraction::admissible(
      f.original, make_record(AbstractionKind::Cla, kLc, abstraction::complete_targets(f.original, kLc))));
  // complete aggregations must cover the whole type
  EXPECT_FALSE(abstraction::admissible(f.original, make_record(AbstractionKind::Cla, kLc, {"t9", "t10"})));
  // the kind must match the type's class
  EXPECT_FALSE(abstraction::admissible(
      f.original, make_record(AbstractionKind::Csa, kClient, abstraction::complete_targets(f.original, kClient))));
  auto check = abstraction::check_admissible(f.upper, make_record(AbstractionKind::Seq, kBank, kAccountSteps));
  EXPECT_TRUE(check.behaviour_checked);
}

TEST(Apply, SequenceGivesAggregateLabel) {
  Fixture f;
  auto lower = abstraction::apply_abstraction(f.upper, make_record(AbstractionKind::Seq, kBank, kAccountSteps));
  EXPECT_LT(net::size(lower).elements, net::size(f.upper).elements);
  const auto* t5 = lower.transition("t5");
  ASSERT_NE(t5, nullptr);
  EXPECT_EQ(*t5->label, "\xe2\x86\x92(?click open account, ..., ?retrieve acceptance signature)");
  EXPECT_EQ(t5->members, (std::vector<std::string>{"click open account", "insert account meta data",
                                                   "check account conditions", "retrieve acceptance signature"}));
  EXPECT_EQ(t5->origins, (std::vector<std::string>{"t5", "t6", "t7", "t8"}));
  for (const auto* gone : {"t6", "t7", "t8"}) EXPECT_EQ(lower.transition(gone), nullptr);
  EXPECT_TRUE(net::isomorphic(lower, testkit::load_golden("bank_lower.json")));
  EXPECT_TRUE(net::check_soundness(lower));
}

TEST(Apply, CompleteArtifactKeepsBadges) {
  Fixture f;
  auto out = abstraction::apply_abstraction(
      f.original, make_record(AbstractionKind::Caa, kClient, abstraction::complete_targets(f.original, kClient)));
  for (const auto& [id, p] : out.places()) EXPECT_NE(p.otype, kClient);
  for (const auto* id : {"t0", "t3", "t4"}) {
    ASSERT_NE(out.transition(id), nullptr);
    EXPECT_TRUE(out.transition(id)->refs.contains(kClient)) << id;
  }
  EXPECT_EQ(net::display_label(*out.transition("t3")), "inform client \xe2\x86\x94 client");
  EXPECT_EQ(out.transitions().size(), f.original.transitions().size());
}

TEST(Apply, CompleteLifecycleCollapsesTheChain) {
  Fixture f;
  auto out = abstraction::apply_abstraction(
      f.original, make_record(AbstractionKind::Cla, kLc, abstraction::complete_targets(f.original, kLc)));
  ASSERT_NE(out.transition("t9"), nullptr);
  EXPECT_EQ(*out.transition("t9")->label, "finalize account opening");
  for (const auto* id : {"t10", "t11", "t12"}) EXPECT_EQ(out.transition(id), nullptr);
  // 5 lifecycle places, 3 merged transitions and the 3 bank places between them
  EXPECT_EQ(net::size(out).elements, net::size(f.original).elements - 5 - 3 - 3);
  EXPECT_TRUE(net::check_soundness(out));
}

TEST(Apply, RootSequenceCollapsesEverything) {
  Fixture f;
  auto all = abstraction::complete_targets(f.upper, kBank);
  auto out = abstraction::apply_abstraction(f.upper, make_record(AbstractionKind::Seq, kBank, all));
  EXPECT_EQ(out.transitions().size(), 1u);
  EXPECT_EQ(out.places().size(), 2u);
  EXPECT_EQ(labels(out), (std::vector<std::string>{"\xe2\x86\x92(?ask for customer needs, ..., ?finalize account opening)"}));
  EXPECT_TRUE(net::check_soundness(out));
}

TEST(Apply, InadmissibleThrows) {
  Fixture f;
  EXPECT_THROW(abstraction::apply_abstraction(f.upper, make_record(AbstractionKind::Seq, kBank, {"t5", "t7"})),
               InadmissibleError);
}

TEST(Apply, OperatorGlyphs) {
  EXPECT_EQ(aggregate_label({{"a", "b", "z"}, {"a", "c", "z"}}, AbstractionKind::Xor, {"b", "c"}),
            "\xc3\x97(?b, ?c)");
  EXPECT_EQ(aggregate_label({{"a", "b", "c", "z"}, {"a", "c", "b", "z"}}, AbstractionKind::And, {"b", "c"}),
            "\xe2\x88\xa7(?b, ?c)");
  EXPECT_EQ(aggregate_label({{"a", "b", "z"}, {"a", "b", "c", "b", "z"}}, AbstractionKind::Loop, {"b", "c"}),
            "\xe2\x86\xba(?b, ?c)");
}

TEST(Apply, BlockAggregationsStaySound) {
  for (auto [traces, kind, members] :
       std::vector<std::tuple<std::vector<std::vector<std::string>>, AbstractionKind, std::set<std::string>>>{
           {{{"a", "b", "z"}, {"a", "c", "z"}}, AbstractionKind::Xor, {"b", "c"}},
           {{{"a", "b", "c", "z"}, {"a", "c", "b", "z"}}, AbstractionKind::And, {"b", "c"}},
           {{{"a", "b", "z"}, {"a", "b", "c", "b", "z"}}, AbstractionKind::Loop, {"b", "c"}}}) {
    auto n = single(traces);
    std::set<std::string> ids;
    for (const auto& [id, t] : n.transitions()) {
      if (t.label && members.contains(*t.label)) ids.insert(id);
    }
    auto rec = make_record(kind, ObjectType::parse("workflow:case"), ids);
    ASSERT_TRUE(abstraction::admissible(n, rec));
    auto out = abstraction::apply_abstraction(n, rec);
    EXPECT_TRUE(net::check_soundness(out));
    EXPECT_LT(net::size(out).elements, net::size(n).elements);
  }
}

TEST(Overlay, EmptyHistoryIsIdentity) {
  auto log = testkit::load_fixture("bank_account.json");
  auto net = discovery::discover(log);
  EXPECT_EQ(abstraction::overlay(log, net), net);
}

TEST(Overlay, AugmentedFixtureGivesTheUpperModel) {
  Fixture f;
  EXPECT_EQ(f.upper, testkit::load_golden("bank_upper.json"));
  EXPECT_EQ(net::size(f.upper), (net::NetSize{21, 20}));
  std::vector<abstraction::AbstractionRecord> steps;
  abstraction::overlay(f.log, f.original, abstraction::Repository::standard(), nullptr, &steps);
  ASSERT_EQ(steps.size(), 2u);
  EXPECT_EQ(steps[0].oid, "uih13");
  EXPECT_EQ(steps[0].kind(), AbstractionKind::Caa);
  EXPECT_EQ(steps[0].transitions, (std::set<std::string>{"t0", "t3", "t4"}));
  EXPECT_EQ(steps[1].oid, "kl273");
  EXPECT_EQ(steps[1].transitions, (std::set<std::string>{"t9", "t10", "t11", "t12"}));
}

TEST(Overlay, ThirdEntryGivesTheLowerModel) {
  Fixture f;
  auto seq = ObjectType::abstraction(kBank, AbstractionKind::Seq);
  auto log = ocel::st_abs(f.log, {"260f5", "0a1e4", "6629a", "1c0bf"}, seq, "s3q00");
  auto lower = abstraction::overlay(log, f.original);
  EXPECT_EQ(lower, testkit::load_golden("bank_lower.json"));
  auto replayed = net::replay(log, f.original);
  auto rec = abstraction::reconstruct(log, "s3q00", f.upper, replayed);
  EXPECT_EQ(rec.transitions, kAccountSteps);
  EXPECT_EQ(rec.atype, seq);
}

TEST(Overlay, CorruptHistoryIsRejected) {
  Fixture f;
  // a sequence over two events that do not form a block
  auto log = ocel::st_abs(f.log, {"260f5", "6629a"}, ObjectType::abstraction(kBank, AbstractionKind::Seq), "bad00");
  EXPECT_THROW(abstraction::overlay(log, f.original), InadmissibleError);
}

TEST(Overlay, UnfitLogIsRejected) {
  auto log = testkit::load_fixture("bank_account.json");
  auto other = discovery::discover(testkit::log_from_traces("workflow:bank", {{"x", "y"}}));
  EXPECT_THROW(abstraction::overlay(log, other), UnfitModelError);
}
