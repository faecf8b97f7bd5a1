#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "checks.hpp"
#include "inexa/errors.hpp"
#include "inexa/net_export.hpp"
#include "inexa/ocel_json.hpp"
#include "inexa/session.hpp"

using namespace inexa;
using ocel::AbstractionKind;
using ocel::ObjectType;
using session::Session;
using session::SessionOptions;

namespace {

const ObjectType kBank = ObjectType::parse("workflow:bank");
const ObjectType kClient = ObjectType::parse("workflow:client");
const ObjectType kLc = ObjectType::parse("workflow:lc:finalize account opening");
const std::set<std::string> kAccountSteps = {"t5", "t6", "t7", "t8"};

SessionOptions with_threshold(std::size_t threshold) {
  SessionOptions o;
  o.threshold = threshold;
  return o;
}

SessionOptions restore() {
  SessionOptions o;
  o.initialize = false;
  return o;
}

std::optional<abstraction::AbstractionRecord> find(const std::vector<session::Candidate>& cs, AbstractionKind kind,
                                                   const ObjectType& target,
                                                   const std::set<std::string>& transitions = {}) {
  for (const auto& c : cs) {
    if (c.record.kind() == kind && c.record.target == target &&
        (transitions.empty() || c.record.transitions == transitions)) {
      return c.record;
    }
  }
  return std::nullopt;
}

std::vector<AbstractionKind> kinds(const Session& s) {
  std::vector<AbstractionKind> out;
  for (const auto& r : s.history()) out.push_back(r.kind());
  return out;
}

}  // namespace

TEST(AbstractionTree, Fixture) {
  Session s(testkit::load_fixture("bank_account.json"), restore());
  const auto& tree = s.tree();
  auto bank = tree.root_of(kBank);
  ASSERT_TRUE(bank);
  EXPECT_EQ(tree.node(*bank).kind, AbstractionKind::Caa);
  bool account_steps = false;
  for (const auto& n : tree.nodes()) {
    if (n.otype == kBank && n.kind == AbstractionKind::Seq && n.originals == kAccountSteps) account_steps = true;
    if (n.parent) {
      const auto& p = tree.node(*n.parent);
      EXPECT_TRUE(std::includes(p.originals.begin(), p.originals.end(), n.originals.begin(), n.originals.end()));
      EXPECT_EQ(n.depth, p.depth + 1);
    }
  }
  EXPECT_TRUE(account_steps);
  auto lc = tree.root_of(kLc);
  ASSERT_TRUE(lc);
  EXPECT_EQ(tree.node(*lc).kind, AbstractionKind::Cla);
  EXPECT_TRUE(tree.node(*lc).children.empty());
  EXPECT_EQ(nlohmann::json::parse(tree.to_json()).size(), tree.nodes().size());
  // every node is admissible on the original net
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    EXPECT_TRUE(abstraction::admissible(s.original(), tree.record_for(i, s.original()))) << i;
  }
}

TEST(AbstractionTree, SingleActivityTypeHasOnlyItsRoot) {
  auto log = ocel::parse_log(R"({"events": [
    {"id": "e1", "activity": "a", "timestamp": "2024-01-01T00:00:00", "relations": {"workflow:x": ["o1"]}},
    {"id": "e2", "activity": "b", "timestamp": "2024-01-01T00:00:01",
     "relations": {"workflow:x": ["o1"], "workflow:y": ["o2"]}},
    {"id": "e3", "activity": "c", "timestamp": "2024-01-01T00:00:02", "relations": {"workflow:x": ["o1"]}}]})");
  Session s(log, restore());
  auto y = s.tree().root_of(ObjectType::parse("workflow:y"));
  ASSERT_TRUE(y);
  EXPECT_TRUE(s.tree().node(*y).children.empty());
}

TEST(Initialize, FixtureAtDefaultThresholdNeedsNothing) {
  Session s(testkit::load_fixture("bank_account.json"));
  EXPECT_EQ(s.threshold(), 37u);
  EXPECT_EQ(net::size(s.model()).elements, 36u);
  EXPECT_TRUE(s.history().empty());
  EXPECT_EQ(s.model(), s.original());
}

TEST(Initialize, HugeThresholdKeepsTheOriginal) {
  Session s(testkit::load_fixture("bank_account.json"), with_threshold(1000000));
  EXPECT_TRUE(s.history().empty());
  EXPECT_EQ(s.model(), s.original());
}

TEST(Initialize, LifecycleFirst) {
  Session s(testkit::load_fixture("bank_account.json"), with_threshold(30));
  EXPECT_EQ(kinds(s), std::vector<AbstractionKind>{AbstractionKind::Cla});
  EXPECT_EQ(net::size(s.model()).elements, 25u);
  EXPECT_TRUE(s.warnings().empty());
}

TEST(Initialize, RoundRobinOverBusinessTypes) {
  Session s(testkit::load_fixture("bank_account.json"), with_threshold(22));
  ASSERT_EQ(s.history().size(), 3u);
  EXPECT_EQ(s.history()[0].kind(), AbstractionKind::Cla);
  EXPECT_EQ(s.history()[1].target, kBank);
  EXPECT_EQ(s.history()[1].transitions, (std::set<std::string>{"t1", "t2"}));
  EXPECT_EQ(s.history()[2].target, kClient);
  EXPECT_LE(net::size(s.model()).elements, 22u);
}

TEST(Initialize, ExhaustedTreeWarns) {
  Session s(testkit::load_fixture("bank_account.json"), with_threshold(0));
  ASSERT_EQ(s.warnings().size(), 1u);
  EXPECT_NE(s.warnings()[0].find("exhausted"), std::string::npos);
  EXPECT_TRUE(s.available().empty());
  EXPECT_EQ(s.model().object_types(), std::vector<ObjectType>{kBank});
}

TEST(Initialize, PluggableGoal) {
  SessionOptions o;
  o.goal = [](const net::AcceptingOCPN& n) { return n.object_types().size() <= 2; };
  Session s(testkit::load_fixture("bank_account.json"), o);
  EXPECT_EQ(kinds(s), std::vector<AbstractionKind>{AbstractionKind::Cla});
}

TEST(Initialize, SubprocessResourceStaging) {
  // the "big" subprocess has the most events and is exempt from stage two
  auto log = ocel::parse_log(R"({"events": [
    {"id": "e01", "activity": "open", "timestamp": "2024-01-01T00:00:01",
     "relations": {"workflow:case": ["c"], "workflow:sp:big": ["b"]}},
    {"id": "e02", "activity": "b1", "timestamp": "2024-01-01T00:00:02", "relations": {"workflow:sp:big": ["b"]}},
    {"id": "e03", "activity": "b2", "timestamp": "2024-01-01T00:00:03", "relations": {"workflow:sp:big": ["b"]}},
    {"id": "e04", "activity": "b3", "timestamp": "2024-01-01T00:00:04", "relations": {"workflow:sp:big": ["b"]}},
    {"id": "e05", "activity": "handover", "timestamp": "2024-01-01T00:00:05",
     "relations": {"workflow:case": ["c"], "workflow:sp:big": ["b"], "workflow:sp:small": ["s"]}},
    {"id": "e06", "activity": "s1", "timestamp": "2024-01-01T00:00:06", "relations": {"workflow:sp:small": ["s"]}},
    {"id": "e07", "activity": "s2", "timestamp": "2024-01-01T00:00:07", "relations": {"workflow:sp:small": ["s"]}},
    {"id": "e08", "activity": "review", "timestamp": "2024-01-01T00:00:08",
     "relations": {"workflow:case": ["c"], "workflow:res:clerk": ["k"]}},
    {"id": "e09", "activity": "file", "timestamp": "2024-01-01T00:00:09", "relations": {"workflow:res:clerk": ["k"]}},
    {"id": "e10", "activity": "close", "timestamp": "2024-01-01T00:00:10", "relations": {"workflow:case": ["c"]}}]})");
  Session s(log, with_threshold(0));
  ASSERT_GE(s.history().size(), 2u);
  std::set<std::string> first_two = {s.history()[0].atype.name(), s.history()[1].atype.name()};
  EXPECT_EQ(first_two, (std::set<std::string>{"abstraction:workflow:sp:small$csa", "abstraction:workflow:res:clerk$caa"}));
  // the exempt subprocess is only handled with the business types
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NE(s.history()[i].target, ObjectType::parse("workflow:sp:big"));
}

TEST(Available, AfterLifecycleAggregation) {
  Session s(testkit::load_fixture("bank_account.json"), with_threshold(30));
  auto av = s.available();
  EXPECT_TRUE(find(av, AbstractionKind::Seq, kBank, kAccountSteps));
  EXPECT_TRUE(find(av, AbstractionKind::Caa, kBank));
  EXPECT_TRUE(find(av, AbstractionKind::Caa, kClient));
  EXPECT_FALSE(find(av, AbstractionKind::Cla, kLc));
  for (const auto& c : av) EXPECT_EQ(c.rule, "tree");
}

TEST(ApplyRedo, UpperToLowerAndBack) {
  Session s(testkit::load_fixture("bank_account_augmented.json"), restore());
  EXPECT_EQ(s.model(), testkit::load_golden("bank_upper.json"));
  auto before_log = ocel::serialize_log(s.log());
  auto seq = find(s.available(), AbstractionKind::Seq, kBank, kAccountSteps);
  ASSERT_TRUE(seq);
  auto applied = s.apply(*seq);
  EXPECT_EQ(applied.oid.size(), 5u);
  EXPECT_EQ(s.model(), testkit::load_golden("bank_lower.json"));
  EXPECT_EQ(s.log().history().applied.size(), 3u);
  EXPECT_EQ(s.log().events_with(applied.oid), (std::vector<std::string>{"260f5", "0a1e4", "6629a", "1c0bf"}));

  auto rd = s.redoable();
  bool listed = false;
  for (const auto& c : rd) {
    if (c.record.oid == applied.oid) {
      listed = true;
      EXPECT_NE(c.rule.find("last"), std::string::npos);
    }
  }
  EXPECT_TRUE(listed);

  s.redo(applied.oid);
  EXPECT_EQ(s.model(), testkit::load_golden("bank_upper.json"));
  EXPECT_EQ(ocel::serialize_log(s.log()), before_log);
  for (const auto& c : s.redoable()) EXPECT_NE(c.record.oid, applied.oid);
  EXPECT_TRUE(find(s.available(), AbstractionKind::Seq, kBank, kAccountSteps));
}

TEST(ApplyRedo, StaleChoicesAreRejected) {
  Session s(testkit::load_fixture("bank_account_augmented.json"), restore());
  auto seq = *find(s.available(), AbstractionKind::Seq, kBank, kAccountSteps);
  auto applied = s.apply(seq);
  EXPECT_THROW(s.apply(seq), NotAvailableError);
  EXPECT_THROW(s.apply(abstraction::make_record(AbstractionKind::Seq, kBank, {"t0", "t4"})), NotAvailableError);
  s.redo(applied.oid);
  EXPECT_THROW(s.redo(applied.oid), NotRedoableError);
  EXPECT_THROW(s.redo("zzzzz"), NotRedoableError);
}

TEST(ApplyRedo, ParentBecomesAvailable) {
  Session s(testkit::load_fixture("bank_account_augmented.json"), restore());
  s.apply(*find(s.available(), AbstractionKind::Seq, kBank, kAccountSteps));
  auto av = s.available();
  auto root = s.tree().root_of(kBank);
  bool parent = false;
  for (const auto& c : av) parent = parent || (c.node && s.tree().node(*c.node).children.size() > 0);
  EXPECT_TRUE(parent || std::any_of(av.begin(), av.end(), [&](const auto& c) { return c.node == root; }));
}

TEST(ApplyRedo, RedoOnInitializedSessionRestoresLifecycle) {
  Session s(testkit::load_fixture("bank_account.json"), with_threshold(30));
  ASSERT_EQ(s.history().size(), 1u);
  s.redo(s.history()[0].oid);
  EXPECT_EQ(s.model(), s.original());
  std::size_t lifecycle = 0;
  for (const auto& [id, t] : s.model().transitions()) {
    lifecycle += t.label && t.label->rfind("finalize account opening - ", 0) == 0;
  }
  EXPECT_EQ(lifecycle, 4u);
}

TEST(ApplyRedo, EmptyHistoryHasNothingToRedo) {
  Session s(testkit::load_fixture("bank_account.json"), restore());
  EXPECT_TRUE(s.redoable().empty());
}

TEST(ApplyRedo, CoarsestRule) {
  Session s(testkit::load_fixture("bank_account_augmented.json"), restore());
  auto seq = s.apply(*find(s.available(), AbstractionKind::Seq, kBank, kAccountSteps));
  // the client caa is the coarsest applied node of its type
  bool coarsest = false;
  for (const auto& c : s.redoable()) {
    if (c.record.oid == "uih13") coarsest = c.rule.find("coarsest") != std::string::npos;
  }
  EXPECT_TRUE(coarsest);
  (void)seq;
}

TEST(ApplyRedo, ExhaustiveApplyIsMonotone) {
  Session s(testkit::load_fixture("bank_account.json"), restore());
  auto last = net::size(s.model()).elements;
  while (true) {
    auto av = s.available();
    if (av.empty()) break;
    for (const auto& r : s.redoable()) {
      for (const auto& a : av) EXPECT_NE(a.record, r.record);
    }
    s.apply(av.front().record);
    auto now = net::size(s.model()).elements;
    EXPECT_LE(now, last);
    last = now;
  }
  EXPECT_FALSE(s.history().empty());
}

TEST(Export, UntouchedSessionIsTheOriginalLog) {
  auto log = testkit::load_fixture("bank_account.json");
  Session s(log, restore());
  EXPECT_EQ(s.export_log(), ocel::serialize_log(log));
}

TEST(Export, ReimportReproducesTheModel) {
  Session s(testkit::load_fixture("bank_account.json"), with_threshold(22));
  Session again(ocel::parse_log(s.export_log()), restore());
  EXPECT_EQ(again.model(), s.model());
  EXPECT_EQ(again.history(), s.history());
}

TEST(Export, ApplyAddsOneAbstractionColumn) {
  Session s(testkit::load_fixture("bank_account_augmented.json"), restore());
  auto count = [](const std::string& text) {
    std::set<std::string> types;
    auto doc = nlohmann::json::parse(text);
    for (const auto& [oid, desc] : doc["objects"].items()) {
      auto t = desc["type"].get<std::string>();
      if (t.rfind("abstraction:", 0) == 0) types.insert(t);
    }
    return types.size();
  };
  auto before = count(s.export_log());
  s.apply(*find(s.available(), AbstractionKind::Seq, kBank, kAccountSteps));
  EXPECT_EQ(count(s.export_log()), before + 1);
}
