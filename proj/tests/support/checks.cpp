#include "checks.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "inexa/abstraction.hpp"
#include "inexa/discovery.hpp"
#include "inexa/errors.hpp"
#include "inexa/net_export.hpp"
#include "inexa/ocel_json.hpp"
#include "inexa/replay.hpp"
#include "inexa/soundness.hpp"
#include "oracles.hpp"

namespace inexa::testkit {

using abstraction::AbstractionRecord;
using session::Session;
using session::SessionOptions;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string fixture_path(const std::string& name) { return std::string(INEXA_TESTS_DIR) + "/fixtures/" + name; }
std::string golden_path(const std::string& name) { return std::string(INEXA_TESTS_DIR) + "/golden/" + name; }

ocel::EventLog load_fixture(const std::string& name) { return ocel::parse_log(read_file(fixture_path(name))); }

net::AcceptingOCPN load_golden(const std::string& name) { return net::net_from_json(read_file(golden_path(name))); }

namespace {

SessionOptions restore() {
  SessionOptions o;
  o.initialize = false;
  return o;
}

std::set<std::size_t> applied_nodes(const Session& s) {
  std::set<std::size_t> out;
  auto replayed = net::replay(s.log(), s.original());
  for (const auto& r : s.history()) {
    std::set<std::string> originals;
    for (const auto& e : s.log().events_with(r.oid)) originals.insert(replayed.et.at(e));
    if (auto n = s.tree().match(r.atype, originals)) out.insert(*n);
  }
  return out;
}

}  // namespace

std::set<std::string> events_of(const Session& s, const std::set<std::string>& transitions) {
  auto replayed = net::replay(s.log(), s.original());
  std::set<std::string> out;
  for (const auto& [e, t] : replayed.et) {
    auto cur = s.model().current_of(t);
    if (cur && transitions.contains(*cur)) out.insert(e);
  }
  return out;
}

std::vector<Session> reachable_states(const Session& start) {
  std::vector<Session> states{start};
  std::set<std::set<std::size_t>> seen{applied_nodes(start)};
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto candidates = states[i].available();
    for (const auto& c : candidates) {
      Session next = states[i];
      next.apply(c.record);
      if (seen.insert(applied_nodes(next)).second) states.push_back(std::move(next));
    }
  }
  return states;
}

CheckResult check_running_example() {
  CheckResult r;
  auto started = std::chrono::steady_clock::now();
  const std::vector<std::string> fine = {"click open account", "insert account meta data", "check account conditions",
                                         "retrieve acceptance signature"};
  const std::string aggregate = "\xe2\x86\x92(?click open account, ..., ?retrieve acceptance signature)";
  const auto client = ocel::ObjectType::parse("workflow:client");
  const auto bank = ocel::ObjectType::parse("workflow:bank");

  auto labels = [](const net::AcceptingOCPN& n) {
    std::multiset<std::string> out;
    for (const auto& [id, t] : n.transitions()) {
      if (t.label) out.insert(*t.label);
    }
    return out;
  };

  Session s(load_fixture("bank_account_augmented.json"), restore());
  auto upper = load_golden("bank_upper.json");
  auto lower = load_golden("bank_lower.json");

  if (!net::isomorphic(s.model(), upper)) r.fail("augmented fixture does not overlay to the upper golden");
  for (const auto& f : fine) {
    if (labels(s.model()).count(f) != 1) r.fail("upper model lacks '" + f + "'");
  }
  // every transition shared with the client before aggregation carries the badge
  std::size_t badges = 0;
  for (const auto& [id, t] : s.model().transitions()) {
    bool shared = false;
    for (const auto& o : t.origins) shared = shared || s.original().transition_types(o).contains(client);
    if (shared != t.refs.contains(client)) r.fail("badge mismatch on " + id);
    badges += t.refs.contains(client);
  }
  if (s.model().object_types() != std::vector<ocel::ObjectType>{bank}) r.fail("upper model is not bank-only");

  std::optional<AbstractionRecord> seq;
  for (const auto& c : s.available()) {
    if (c.record.kind() != ocel::AbstractionKind::Seq || c.record.target != bank) continue;
    std::vector<std::string> members;
    for (const auto& t : c.record.transitions) members.push_back(*s.model().transition(t)->label);
    std::multiset<std::string> a(members.begin(), members.end()), b(fine.begin(), fine.end());
    if (a == b) seq = c.record;
  }
  if (!seq) {
    r.fail("sequence of the four account steps not available");
    return r;
  }
  auto applied = s.apply(*seq);
  if (!net::isomorphic(s.model(), lower)) r.fail("seq result not isomorphic to the lower golden");
  auto after = labels(s.model());
  if (after.count(aggregate) != 1) r.fail("aggregate label missing");
  for (const auto& f : fine) {
    if (after.count(f) != 0) r.fail("'" + f + "' survived the seq aggregation");
  }
  s.redo(applied.oid);
  if (!(s.model() == upper) && !net::isomorphic(s.model(), upper)) r.fail("redo does not restore the upper model");
  for (const auto& f : fine) {
    if (labels(s.model()).count(f) != 1) r.fail("redo did not restore '" + f + "'");
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (secs >= 5.0) r.fail("took " + std::to_string(secs) + " s");
  if (r.pass) {
    std::ostringstream d;
    d << "upper " << net::size(upper).elements << " elements, lower " << net::size(lower).elements
      << ", client badges " << badges << ", " << static_cast<int>(secs * 1000) << " ms";
    r.detail = d.str();
  }
  return r;
}

CheckResult check_commutation() {
  CheckResult r;
  std::size_t checked = 0, states = 0;
  ocel::IdGenerator ids(4242);
  for (const auto* name : {"bank_account.json", "bank_account_augmented.json"}) {
    Session base(load_fixture(name), restore());
    for (const auto& s : reachable_states(base)) {
      ++states;
      for (std::size_t i = 0; i < s.tree().nodes().size(); ++i) {
        auto record = s.tree().record_for(i, s.model());
        if (record.transitions.empty() || !abstraction::admissible(s.model(), record)) continue;
        auto targets = events_of(s, record.transitions);
        auto augmented = ocel::st_abs(s.log(), targets, record.atype, ids.next_fresh(s.log()));
        auto left = abstraction::overlay(augmented, s.original());
        auto right = abstraction::apply_abstraction(s.model(), record);
        ++checked;
        if (!net::isomorphic(left, right)) {
          r.fail(std::string(name) + ": " + abstraction::describe(record) + " does not commute");
        }
      }
    }
  }
  if (checked == 0) r.fail("no abstraction checked");
  if (r.pass) r.detail = std::to_string(checked) + " node applications over " + std::to_string(states) + " states";
  return r;
}

CheckResult check_round_trips(std::size_t sequences, std::uint64_t seed) {
  CheckResult r;
  std::mt19937_64 rng(seed);
  const auto base_log = load_fixture("bank_account.json");
  const auto projected = ocel::project_workflow(base_log);
  const Session base(base_log, restore());
  std::size_t steps = 0, applies = 0, redos = 0;

  auto fail = [&](std::size_t seq, const std::string& why) {
    if (r.pass || r.detail.size() < 400) r.fail("sequence " + std::to_string(seq) + ": " + why);
  };

  for (std::size_t n = 0; n < sequences && r.pass; ++n) {
    Session s = base;
    auto len = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    for (std::size_t k = 0; k < len; ++k) {
      auto av = s.available();
      auto rd = s.redoable();
      if (av.empty() && rd.empty()) break;
      bool do_apply = !av.empty() && (rd.empty() || std::bernoulli_distribution(0.6)(rng));
      auto before_size = net::size(s.model()).elements;
      auto before_log = ocel::serialize_log(s.log());
      auto before_model = s.model();
      ++steps;
      if (do_apply) {
        ++applies;
        const auto& c = av[std::uniform_int_distribution<std::size_t>(0, av.size() - 1)(rng)];
        auto applied = s.apply(c.record);
        if (net::size(s.model()).elements > before_size) fail(n, "apply grew the model");
        // (a) redo right after apply is the identity
        Session undo = s;
        undo.redo(applied.oid);
        if (ocel::serialize_log(undo.log()) != before_log) fail(n, "redo after apply changed the log");
        if (!(undo.model() == before_model)) fail(n, "redo after apply changed the model");
      } else {
        ++redos;
        const auto& c = rd[std::uniform_int_distribution<std::size_t>(0, rd.size() - 1)(rng)];
        s.redo(c.record.oid);
        if (net::size(s.model()).elements < before_size) fail(n, "redo shrank the model");
      }
      // (b) export -> import -> overlay
      Session again(ocel::parse_log(s.export_log()), restore());
      if (!(again.model() == s.model())) fail(n, "re-imported export yields a different model");
      if (again.history() != s.history()) fail(n, "re-imported export yields a different history");
      // (c) the workflow projection never changes
      if (!(ocel::project_workflow(s.log()) == projected)) fail(n, "workflow projection changed");
      // (e) every history entry reconstructs to an admissible record
      std::vector<AbstractionRecord> rebuilt;
      try {
        auto m = abstraction::overlay(s.log(), s.original(), abstraction::Repository::standard(), nullptr, &rebuilt);
        if (!(m == s.model())) fail(n, "overlay differs from the session model");
      } catch (const Error& e) {
        fail(n, std::string("history does not reconstruct: ") + e.what());
      }
      if (rebuilt.size() != s.log().history().applied.size()) fail(n, "history length mismatch");
    }
  }
  if (r.pass) {
    r.detail = std::to_string(sequences) + " sequences, " + std::to_string(steps) + " steps (" +
               std::to_string(applies) + " apply, " + std::to_string(redos) + " redo)";
  }
  return r;
}

CheckResult check_discovery(std::size_t random_logs, std::uint64_t seed) {
  CheckResult r;
  std::mt19937_64 rng(seed);
  std::size_t fitting = 0, refused = 0;

  auto per_type = [&](const ocel::EventLog& log, const std::string& name) {
    for (const auto& ot : log.workflow_types()) {
      auto traces = discovery::extract_traces(log, ot);
      discovery::TraceLog tl;
      for (const auto& t : traces) tl.add(t.activities);
      if (tl.empty()) continue;
      auto net = discovery::compile_tree(discovery::mine_tree(tl), ot);
      for (const auto& t : traces) {
        if (!net::accepts(net, ot, t.activities)) {
          r.fail(name + ": " + ot.name() + " trace of " + t.object + " not replayable");
          return;
        }
      }
    }
  };

  auto object_centric = [&](const ocel::EventLog& log, const std::string& name) {
    try {
      Session s(log, restore());
      auto replayed = net::replay(log, s.original());
      if (!replayed.fits) r.fail(name + ": session created over an unfit model");
      for (const auto& m : s.typed_models()) {
        for (const auto& t : discovery::extract_traces(log, m.otype)) {
          if (!net::accepts(s.original(), m.otype, t.activities)) r.fail(name + ": merged net rejects " + t.object);
        }
      }
      ++fitting;
    } catch (const UnfitModelError& e) {
      if (e.diagnostics().empty()) r.fail(name + ": refused without diagnostics");
      ++refused;
    }
  };

  auto fixture = load_fixture("bank_account.json");
  per_type(fixture, "fixture");
  object_centric(fixture, "fixture");
  if (refused) r.fail("fixture refused");

  for (std::size_t i = 0; i < random_logs; ++i) {
    RandomLogSpec spec;
    spec.noise = i % 2 ? 0.15 : 0.0;
    auto log = random_ocel(rng, spec);
    auto name = "random log " + std::to_string(i);
    per_type(log, name);
    object_centric(log, name);
  }
  if (r.pass) {
    r.detail = "fixture + " + std::to_string(random_logs) + " random logs: " + std::to_string(fitting) +
               " fitting, " + std::to_string(refused) + " refused with diagnostics";
  }
  return r;
}

CheckResult check_soundness_preservation() {
  CheckResult r;
  std::size_t checked = 0, projections = 0;
  for (const auto* name : {"bank_account.json", "bank_account_augmented.json"}) {
    Session base(load_fixture(name), restore());
    for (const auto& s : reachable_states(base)) {
      for (std::size_t i = 0; i < s.tree().nodes().size(); ++i) {
        auto record = s.tree().record_for(i, s.model());
        if (record.transitions.empty() || !abstraction::admissible(s.model(), record)) continue;
        auto after = abstraction::apply_abstraction(s.model(), record);
        ++checked;
        for (const auto& ot : s.model().object_types()) {
          bool before_sound = net::check_soundness(net::project_type(s.model(), ot));
          if (!before_sound) r.fail(std::string(name) + ": " + ot.name() + " unsound before");
          auto types = after.object_types();
          if (std::find(types.begin(), types.end(), ot) == types.end()) continue;
          ++projections;
          if (before_sound && !net::check_soundness(net::project_type(after, ot))) {
            r.fail(std::string(name) + ": " + abstraction::describe(record) + " breaks soundness of " + ot.name());
          }
        }
      }
    }
  }
  if (r.pass) {
    r.detail = std::to_string(checked) + " abstractions, " + std::to_string(projections) + " projections re-checked";
  }
  return r;
}

}  // namespace inexa::testkit
