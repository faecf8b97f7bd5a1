#include "inexa/discovery.hpp"

#include <algorithm>
#include <map>

#include "inexa/errors.hpp"
#include "inexa/replay.hpp"

namespace inexa::discovery {

std::vector<ObjectTrace> extract_traces(const ocel::EventLog& log, const ObjectType& otype,
                                        std::vector<std::string>* warnings) {
  std::vector<ObjectTrace> out;
  std::map<std::string, std::size_t> slot;
  for (const auto& e : log.events()) {
    auto it = e->wfomap.find(otype);
    if (it == e->wfomap.end()) continue;
    for (const auto& oid : it->second) {
      auto [s, inserted] = slot.emplace(oid, out.size());
      if (inserted) out.push_back(ObjectTrace{oid, {}});
      out[s->second].activities.push_back(e->activity);
    }
  }
  if (warnings) {
    for (const auto& [oid, type] : log.objects()) {
      if (type == otype && !slot.contains(oid)) {
        warnings->push_back("object '" + oid + "' of type '" + otype.name() + "' has no events and is ignored");
      }
    }
  }
  return out;
}

void segment_sequences(ProcessTree& tree, const std::set<std::string>& shared) {
  for (auto& c : tree.children) segment_sequences(c, shared);
  if (tree.op != Operator::Seq || tree.children.size() < 3) return;

  auto plain = [&](const ProcessTree& c) {
    auto labels = leaf_labels(c);
    return std::none_of(labels.begin(), labels.end(), [&](const auto& l) { return shared.contains(l); });
  };
  std::vector<ProcessTree> regrouped;
  std::size_t i = 0;
  const std::size_t n = tree.children.size();
  while (i < n) {
    std::size_t j = i;
    while (j < n && plain(tree.children[j])) ++j;
    if (j - i >= 2 && j - i < n) {
      std::vector<ProcessTree> run(std::make_move_iterator(tree.children.begin() + static_cast<std::ptrdiff_t>(i)),
                                   std::make_move_iterator(tree.children.begin() + static_cast<std::ptrdiff_t>(j)));
      regrouped.push_back(ProcessTree::node(Operator::Seq, std::move(run)));
      i = j;
    } else if (j > i) {
      for (; i < j; ++i) regrouped.push_back(std::move(tree.children[i]));
    } else {
      regrouped.push_back(std::move(tree.children[i++]));
    }
  }
  tree.children = std::move(regrouped);
}

namespace {

struct Compiled {
  net::AcceptingOCPN net;
  std::vector<std::string> place_order;
  std::vector<std::string> transition_order;
  std::vector<net::Fragment> fragments;
  std::string source;
  std::string sink;
};

class Compiler {
 public:
  explicit Compiler(ObjectType otype) : otype_(std::move(otype)) {}

  Compiled run(const ProcessTree& tree) {
    out_.source = place("p/src");
    out_.sink = place("p/sink");
    compile(tree, out_.source, out_.sink, std::nullopt, 0);
    out_.net.initial_marking()[out_.source] = 1;
    out_.net.final_marking()[out_.sink] = 1;
    return std::move(out_);
  }

 private:
  std::string place(std::string id) {
    out_.net.add_place(net::Place{id, otype_});
    out_.place_order.push_back(id);
    return id;
  }

  std::string transition(std::string id, std::optional<std::string> label) {
    net::Transition t;
    t.id = id;
    if (label) t.origins = {id};
    t.label = std::move(label);
    out_.net.add_transition(std::move(t));
    out_.transition_order.push_back(id);
    return id;
  }

  void wire(const std::string& in, const std::string& t, const std::string& out) {
    out_.net.add_arc(in, t);
    out_.net.add_arc(t, out);
  }

  void compile(const ProcessTree& n, const std::string& in, const std::string& out, std::optional<std::size_t> parent,
               std::size_t depth) {
    const std::string& id = n.id;
    if (n.op == Operator::Activity || n.op == Operator::Silent) {
      auto t = transition("t" + id, n.op == Operator::Activity ? std::optional(n.label) : std::nullopt);
      wire(in, t, out);
      return;
    }

    std::size_t index = out_.fragments.size();
    out_.fragments.push_back(net::Fragment{otype_, id, parent, depth, net::BlockKind::Seq, in, out, {}, {}, {}});
    auto places_before = out_.place_order.size();
    auto transitions_before = out_.transition_order.size();

    switch (n.op) {
      case Operator::Seq: {
        out_.fragments[index].kind = net::BlockKind::Seq;
        std::string prev = in;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          std::string next = i + 1 == n.children.size() ? out : place("p" + id + "/" + std::to_string(i + 1));
          compile(n.children[i], prev, next, index, depth + 1);
          prev = next;
        }
        break;
      }
      case Operator::Xor: {
        out_.fragments[index].kind = net::BlockKind::Xor;
        for (const auto& c : n.children) compile(c, in, out, index, depth + 1);
        break;
      }
      case Operator::And: {
        out_.fragments[index].kind = net::BlockKind::And;
        auto split = transition("t" + id + "/split", std::nullopt);
        out_.net.add_arc(in, split);
        std::vector<std::string> ends;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          auto a = place("p" + id + "/a" + std::to_string(i));
          auto b = place("p" + id + "/b" + std::to_string(i));
          out_.net.add_arc(split, a);
          compile(n.children[i], a, b, index, depth + 1);
          ends.push_back(b);
        }
        auto join = transition("t" + id + "/join", std::nullopt);
        for (const auto& b : ends) out_.net.add_arc(b, join);
        out_.net.add_arc(join, out);
        break;
      }
      case Operator::Loop: {
        out_.fragments[index].kind = net::BlockKind::Loop;
        auto enter = transition("t" + id + "/in", std::nullopt);
        auto left = place("p" + id + "/l");
        auto right = place("p" + id + "/r");
        wire(in, enter, left);
        compile(n.children.front(), left, right, index, depth + 1);
        for (std::size_t i = 1; i < n.children.size(); ++i) compile(n.children[i], right, left, index, depth + 1);
        auto leave = transition("t" + id + "/out", std::nullopt);
        wire(right, leave, out);
        break;
      }
      default:
        break;
    }

    auto& f = out_.fragments[index];
    f.places.assign(out_.place_order.begin() + static_cast<std::ptrdiff_t>(places_before), out_.place_order.end());
    f.transitions.assign(out_.transition_order.begin() + static_cast<std::ptrdiff_t>(transitions_before),
                         out_.transition_order.end());
    for (const auto& t : f.transitions) {
      if (!out_.net.transition(t)->silent()) f.labeled.push_back(t);
    }
  }

  ObjectType otype_;
  Compiled out_;
};

}  // namespace

net::AcceptingOCPN compile_tree(const ProcessTree& tree, const ObjectType& otype) {
  auto c = Compiler(otype).run(tree);
  c.net.set_fragments(std::make_shared<const std::vector<net::Fragment>>(std::move(c.fragments)));
  return std::move(c.net);
}

DiscoveryResult discover_models(const ocel::EventLog& input) {
  if (input.empty()) throw Error("cannot discover a model from an empty log");
  auto log = ocel::project_workflow(input);
  DiscoveryResult result;

  auto types = log.workflow_types();
  std::map<std::string, std::set<ObjectType>> label_types;
  std::vector<std::pair<ObjectType, TraceLog>> logs;
  for (const auto& ot : types) {
    TraceLog tl;
    for (const auto& ot_trace : extract_traces(log, ot, &result.warnings)) {
      tl.add(ot_trace.activities);
      for (const auto& a : ot_trace.activities) label_types[a].insert(ot);
    }
    logs.emplace_back(ot, std::move(tl));
  }
  std::set<std::string> shared;
  for (const auto& [label, ots] : label_types) {
    if (ots.size() >= 2) shared.insert(label);
  }

  // labeled ids by first occurrence; activities related to >=2 objects of a type
  std::map<std::string, std::string> label_id;
  std::map<ObjectType, std::set<std::string>> multi;
  std::size_t next_t = 0;
  for (const auto& e : log.events()) {
    if (!label_id.contains(e->activity)) label_id[e->activity] = "t" + std::to_string(next_t++);
    for (const auto& [ot, objs] : e->wfomap) {
      if (objs.size() >= 2) multi[ot].insert(e->activity);
    }
  }

  net::AcceptingOCPN merged;
  auto fragments = std::make_shared<std::vector<net::Fragment>>();
  std::size_t next_p = 0;
  std::vector<std::pair<ObjectType, ProcessTree>> trees;

  for (auto& [ot, tl] : logs) {
    auto tree = mine_tree(tl);
    segment_sequences(tree, shared);
    assign_ids(tree);
    auto c = Compiler(ot).run(tree);

    std::map<std::string, std::string> rename;
    for (const auto& pid : c.place_order) {
      rename[pid] = "p" + std::to_string(next_p++);
      merged.add_place(net::Place{rename[pid], ot});
    }
    for (const auto& tid : c.transition_order) {
      const auto* t = c.net.transition(tid);
      if (t->silent()) {
        rename[tid] = "t" + std::to_string(next_t++);
        merged.add_transition(net::Transition{rename[tid], std::nullopt, {}, {}, {}});
      } else {
        rename[tid] = label_id.at(*t->label);
        if (!merged.transition(rename[tid])) {
          merged.add_transition(net::Transition{rename[tid], t->label, {}, {rename[tid]}, {}});
        }
      }
    }
    for (const auto& a : c.net.arcs()) {
      const auto& tid = c.net.place(a.source) ? a.target : a.source;
      const auto* t = c.net.transition(tid);
      bool variable = !t->silent() && multi[ot].contains(*t->label);
      merged.add_arc(rename.at(a.source), rename.at(a.target), variable);
    }
    merged.initial_marking()[rename.at(c.source)] = 1;
    merged.final_marking()[rename.at(c.sink)] = 1;

    std::size_t offset = fragments->size();
    for (auto f : c.fragments) {
      if (f.parent) *f.parent += offset;
      f.entry = rename.at(f.entry);
      f.exit = rename.at(f.exit);
      for (auto* ids : {&f.places, &f.transitions, &f.labeled}) {
        for (auto& id : *ids) id = rename.at(id);
      }
      fragments->push_back(std::move(f));
    }
    trees.emplace_back(ot, std::move(tree));
  }
  merged.set_fragments(fragments);

  auto replayed = net::replay(log, merged);
  auto diagnostics = replayed.diagnostics;
  for (const auto& tid : net::uncovered_labeled(merged, replayed)) {
    diagnostics.push_back(Diagnostic{"", "transition " + tid + " ('" + *merged.transition(tid)->label + "') is never fired"});
  }
  if (!replayed.fits || !diagnostics.empty()) {
    throw UnfitModelError("discovered net does not fit the log", std::move(diagnostics));
  }

  for (auto& [ot, tree] : trees) result.models.push_back(TypedModel{ot, std::move(tree), net::project_type(merged, ot)});
  result.net = std::move(merged);
  result.replayed = std::move(replayed);
  return result;
}

net::AcceptingOCPN discover(const ocel::EventLog& log) { return discover_models(log).net; }

}  // namespace inexa::discovery
