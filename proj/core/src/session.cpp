#include "inexa/session.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "inexa/errors.hpp"
#include "inexa/ocel_json.hpp"

namespace inexa::session {

namespace {

AbstractionKind kind_of(net::BlockKind b) {
  switch (b) {
    case net::BlockKind::Seq: return AbstractionKind::Seq;
    case net::BlockKind::Xor: return AbstractionKind::Xor;
    case net::BlockKind::And: return AbstractionKind::And;
    case net::BlockKind::Loop: return AbstractionKind::Loop;
  }
  return AbstractionKind::Seq;
}

std::string lowest_id(const std::set<std::string>& ids) {
  return ids.empty() ? std::string{} : *std::min_element(ids.begin(), ids.end(), net::id_less);
}

}  // namespace

AbstractionTree AbstractionTree::build(const AcceptingOCPN& original, const Repository& repo) {
  AbstractionTree tree;
  const auto& fragments = original.fragments();
  for (const auto& ot : original.object_types()) {
    std::optional<std::size_t> root;
    auto targets = abstraction::complete_targets(original, ot);
    auto kind = ocel::complete_kind_for(ot);
    if (!targets.empty() && abstraction::admissible(original, abstraction::make_record(kind, ot, targets), repo)) {
      root = tree.nodes_.size();
      tree.nodes_.push_back(TreeNode{ot, kind, std::nullopt, std::nullopt, {}, 0, targets});
    }
    if (ot.type_class() == ocel::TypeClass::WorkflowLifecycle) continue;

    std::map<std::size_t, std::size_t> node_of_fragment;
    for (std::size_t i = 0; i < fragments.size(); ++i) {
      const auto& f = fragments[i];
      if (f.otype != ot || f.labeled.size() < 2) continue;
      auto fkind = kind_of(f.kind);
      auto record = abstraction::make_record(fkind, ot, abstraction::fragment_targets(original, i));
      if (!abstraction::admissible(original, record, repo)) continue;

      std::optional<std::size_t> parent = root;
      for (auto up = f.parent; up; up = fragments[*up].parent) {
        if (auto it = node_of_fragment.find(*up); it != node_of_fragment.end()) {
          parent = it->second;
          break;
        }
      }
      std::size_t index = tree.nodes_.size();
      std::size_t depth = parent ? tree.nodes_[*parent].depth + 1 : 0;
      tree.nodes_.push_back(TreeNode{ot, fkind, i, parent, {}, depth, {f.labeled.begin(), f.labeled.end()}});
      if (parent) tree.nodes_[*parent].children.push_back(index);
      node_of_fragment[i] = index;
    }
  }
  return tree;
}

std::optional<std::size_t> AbstractionTree::root_of(const ObjectType& otype) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].fragment && nodes_[i].otype == otype) return i;
  }
  return std::nullopt;
}

AbstractionRecord AbstractionTree::record_for(std::size_t node, const AcceptingOCPN& current) const {
  const auto& n = nodes_.at(node);
  if (!n.fragment) return abstraction::make_record(n.kind, n.otype, abstraction::complete_targets(current, n.otype));
  return abstraction::make_record(n.kind, n.otype, abstraction::fragment_targets(current, *n.fragment));
}

std::optional<std::size_t> AbstractionTree::match(const ObjectType& atype, const std::set<std::string>& originals) const {
  if (!atype.is_abstraction()) return std::nullopt;
  auto kind = atype.abstraction_kind();
  auto target = atype.abstraction_target();
  if (ocel::is_complete(kind)) {
    auto root = root_of(target);
    if (root && nodes_[*root].kind == kind) return root;
    return std::nullopt;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.fragment && n.kind == kind && n.otype == target && n.originals == originals) return i;
  }
  return std::nullopt;
}

std::string AbstractionTree::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    std::vector<std::string> ts(n.originals.begin(), n.originals.end());
    std::sort(ts.begin(), ts.end(), net::id_less);
    out.push_back({{"node", i},
                   {"otype", n.otype.name()},
                   {"kind", ocel::suffix(n.kind)},
                   {"parent", n.parent ? nlohmann::json(*n.parent) : nlohmann::json(nullptr)},
                   {"depth", n.depth},
                   {"children", n.children},
                   {"transitions", ts}});
  }
  return out.dump(2) + "\n";
}

Goal size_goal(std::size_t threshold) {
  return [threshold](const AcceptingOCPN& net) { return net::size(net).elements <= threshold; };
}

Session::Session(ocel::EventLog log, SessionOptions options, const Repository& repo)
    : options_(std::move(options)), repo_(&repo), log_(std::move(log)), ids_(options_.seed) {
  auto found = discovery::discover_models(log_);
  original_ = std::move(found.net);
  typed_ = std::move(found.models);
  warnings_ = std::move(found.warnings);
  replayed_ = std::move(found.replayed);
  tree_ = AbstractionTree::build(original_, *repo_);
  for (const auto& e : log_.events()) {
    for (const auto& [ot, objs] : e->wfomap) ++event_counts_[ot];
  }
  refresh();
  if (options_.initialize) run_initialize();
}

void Session::refresh() {
  std::vector<AbstractionRecord> steps;
  model_ = abstraction::overlay(log_, original_, *repo_, &replayed_, &steps);
  steps_ = std::move(steps);
}

void Session::run_initialize() {
  Goal goal = options_.goal ? options_.goal : size_goal(options_.threshold);
  while (!goal(model_)) {
    auto next = retrieve_next();
    if (!next) {
      warnings_.push_back("abstraction tree exhausted with " + std::to_string(net::size(model_).elements) +
                          " model elements, above the threshold of " + std::to_string(options_.threshold));
      break;
    }
    apply(next->record);
  }
}

std::optional<std::size_t> Session::node_of(const std::string& oid) const {
  auto type = log_.type_of(oid);
  if (!type) return std::nullopt;
  std::set<std::string> originals;
  for (const auto& eid : log_.events_with(oid)) {
    if (auto it = replayed_.et.find(eid); it != replayed_.et.end()) originals.insert(it->second);
  }
  return tree_.match(*type, originals);
}

std::set<std::size_t> Session::applied_nodes() const {
  std::set<std::size_t> out;
  for (const auto& oid : log_.history().applied) {
    if (auto n = node_of(oid)) out.insert(*n);
  }
  return out;
}

bool Session::is_exempt_subprocess(const ObjectType& otype) const {
  if (otype.type_class() != ocel::TypeClass::WorkflowSubprocess) return false;
  std::optional<ObjectType> best;
  std::size_t most = 0;
  for (const auto& [ot, n] : event_counts_) {
    if (ot.type_class() != ocel::TypeClass::WorkflowSubprocess) continue;
    if (!best || n > most) {
      best = ot;
      most = n;
    }
  }
  return best && *best == otype;
}

std::vector<Candidate> Session::available() const {
  if (available_cache_ && available_cache_->first == log_.history().applied) return available_cache_->second;

  auto applied = applied_nodes();
  auto live_types = model_.object_types();
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < tree_.nodes().size(); ++i) {
    if (applied.contains(i)) continue;
    bool covered = false;
    for (auto up = tree_.node(i).parent; up && !covered; up = tree_.node(*up).parent) covered = applied.contains(*up);
    if (covered) continue;
    const auto& n = tree_.node(i);
    // never aggregate the last workflow type away
    if (!n.fragment && live_types.size() == 1 && live_types.front() == n.otype) continue;
    auto record = tree_.record_for(i, model_);
    if (record.transitions.empty()) continue;
    if (!abstraction::admissible(model_, record, *repo_)) continue;
    out.push_back(Candidate{std::move(record), i, "tree"});
  }
  available_cache_.emplace(log_.history().applied, out);
  return out;
}

std::vector<Candidate> Session::redoable() const {
  if (redoable_cache_ && redoable_cache_->first == log_.history().applied) return redoable_cache_->second;

  const auto& history = log_.history().applied;
  std::vector<std::optional<std::size_t>> nodes;
  std::set<std::size_t> applied;
  for (const auto& oid : history) {
    nodes.push_back(node_of(oid));
    if (nodes.back()) applied.insert(*nodes.back());
  }
  std::vector<Candidate> out;
  for (std::size_t k = 0; k < history.size(); ++k) {
    std::string rule;
    if (k + 1 == history.size()) rule = "last";
    if (nodes[k]) {
      bool coarsest = true;
      for (auto up = tree_.node(*nodes[k]).parent; up && coarsest; up = tree_.node(*up).parent) {
        coarsest = !applied.contains(*up);
      }
      if (coarsest) rule += rule.empty() ? "coarsest" : ",coarsest";
    }
    if (rule.empty()) continue;
    try {
      abstraction::overlay(ocel::st_abs_inverse(log_, history[k]), original_, *repo_, &replayed_);
    } catch (const Error&) {
      continue;
    }
    out.push_back(Candidate{steps_.at(k), nodes[k], rule});
  }
  redoable_cache_.emplace(history, out);
  return out;
}

std::optional<Candidate> Session::retrieve_next() {
  auto av = available();
  auto pick = [](const std::vector<const Candidate*>& cs) -> std::optional<Candidate> {
    if (cs.empty()) return std::nullopt;
    return *cs.front();
  };

  // 1. complete lifecycle aggregations
  std::vector<const Candidate*> stage;
  for (const auto& c : av) {
    if (c.record.kind() == AbstractionKind::Cla) stage.push_back(&c);
  }
  if (auto c = pick(stage)) return c;

  // 2. complete aggregations of subprocess (but the coarsest), device and resource types
  for (const auto& c : av) {
    auto cls = c.record.target.type_class();
    bool sub = c.record.kind() == AbstractionKind::Csa && !is_exempt_subprocess(c.record.target);
    bool res_dev = c.record.kind() == AbstractionKind::Caa &&
                   (cls == ocel::TypeClass::WorkflowResource || cls == ocel::TypeClass::WorkflowDevice);
    if (sub || res_dev) stage.push_back(&c);
  }
  if (auto c = pick(stage)) return c;

  // 3. business types, leaves to root, switching type after each retrieval
  std::vector<ObjectType> types;
  for (const auto& ot : original_.object_types()) {
    if (ot.type_class() == ocel::TypeClass::WorkflowBusiness || is_exempt_subprocess(ot)) types.push_back(ot);
  }
  for (std::size_t k = 0; k < types.size(); ++k) {
    std::size_t slot = (round_robin_ + k) % types.size();
    const Candidate* best = nullptr;
    const Candidate* root = nullptr;
    for (const auto& c : av) {
      if (c.record.target != types[slot]) continue;
      const auto& n = tree_.node(*c.node);
      if (!n.fragment) {
        root = &c;
        continue;
      }
      if (!best) {
        best = &c;
        continue;
      }
      const auto& bn = tree_.node(*best->node);
      if (n.depth > bn.depth ||
          (n.depth == bn.depth && net::id_less(lowest_id(c.record.transitions), lowest_id(best->record.transitions)))) {
        best = &c;
      }
    }
    if (!best) best = root;
    if (best) {
      round_robin_ = (slot + 1) % types.size();
      return *best;
    }
  }
  return std::nullopt;
}

AbstractionRecord Session::apply(const AbstractionRecord& record) {
  auto av = available();
  auto it = std::find_if(av.begin(), av.end(), [&](const Candidate& c) {
    return c.record.atype == record.atype && c.record.transitions == record.transitions;
  });
  if (it == av.end()) throw NotAvailableError(abstraction::describe(record) + " is not available");

  std::set<std::string> originals;
  for (const auto& tid : record.transitions) {
    const auto& o = model_.transition(tid)->origins;
    originals.insert(o.begin(), o.end());
  }
  std::set<std::string> events;
  for (const auto& [eid, tid] : replayed_.et) {
    if (originals.contains(tid)) events.insert(eid);
  }
  auto applied = it->record;
  applied.oid = ids_.next_fresh(log_);
  log_ = ocel::st_abs(log_, events, applied.atype, applied.oid);
  refresh();
  return applied;
}

void Session::redo(const std::string& oid) {
  auto rd = redoable();
  if (std::none_of(rd.begin(), rd.end(), [&](const Candidate& c) { return c.record.oid == oid; })) {
    throw NotRedoableError("'" + oid + "' is not a redoable abstraction");
  }
  log_ = ocel::st_abs_inverse(log_, oid);
  refresh();
}

std::string Session::export_log() const { return ocel::serialize_log(log_); }

}  // namespace inexa::session
