#include "inexa/abstraction.hpp"

#include <algorithm>
#include <cstdint>

#include "inexa/errors.hpp"
#include "inexa/soundness.hpp"

namespace inexa::abstraction {

using net::BlockKind;
using net::Fragment;

AbstractionRecord make_record(AbstractionKind kind, const ObjectType& target, std::set<std::string> transitions,
                              std::string oid) {
  return AbstractionRecord{ObjectType::abstraction(target, kind), target, std::move(transitions), std::move(oid)};
}

std::string describe(const AbstractionRecord& record) {
  std::string out(ocel::display_name(record.kind()));
  out += " of " + record.target.short_name() + " {";
  std::vector<std::string> ids(record.transitions.begin(), record.transitions.end());
  std::sort(ids.begin(), ids.end(), net::id_less);
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + ids[i];
  return out + "}";
}

std::optional<BlockKind> block_kind(AbstractionKind kind) {
  switch (kind) {
    case AbstractionKind::Seq: return BlockKind::Seq;
    case AbstractionKind::Xor: return BlockKind::Xor;
    case AbstractionKind::And: return BlockKind::And;
    case AbstractionKind::Loop: return BlockKind::Loop;
    default: return std::nullopt;
  }
}

std::set<std::string> complete_targets(const AcceptingOCPN& net, const ObjectType& otype) {
  std::set<std::string> out;
  for (const auto& [id, t] : net.transitions()) {
    if (!t.silent() && net.transition_types(id).contains(otype)) out.insert(id);
  }
  return out;
}

std::set<std::string> fragment_targets(const AcceptingOCPN& net, std::size_t index) {
  std::set<std::string> out;
  for (const auto& leaf : net.fragments().at(index).labeled) {
    if (auto cur = net.current_of(leaf)) out.insert(*cur);
  }
  return out;
}

namespace {

struct Region {
  std::set<std::string> transitions;  // labeled targets and surviving interior silent transitions
  std::set<std::string> places;       // surviving interior places
};

std::optional<Region> intact_region(const AcceptingOCPN& net, const Fragment& f, const std::set<std::string>& targets) {
  if (!net.place(f.entry) || !net.place(f.exit)) return std::nullopt;
  std::set<std::string> leaves(f.labeled.begin(), f.labeled.end());
  Region r;
  for (const auto& tid : targets) {
    const auto* t = net.transition(tid);
    if (!t || t->silent()) return std::nullopt;
    for (const auto& o : t->origins) {
      if (!leaves.contains(o)) return std::nullopt;
    }
    r.transitions.insert(tid);
  }
  for (const auto& tid : f.transitions) {
    if (const auto* t = net.transition(tid); t && t->silent()) r.transitions.insert(tid);
  }
  for (const auto& pid : f.places) {
    if (net.place(pid)) r.places.insert(pid);
  }
  auto inside_place = [&](const std::string& pid) {
    const auto* p = net.place(pid);
    if (p->otype != f.otype) return true;
    return r.places.contains(pid) || pid == f.entry || pid == f.exit;
  };
  for (const auto& tid : r.transitions) {
    for (const auto& p : net.preset(tid)) {
      if (!inside_place(p)) return std::nullopt;
    }
    for (const auto& p : net.postset(tid)) {
      if (!inside_place(p)) return std::nullopt;
    }
  }
  for (const auto& pid : r.places) {
    for (const auto& t : net.preset(pid)) {
      if (!r.transitions.contains(t)) return std::nullopt;
    }
    for (const auto& t : net.postset(pid)) {
      if (!r.transitions.contains(t)) return std::nullopt;
    }
  }
  return r;
}

std::string glyph(BlockKind kind) {
  switch (kind) {
    case BlockKind::Seq: return "→";
    case BlockKind::Xor: return "×";
    case BlockKind::And: return "∧";
    case BlockKind::Loop: return "↺";
  }
  return "?";
}

std::string composite_label(BlockKind kind, const std::vector<std::string>& members) {
  std::string out = glyph(kind) + "(?" + members.front();
  if (members.size() > 2) out += ", ...";
  out += ", ?" + members.back() + ")";
  return out;
}

std::string min_id(const std::set<std::string>& ids) {
  return *std::min_element(ids.begin(), ids.end(), net::id_less);
}

std::vector<std::string> merged_origins(const AcceptingOCPN& net, const std::vector<std::string>& ids) {
  std::set<std::string> all;
  for (const auto& id : ids) {
    const auto& o = net.transition(id)->origins;
    all.insert(o.begin(), o.end());
  }
  return {all.begin(), all.end()};
}

bool marked(const AcceptingOCPN& net, const std::string& pid) {
  return net.initial_marking().contains(pid) || net.final_marking().contains(pid);
}

AcceptingOCPN apply_block(const AcceptingOCPN& net, const std::set<std::string>& targets, const ObjectType& otype,
                          BlockKind kind) {
  auto index = find_sese(net, otype, targets, kind);
  if (!index) throw InadmissibleError("transitions are not a SESE block of the requested kind");
  const auto& f = net.fragments()[*index];
  auto region = *intact_region(net, f, targets);

  // members in tree order: position of a transition's first leaf
  std::map<std::string, std::size_t> leaf_pos;
  for (std::size_t i = 0; i < f.labeled.size(); ++i) leaf_pos[f.labeled[i]] = i;
  std::vector<std::string> ordered(targets.begin(), targets.end());
  auto first_leaf = [&](const std::string& tid) {
    std::size_t best = SIZE_MAX;
    for (const auto& o : net.transition(tid)->origins) best = std::min(best, leaf_pos.at(o));
    return best;
  };
  std::sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) { return first_leaf(a) < first_leaf(b); });

  net::Transition agg;
  agg.id = min_id(targets);
  for (const auto& tid : ordered) {
    const auto* t = net.transition(tid);
    agg.members.push_back(*t->label);
    agg.refs.insert(t->refs.begin(), t->refs.end());
  }
  agg.label = composite_label(kind, agg.members);
  agg.origins = merged_origins(net, ordered);

  bool var_in = false, var_out = false;
  std::map<std::string, bool> other_in, other_out;  // other-type place -> variable
  for (const auto& tid : region.transitions) {
    for (const auto& p : net.preset(tid)) {
      bool v = net.arc(p, tid)->variable;
      if (net.place(p)->otype != otype) other_in[p] = other_in[p] || v;
      else if (p == f.entry) var_in = var_in || v;
    }
    for (const auto& p : net.postset(tid)) {
      bool v = net.arc(tid, p)->variable;
      if (net.place(p)->otype != otype) other_out[p] = other_out[p] || v;
      else if (p == f.exit) var_out = var_out || v;
    }
  }
  std::set<std::string> internal_other;
  for (const auto& [p, v] : other_in) {
    if (!other_out.contains(p) || marked(net, p)) continue;
    auto pre = net.preset(p), post = net.postset(p);
    bool inside = std::all_of(pre.begin(), pre.end(), [&](const auto& t) { return region.transitions.contains(t); }) &&
                  std::all_of(post.begin(), post.end(), [&](const auto& t) { return region.transitions.contains(t); });
    if (inside) internal_other.insert(p);
  }

  AcceptingOCPN out = net;
  for (const auto& tid : region.transitions) out.remove_transition(tid);
  for (const auto& pid : region.places) out.remove_place(pid);
  for (const auto& pid : internal_other) out.remove_place(pid);
  const std::string id = agg.id;
  out.add_transition(std::move(agg));
  out.add_arc(f.entry, id, var_in);
  out.add_arc(id, f.exit, var_out);
  for (const auto& [p, v] : other_in) {
    if (!internal_other.contains(p)) out.add_arc(p, id, v);
  }
  for (const auto& [p, v] : other_out) {
    if (!internal_other.contains(p)) out.add_arc(id, p, v);
  }
  return out;
}

// Orders survivors into a chain s1 -> s2 -> ... where the places between two
// neighbours connect exactly those two. Empty when they do not form one.
std::vector<std::string> sequential_chain(const AcceptingOCPN& net, const std::set<std::string>& ids) {
  std::map<std::string, std::string> next;
  std::set<std::string> has_prev;
  for (const auto& s : ids) {
    auto post = net.postset(s);
    std::set<std::string> consumers;
    bool clean = !post.empty();
    for (const auto& p : post) {
      auto pre = net.preset(p);
      auto c = net.postset(p);
      if (pre.size() != 1 || c.size() != 1 || marked(net, p)) clean = false;
      consumers.insert(c.begin(), c.end());
    }
    if (!clean || consumers.size() != 1 || !ids.contains(*consumers.begin())) continue;
    const auto& succ = *consumers.begin();
    if (net.preset(succ) != post) continue;
    next[s] = succ;
    has_prev.insert(succ);
  }
  std::vector<std::string> heads;
  for (const auto& s : ids) {
    if (!has_prev.contains(s)) heads.push_back(s);
  }
  if (heads.size() != 1) return {};
  std::vector<std::string> chain{heads.front()};
  while (next.contains(chain.back())) {
    chain.push_back(next.at(chain.back()));
    if (chain.size() > ids.size()) return {};
  }
  return chain.size() == ids.size() ? chain : std::vector<std::string>{};
}

AcceptingOCPN apply_complete(const AcceptingOCPN& net, const std::set<std::string>& targets, const ObjectType& otype,
                             AbstractionKind kind) {
  std::set<std::string> touched;
  std::vector<std::string> places;
  for (const auto& [pid, p] : net.places()) {
    if (p.otype != otype) continue;
    places.push_back(pid);
    for (const auto& t : net.preset(pid)) touched.insert(t);
    for (const auto& t : net.postset(pid)) touched.insert(t);
  }
  AcceptingOCPN out = net;
  for (const auto& pid : places) out.remove_place(pid);
  std::set<std::string> survivors;
  for (const auto& tid : touched) {
    if (out.preset(tid).empty() && out.postset(tid).empty()) {
      out.remove_transition(tid);
    } else {
      out.transition_mut(tid)->refs.insert(otype);
      survivors.insert(tid);
    }
  }
  (void)targets;

  if (kind != AbstractionKind::Cla || survivors.size() < 2) return out;
  auto chain = sequential_chain(out, survivors);
  if (chain.empty()) return out;

  net::Transition agg;
  agg.id = min_id(survivors);
  agg.label = otype.short_name();
  agg.origins = merged_origins(out, chain);
  for (const auto& tid : chain) {
    const auto* t = out.transition(tid);
    agg.members.push_back(*t->label);
    agg.refs.insert(t->refs.begin(), t->refs.end());
  }
  agg.refs.erase(otype);

  std::vector<std::pair<std::string, bool>> pre, post;
  for (const auto& p : out.preset(chain.front())) pre.emplace_back(p, out.arc(p, chain.front())->variable);
  for (const auto& p : out.postset(chain.back())) post.emplace_back(p, out.arc(chain.back(), p)->variable);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    for (const auto& p : out.postset(chain[i])) out.remove_place(p);
  }
  for (const auto& tid : chain) out.remove_transition(tid);
  const std::string id = agg.id;
  out.add_transition(std::move(agg));
  for (const auto& [p, v] : pre) out.add_arc(p, id, v);
  for (const auto& [p, v] : post) out.add_arc(id, p, v);
  return out;
}

RepositoryEntry complete_entry(AbstractionKind kind) {
  return RepositoryEntry{
      [kind](const AcceptingOCPN& net, const std::set<std::string>& ts, const ObjectType& ot) {
        if (!ot.is_workflow() || ocel::complete_kind_for(ot) != kind) return false;
        auto targets = complete_targets(net, ot);
        return !targets.empty() && targets == ts;
      },
      [kind](const AcceptingOCPN& net, const std::set<std::string>& ts, const ObjectType& ot) {
        return apply_complete(net, ts, ot, kind);
      }};
}

RepositoryEntry block_entry(BlockKind kind) {
  return RepositoryEntry{
      [kind](const AcceptingOCPN& net, const std::set<std::string>& ts, const ObjectType& ot) {
        return is_sese(net, ot, ts, kind);
      },
      [kind](const AcceptingOCPN& net, const std::set<std::string>& ts, const ObjectType& ot) {
        return apply_block(net, ts, ot, kind);
      }};
}

}  // namespace

std::optional<std::size_t> find_sese(const AcceptingOCPN& net, const ObjectType& otype,
                                     const std::set<std::string>& transitions, BlockKind kind) {
  if (transitions.size() < 2) return std::nullopt;
  const auto& fragments = net.fragments();
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    const auto& f = fragments[i];
    if (f.otype != otype || f.kind != kind) continue;
    if (fragment_targets(net, i) != transitions) continue;
    if (intact_region(net, f, transitions)) return i;
  }
  return std::nullopt;
}

bool is_sese(const AcceptingOCPN& net, const ObjectType& otype, const std::set<std::string>& transitions,
             BlockKind kind) {
  return find_sese(net, otype, transitions, kind).has_value();
}

const Repository& Repository::standard() {
  static const Repository repo = [] {
    Repository r;
    r.add(AbstractionKind::Caa, complete_entry(AbstractionKind::Caa));
    r.add(AbstractionKind::Csa, complete_entry(AbstractionKind::Csa));
    r.add(AbstractionKind::Cla, complete_entry(AbstractionKind::Cla));
    r.add(AbstractionKind::Seq, block_entry(BlockKind::Seq));
    r.add(AbstractionKind::Xor, block_entry(BlockKind::Xor));
    r.add(AbstractionKind::And, block_entry(BlockKind::And));
    r.add(AbstractionKind::Loop, block_entry(BlockKind::Loop));
    return r;
  }();
  return repo;
}

const RepositoryEntry* Repository::find(AbstractionKind kind) const {
  auto it = entries_.find(kind);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

using Matrix = std::vector<std::vector<char>>;

// follows[a][b]: some run fires transition a and later transition b.
Matrix follows(const net::StateSpace& ss) {
  const std::size_t n = ss.markings.size();
  const std::size_t words = (ss.transitions.size() + 63) / 64;

  // Tarjan, iterative; SCCs come out in reverse topological order.
  std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0), comp(n, SIZE_MAX);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;
  std::size_t counter = 0, comps = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != SIZE_MAX) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i == 0) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      if (i < ss.edges[v].size()) {
        auto w = ss.edges[v][i++].second;
        if (index[w] == SIZE_MAX) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
      auto done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }

  // future[c]: transitions that can fire from (and after entering) component c
  std::vector<std::vector<std::uint64_t>> future(comps, std::vector<std::uint64_t>(words, 0));
  std::vector<std::vector<std::size_t>> members(comps);
  for (std::size_t s = 0; s < n; ++s) members[comp[s]].push_back(s);
  for (std::size_t c = 0; c < comps; ++c) {
    for (auto s : members[c]) {
      for (auto [t, d] : ss.edges[s]) {
        future[c][t / 64] |= std::uint64_t{1} << (t % 64);
        if (comp[d] != c) {
          for (std::size_t w = 0; w < words; ++w) future[c][w] |= future[comp[d]][w];
        }
      }
    }
  }

  Matrix out(ss.transitions.size(), std::vector<char>(ss.transitions.size(), 0));
  for (std::size_t s = 0; s < n; ++s) {
    for (auto [t, d] : ss.edges[s]) {
      const auto& fut = future[comp[d]];
      for (std::size_t u = 0; u < ss.transitions.size(); ++u) {
        if (fut[u / 64] >> (u % 64) & 1) out[t][u] = 1;
      }
    }
  }
  return out;
}

// Order relation lifted to original transition ids.
struct OriginOrder {
  std::map<std::string, std::size_t> owner;  // original id -> transition index
  Matrix rel;
};

std::optional<OriginOrder> origin_order(const AcceptingOCPN& net) {
  auto ss = net::explore(net, kBehaviourCheckBound);
  if (!ss.complete) return std::nullopt;
  OriginOrder o;
  o.rel = follows(ss);
  for (std::size_t i = 0; i < ss.transitions.size(); ++i) {
    for (const auto& orig : net.transition(ss.transitions[i])->origins) o.owner[orig] = i;
  }
  return o;
}

// nullopt: could not decide within the bound
std::optional<std::string> order_reversal(const AcceptingOCPN& before, const AcceptingOCPN& after) {
  auto b = origin_order(before);
  auto a = origin_order(after);
  if (!b || !a) return std::nullopt;
  for (const auto& [x, bx] : b->owner) {
    auto ax = a->owner.find(x);
    if (ax == a->owner.end()) continue;
    for (const auto& [y, by] : b->owner) {
      auto ay = a->owner.find(y);
      if (ay == a->owner.end() || ax->second == ay->second) continue;
      bool strict_before = b->rel[bx][by] && !b->rel[by][bx];
      bool reversed_after = a->rel[ay->second][ax->second] && !a->rel[ax->second][ay->second];
      if (strict_before && reversed_after) return x + " before " + y + " is reversed";
    }
  }
  return std::string{};
}

std::optional<AcceptingOCPN> evaluate(const AcceptingOCPN& net, const AbstractionRecord& record, const Repository& repo,
                                      Admissibility& verdict) {
  verdict = {};
  if (!record.target.is_workflow() || record.atype.abstraction_target() != record.target) {
    verdict.reason = "abstraction type does not aggregate " + record.target.name();
    return std::nullopt;
  }
  const auto* entry = repo.find(record.kind());
  if (!entry) {
    verdict.reason = "no repository entry for " + std::string(ocel::suffix(record.kind()));
    return std::nullopt;
  }
  if (!entry->matches(net, record.transitions, record.target)) {
    verdict.reason = "transitions do not match the structure of " + std::string(ocel::display_name(record.kind()));
    return std::nullopt;
  }
  auto result = entry->apply(net, record.transitions, record.target);
  if (net::size(result).elements > net::size(net).elements) {
    verdict.reason = "abstraction would grow the net";
    return std::nullopt;
  }

  std::set<ObjectType> affected{record.target};
  for (const auto& tid : record.transitions) {
    for (const auto& ot : net.transition_types(tid)) affected.insert(ot);
  }
  verdict.behaviour_checked = true;
  auto after_types = result.object_types();
  for (const auto& ot : affected) {
    if (!std::binary_search(after_types.begin(), after_types.end(), ot)) continue;
    auto before_net = net::project_type(net, ot);
    auto after_net = net::project_type(result, ot);
    try {
      if (net::analyze_soundness(before_net, kBehaviourCheckBound).sound &&
          !net::analyze_soundness(after_net, kBehaviourCheckBound).sound) {
        verdict.reason = "projection on " + ot.name() + " is no longer sound";
        return std::nullopt;
      }
    } catch (const StateSpaceExceeded&) {
      verdict.behaviour_checked = false;
      continue;
    }
    auto reversal = order_reversal(before_net, after_net);
    if (!reversal) {
      verdict.behaviour_checked = false;
    } else if (!reversal->empty()) {
      verdict.reason = "order not preserved on " + ot.name() + ": " + *reversal;
      return std::nullopt;
    }
  }
  verdict.admissible = true;
  return result;
}

}  // namespace

Admissibility check_admissible(const AcceptingOCPN& net, const AbstractionRecord& record, const Repository& repo) {
  Admissibility verdict;
  evaluate(net, record, repo, verdict);
  return verdict;
}

bool admissible(const AcceptingOCPN& net, const AbstractionRecord& record, const Repository& repo) {
  return check_admissible(net, record, repo).admissible;
}

AcceptingOCPN apply_abstraction(const AcceptingOCPN& net, const AbstractionRecord& record, const Repository& repo) {
  Admissibility verdict;
  auto result = evaluate(net, record, repo, verdict);
  if (!result) throw InadmissibleError(describe(record) + ": " + verdict.reason);
  return std::move(*result);
}

AcceptingOCPN apply_unchecked(const AcceptingOCPN& net, const AbstractionRecord& record, const Repository& repo) {
  const auto* entry = repo.find(record.kind());
  if (!entry) throw InadmissibleError("no repository entry for " + std::string(ocel::suffix(record.kind())));
  return entry->apply(net, record.transitions, record.target);
}

AbstractionRecord reconstruct(const ocel::EventLog& log, const std::string& oid, const AcceptingOCPN& current,
                              const net::ReplayResult& replayed) {
  auto type = log.type_of(oid);
  if (!type || !type->is_abstraction()) throw InadmissibleError("'" + oid + "' is not an abstraction object");
  auto events = log.events_with(oid);
  if (events.empty()) throw InadmissibleError("abstraction object '" + oid + "' is on no event");
  std::set<std::string> targets;
  for (const auto& eid : events) {
    auto it = replayed.et.find(eid);
    if (it == replayed.et.end()) throw InadmissibleError("event '" + eid + "' of '" + oid + "' maps to no transition");
    auto cur = current.current_of(it->second);
    if (!cur) throw InadmissibleError("transition " + it->second + " of '" + oid + "' has been removed");
    targets.insert(*cur);
  }
  return AbstractionRecord{*type, type->abstraction_target(), std::move(targets), oid};
}

AcceptingOCPN overlay(const ocel::EventLog& log, const AcceptingOCPN& original, const Repository& repo,
                      const net::ReplayResult* replayed, std::vector<AbstractionRecord>* steps) {
  net::ReplayResult local;
  if (!replayed) {
    local = net::replay(log, original);
    replayed = &local;
  }
  auto diagnostics = replayed->diagnostics;
  for (const auto& tid : net::uncovered_labeled(original, *replayed)) {
    diagnostics.push_back(Diagnostic{"", "transition " + tid + " is never fired"});
  }
  if (!replayed->fits || !diagnostics.empty()) {
    throw UnfitModelError("log does not perfectly fit the original net", std::move(diagnostics));
  }

  AcceptingOCPN current = original;
  for (const auto& oid : log.history().applied) {
    auto record = reconstruct(log, oid, current, *replayed);
    Admissibility verdict;
    auto next = evaluate(current, record, repo, verdict);
    if (!next) throw InadmissibleError("history entry '" + oid + "' (" + describe(record) + "): " + verdict.reason);
    current = std::move(*next);
    if (steps) steps->push_back(std::move(record));
  }
  return current;
}

}  // namespace inexa::abstraction
