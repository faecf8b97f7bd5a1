#include "inexa/ocpn.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace inexa::net {

void AcceptingOCPN::add_place(Place p) {
  auto id = p.id;
  places_.insert_or_assign(std::move(id), std::move(p));
}

void AcceptingOCPN::add_transition(Transition t) {
  auto id = t.id;
  transitions_.insert_or_assign(std::move(id), std::move(t));
}

void AcceptingOCPN::add_arc(std::string source, std::string target, bool variable) {
  bool source_place = places_.contains(source);
  bool target_place = places_.contains(target);
  bool source_transition = transitions_.contains(source);
  bool target_transition = transitions_.contains(target);
  if (!((source_place && target_transition) || (source_transition && target_place))) {
    throw std::invalid_argument("arc " + source + " -> " + target + " must join an existing place and transition");
  }
  if (auto it = arcs_.find(Arc{source, target}); it != arcs_.end()) {
    if (variable && !it->variable) set_variable(source, target, true);
    return;
  }
  out_.emplace(source, target);
  in_.emplace(target, source);
  arcs_.insert(Arc{std::move(source), std::move(target), variable});
}

void AcceptingOCPN::set_variable(const std::string& source, const std::string& target, bool variable) {
  auto it = arcs_.find(Arc{source, target});
  if (it == arcs_.end()) return;
  Arc updated = *it;
  updated.variable = variable;
  arcs_.erase(it);
  arcs_.insert(std::move(updated));
}

namespace {

void erase_pair(std::multimap<std::string, std::string>& m, const std::string& key, const std::string& value) {
  auto [lo, hi] = m.equal_range(key);
  for (auto it = lo; it != hi; ++it) {
    if (it->second == value) {
      m.erase(it);
      return;
    }
  }
}

}  // namespace

void AcceptingOCPN::remove_place(const std::string& id) {
  remove_transition(id);  // arcs are symmetric in handling
  places_.erase(id);
  m_init_.erase(id);
  m_final_.erase(id);
}

void AcceptingOCPN::remove_transition(const std::string& id) {
  for (auto succ : postset(id)) {
    arcs_.erase(Arc{id, succ});
    erase_pair(in_, succ, id);
  }
  for (auto pred : preset(id)) {
    arcs_.erase(Arc{pred, id});
    erase_pair(out_, pred, id);
  }
  out_.erase(id);
  in_.erase(id);
  transitions_.erase(id);
}

const Place* AcceptingOCPN::place(const std::string& id) const {
  auto it = places_.find(id);
  return it == places_.end() ? nullptr : &it->second;
}

const Transition* AcceptingOCPN::transition(const std::string& id) const {
  auto it = transitions_.find(id);
  return it == transitions_.end() ? nullptr : &it->second;
}

Transition* AcceptingOCPN::transition_mut(const std::string& id) {
  auto it = transitions_.find(id);
  return it == transitions_.end() ? nullptr : &it->second;
}

std::vector<std::string> AcceptingOCPN::preset(const std::string& node) const {
  std::vector<std::string> out;
  auto [lo, hi] = in_.equal_range(node);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> AcceptingOCPN::postset(const std::string& node) const {
  std::vector<std::string> out;
  auto [lo, hi] = out_.equal_range(node);
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  std::sort(out.begin(), out.end());
  return out;
}

bool AcceptingOCPN::has_arc(const std::string& source, const std::string& target) const {
  return arcs_.contains(Arc{source, target});
}

const Arc* AcceptingOCPN::arc(const std::string& source, const std::string& target) const {
  auto it = arcs_.find(Arc{source, target});
  return it == arcs_.end() ? nullptr : &*it;
}

std::set<ObjectType> AcceptingOCPN::transition_types(const std::string& tid) const {
  std::set<ObjectType> out;
  for (const auto* nodes : {&in_, &out_}) {
    auto [lo, hi] = nodes->equal_range(tid);
    for (auto it = lo; it != hi; ++it) out.insert(places_.at(it->second).otype);
  }
  return out;
}

std::vector<ObjectType> AcceptingOCPN::object_types() const {
  std::set<ObjectType> types;
  for (const auto& [id, p] : places_) types.insert(p.otype);
  return {types.begin(), types.end()};
}

std::optional<std::string> AcceptingOCPN::current_of(const std::string& original) const {
  for (const auto& [id, t] : transitions_) {
    if (std::binary_search(t.origins.begin(), t.origins.end(), original)) return id;
  }
  return std::nullopt;
}

const std::vector<Fragment>& AcceptingOCPN::fragments() const {
  static const std::vector<Fragment> kNone;
  return fragments_ ? *fragments_ : kNone;
}

bool AcceptingOCPN::operator==(const AcceptingOCPN& other) const {
  return places_ == other.places_ && transitions_ == other.transitions_ && arcs_ == other.arcs_ &&
         m_init_ == other.m_init_ && m_final_ == other.m_final_;
}

NetSize size(const AcceptingOCPN& net) {
  return {net.places().size() + net.transitions().size(), net.arcs().size()};
}

AcceptingOCPN project_type(const AcceptingOCPN& net, const ObjectType& otype) {
  AcceptingOCPN out;
  for (const auto& [id, p] : net.places()) {
    if (p.otype == otype) out.add_place(p);
  }
  if (out.places().empty()) throw std::invalid_argument("no place of type '" + otype.name() + "'");
  for (const auto& [id, t] : net.transitions()) {
    if (net.transition_types(id).contains(otype)) out.add_transition(t);
  }
  for (const auto& a : net.arcs()) {
    if (out.place(a.source) && out.transition(a.target)) out.add_arc(a.source, a.target, a.variable);
    if (out.transition(a.source) && out.place(a.target)) out.add_arc(a.source, a.target, a.variable);
  }
  for (const auto& [pid, n] : net.initial_marking()) {
    if (out.place(pid)) out.initial_marking()[pid] = n;
  }
  for (const auto& [pid, n] : net.final_marking()) {
    if (out.place(pid)) out.final_marking()[pid] = n;
  }
  out.set_fragments(std::make_shared<const std::vector<Fragment>>([&] {
    std::vector<Fragment> kept;
    std::map<std::size_t, std::size_t> moved;
    for (std::size_t i = 0; i < net.fragments().size(); ++i) {
      const auto& f = net.fragments()[i];
      if (f.otype != otype) continue;
      moved[i] = kept.size();
      kept.push_back(f);
      if (f.parent) kept.back().parent = moved.at(*f.parent);
    }
    return kept;
  }()));
  return out;
}

bool id_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t i0 = i, j0 = j;
      while (i0 < a.size() && a[i0] == '0') ++i0;
      while (j0 < b.size() && b[j0] == '0') ++j0;
      std::size_t i1 = i0, j1 = j0;
      while (i1 < a.size() && digit(a[i1])) ++i1;
      while (j1 < b.size() && digit(b[j1])) ++j1;
      if (i1 - i0 != j1 - j0) return i1 - i0 < j1 - j0;
      if (int c = a.compare(i0, i1 - i0, b, j0, j1 - j0); c != 0) return c < 0;
      i = i1;
      j = j1;
      continue;
    }
    if (a[i] != b[j]) return a[i] < b[j];
    ++i;
    ++j;
  }
  if ((a.size() - i) != (b.size() - j)) return a.size() - i < b.size() - j;
  return a < b;
}

std::string display_label(const Transition& t) {
  if (t.silent()) return {};
  std::string out = *t.label;
  for (const auto& r : t.refs) out += " ↔ " + r.short_name();
  return out;
}

namespace {

// Dense graph view used by the isomorphism check.
struct Graph {
  std::vector<std::string> ids;
  std::vector<std::string> base;  // initial colour
  std::vector<std::vector<std::pair<int, bool>>> succ, pred;
};

Graph to_graph(const AcceptingOCPN& net) {
  Graph g;
  std::map<std::string, int> index;
  auto count = [](const Marking& m, const std::string& id) {
    auto it = m.find(id);
    return it == m.end() ? 0 : it->second;
  };
  for (const auto& [id, p] : net.places()) {
    index[id] = static_cast<int>(g.ids.size());
    g.ids.push_back(id);
    g.base.push_back("P|" + p.otype.name() + "|" + std::to_string(count(net.initial_marking(), id)) + "|" +
                     std::to_string(count(net.final_marking(), id)));
  }
  for (const auto& [id, t] : net.transitions()) {
    index[id] = static_cast<int>(g.ids.size());
    g.ids.push_back(id);
    std::string c = t.silent() ? "T|~" : "T|" + *t.label;
    for (const auto& r : t.refs) c += "|" + r.name();
    g.base.push_back(std::move(c));
  }
  g.succ.resize(g.ids.size());
  g.pred.resize(g.ids.size());
  for (const auto& a : net.arcs()) {
    int s = index.at(a.source), d = index.at(a.target);
    g.succ[s].emplace_back(d, a.variable);
    g.pred[d].emplace_back(s, a.variable);
  }
  return g;
}

}  // namespace

bool isomorphic(const AcceptingOCPN& a, const AcceptingOCPN& b) {
  if (a.places().size() != b.places().size() || a.transitions().size() != b.transitions().size() ||
      a.arcs().size() != b.arcs().size()) {
    return false;
  }
  Graph ga = to_graph(a), gb = to_graph(b);
  const std::size_t n = ga.ids.size();

  // Joint colour refinement so colour ids are comparable across both graphs.
  std::vector<int> ca(n), cb(n);
  {
    std::map<std::string, int> dict;
    for (std::size_t i = 0; i < n; ++i) ca[i] = dict.emplace(ga.base[i], static_cast<int>(dict.size())).first->second;
    for (std::size_t i = 0; i < n; ++i) cb[i] = dict.emplace(gb.base[i], static_cast<int>(dict.size())).first->second;
  }
  auto classes = [](const std::vector<int>& c) { return std::set<int>(c.begin(), c.end()).size(); };
  for (std::size_t round = 0; round < n + 1; ++round) {
    std::map<std::vector<int>, int> dict;
    auto signature = [](const Graph& g, const std::vector<int>& c, std::size_t i) {
      std::vector<int> sig{c[i], -1};
      std::vector<int> s, p;
      for (auto [j, var] : g.succ[i]) s.push_back(c[j] * 2 + var);
      for (auto [j, var] : g.pred[i]) p.push_back(c[j] * 2 + var);
      std::sort(s.begin(), s.end());
      std::sort(p.begin(), p.end());
      sig.insert(sig.end(), s.begin(), s.end());
      sig.push_back(-2);
      sig.insert(sig.end(), p.begin(), p.end());
      return sig;
    };
    std::vector<int> na(n), nb(n);
    for (std::size_t i = 0; i < n; ++i) na[i] = dict.emplace(signature(ga, ca, i), static_cast<int>(dict.size())).first->second;
    for (std::size_t i = 0; i < n; ++i) nb[i] = dict.emplace(signature(gb, cb, i), static_cast<int>(dict.size())).first->second;
    bool stable = classes(na) == classes(ca);
    ca = std::move(na);
    cb = std::move(nb);
    if (stable) break;
  }
  {
    auto ha = ca, hb = cb;
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb) return false;
  }

  // Backtracking over refined classes, most constrained first.
  std::map<int, std::vector<int>> by_colour_b;
  for (std::size_t i = 0; i < n; ++i) by_colour_b[cb[i]].push_back(static_cast<int>(i));
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return by_colour_b[ca[x]].size() < by_colour_b[ca[y]].size(); });

  std::vector<int> map_ab(n, -1), map_ba(n, -1);
  auto arc_b = [&](int s, int d) -> int {  // -1 absent, else variable flag
    for (auto [j, var] : gb.succ[s]) {
      if (j == d) return var;
    }
    return -1;
  };
  auto consistent = [&](int x, int y) {
    for (auto [j, var] : ga.succ[x]) {
      if (map_ab[j] >= 0 && arc_b(y, map_ab[j]) != static_cast<int>(var)) return false;
    }
    for (auto [j, var] : ga.pred[x]) {
      if (map_ab[j] >= 0 && arc_b(map_ab[j], y) != static_cast<int>(var)) return false;
    }
    return true;
  };
  std::function<bool(std::size_t)> solve = [&](std::size_t k) {
    if (k == n) return true;
    int x = order[k];
    for (int y : by_colour_b[ca[x]]) {
      if (map_ba[y] >= 0 || !consistent(x, y)) continue;
      map_ab[x] = y;
      map_ba[y] = x;
      if (solve(k + 1)) return true;
      map_ab[x] = -1;
      map_ba[y] = -1;
    }
    return false;
  };
  return solve(0);
}

}  // namespace inexa::net
