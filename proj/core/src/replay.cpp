#include "inexa/replay.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace inexa::net {
namespace {

using Tokens = std::vector<std::uint16_t>;
using States = std::set<Tokens>;

struct Move {
  std::vector<std::pair<std::size_t, std::uint16_t>> consume, produce;
};

/// One type's subnet in dense form.
class TypeNet {
 public:
  TypeNet(const AcceptingOCPN& net, const ObjectType& otype) {
    for (const auto& [id, p] : net.places()) {
      if (p.otype == otype) {
        index_[id] = places_.size();
        places_.push_back(id);
      }
    }
    initial_ = marking(net.initial_marking());
    final_ = marking(net.final_marking());
    for (const auto& [tid, t] : net.transitions()) {
      Move m;
      for (const auto& p : net.preset(tid)) {
        if (auto it = index_.find(p); it != index_.end()) m.consume.emplace_back(it->second, 1);
      }
      for (const auto& p : net.postset(tid)) {
        if (auto it = index_.find(p); it != index_.end()) m.produce.emplace_back(it->second, 1);
      }
      if (m.consume.empty() && m.produce.empty()) continue;
      if (t.silent()) silent_.push_back(moves_.size());
      move_index_[tid] = moves_.size();
      moves_.push_back(std::move(m));
    }
  }

  const Tokens& initial() const { return initial_; }
  const Tokens& final_marking() const { return final_; }
  const Move* move(const std::string& tid) const {
    auto it = move_index_.find(tid);
    return it == move_index_.end() ? nullptr : &moves_[it->second];
  }

  static bool enabled(const Move& m, const Tokens& tokens) {
    return std::all_of(m.consume.begin(), m.consume.end(), [&](auto& c) { return tokens[c.first] >= c.second; });
  }
  static Tokens fire(const Move& m, Tokens tokens) {
    for (auto [p, w] : m.consume) tokens[p] -= w;
    for (auto [p, w] : m.produce) tokens[p] += w;
    return tokens;
  }

  States closure(const States& start, const ReplayOptions& opt) const {
    States seen = start;
    std::deque<std::pair<Tokens, int>> queue;
    for (const auto& s : start) queue.emplace_back(s, 0);
    while (!queue.empty() && seen.size() < opt.max_markings) {
      auto [tokens, depth] = queue.front();
      queue.pop_front();
      if (opt.silent_depth >= 0 && depth >= opt.silent_depth) continue;
      for (auto idx : silent_) {
        const auto& m = moves_[idx];
        if (!enabled(m, tokens)) continue;
        auto next = fire(m, tokens);
        if (seen.insert(next).second) queue.emplace_back(std::move(next), depth + 1);
      }
    }
    return seen;
  }

  States step(const States& current, const Move& m, const ReplayOptions& opt) const {
    States out;
    for (const auto& tokens : closure(current, opt)) {
      if (enabled(m, tokens)) out.insert(fire(m, tokens));
      if (out.size() >= opt.max_markings) break;
    }
    return out;
  }

  bool can_finish(const States& current, const ReplayOptions& opt) const {
    return closure(current, opt).contains(final_);
  }

 private:
  Tokens marking(const Marking& m) const {
    Tokens t(places_.size(), 0);
    for (const auto& [pid, n] : m) {
      if (auto it = index_.find(pid); it != index_.end()) t[it->second] = static_cast<std::uint16_t>(n);
    }
    return t;
  }

  std::vector<std::string> places_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Move> moves_;
  std::unordered_map<std::string, std::size_t> move_index_;
  std::vector<std::size_t> silent_;
  Tokens initial_, final_;
};

std::string join_types(const std::set<ObjectType>& types) {
  std::string out = "{";
  for (const auto& t : types) out += (out.size() > 1 ? ", " : "") + t.name();
  return out + "}";
}

}  // namespace

ReplayResult replay(const ocel::EventLog& log, const AcceptingOCPN& net, const ReplayOptions& options) {
  ReplayResult result;

  std::map<ObjectType, TypeNet> type_nets;
  auto type_net = [&](const ObjectType& t) -> const TypeNet& {
    auto it = type_nets.find(t);
    if (it == type_nets.end()) it = type_nets.emplace(t, TypeNet(net, t)).first;
    return it->second;
  };

  std::multimap<std::string, std::string> by_label;  // label -> tid, ids ascending
  for (const auto& [tid, t] : net.transitions()) {
    if (!t.silent()) by_label.emplace(*t.label, tid);
  }
  std::map<std::string, std::set<ObjectType>> types_of;
  for (const auto& [tid, t] : net.transitions()) types_of[tid] = net.transition_types(tid);

  struct ObjectState {
    ObjectType otype;
    States states;
    std::string last_event;
  };
  std::map<std::string, ObjectState> objects;

  for (const auto& e : log.events()) {
    std::set<ObjectType> event_types;
    for (const auto& [type, oids] : e->wfomap) event_types.insert(type);

    auto [lo, hi] = by_label.equal_range(e->activity);
    if (lo == hi) {
      result.diagnostics.push_back({e->id, "no transition labeled '" + e->activity + "'"});
      continue;
    }

    std::string failure;
    bool fired = false;
    for (auto it = lo; it != hi && !fired; ++it) {
      const auto& tid = it->second;
      if (types_of[tid] != event_types) {
        if (failure.empty()) {
          failure = "related types " + join_types(event_types) + " do not match transition " + tid + " types " +
                    join_types(types_of[tid]);
        }
        continue;
      }
      std::vector<std::pair<std::string, States>> updates;
      bool ok = true;
      for (const auto& [type, oids] : e->wfomap) {
        const auto& tn = type_net(type);
        const Move* m = tn.move(tid);
        for (const auto& oid : oids) {
          auto os = objects.find(oid);
          States current = os == objects.end() ? States{tn.initial()} : os->second.states;
          auto next = tn.step(current, *m, options);
          if (next.empty()) {
            failure = "transition " + tid + " is not enabled for object '" + oid + "'";
            ok = false;
            break;
          }
          updates.emplace_back(oid, std::move(next));
        }
        if (!ok) break;
      }
      if (!ok) continue;
      for (auto& [oid, states] : updates) {
        auto type = *log.type_of(oid);
        auto [os, inserted] = objects.try_emplace(oid, ObjectState{type, {}, {}});
        os->second.states = std::move(states);
        os->second.last_event = e->id;
      }
      result.et[e->id] = tid;
      result.covered.insert(tid);
      fired = true;
    }
    if (!fired) result.diagnostics.push_back({e->id, failure});
  }

  for (const auto& [oid, os] : objects) {
    if (!type_net(os.otype).can_finish(os.states, options)) {
      result.diagnostics.push_back({os.last_event, "object '" + oid + "' does not reach the final marking"});
    }
  }

  result.fits = result.diagnostics.empty();
  return result;
}

bool accepts(const AcceptingOCPN& net, const ObjectType& otype, const std::vector<std::string>& trace,
             const ReplayOptions& options) {
  TypeNet tn(net, otype);
  States states{tn.initial()};
  for (const auto& activity : trace) {
    States next;
    for (const auto& [tid, t] : net.transitions()) {
      if (t.silent() || *t.label != activity) continue;
      if (const Move* m = tn.move(tid)) {
        auto s = tn.step(states, *m, options);
        next.insert(s.begin(), s.end());
      }
    }
    if (next.empty()) return false;
    states = std::move(next);
  }
  return tn.can_finish(states, options);
}

std::vector<std::string> uncovered_labeled(const AcceptingOCPN& net, const ReplayResult& result) {
  std::vector<std::string> out;
  for (const auto& [tid, t] : net.transitions()) {
    if (!t.silent() && !result.covered.contains(tid)) out.push_back(tid);
  }
  return out;
}

}  // namespace inexa::net
