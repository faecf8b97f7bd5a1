#include "inexa/inductive_miner.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace inexa::discovery {

TraceLog::TraceLog(const std::vector<Trace>& traces) {
  for (const auto& t : traces) add(t);
}

void TraceLog::add(const Trace& trace, std::size_t count) {
  auto [it, inserted] = index_.emplace(trace, variants_.size());
  if (inserted) {
    variants_.emplace_back(trace, count);
  } else {
    variants_[it->second].second += count;
  }
}

std::size_t TraceLog::total() const noexcept {
  std::size_t n = 0;
  for (const auto& [t, c] : variants_) n += c;
  return n;
}

Dfg Dfg::of(const TraceLog& log) {
  Dfg g;
  for (const auto& [trace, count] : log.variants()) {
    if (trace.empty()) {
      g.has_empty = true;
      continue;
    }
    g.start.insert(trace.front());
    g.end.insert(trace.back());
    for (std::size_t i = 0; i < trace.size(); ++i) {
      g.alphabet.insert(trace[i]);
      if (i + 1 < trace.size()) g.edges.emplace(trace[i], trace[i + 1]);
    }
  }
  return g;
}

namespace {

using Rank = std::map<std::string, std::size_t>;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::size_t min_rank(const std::set<std::string>& part, const Rank& rank) {
  std::size_t r = SIZE_MAX;
  for (const auto& a : part) {
    auto it = rank.find(a);
    r = std::min(r, it == rank.end() ? SIZE_MAX : it->second);
  }
  return r;
}

void order_by_rank(std::vector<std::set<std::string>>& parts, const Rank& rank) {
  std::stable_sort(parts.begin(), parts.end(), [&](const auto& a, const auto& b) {
    auto ra = min_rank(a, rank), rb = min_rank(b, rank);
    return ra != rb ? ra < rb : *a.begin() < *b.begin();
  });
}

std::vector<std::set<std::string>> groups(const std::vector<std::string>& acts, UnionFind& uf) {
  std::map<std::size_t, std::set<std::string>> by_root;
  for (std::size_t i = 0; i < acts.size(); ++i) by_root[uf.find(i)].insert(acts[i]);
  std::vector<std::set<std::string>> out;
  for (auto& [root, g] : by_root) out.push_back(std::move(g));
  return out;
}

}  // namespace

std::optional<Cut> find_xor_cut(const Dfg& dfg, const Rank& rank) {
  std::vector<std::string> acts(dfg.alphabet.begin(), dfg.alphabet.end());
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < acts.size(); ++i) idx[acts[i]] = i;
  UnionFind uf(acts.size());
  for (const auto& [a, b] : dfg.edges) uf.unite(idx[a], idx[b]);
  auto parts = groups(acts, uf);
  if (parts.size() < 2) return std::nullopt;
  order_by_rank(parts, rank);
  return Cut{CutKind::Xor, std::move(parts)};
}

std::optional<Cut> find_seq_cut(const Dfg& dfg, const Rank& rank) {
  std::vector<std::string> acts(dfg.alphabet.begin(), dfg.alphabet.end());
  const std::size_t n = acts.size();
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[acts[i]] = i;
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& [a, b] : dfg.edges) succ[idx[a]].push_back(idx[b]);

  // reach[i][j]: j reachable from i by a non-empty path
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> queue(succ[s].begin(), succ[s].end());
    while (!queue.empty()) {
      auto v = queue.front();
      queue.pop_front();
      if (reach[s][v]) continue;
      reach[s][v] = 1;
      for (auto w : succ[v]) {
        if (!reach[s][w]) queue.push_back(w);
      }
    }
  }

  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (reach[i][j] == reach[j][i]) uf.unite(i, j);
    }
  }
  auto parts = groups(acts, uf);
  if (parts.size() < 2) return std::nullopt;

  auto before = [&](const std::set<std::string>& x, const std::set<std::string>& y) {
    for (const auto& a : x) {
      for (const auto& b : y) {
        if (!reach[idx[a]][idx[b]] || reach[idx[b]][idx[a]]) return false;
      }
    }
    return true;
  };
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      if (!before(parts[i], parts[j]) && !before(parts[j], parts[i])) return std::nullopt;
    }
  }
  std::sort(parts.begin(), parts.end(), [&](const auto& x, const auto& y) { return before(x, y); });
  (void)rank;
  return Cut{CutKind::Seq, std::move(parts)};
}

std::optional<Cut> find_and_cut(const Dfg& dfg, const Rank& rank) {
  std::vector<std::string> acts(dfg.alphabet.begin(), dfg.alphabet.end());
  const std::size_t n = acts.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(dfg.follows(acts[i], acts[j]) && dfg.follows(acts[j], acts[i]))) uf.unite(i, j);
    }
  }
  auto parts = groups(acts, uf);
  if (parts.size() < 2) return std::nullopt;
  order_by_rank(parts, rank);

  auto complete = [&](const std::set<std::string>& p) {
    bool s = std::any_of(p.begin(), p.end(), [&](const auto& a) { return dfg.start.contains(a); });
    bool e = std::any_of(p.begin(), p.end(), [&](const auto& a) { return dfg.end.contains(a); });
    return s && e;
  };
  std::vector<std::set<std::string>> valid, lacking;
  for (auto& p : parts) (complete(p) ? valid : lacking).push_back(std::move(p));
  if (valid.size() < 2) return std::nullopt;
  for (auto& p : lacking) valid.front().insert(p.begin(), p.end());
  order_by_rank(valid, rank);
  return Cut{CutKind::And, std::move(valid)};
}

std::optional<Cut> find_loop_cut(const Dfg& dfg, const Rank& rank) {
  std::set<std::string> body;
  body.insert(dfg.start.begin(), dfg.start.end());
  body.insert(dfg.end.begin(), dfg.end.end());

  std::vector<std::string> rest;
  for (const auto& a : dfg.alphabet) {
    if (!body.contains(a)) rest.push_back(a);
  }
  if (rest.empty()) return std::nullopt;
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < rest.size(); ++i) idx[rest[i]] = i;
  UnionFind uf(rest.size());
  for (const auto& [a, b] : dfg.edges) {
    if (idx.contains(a) && idx.contains(b)) uf.unite(idx[a], idx[b]);
  }
  auto redo = groups(rest, uf);

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = redo.begin(); it != redo.end();) {
      const auto& c = *it;
      bool merge = false;
      for (const auto& [x, y] : dfg.edges) {
        // do -> redo only from end activities, redo -> do only into start activities
        if (body.contains(x) && c.contains(y) && !dfg.end.contains(x)) merge = true;
        if (c.contains(x) && body.contains(y) && !dfg.start.contains(y)) merge = true;
        if (merge) break;
      }
      for (const auto& a : c) {
        if (merge) break;
        bool to_start = std::any_of(dfg.start.begin(), dfg.start.end(), [&](const auto& s) { return dfg.follows(a, s); });
        bool all_start = std::all_of(dfg.start.begin(), dfg.start.end(), [&](const auto& s) { return dfg.follows(a, s); });
        bool from_end = std::any_of(dfg.end.begin(), dfg.end.end(), [&](const auto& e) { return dfg.follows(e, a); });
        bool all_end = std::all_of(dfg.end.begin(), dfg.end.end(), [&](const auto& e) { return dfg.follows(e, a); });
        if ((to_start && !all_start) || (from_end && !all_end)) merge = true;
      }
      if (merge) {
        body.insert(c.begin(), c.end());
        it = redo.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  if (redo.empty()) return std::nullopt;
  order_by_rank(redo, rank);
  std::vector<std::set<std::string>> parts{std::move(body)};
  for (auto& r : redo) parts.push_back(std::move(r));
  return Cut{CutKind::Loop, std::move(parts)};
}

std::vector<TraceLog> split_log(const TraceLog& log, const Cut& cut) {
  std::map<std::string, std::size_t> part_of;
  for (std::size_t i = 0; i < cut.parts.size(); ++i) {
    for (const auto& a : cut.parts[i]) part_of[a] = i;
  }
  std::vector<TraceLog> out(cut.parts.size());
  for (const auto& [trace, count] : log.variants()) {
    switch (cut.kind) {
      case CutKind::Xor: {
        out[trace.empty() ? 0 : part_of.at(trace.front())].add(trace, count);
        break;
      }
      case CutKind::Seq:
      case CutKind::And: {
        std::vector<Trace> sub(cut.parts.size());
        for (const auto& a : trace) sub[part_of.at(a)].push_back(a);
        for (std::size_t i = 0; i < sub.size(); ++i) out[i].add(sub[i], count);
        break;
      }
      case CutKind::Loop: {
        Trace segment;
        std::size_t current = 0;
        for (const auto& a : trace) {
          auto p = part_of.at(a);
          if (!segment.empty() && p != current) {
            out[current].add(segment, count);
            segment.clear();
          }
          current = p;
          segment.push_back(a);
        }
        if (!segment.empty()) out[current].add(segment, count);
        break;
      }
    }
  }
  return out;
}

namespace {

ProcessTree mine(const TraceLog& log, const Rank& rank) {
  auto dfg = Dfg::of(log);
  if (dfg.alphabet.empty()) return ProcessTree::silent();

  if (dfg.has_empty) {
    TraceLog rest;
    for (const auto& [t, c] : log.variants()) {
      if (!t.empty()) rest.add(t, c);
    }
    return ProcessTree::node(Operator::Xor, {ProcessTree::silent(), mine(rest, rank)});
  }

  if (dfg.alphabet.size() == 1) {
    const auto& a = *dfg.alphabet.begin();
    bool once = std::all_of(log.variants().begin(), log.variants().end(), [](const auto& v) { return v.first.size() == 1; });
    if (once) return ProcessTree::activity(a);
    return ProcessTree::node(Operator::Loop, {ProcessTree::activity(a), ProcessTree::silent()});
  }

  std::optional<Cut> cut = find_xor_cut(dfg, rank);
  if (!cut) cut = find_seq_cut(dfg, rank);
  if (!cut) cut = find_and_cut(dfg, rank);
  if (!cut) cut = find_loop_cut(dfg, rank);
  if (cut) {
    auto sublogs = split_log(log, *cut);
    std::vector<ProcessTree> children;
    for (const auto& sub : sublogs) children.push_back(mine(sub, rank));
    Operator op = cut->kind == CutKind::Xor   ? Operator::Xor
                  : cut->kind == CutKind::Seq ? Operator::Seq
                  : cut->kind == CutKind::And ? Operator::And
                                              : Operator::Loop;
    return ProcessTree::node(op, std::move(children));
  }

  // flower fall-through
  std::vector<std::string> acts(dfg.alphabet.begin(), dfg.alphabet.end());
  std::stable_sort(acts.begin(), acts.end(), [&](const auto& a, const auto& b) { return rank.at(a) < rank.at(b); });
  std::vector<ProcessTree> children{ProcessTree::silent()};
  for (const auto& a : acts) children.push_back(ProcessTree::activity(a));
  return ProcessTree::node(Operator::Loop, std::move(children));
}

}  // namespace

ProcessTree mine_tree(const TraceLog& log) {
  Rank rank;
  for (const auto& [trace, count] : log.variants()) {
    for (const auto& a : trace) rank.emplace(a, rank.size());
  }
  auto tree = mine(log, rank);
  assign_ids(tree);
  return tree;
}

}  // namespace inexa::discovery
