#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "inexa/process_tree.hpp"

namespace inexa::discovery {

using Trace = std::vector<std::string>;

/// Multiset of traces kept in first-seen order.
class TraceLog {
 public:
  TraceLog() = default;
  explicit TraceLog(const std::vector<Trace>& traces);

  void add(const Trace& trace, std::size_t count = 1);
  const std::vector<std::pair<Trace, std::size_t>>& variants() const noexcept { return variants_; }
  bool empty() const noexcept { return variants_.empty(); }
  std::size_t total() const noexcept;

 private:
  std::vector<std::pair<Trace, std::size_t>> variants_;
  std::map<Trace, std::size_t> index_;
};

/// Directly-follows graph with start and end activities.
struct Dfg {
  std::set<std::string> alphabet;
  std::set<std::pair<std::string, std::string>> edges;
  std::set<std::string> start;
  std::set<std::string> end;
  bool has_empty = false;

  static Dfg of(const TraceLog& log);
  bool follows(const std::string& a, const std::string& b) const { return edges.contains({a, b}); }
};

enum class CutKind { Xor, Seq, And, Loop };

/// A partition of the alphabet; for Seq in order, for Loop the do part first.
struct Cut {
  CutKind kind;
  std::vector<std::set<std::string>> parts;
};

/// Maximal cuts of the given kind on `dfg`, or an empty optional. `rank`
/// orders activities for deterministic part order (first occurrence).
std::optional<Cut> find_xor_cut(const Dfg& dfg, const std::map<std::string, std::size_t>& rank);
std::optional<Cut> find_seq_cut(const Dfg& dfg, const std::map<std::string, std::size_t>& rank);
std::optional<Cut> find_and_cut(const Dfg& dfg, const std::map<std::string, std::size_t>& rank);
std::optional<Cut> find_loop_cut(const Dfg& dfg, const std::map<std::string, std::size_t>& rank);

/// Splits every trace along `cut` into one sublog per part.
std::vector<TraceLog> split_log(const TraceLog& log, const Cut& cut);

/// Inductive Miner without infrequency filtering. Cuts are tried in the order
/// xor, sequence, parallel, loop; when none applies the flower model
/// loop(tau, a1, ..., an) is returned. Every input trace is in the language
/// of the result. Requires a non-empty log. Node ids are assigned.
ProcessTree mine_tree(const TraceLog& log);

}  // namespace inexa::discovery
