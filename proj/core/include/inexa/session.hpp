#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <string>
#include <vector>

#include "inexa/abstraction.hpp"
#include "inexa/discovery.hpp"
#include "inexa/event_log.hpp"
#include "inexa/ocpn.hpp"
#include "inexa/replay.hpp"

namespace inexa::session {

using abstraction::AbstractionRecord;
using abstraction::Repository;
using net::AcceptingOCPN;
using ocel::AbstractionKind;
using ocel::ObjectType;

struct TreeNode {
  ObjectType otype;
  AbstractionKind kind;
  std::optional<std::size_t> fragment;  ///< block fragment of the original net; none for the root
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  std::size_t depth = 0;
  std::set<std::string> originals;      ///< original labeled transitions the node aggregates
};

/// Per workflow type: the complete aggregation as root, below it the block
/// aggregations nested like the type's process tree. Lifecycle types only
/// get their root. Only records admissible on the original net are kept.
class AbstractionTree {
 public:
  static AbstractionTree build(const AcceptingOCPN& original, const Repository& repo = Repository::standard());

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& node(std::size_t i) const { return nodes_.at(i); }
  std::optional<std::size_t> root_of(const ObjectType& otype) const;

  /// The node's record instantiated on `current` (ids of the current transitions).
  AbstractionRecord record_for(std::size_t node, const AcceptingOCPN& current) const;
  /// Node an applied abstraction stands for, identified by its type and the
  /// original transitions of its events.
  std::optional<std::size_t> match(const ObjectType& atype, const std::set<std::string>& originals) const;

  std::string to_json() const;

 private:
  std::vector<TreeNode> nodes_;
};

/// Stops initialize once it returns true for the current model.
using Goal = std::function<bool(const AcceptingOCPN&)>;

/// The understandability goal: at most `threshold` places and transitions.
Goal size_goal(std::size_t threshold);

inline constexpr std::size_t kDefaultThreshold = 37;

struct SessionOptions {
  std::size_t threshold = kDefaultThreshold;
  std::uint64_t seed = 0;
  Goal goal;               ///< overrides the size goal when set
  bool initialize = true;  ///< false restores the log's state without further abstraction
};

struct Candidate {
  AbstractionRecord record;
  std::optional<std::size_t> node;
  std::string rule;  ///< "tree" for available entries; "last", "coarsest" or both for redoable ones
};

/// One analysis session: the original net, the evolving augmented log and the
/// abstraction tree. The current model is always overlay(log, original).
///
/// Not thread-safe; callers serialize access per session.
class Session {
 public:
  /// Discovers the original net (throws UnfitModelError), keeps the
  /// abstractions already in the log's history and, unless disabled,
  /// applies retrieve_next until the goal holds or the tree is exhausted.
  explicit Session(ocel::EventLog log, SessionOptions options = {},
                   const Repository& repo = Repository::standard());

  const AcceptingOCPN& original() const noexcept { return original_; }
  const AcceptingOCPN& model() const noexcept { return model_; }
  const ocel::EventLog& log() const noexcept { return log_; }
  const AbstractionTree& tree() const noexcept { return tree_; }
  const std::vector<discovery::TypedModel>& typed_models() const noexcept { return typed_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  std::size_t threshold() const noexcept { return options_.threshold; }

  /// Records of the history, in order, as they were applied.
  const std::vector<AbstractionRecord>& history() const noexcept { return steps_; }

  std::vector<Candidate> available() const;
  std::vector<Candidate> redoable() const;
  std::optional<Candidate> retrieve_next();

  /// Applies an available record, matched by aggregation type, target and
  /// current transitions. Returns it with its new abstraction object id.
  /// Throws NotAvailableError.
  AbstractionRecord apply(const AbstractionRecord& record);
  /// Removes a redoable abstraction object. Throws NotRedoableError.
  void redo(const std::string& oid);

  /// The current augmented log in the OCEL profile.
  std::string export_log() const;

 private:
  void refresh();
  void run_initialize();
  std::optional<std::size_t> node_of(const std::string& oid) const;
  std::set<std::size_t> applied_nodes() const;
  bool is_exempt_subprocess(const ObjectType& otype) const;

  SessionOptions options_;
  const Repository* repo_;
  ocel::EventLog log_;
  AcceptingOCPN original_;
  std::vector<discovery::TypedModel> typed_;
  net::ReplayResult replayed_;
  AbstractionTree tree_;
  AcceptingOCPN model_;
  std::vector<AbstractionRecord> steps_;
  std::vector<std::string> warnings_;
  std::map<ObjectType, std::size_t> event_counts_;
  ocel::IdGenerator ids_;
  std::size_t round_robin_ = 0;

  // available()/redoable() depend only on the history; cached per history
  mutable std::optional<std::pair<std::vector<std::string>, std::vector<Candidate>>> available_cache_;
  mutable std::optional<std::pair<std::vector<std::string>, std::vector<Candidate>>> redoable_cache_;
};

}  // namespace inexa::session
