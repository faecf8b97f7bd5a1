#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "inexa/event_log.hpp"
#include "inexa/ocpn.hpp"
#include "inexa/replay.hpp"

namespace inexa::abstraction {

using net::AcceptingOCPN;
using ocel::AbstractionKind;
using ocel::ObjectType;

/// Transition-reconstructable abstraction: the aggregation type plus the
/// transitions it aggregates. `oid` is the abstraction object once applied.
struct AbstractionRecord {
  ObjectType atype;   ///< "abstraction:<target>$<suffix>"
  ObjectType target;  ///< aggregated workflow type
  std::set<std::string> transitions;
  std::string oid;

  AbstractionKind kind() const { return atype.abstraction_kind(); }
  bool operator==(const AbstractionRecord&) const = default;
};

AbstractionRecord make_record(AbstractionKind kind, const ObjectType& target, std::set<std::string> transitions,
                              std::string oid = {});

/// Human-readable one-liner, e.g. "Sequence control-flow structure of bank {t5, t6, t7, t8}".
std::string describe(const AbstractionRecord& record);

std::optional<net::BlockKind> block_kind(AbstractionKind kind);

/// Labeled transitions of `otype`'s projection, the only valid target set of
/// a complete aggregation of that type.
std::set<std::string> complete_targets(const AcceptingOCPN& net, const ObjectType& otype);

/// Current transitions standing for the labeled leaves of fragment `index`.
std::set<std::string> fragment_targets(const AcceptingOCPN& net, std::size_t index);

/// The block fragment of `otype` whose labeled leaves are currently
/// represented exactly by `transitions` and whose region is still intact.
/// Singleton sets never match.
std::optional<std::size_t> find_sese(const AcceptingOCPN& net, const ObjectType& otype,
                                     const std::set<std::string>& transitions, net::BlockKind kind);

bool is_sese(const AcceptingOCPN& net, const ObjectType& otype, const std::set<std::string>& transitions,
             net::BlockKind kind);

/// One repository entry: the structural precondition and the net rewrite.
struct RepositoryEntry {
  using Matcher = std::function<bool(const AcceptingOCPN&, const std::set<std::string>&, const ObjectType&)>;
  using Applier = std::function<AcceptingOCPN(const AcceptingOCPN&, const std::set<std::string>&, const ObjectType&)>;

  Matcher matches;
  Applier apply;
};

/// Abstraction repository keyed by aggregation type.
class Repository {
 public:
  /// The seven aggregations: caa, csa, cla, seq, xor, and, loop.
  static const Repository& standard();

  void add(AbstractionKind kind, RepositoryEntry entry) { entries_.insert_or_assign(kind, std::move(entry)); }
  const RepositoryEntry* find(AbstractionKind kind) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<AbstractionKind, RepositoryEntry> entries_;
};

/// Above this many reachable markings the behavioural admissibility checks
/// (soundness and order preservation) are skipped and the structural
/// argument for SESE/complete aggregation is relied upon.
inline constexpr std::size_t kBehaviourCheckBound = 100'000;

struct Admissibility {
  bool admissible = false;
  std::string reason;  ///< why not, empty when admissible
  bool behaviour_checked = false;
};

/// Structure matches the repository entry, the rewrite does not grow the net,
/// no order constraint between surviving transitions is reversed, and every
/// affected type's projection stays sound if it was sound before.
Admissibility check_admissible(const AcceptingOCPN& net, const AbstractionRecord& record,
                               const Repository& repo = Repository::standard());
bool admissible(const AcceptingOCPN& net, const AbstractionRecord& record,
                const Repository& repo = Repository::standard());

/// Throws InadmissibleError when the record is not admissible on `net`.
AcceptingOCPN apply_abstraction(const AcceptingOCPN& net, const AbstractionRecord& record,
                                const Repository& repo = Repository::standard());

/// Rewrites without the admissibility check; for callers that already checked.
AcceptingOCPN apply_unchecked(const AcceptingOCPN& net, const AbstractionRecord& record,
                              const Repository& repo = Repository::standard());

/// Rebuilds the record an applied abstraction object stands for: the
/// current transitions of the events carrying it.
AbstractionRecord reconstruct(const ocel::EventLog& log, const std::string& oid, const AcceptingOCPN& current,
                              const net::ReplayResult& replayed);

/// The original net with every abstraction of the log's history applied in
/// order. `replayed` may pass a precomputed replay of the log on `original`.
/// Throws UnfitModelError when the log does not replay or a labeled
/// transition is uncovered, InadmissibleError for a history entry that does
/// not reconstruct to an admissible record.
/// `steps`, when given, receives the reconstructed record of every history entry.
AcceptingOCPN overlay(const ocel::EventLog& log, const AcceptingOCPN& original,
                      const Repository& repo = Repository::standard(), const net::ReplayResult* replayed = nullptr,
                      std::vector<AbstractionRecord>* steps = nullptr);

}  // namespace inexa::abstraction
