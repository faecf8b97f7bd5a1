#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "inexa/errors.hpp"
#include "inexa/event_log.hpp"
#include "inexa/ocpn.hpp"

namespace inexa::net {

struct ReplayResult {
  bool fits = false;
  std::map<std::string, std::string> et;  ///< event id -> transition id
  std::set<std::string> covered;          ///< range of et
  std::vector<Diagnostic> diagnostics;
};

struct ReplayOptions {
  /// Longest run of silent transitions explored between two visible steps;
  /// negative means no limit besides `max_markings`.
  int silent_depth = -1;
  /// Cap on the markings tracked per object at any step.
  std::size_t max_markings = 1 << 16;
};

/// Object-centric token replay. Each object plays its own token game on its
/// type's subnet; an event fires one transition carrying its activity whose
/// adjacent types equal the event's related workflow types, and every related
/// object must be able to fire it. Only workflow relations are read, so an
/// augmented log replays exactly like its workflow projection.
///
/// Silent moves are resolved exactly: the set of markings reachable through
/// at most `silent_depth` silent firings (by default all of them) is tracked instead of guessing one
/// path. Misfits are reported as diagnostics; the event is then skipped.
ReplayResult replay(const ocel::EventLog& log, const AcceptingOCPN& net, const ReplayOptions& options = {});

/// Whether `trace` leads from the initial to the final marking of `otype`'s subnet.
bool accepts(const AcceptingOCPN& net, const ObjectType& otype, const std::vector<std::string>& trace,
             const ReplayOptions& options = {});

/// Labeled transitions never fired by the replay.
std::vector<std::string> uncovered_labeled(const AcceptingOCPN& net, const ReplayResult& result);

}  // namespace inexa::net
