#pragma once

#include <set>
#include <string>
#include <vector>

#include "inexa/event_log.hpp"
#include "inexa/inductive_miner.hpp"
#include "inexa/ocpn.hpp"
#include "inexa/process_tree.hpp"
#include "inexa/replay.hpp"

namespace inexa::discovery {

using ocel::ObjectType;

struct ObjectTrace {
  std::string object;
  Trace activities;
};

/// One trace per object of `otype` in order of the object's first event.
/// Registered objects without events are skipped; a warning is appended.
std::vector<ObjectTrace> extract_traces(const ocel::EventLog& log, const ObjectType& otype,
                                        std::vector<std::string>* warnings = nullptr);

/// Wraps maximal runs of consecutive sequence children that carry no label
/// from `shared` into their own nested sequence. The language is unchanged;
/// the nested blocks become candidate aggregations for the abstraction tree.
void segment_sequences(ProcessTree& tree, const std::set<std::string>& shared);

/// Workflow net of a process tree over one type, with one source and one sink
/// place. Ids are functions of the tree node ids ("t0.2", "p0.2/1", ...).
/// The block fragments of the tree are attached to the result.
net::AcceptingOCPN compile_tree(const ProcessTree& tree, const ObjectType& otype);

struct TypedModel {
  ObjectType otype;
  ProcessTree tree;
  net::AcceptingOCPN net;  ///< the type's projection of the merged net
};

struct DiscoveryResult {
  net::AcceptingOCPN net;
  std::vector<TypedModel> models;
  std::vector<std::string> warnings;
  net::ReplayResult replayed;  ///< the fitting replay of the log on `net`
};

/// Object-centric discovery: per workflow type mine a tree and compile it,
/// then fuse transitions with equal labels across types into interaction
/// transitions. Final ids: labeled transitions t0, t1, ... by the first
/// occurrence of their activity in the log, then silent transitions, places
/// p0, p1, ... per type in name order. Abstraction relations are ignored.
///
/// Throws UnfitModelError when the merged net does not replay the log or a
/// labeled transition is never fired.
DiscoveryResult discover_models(const ocel::EventLog& log);

net::AcceptingOCPN discover(const ocel::EventLog& log);

}  // namespace inexa::discovery
