#pragma once

#include <string>
#include <string_view>

#include "inexa/ocpn.hpp"

namespace inexa::net {

/// Graphviz rendering: typed places as circles, transitions as boxes (silent
/// ones filled black), variable arcs drawn double.
std::string to_dot(const AcceptingOCPN& net);

/// Graph payload consumed by the web client:
/// {"nodes": [{id, kind: place|transition|silent, label, otype?, refs?, members?}],
///  "edges": [{src, dst, variable}], "metrics": {elements, arcs, object_types, subprocesses}}
std::string to_payload_json(const AcceptingOCPN& net);

/// Lossless net document (places, transitions with origins/members, arcs,
/// markings) used for golden snapshots. Fragments are not stored.
std::string to_net_json(const AcceptingOCPN& net);
AcceptingOCPN net_from_json(std::string_view text);

}  // namespace inexa::net
