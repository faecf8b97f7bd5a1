#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "inexa/ocpn.hpp"

namespace inexa::net {

/// Explicit reachability graph of a net from its initial marking.
struct StateSpace {
  std::vector<std::string> places;       ///< dense place order
  std::vector<std::string> transitions;  ///< dense transition order
  std::vector<std::vector<std::uint16_t>> markings;  ///< [0] is the initial marking
  /// edges[s] = (transition index, successor state)
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges;
  bool complete = true;   ///< false when exploration stopped at the bound
  bool overflow = false;  ///< some place exceeded the token counter (unbounded net)
};

StateSpace explore(const AcceptingOCPN& net, std::size_t max_states);

struct SoundnessReport {
  bool sound = false;
  std::size_t states = 0;
  std::string reason;  ///< first violated property, empty when sound
};

inline constexpr std::size_t kDefaultStateBound = 1'000'000;

/// Classical workflow-net soundness on the net's own initial/final markings:
/// option to complete, proper completion and no dead transitions.
/// Throws StateSpaceExceeded when more than `max_states` markings are reachable.
SoundnessReport analyze_soundness(const AcceptingOCPN& net, std::size_t max_states = kDefaultStateBound);

bool check_soundness(const AcceptingOCPN& net, std::size_t max_states = kDefaultStateBound);

}  // namespace inexa::net
