#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <unordered_map>
#include <vector>

#include "inexa/object_type.hpp"

namespace inexa::net {

using ocel::ObjectType;

struct Place {
  std::string id;
  ObjectType otype;

  bool operator==(const Place&) const = default;
};

struct Transition {
  std::string id;
  std::optional<std::string> label;  ///< nullopt = silent
  std::set<ObjectType> refs;         ///< completely aggregated types kept as "↔" references
  /// Original transition ids this transition stands for. An untouched
  /// transition lists itself; silent transitions list nothing.
  std::vector<std::string> origins;
  /// Labels of the aggregated members, in control-flow order (empty unless aggregate).
  std::vector<std::string> members;

  bool silent() const noexcept { return !label.has_value(); }
  bool operator==(const Transition&) const = default;
};

/// Directed arc; exactly one of source/target is a place.
struct Arc {
  std::string source;
  std::string target;
  bool variable = false;

  auto operator<=>(const Arc& o) const { return std::tie(source, target) <=> std::tie(o.source, o.target); }
  bool operator==(const Arc& o) const { return source == o.source && target == o.target && variable == o.variable; }
};

using Marking = std::map<std::string, int>;

enum class BlockKind { Seq, Xor, And, Loop };

/// A single-entry/single-exit block of one type's compiled process tree,
/// recorded in original ids. Discovery keeps these so control-flow
/// aggregations can be recognised and applied on abstracted nets.
struct Fragment {
  ObjectType otype;
  std::string node_id;
  std::optional<std::size_t> parent;  ///< index of the enclosing fragment of the same type
  std::size_t depth = 0;
  BlockKind kind = BlockKind::Seq;
  std::string entry;
  std::string exit;
  std::vector<std::string> places;       ///< interior places
  std::vector<std::string> transitions;  ///< interior transitions, silent included
  std::vector<std::string> labeled;      ///< labeled leaves in tree order
};

/// Accepting object-centric Petri net. Value type; containers are kept sorted by id.
class AcceptingOCPN {
 public:
  AcceptingOCPN() = default;

  void add_place(Place p);
  void add_transition(Transition t);
  void add_arc(std::string source, std::string target, bool variable = false);
  void remove_place(const std::string& id);       ///< also drops its arcs and marking entries
  void remove_transition(const std::string& id);  ///< also drops its arcs
  void set_variable(const std::string& source, const std::string& target, bool variable);

  const std::map<std::string, Place>& places() const noexcept { return places_; }
  const std::map<std::string, Transition>& transitions() const noexcept { return transitions_; }
  const std::set<Arc>& arcs() const noexcept { return arcs_; }
  const Marking& initial_marking() const noexcept { return m_init_; }
  const Marking& final_marking() const noexcept { return m_final_; }
  Marking& initial_marking() noexcept { return m_init_; }
  Marking& final_marking() noexcept { return m_final_; }

  const Place* place(const std::string& id) const;
  const Transition* transition(const std::string& id) const;
  Transition* transition_mut(const std::string& id);

  std::vector<std::string> preset(const std::string& node) const;
  std::vector<std::string> postset(const std::string& node) const;
  bool has_arc(const std::string& source, const std::string& target) const;
  const Arc* arc(const std::string& source, const std::string& target) const;

  /// Types of the places adjacent to transition `tid`.
  std::set<ObjectType> transition_types(const std::string& tid) const;
  /// Types owning at least one place, sorted.
  std::vector<ObjectType> object_types() const;

  /// Current transition standing for original transition `original`.
  std::optional<std::string> current_of(const std::string& original) const;

  const std::vector<Fragment>& fragments() const;
  void set_fragments(std::shared_ptr<const std::vector<Fragment>> fragments) { fragments_ = std::move(fragments); }

  /// Structural equality (ids, labels, refs, arcs, markings); fragments ignored.
  bool operator==(const AcceptingOCPN& other) const;

 private:
  std::map<std::string, Place> places_;
  std::map<std::string, Transition> transitions_;
  std::set<Arc> arcs_;
  std::multimap<std::string, std::string> out_;  // node -> successors
  std::multimap<std::string, std::string> in_;   // node -> predecessors
  Marking m_init_;
  Marking m_final_;
  std::shared_ptr<const std::vector<Fragment>> fragments_;
};

struct NetSize {
  std::size_t elements = 0;  ///< |P| + |T|
  std::size_t arcs = 0;

  bool operator==(const NetSize&) const = default;
};

NetSize size(const AcceptingOCPN& net);

/// ON restricted to one type: its places, the transitions touching them and
/// the induced arcs. Throws std::invalid_argument when no place has the type.
AcceptingOCPN project_type(const AcceptingOCPN& net, const ObjectType& otype);

/// Graph isomorphism that ignores ids and compares labels, refs, place types,
/// arc variability and markings.
bool isomorphic(const AcceptingOCPN& a, const AcceptingOCPN& b);

/// Natural order on ids: "t2" < "t10"; digit runs compare numerically.
bool id_less(const std::string& a, const std::string& b);

/// Renders "label ↔ a ↔ b" for a transition (empty string for silent ones).
std::string display_label(const Transition& t);

}  // namespace inexa::net
