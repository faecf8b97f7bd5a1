#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "inexa/object_type.hpp"

namespace inexa::ocel {

/// ISO-8601 instant. The original text is kept so serialization is lossless.
class Timestamp {
 public:
  using Instant = std::chrono::sys_time<std::chrono::microseconds>;

  /// Accepts YYYY-MM-DDTHH:MM:SS[.fraction][Z|+HH:MM|-HH:MM]; a missing zone is UTC.
  static Timestamp parse(std::string_view text);

  Instant instant() const noexcept { return instant_; }
  const std::string& text() const noexcept { return text_; }

  bool operator==(const Timestamp& other) const { return text_ == other.text_; }

 private:
  Instant instant_{};
  std::string text_;
};

using ObjectSet = std::set<std::string>;
using ObjectMap = std::map<ObjectType, ObjectSet>;

struct Event {
  std::string id;
  std::string activity;
  Timestamp timestamp;
  ObjectMap wfomap;  ///< workflow types only, no empty sets
  ObjectMap aomap;   ///< abstraction types only, no empty sets

  bool operator==(const Event&) const = default;
};

struct AbstractionHistory {
  std::vector<std::string> applied;

  bool operator==(const AbstractionHistory&) const = default;
};

/// Object-centric event log with abstraction objects and the history object.
///
/// Immutable once built; events are held through shared pointers so derived
/// logs (st_abs, projection) share every event they leave untouched.
/// Events are totally ordered by (timestamp, id).
class EventLog {
 public:
  using EventPtr = std::shared_ptr<const Event>;
  using Registry = std::map<std::string, ObjectType>;

  static constexpr std::string_view kDefaultHistoryId = "absHistory";

  EventLog();

  /// Validates every invariant and sorts the events. Objects referenced by
  /// events but missing from `objects` are registered with the relation type.
  static EventLog build(std::vector<Event> events, Registry objects, AbstractionHistory history,
                        std::string history_id = std::string(kDefaultHistoryId));

  const std::vector<EventPtr>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  /// Position of an event in the total order, if present.
  std::optional<std::size_t> index_of(std::string_view event_id) const;
  const Event* find(std::string_view event_id) const;

  const Registry& objects() const noexcept { return objects_; }
  std::optional<ObjectType> type_of(std::string_view object_id) const;

  const AbstractionHistory& history() const noexcept { return history_; }
  const std::string& history_id() const noexcept { return history_id_; }
  bool augmented() const noexcept { return !history_.applied.empty(); }

  /// Workflow types related to at least one event, sorted by name.
  std::vector<ObjectType> workflow_types() const;
  /// Ids of the events whose aomap contains `abstraction_object`, in log order.
  std::vector<std::string> events_with(std::string_view abstraction_object) const;

  bool operator==(const EventLog& other) const;

 private:
  friend EventLog project_workflow(const EventLog& log);
  friend EventLog st_abs(const EventLog&, const std::set<std::string>&, const ObjectType&, const std::string&);
  friend EventLog st_abs_inverse(const EventLog&, const std::string&);

  std::vector<EventPtr> events_;
  std::shared_ptr<const std::unordered_map<std::string, std::size_t>> index_;
  Registry objects_;
  AbstractionHistory history_;
  std::string history_id_;
};

/// L restricted to workflow types: every aomap emptied, history cleared,
/// abstraction objects dropped from the registry.
EventLog project_workflow(const EventLog& log);

/// Augments `log` with abstraction object `new_oid` of type `abstraction_type`
/// on the `targets` events and appends it to the history.
EventLog st_abs(const EventLog& log, const std::set<std::string>& targets, const ObjectType& abstraction_type,
                const std::string& new_oid);

/// Removes `oid` from every aomap, from the registry and from the history.
EventLog st_abs_inverse(const EventLog& log, const std::string& oid);

/// Fresh 5-character base-36 object ids from a seeded generator.
class IdGenerator {
 public:
  explicit IdGenerator(std::uint64_t seed = 0) : rng_(seed) {}

  /// Never repeats an id it has issued before.
  std::string next();
  /// Like next(), and also avoids every object and event id already in `log`.
  std::string next_fresh(const EventLog& log);

 private:
  std::mt19937_64 rng_;
  std::unordered_set<std::string> issued_;
};

}  // namespace inexa::ocel
