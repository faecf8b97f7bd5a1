#include "inexa/event_log.hpp"

#include <algorithm>
#include <charconv>
#include <utility>

#include "inexa/errors.hpp"

namespace inexa::ocel {
namespace {

int read_int(std::string_view text, std::size_t pos, std::size_t len) {
  if (pos + len > text.size()) throw std::invalid_argument("truncated");
  int value = 0;
  auto first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc() || ptr != first + len) throw std::invalid_argument("digit expected");
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) throw std::invalid_argument(std::string("'") + c + "' expected");
}

std::shared_ptr<const std::unordered_map<std::string, std::size_t>> make_index(
    const std::vector<EventLog::EventPtr>& events) {
  auto index = std::make_shared<std::unordered_map<std::string, std::size_t>>();
  index->reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) index->emplace(events[i]->id, i);
  return index;
}

}  // namespace

Timestamp Timestamp::parse(std::string_view text) {
  using namespace std::chrono;
  Timestamp ts;
  ts.text_ = std::string(text);
  try {
    int y = read_int(text, 0, 4);
    expect_char(text, 4, '-');
    int mo = read_int(text, 5, 2);
    expect_char(text, 7, '-');
    int d = read_int(text, 8, 2);
    if (text.size() <= 10 || (text[10] != 'T' && text[10] != ' ')) throw std::invalid_argument("'T' expected");
    int h = read_int(text, 11, 2);
    expect_char(text, 13, ':');
    int mi = read_int(text, 14, 2);
    expect_char(text, 16, ':');
    int s = read_int(text, 17, 2);
    std::size_t pos = 19;
    std::int64_t micros = 0;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      int digits = 0;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        if (digits < 6) micros = micros * 10 + (text[pos] - '0');
        ++digits;
        ++pos;
      }
      if (digits == 0) throw std::invalid_argument("fraction digits expected");
      for (int i = digits; i < 6; ++i) micros *= 10;
    }
    minutes offset{0};
    if (pos < text.size()) {
      if (text[pos] == 'Z') {
        ++pos;
      } else if (text[pos] == '+' || text[pos] == '-') {
        int sign = text[pos] == '+' ? 1 : -1;
        int oh = read_int(text, pos + 1, 2);
        expect_char(text, pos + 3, ':');
        int om = read_int(text, pos + 4, 2);
        offset = minutes(sign * (oh * 60 + om));
        pos += 6;
      }
    }
    if (pos != text.size()) throw std::invalid_argument("trailing characters");

    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) throw std::invalid_argument("field out of range");
    ts.instant_ = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + microseconds{micros} - offset;
  } catch (const std::invalid_argument& e) {
    throw ParseError("invalid ISO-8601 timestamp '" + std::string(text) + "': " + e.what());
  }
  return ts;
}

EventLog::EventLog()
    : index_(std::make_shared<const std::unordered_map<std::string, std::size_t>>()),
      history_id_(kDefaultHistoryId) {}

EventLog EventLog::build(std::vector<Event> events, Registry objects, AbstractionHistory history,
                         std::string history_id) {
  auto register_object = [&](const std::string& oid, const ObjectType& type, const std::string& eid) {
    auto [it, inserted] = objects.emplace(oid, type);
    if (!inserted && it->second != type) {
      throw LogInvariantError("object '" + oid + "' is typed '" + it->second.name() + "' but event '" + eid +
                              "' relates it as '" + type.name() + "'");
    }
  };

  std::unordered_set<std::string> seen;
  std::map<std::string, std::string> abstraction_objects_in_events;  // oid -> first event
  for (auto& e : events) {
    if (e.id.empty()) throw LogInvariantError("event with empty id");
    if (!seen.insert(e.id).second) throw LogInvariantError("duplicate event id '" + e.id + "'");
    for (auto it = e.wfomap.begin(); it != e.wfomap.end();) {
      if (!it->first.is_workflow()) {
        throw LogInvariantError("event '" + e.id + "' relates non-workflow type '" + it->first.name() +
                                "' in its workflow object map");
      }
      it = it->second.empty() ? e.wfomap.erase(it) : std::next(it);
    }
    for (auto it = e.aomap.begin(); it != e.aomap.end();) {
      if (!it->first.is_abstraction()) {
        throw LogInvariantError("event '" + e.id + "' relates non-abstraction type '" + it->first.name() +
                                "' in its abstraction object map");
      }
      it = it->second.empty() ? e.aomap.erase(it) : std::next(it);
    }
    if (e.wfomap.empty()) throw LogInvariantError("event '" + e.id + "' relates no workflow object");
    for (const auto& [type, oids] : e.wfomap) {
      for (const auto& oid : oids) register_object(oid, type, e.id);
    }
    for (const auto& [type, oids] : e.aomap) {
      for (const auto& oid : oids) {
        register_object(oid, type, e.id);
        abstraction_objects_in_events.emplace(oid, e.id);
      }
    }
  }

  for (const auto& [oid, type] : objects) {
    if (type.is_history()) throw LogInvariantError("object '" + oid + "' of type history must be the history object");
  }

  std::unordered_set<std::string> applied;
  for (const auto& oid : history.applied) {
    if (!applied.insert(oid).second) throw LogInvariantError("abstraction object '" + oid + "' applied twice");
    auto it = objects.find(oid);
    if (it == objects.end() || !it->second.is_abstraction()) {
      throw LogInvariantError("history entry '" + oid + "' is not an abstraction object");
    }
    if (!abstraction_objects_in_events.contains(oid)) {
      throw LogInvariantError("history entry '" + oid + "' is related to no event");
    }
  }
  for (const auto& [oid, type] : objects) {
    if (type.is_abstraction() && !applied.contains(oid)) {
      throw LogInvariantError("abstraction object '" + oid + "' is missing from the history");
    }
  }
  if (objects.contains(history_id)) {
    throw LogInvariantError("history object id '" + history_id + "' collides with another object");
  }

  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.timestamp.instant() != b.timestamp.instant()) return a.timestamp.instant() < b.timestamp.instant();
    return a.id < b.id;
  });

  EventLog log;
  log.events_.reserve(events.size());
  for (auto& e : events) log.events_.push_back(std::make_shared<const Event>(std::move(e)));
  log.index_ = make_index(log.events_);
  log.objects_ = std::move(objects);
  log.history_ = std::move(history);
  log.history_id_ = std::move(history_id);
  return log;
}

std::optional<std::size_t> EventLog::index_of(std::string_view event_id) const {
  auto it = index_->find(std::string(event_id));
  if (it == index_->end()) return std::nullopt;
  return it->second;
}

const Event* EventLog::find(std::string_view event_id) const {
  auto i = index_of(event_id);
  return i ? events_[*i].get() : nullptr;
}

std::optional<ObjectType> EventLog::type_of(std::string_view object_id) const {
  auto it = objects_.find(std::string(object_id));
  if (it == objects_.end()) return std::nullopt;
  return it->second;
}

std::vector<ObjectType> EventLog::workflow_types() const {
  std::set<ObjectType> types;
  for (const auto& e : events_) {
    for (const auto& [type, oids] : e->wfomap) types.insert(type);
  }
  return {types.begin(), types.end()};
}

std::vector<std::string> EventLog::events_with(std::string_view abstraction_object) const {
  std::vector<std::string> out;
  auto type = type_of(abstraction_object);
  if (!type || !type->is_abstraction()) return out;
  for (const auto& e : events_) {
    auto it = e->aomap.find(*type);
    if (it != e->aomap.end() && it->second.contains(std::string(abstraction_object))) out.push_back(e->id);
  }
  return out;
}

bool EventLog::operator==(const EventLog& other) const {
  if (events_.size() != other.events_.size() || objects_ != other.objects_ || history_ != other.history_ ||
      history_id_ != other.history_id_) {
    return false;
  }
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (events_[i] != other.events_[i] && !(*events_[i] == *other.events_[i])) return false;
  }
  return true;
}

EventLog project_workflow(const EventLog& log) {
  EventLog out = log;
  for (auto& e : out.events_) {
    if (e->aomap.empty()) continue;
    auto copy = std::make_shared<Event>(*e);
    copy->aomap.clear();
    e = std::move(copy);
  }
  std::erase_if(out.objects_, [](const auto& entry) { return entry.second.is_abstraction(); });
  out.history_.applied.clear();
  return out;
}

EventLog st_abs(const EventLog& log, const std::set<std::string>& targets, const ObjectType& abstraction_type,
                const std::string& new_oid) {
  if (!abstraction_type.is_abstraction()) {
    throw LogInvariantError("'" + abstraction_type.name() + "' is not an abstraction type");
  }
  if (targets.empty()) throw LogInvariantError("st_abs needs at least one target event");
  if (new_oid.empty() || new_oid == log.history_id() || log.objects().contains(new_oid)) {
    throw LogInvariantError("abstraction object id '" + new_oid + "' is not fresh");
  }
  EventLog out = log;
  for (const auto& eid : targets) {
    auto i = log.index_of(eid);
    if (!i) throw LogInvariantError("st_abs target event '" + eid + "' is not in the log");
    auto copy = std::make_shared<Event>(*out.events_[*i]);
    copy->aomap[abstraction_type].insert(new_oid);
    out.events_[*i] = std::move(copy);
  }
  out.objects_.emplace(new_oid, abstraction_type);
  out.history_.applied.push_back(new_oid);
  return out;
}

EventLog st_abs_inverse(const EventLog& log, const std::string& oid) {
  auto& applied = log.history().applied;
  auto pos = std::find(applied.begin(), applied.end(), oid);
  if (pos == applied.end()) {
    throw LogInvariantError("abstraction object '" + oid + "' is not in the abstraction history");
  }
  auto type = *log.type_of(oid);
  EventLog out = log;
  for (auto& e : out.events_) {
    auto it = e->aomap.find(type);
    if (it == e->aomap.end() || !it->second.contains(oid)) continue;
    auto copy = std::make_shared<Event>(*e);
    auto& oids = copy->aomap[type];
    oids.erase(oid);
    if (oids.empty()) copy->aomap.erase(type);
    e = std::move(copy);
  }
  out.objects_.erase(oid);
  out.history_.applied.erase(out.history_.applied.begin() + (pos - applied.begin()));
  return out;
}

std::string IdGenerator::next() {
  static constexpr std::string_view kAlphabet = "0123456789abcdefghijklmnopqrstuvwxyz";
  for (;;) {
    std::string id(5, '0');
    // Modulo keeps the sequence identical across standard libraries.
    for (auto& c : id) c = kAlphabet[rng_() % kAlphabet.size()];
    if (issued_.insert(id).second) return id;
  }
}

std::string IdGenerator::next_fresh(const EventLog& log) {
  for (;;) {
    auto id = next();
    if (!log.objects().contains(id) && !log.index_of(id) && id != log.history_id()) return id;
  }
}

}  // namespace inexa::ocel
