#include "inexa/ocel_json.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "inexa/errors.hpp"

namespace inexa::ocel {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, json::value_t type, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  if (it->type() != type && !(type == json::value_t::number_unsigned && it->is_number_integer())) {
    throw ParseError(where + ": field '" + key + "' has type " + it->type_name());
  }
  return *it;
}

}  // namespace

EventLog parse_log(std::string_view source, LogFormat) {
  json doc;
  try {
    doc = json::parse(source.begin(), source.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("OCEL syntax error at byte ") + std::to_string(e.byte) + ": " + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ParseError("OCEL document must be a JSON object");

  EventLog::Registry objects;
  AbstractionHistory history;
  std::string history_id(EventLog::kDefaultHistoryId);
  bool have_history = false;

  if (auto it = doc.find("objects"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("'objects' must map object ids to descriptors");
    for (const auto& [oid, desc] : it->items()) {
      std::string where = "object '" + oid + "'";
      if (!desc.is_object()) throw ParseError(where + ": descriptor must be an object");
      auto type = ObjectType::parse(require(desc, "type", json::value_t::string, where).get<std::string>());
      if (type.is_history()) {
        if (have_history) throw LogInvariantError("more than one history object ('" + history_id + "', '" + oid + "')");
        have_history = true;
        history_id = oid;
        if (auto applied = desc.find("applied"); applied != desc.end()) {
          if (!applied->is_array()) throw ParseError(where + ": 'applied' must be an array");
          for (const auto& entry : *applied) {
            if (!entry.is_string()) throw ParseError(where + ": 'applied' entries must be strings");
            history.applied.push_back(entry.get<std::string>());
          }
        }
        continue;
      }
      objects.emplace(oid, std::move(type));
    }
  }

  std::vector<Event> events;
  if (auto it = doc.find("events"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("'events' must be an array");
    events.reserve(it->size());
    std::size_t n = 0;
    for (const auto& item : *it) {
      std::string where = "event #" + std::to_string(n++);
      if (!item.is_object()) throw ParseError(where + ": must be an object");
      Event e;
      e.id = require(item, "id", json::value_t::string, where).get<std::string>();
      where = "event '" + e.id + "'";
      e.activity = require(item, "activity", json::value_t::string, where).get<std::string>();
      e.timestamp = Timestamp::parse(require(item, "timestamp", json::value_t::string, where).get<std::string>());
      if (auto rel = item.find("relations"); rel != item.end()) {
        if (!rel->is_object()) throw ParseError(where + ": 'relations' must map types to id lists");
        for (const auto& [type_name, oids] : rel->items()) {
          auto type = ObjectType::parse(type_name);
          if (!oids.is_array()) throw ParseError(where + ": relation '" + type_name + "' must be an array");
          if (type.is_history()) throw LogInvariantError(where + " relates the history type");
          auto& target = type.is_abstraction() ? e.aomap[type] : e.wfomap[type];
          for (const auto& oid : oids) {
            if (!oid.is_string()) throw ParseError(where + ": object ids must be strings");
            target.insert(oid.get<std::string>());
          }
        }
      }
      events.push_back(std::move(e));
    }
  }

  return EventLog::build(std::move(events), std::move(objects), std::move(history), std::move(history_id));
}

std::string serialize_log(const EventLog& log, LogFormat) {
  json objects = json::object();
  for (const auto& [oid, type] : log.objects()) objects[oid] = {{"type", type.name()}};
  objects[log.history_id()] = {{"type", "history"}, {"applied", log.history().applied}};

  json events = json::array();
  for (const auto& e : log.events()) {
    json relations = json::object();
    for (const auto* map : {&e->wfomap, &e->aomap}) {
      for (const auto& [type, oids] : *map) relations[type.name()] = json(std::vector<std::string>(oids.begin(), oids.end()));
    }
    events.push_back({{"id", e->id}, {"activity", e->activity}, {"timestamp", e->timestamp.text()}, {"relations", relations}});
  }
  json doc = {{"objects", std::move(objects)}, {"events", std::move(events)}};
  return doc.dump(2) + "\n";
}

EventLog read_log_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_log(buf.str());
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << contents;
}

}  // namespace inexa::ocel
