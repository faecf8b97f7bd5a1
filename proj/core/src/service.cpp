#include "inexa/service.hpp"

#include <algorithm>
#include <charconv>
#include <ctime>
#include <optional>

#include <nlohmann/json.hpp>

#include "inexa/errors.hpp"
#include "inexa/net_export.hpp"
#include "inexa/ocel_json.hpp"

namespace inexa::service {
namespace {

using nlohmann::json;

Response reply(int status, const json& body) { return Response{status, body.dump(), "application/json"}; }

Response error(int status, const std::string& message, json extra = json::object()) {
  extra["error"] = message;
  return reply(status, extra);
}

std::string now_iso() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json record_json(const abstraction::AbstractionRecord& r, const net::AcceptingOCPN* model = nullptr) {
  std::vector<std::string> ts(r.transitions.begin(), r.transitions.end());
  std::sort(ts.begin(), ts.end(), net::id_less);
  json j = {{"suffix", ocel::suffix(r.kind())},
            {"atype", r.atype.name()},
            {"target", r.target.name()},
            {"transitions", ts},
            {"title", std::string(ocel::display_name(r.kind())) + " of " + r.target.short_name()}};
  if (!r.oid.empty()) j["oid"] = r.oid;
  if (model) {
    json labels = json::array();
    for (const auto& t : ts) {
      const auto* tr = model->transition(t);
      labels.push_back(tr && tr->label ? *tr->label : "");
    }
    j["labels"] = std::move(labels);
  }
  return j;
}

json history_json(const session::Session& s) {
  json out = json::array();
  for (const auto& r : s.history()) out.push_back(record_json(r));
  return out;
}

json model_json(const session::Session& s) { return json::parse(net::to_payload_json(s.model())); }

json state_json(const session::Session& s) {
  return {{"model", model_json(s)}, {"history", history_json(s)}};
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = i;
    while (j < path.size() && path[j] != '/') ++j;
    if (j > i) parts.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return parts;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

std::size_t Router::session_count() const {
  std::lock_guard lock(registry_mutex_);
  return sessions_.size();
}

std::shared_ptr<Router::Entry> Router::lookup(const std::string& sid) const {
  std::lock_guard lock(registry_mutex_);
  auto it = sessions_.find(sid);
  return it == sessions_.end() ? nullptr : it->second;
}

Response Router::create(const std::map<std::string, std::string>& query, std::string_view body) {
  session::SessionOptions opts;
  opts.threshold = options_.threshold;
  opts.seed = options_.seed;
  if (auto it = query.find("threshold"); it != query.end() && !parse_number(it->second, opts.threshold)) {
    return error(400, "threshold must be a non-negative integer");
  }
  if (auto it = query.find("seed"); it != query.end() && !parse_number(it->second, opts.seed)) {
    return error(400, "seed must be a non-negative integer");
  }
  if (auto it = query.find("mode"); it != query.end()) {
    if (it->second == "restore") opts.initialize = false;
    else if (it->second != "initialize") return error(400, "mode must be 'initialize' or 'restore'");
  }

  auto entry = std::make_shared<Entry>();
  try {
    auto log = ocel::parse_log(body);
    entry->session = std::make_unique<session::Session>(std::move(log), opts);
  } catch (const ParseError& e) {
    json extra = json::object();
    if (e.offset() != ParseError::npos) extra["offset"] = e.offset();
    return error(400, e.what(), extra);
  } catch (const LogInvariantError& e) {
    return error(400, e.what());
  } catch (const UnfitModelError& e) {
    json diags = json::array();
    for (const auto& d : e.diagnostics()) diags.push_back({{"event", d.event_id}, {"reason", d.reason}});
    return error(422, e.what(), {{"diagnostics", diags}});
  } catch (const Error& e) {
    return error(422, e.what());
  }
  entry->created_at = now_iso();

  std::string sid;
  {
    std::lock_guard lock(registry_mutex_);
    sid = "s" + std::to_string(next_sid_++);
    sessions_[sid] = entry;
  }
  const auto& s = *entry->session;
  json out = state_json(s);
  out["sid"] = sid;
  out["created_at"] = entry->created_at;
  out["threshold"] = s.threshold();
  out["warnings"] = s.warnings();
  return reply(201, out);
}

Response Router::handle(std::string_view method, std::string_view path, const std::map<std::string, std::string>& query,
                        std::string_view body) {
  auto parts = split_path(path);
  if (parts.empty() || parts[0] != "sessions") return error(404, "no such resource");
  if (parts.size() == 1) {
    if (method != "POST") return error(405, "use POST to create a session");
    return create(query, body);
  }
  if (parts.size() != 3) return error(404, "no such resource");

  auto entry = lookup(parts[1]);
  if (!entry) return error(404, "unknown session '" + parts[1] + "'");
  std::lock_guard lock(entry->mutex);
  auto& s = *entry->session;
  const auto& action = parts[2];

  if (method == "GET") {
    if (action == "model") return reply(200, model_json(s));
    if (action == "export") return Response{200, s.export_log(), "application/json"};
    if (action == "tree") return Response{200, s.tree().to_json(), "application/json"};
    if (action == "abstractions") {
      json available = json::array(), redoable = json::array();
      for (const auto& c : s.available()) available.push_back(record_json(c.record, &s.model()));
      for (const auto& c : s.redoable()) {
        auto j = record_json(c.record);
        j["rule"] = c.rule;
        redoable.push_back(std::move(j));
      }
      return reply(200, {{"available", available}, {"redoable", redoable}, {"history", history_json(s)}});
    }
    return error(404, "no such resource");
  }
  if (method != "POST") return error(405, "method not allowed");

  json req;
  try {
    req = json::parse(body.begin(), body.end());
  } catch (const json::parse_error& e) {
    return error(400, std::string("request body: ") + e.what());
  }
  if (!req.is_object()) return error(400, "request body must be a JSON object");

  if (action == "apply") {
    std::optional<abstraction::AbstractionRecord> record;
    try {
      auto kind = ocel::kind_from_suffix(req.at("suffix").get<std::string>());
      if (!kind) return error(400, "unknown abstraction suffix");
      auto target = ocel::ObjectType::parse(req.at("target").get<std::string>());
      auto ts = req.at("transitions").get<std::vector<std::string>>();
      record = abstraction::make_record(*kind, target, {ts.begin(), ts.end()});
    } catch (const json::exception& e) {
      return error(400, std::string("apply expects {suffix, target, transitions}: ") + e.what());
    } catch (const Error& e) {
      return error(400, e.what());
    }
    try {
      auto applied = s.apply(*record);
      json out = state_json(s);
      out["applied"] = record_json(applied);
      return reply(200, out);
    } catch (const NotAvailableError& e) {
      return error(409, e.what());
    }
  }
  if (action == "redo") {
    if (!req.contains("oid") || !req["oid"].is_string()) return error(400, "redo expects {oid}");
    try {
      s.redo(req["oid"].get<std::string>());
      return reply(200, state_json(s));
    } catch (const NotRedoableError& e) {
      return error(422, e.what());
    }
  }
  return error(404, "no such resource");
}

}  // namespace inexa::service
