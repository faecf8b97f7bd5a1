#pragma once

#include <string>
#include <string_view>

#include "inexa/event_log.hpp"

namespace inexa::ocel {

enum class LogFormat { OcelJson };

/// Parses the OCEL JSON profile (see docs/ocel-profile.md).
/// Throws ParseError on malformed JSON or schema violations and
/// LogInvariantError on invariant violations.
EventLog parse_log(std::string_view source, LogFormat format = LogFormat::OcelJson);

/// Deterministic serialization: sorted keys, events in log order, two-space indent.
std::string serialize_log(const EventLog& log, LogFormat format = LogFormat::OcelJson);

EventLog read_log_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace inexa::ocel
