#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "inexa/abstraction.hpp"
#include "inexa/discovery.hpp"
#include "inexa/errors.hpp"
#include "inexa/net_export.hpp"
#include "inexa/ocel_json.hpp"
#include "inexa/service.hpp"
#include "inexa/session.hpp"

namespace inexa::cli {
namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string render(const net::AcceptingOCPN& net, const std::string& format) {
  if (format == "dot") return net::to_dot(net);
  if (format == "payload") return net::to_payload_json(net) + "\n";
  return net::to_net_json(net);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    ocel::write_file(path, text);
  }
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

// Script lines:
//   apply <suffix> | <target type> | <t1> <t2> ...
//   apply next
//   redo <oid>
//   redo last
//   # comment
void run_script(session::Session& s, const std::string& text, std::ostream& out) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto where = "line " + std::to_string(n) + ": ";
    if (line.rfind("redo", 0) == 0) {
      auto arg = trim(line.substr(4));
      if (arg.empty()) throw Error(where + "redo needs an abstraction object id or 'last'");
      if (arg == "last") {
        if (s.log().history().applied.empty()) throw NotRedoableError(where + "nothing to redo");
        arg = s.log().history().applied.back();
      }
      try {
        s.redo(arg);
      } catch (const NotRedoableError& e) {
        throw NotRedoableError(where + e.what());
      }
      out << "redo " << arg << " -> " << net::size(s.model()).elements << " elements\n";
      continue;
    }
    if (line.rfind("apply", 0) != 0) throw Error(where + "expected 'apply' or 'redo'");
    auto rest = trim(line.substr(5));
    abstraction::AbstractionRecord applied = [&] {
      if (rest == "next") {
        auto next = s.retrieve_next();
        if (!next) throw NotAvailableError(where + "no abstraction left to apply");
        return s.apply(next->record);
      }
      auto fields = split(rest, '|');
      if (fields.size() != 3) throw Error(where + "expected 'apply <suffix> | <target> | <transitions>'");
      auto kind = ocel::kind_from_suffix(trim(fields[0]));
      if (!kind) throw Error(where + "unknown abstraction suffix '" + trim(fields[0]) + "'");
      auto target = ocel::ObjectType::parse(trim(fields[1]));
      std::set<std::string> ts;
      std::istringstream ids(fields[2]);
      for (std::string id; ids >> id;) ts.insert(id);
      try {
        return s.apply(abstraction::make_record(*kind, target, ts));
      } catch (const NotAvailableError& e) {
        throw NotAvailableError(where + e.what());
      }
    }();
    out << "apply " << abstraction::describe(applied) << " as " << applied.oid << " -> "
        << net::size(s.model()).elements << " elements\n";
  }
}

void print_summary(const session::Session& s, std::ostream& out) {
  auto sz = net::size(s.model());
  out << "model: " << sz.elements << " elements, " << sz.arcs << " arcs, " << s.model().object_types().size()
      << " object types\n";
  for (const auto& r : s.history()) out << "  applied " << r.oid << ": " << abstraction::describe(r) << "\n";
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const LogInvariantError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const UnfitModelError& e) {
    err << "error: " << e.what() << "\n";
    for (const auto& d : e.diagnostics()) err << "  " << (d.event_id.empty() ? "-" : d.event_id) << ": " << d.reason << "\n";
    return kUnfit;
  } catch (const NotAvailableError& e) {
    err << "error: " << e.what() << "\n";
    return kInadmissible;
  } catch (const NotRedoableError& e) {
    err << "error: " << e.what() << "\n";
    return kInadmissible;
  } catch (const InadmissibleError& e) {
    err << "error: " << e.what() << "\n";
    return kInadmissible;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interactive explainable abstraction of object-centric process models", "inexa"};
  app.require_subcommand(1);

  std::string log_path, out_path, format = "json", model_out, log_out, script_path, bind = "127.0.0.1:8080",
                                   static_dir;
  std::size_t threshold = session::kDefaultThreshold;
  std::uint64_t seed = 0;

  auto* discover = app.add_subcommand("discover", "discover the object-centric Petri net of a log");
  discover->add_option("log", log_path, "OCEL log")->required();
  discover->add_option("-o,--out", out_path, "output file (stdout when omitted)");
  discover->add_option("--format", format, "dot, json or payload")->check(CLI::IsMember({"dot", "json", "payload"}));

  auto* init = app.add_subcommand("init", "discover and abstract until the model is small enough");
  init->add_option("log", log_path, "OCEL log")->required();
  init->add_option("--threshold", threshold, "maximum number of places and transitions");
  init->add_option("--seed", seed, "seed for abstraction object ids");
  init->add_option("--model-out", model_out, "abstracted model file");
  init->add_option("--log-out", log_out, "augmented log file");
  init->add_option("--format", format, "dot, json or payload")->check(CLI::IsMember({"dot", "json", "payload"}));

  auto* script = app.add_subcommand("apply-script", "apply and redo abstractions listed in a script");
  script->add_option("log", log_path, "OCEL log, possibly augmented")->required();
  script->add_option("script", script_path, "script file")->required();
  script->add_option("--seed", seed, "seed for abstraction object ids");
  script->add_option("--model-out", model_out, "abstracted model file");
  script->add_option("--log-out", log_out, "augmented log file");
  script->add_option("--format", format, "dot, json or payload")->check(CLI::IsMember({"dot", "json", "payload"}));

  auto* exp = app.add_subcommand("export", "overlay a log's abstraction history and write model and log");
  exp->add_option("log", log_path, "OCEL log, possibly augmented")->required();
  exp->add_option("--model-out", model_out, "abstracted model file");
  exp->add_option("--log-out", log_out, "normalized augmented log file");
  exp->add_option("--format", format, "dot, json or payload")->check(CLI::IsMember({"dot", "json", "payload"}));

  auto* serve = app.add_subcommand("serve", "serve the session API over HTTP");
  serve->add_option("--bind", bind, "host:port");
  serve->add_option("--threshold", threshold, "default threshold for new sessions");
  serve->add_option("--seed", seed, "seed for abstraction object ids");
  serve->add_option("--static", static_dir, "directory with the web client bundle");

  auto* demo = app.add_subcommand("demo", "rebuild the bank account opening example end to end");
  demo->add_option("--out-dir", out_path, "write DOT renderings of each step here");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
      return kOk;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  if (*discover) {
    return guarded(err, [&] {
      auto log = ocel::parse_log(read_text(log_path));
      auto found = discovery::discover_models(log);
      for (const auto& w : found.warnings) err << "warning: " << w << "\n";
      emit(out_path, render(found.net, format), out);
      return kOk;
    });
  }

  if (*init || *script || *exp) {
    return guarded(err, [&] {
      auto log = ocel::parse_log(read_text(log_path));
      session::SessionOptions opts;
      opts.threshold = threshold;
      opts.seed = seed;
      opts.initialize = bool(*init);
      session::Session s(std::move(log), opts);
      if (*script) run_script(s, read_text(script_path), out);
      for (const auto& w : s.warnings()) err << "warning: " << w << "\n";
      if (!model_out.empty()) emit(model_out, render(s.model(), format), out);
      if (!log_out.empty()) emit(log_out, s.export_log(), out);
      if (model_out != "-" && log_out != "-") print_summary(s, out);
      return kOk;
    });
  }

  if (*serve) {
    auto colon = bind.rfind(':');
    service::ServerOptions so;
    try {
      if (colon == std::string::npos) throw std::invalid_argument(bind);
      so.host = bind.substr(0, colon);
      so.port = std::stoi(bind.substr(colon + 1));
    } catch (const std::exception&) {
      err << "error: --bind expects host:port\n";
      return kUsage;
    }
    so.static_dir = static_dir;
    service::Router router(service::ServiceOptions{threshold, seed});
    out << "listening on " << so.host << ":" << so.port << std::endl;
    if (!service::serve(router, so)) {
      err << "error: cannot listen on " << bind << "\n";
      return kUsage;
    }
    return kOk;
  }

  // demo
  return guarded(err, [&] {
    auto log = ocel::parse_log(demo_log());
    auto write_step = [&](const std::string& name, const net::AcceptingOCPN& net) {
      if (!out_path.empty()) ocel::write_file(out_path + "/" + name + ".dot", net::to_dot(net));
    };
    session::SessionOptions opts;
    opts.initialize = false;
    session::Session s(log, opts);
    auto sz = net::size(s.original());
    out << "discovered: " << sz.elements << " elements, " << sz.arcs << " arcs\n";
    write_step("0-discovered", s.original());

    auto lifecycle = ocel::ObjectType::parse("workflow:lc:finalize account opening");
    auto client = ocel::ObjectType::parse("workflow:client");
    auto bank = ocel::ObjectType::parse("workflow:bank");
    auto cla = s.apply(abstraction::make_record(ocel::AbstractionKind::Cla, lifecycle,
                                                abstraction::complete_targets(s.model(), lifecycle)));
    auto caa = s.apply(abstraction::make_record(ocel::AbstractionKind::Caa, client,
                                                abstraction::complete_targets(s.model(), client)));
    out << "after " << cla.oid << " (cla) and " << caa.oid << " (caa): " << net::size(s.model()).elements
        << " elements\n";
    write_step("1-upper", s.model());
    for (const auto& [id, t] : s.model().transitions()) out << "  " << id << "  " << net::display_label(t) << "\n";

    std::optional<abstraction::AbstractionRecord> seq;
    for (const auto& c : s.available()) {
      if (c.record.kind() == ocel::AbstractionKind::Seq && c.record.target == bank && c.record.transitions.size() == 4) {
        seq = c.record;
      }
    }
    if (!seq) throw InadmissibleError("sequence of the bank flow not available");
    auto applied = s.apply(*seq);
    out << "after " << applied.oid << " (seq): " << net::size(s.model()).elements << " elements\n";
    write_step("2-lower", s.model());
    for (const auto& [id, t] : s.model().transitions()) out << "  " << id << "  " << net::display_label(t) << "\n";

    s.redo(applied.oid);
    out << "redo " << applied.oid << ": " << net::size(s.model()).elements << " elements\n";
    out << "\naugmented log history:";
    for (const auto& oid : s.log().history().applied) out << " " << oid;
    out << "\n";
    return kOk;
  });
}

std::string demo_log() {
  return R"({
  "objects": {
    "a0287": {"type": "workflow:client"},
    "151a3": {"type": "workflow:bank"},
    "b8955": {"type": "workflow:lc:finalize account opening"},
    "absHistory": {"type": "history", "applied": []}
  },
  "events": [
    {"id": "0ab63", "activity": "ask for customer needs", "timestamp": "2023-05-19T10:42:49",
     "relations": {"workflow:client": ["a0287"], "workflow:bank": ["151a3"]}},
    {"id": "6b0b9", "activity": "check if customer is client", "timestamp": "2023-05-19T10:43:36",
     "relations": {"workflow:bank": ["151a3"]}},
    {"id": "ddf21", "activity": "check client's credit status", "timestamp": "2023-05-19T10:44:25",
     "relations": {"workflow:bank": ["151a3"]}},
    {"id": "9c7f8", "activity": "inform client", "timestamp": "2023-05-19T10:45:16",
     "relations": {"workflow:client": ["a0287"], "workflow:bank": ["151a3"]}},
    {"id": "207g2", "activity": "check type of account to be created", "timestamp": "2023-05-19T10:55:29",
     "relations": {"workflow:client": ["a0287"], "workflow:bank": ["151a3"]}},
    {"id": "260f5", "activity": "click open account", "timestamp": "2023-05-19T10:57:25",
     "relations": {"workflow:bank": ["151a3"]}},
    {"id": "0a1e4", "activity": "insert account meta data", "timestamp": "2023-05-19T10:57:27",
     "relations": {"workflow:bank": ["151a3"]}},
    {"id": "6629a", "activity": "check account conditions", "timestamp": "2023-05-19T10:58:03",
     "relations": {"workflow:bank": ["151a3"]}},
    {"id": "1c0bf", "activity": "retrieve acceptance signature", "timestamp": "2023-05-19T10:58:59",
     "relations": {"workflow:bank": ["151a3"]}},
    {"id": "48c83", "activity": "finalize account opening - start", "timestamp": "2023-05-19T11:00:33",
     "relations": {"workflow:bank": ["151a3"], "workflow:lc:finalize account opening": ["b8955"]}},
    {"id": "ddf22", "activity": "finalize account opening - on hold", "timestamp": "2023-05-19T11:00:45",
     "relations": {"workflow:bank": ["151a3"], "workflow:lc:finalize account opening": ["b8955"]}},
    {"id": "kj875", "activity": "finalize account opening - continue", "timestamp": "2023-05-19T11:01:51",
     "relations": {"workflow:bank": ["151a3"], "workflow:lc:finalize account opening": ["b8955"]}},
    {"id": "87bd9", "activity": "finalize account opening - end", "timestamp": "2023-05-19T11:02:12",
     "relations": {"workflow:bank": ["151a3"], "workflow:lc:finalize account opening": ["b8955"]}}
  ]
}
)";
}

}  // namespace inexa::cli
