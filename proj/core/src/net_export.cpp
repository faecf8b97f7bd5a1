#include "inexa/net_export.hpp"

#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "inexa/errors.hpp"

namespace inexa::net {
namespace {

using nlohmann::json;

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// Stable palette so a type keeps its colour across renderings of one net.
const char* colour(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return palette[i % std::size(palette)];
}

json marking_json(const Marking& m) {
  json out = json::object();
  for (const auto& [p, n] : m) out[p] = n;
  return out;
}

}  // namespace

std::string to_dot(const AcceptingOCPN& net) {
  std::map<ObjectType, std::size_t> type_index;
  for (const auto& t : net.object_types()) type_index.emplace(t, type_index.size());

  std::ostringstream os;
  os << "digraph ocpn {\n  rankdir=LR;\n";
  for (const auto& [id, p] : net.places()) {
    std::string fill;
    if (net.initial_marking().contains(id)) fill = ", style=filled, fillcolor=\"#dddddd\"";
    if (net.final_marking().contains(id)) fill = ", peripheries=2";
    os << "  \"" << dot_escape(id) << "\" [shape=circle, label=\"\", xlabel=\"" << dot_escape(p.otype.short_name())
       << "\", color=\"" << colour(type_index[p.otype]) << "\"" << fill << "];\n";
  }
  for (const auto& [id, t] : net.transitions()) {
    if (t.silent()) {
      os << "  \"" << dot_escape(id) << "\" [shape=box, style=filled, fillcolor=black, label=\"\", width=0.15];\n";
    } else {
      os << "  \"" << dot_escape(id) << "\" [shape=box, label=\"" << dot_escape(id + ": " + display_label(t)) << "\"];\n";
    }
  }
  for (const auto& a : net.arcs()) {
    std::string col;
    if (const auto* p = net.place(a.source)) col = colour(type_index[p->otype]);
    if (const auto* p = net.place(a.target)) col = colour(type_index[p->otype]);
    os << "  \"" << dot_escape(a.source) << "\" -> \"" << dot_escape(a.target) << "\" [color=\"" << col;
    if (a.variable) os << ":invis:" << col;
    os << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_payload_json(const AcceptingOCPN& net) {
  json nodes = json::array();
  for (const auto& [id, p] : net.places()) {
    json n = {{"id", id}, {"kind", "place"}, {"label", ""}, {"otype", p.otype.name()}};
    if (auto it = net.initial_marking().find(id); it != net.initial_marking().end()) n["initial"] = it->second;
    if (auto it = net.final_marking().find(id); it != net.final_marking().end()) n["final"] = it->second;
    nodes.push_back(std::move(n));
  }
  for (const auto& [id, t] : net.transitions()) {
    json n = {{"id", id}, {"kind", t.silent() ? "silent" : "transition"}, {"label", display_label(t)}};
    json refs = json::array();
    for (const auto& r : t.refs) refs.push_back(r.name());
    n["refs"] = std::move(refs);
    json types = json::array();
    for (const auto& ot : net.transition_types(id)) types.push_back(ot.name());
    n["otypes"] = std::move(types);
    if (!t.members.empty()) n["members"] = t.members;
    nodes.push_back(std::move(n));
  }
  json edges = json::array();
  for (const auto& a : net.arcs()) edges.push_back({{"src", a.source}, {"dst", a.target}, {"variable", a.variable}});

  auto types = net.object_types();
  std::size_t subprocesses = 0;
  for (const auto& t : types) subprocesses += t.type_class() == ocel::TypeClass::WorkflowSubprocess;
  auto s = size(net);
  json metrics = {{"elements", s.elements}, {"arcs", s.arcs}, {"object_types", types.size()}, {"subprocesses", subprocesses}};
  return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"metrics", std::move(metrics)}}.dump();
}

std::string to_net_json(const AcceptingOCPN& net) {
  json places = json::array();
  for (const auto& [id, p] : net.places()) places.push_back({{"id", id}, {"otype", p.otype.name()}});
  json transitions = json::array();
  for (const auto& [id, t] : net.transitions()) {
    json j = {{"id", id}, {"label", t.label ? json(*t.label) : json(nullptr)}, {"origins", t.origins}};
    json refs = json::array();
    for (const auto& r : t.refs) refs.push_back(r.name());
    j["refs"] = std::move(refs);
    j["members"] = t.members;
    transitions.push_back(std::move(j));
  }
  json arcs = json::array();
  for (const auto& a : net.arcs()) arcs.push_back({{"source", a.source}, {"target", a.target}, {"variable", a.variable}});
  json doc = {{"places", std::move(places)},
              {"transitions", std::move(transitions)},
              {"arcs", std::move(arcs)},
              {"initial_marking", marking_json(net.initial_marking())},
              {"final_marking", marking_json(net.final_marking())}};
  return doc.dump(2) + "\n";
}

AcceptingOCPN net_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("net document: ") + e.what(), e.byte);
  }
  try {
    AcceptingOCPN net;
    for (const auto& p : doc.at("places")) {
      net.add_place(Place{p.at("id").get<std::string>(), ObjectType::parse(p.at("otype").get<std::string>())});
    }
    for (const auto& t : doc.at("transitions")) {
      Transition tr;
      tr.id = t.at("id").get<std::string>();
      if (!t.at("label").is_null()) tr.label = t.at("label").get<std::string>();
      tr.origins = t.at("origins").get<std::vector<std::string>>();
      tr.members = t.value("members", std::vector<std::string>{});
      for (const auto& r : t.value("refs", json::array())) tr.refs.insert(ObjectType::parse(r.get<std::string>()));
      net.add_transition(std::move(tr));
    }
    for (const auto& a : doc.at("arcs")) {
      net.add_arc(a.at("source").get<std::string>(), a.at("target").get<std::string>(), a.value("variable", false));
    }
    for (const auto& [p, n] : doc.at("initial_marking").items()) net.initial_marking()[p] = n.get<int>();
    for (const auto& [p, n] : doc.at("final_marking").items()) net.final_marking()[p] = n.get<int>();
    return net;
  } catch (const json::exception& e) {
    throw ParseError(std::string("net document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("net document: ") + e.what());
  }
}

}  // namespace inexa::net
