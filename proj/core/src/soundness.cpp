#include "inexa/soundness.hpp"

#include <deque>
#include <limits>
#include <map>
#include <unordered_map>

#include "inexa/errors.hpp"

namespace inexa::net {
namespace {

struct TokensHash {
  std::size_t operator()(const std::vector<std::uint16_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

constexpr std::uint16_t kTokenLimit = std::numeric_limits<std::uint16_t>::max() - 1;

}  // namespace

StateSpace explore(const AcceptingOCPN& net, std::size_t max_states) {
  StateSpace ss;
  std::unordered_map<std::string, std::size_t> pindex;
  for (const auto& [id, p] : net.places()) {
    pindex[id] = ss.places.size();
    ss.places.push_back(id);
  }
  std::vector<std::vector<std::size_t>> consume, produce;
  for (const auto& [id, t] : net.transitions()) {
    ss.transitions.push_back(id);
    auto& c = consume.emplace_back();
    auto& p = produce.emplace_back();
    for (const auto& q : net.preset(id)) c.push_back(pindex.at(q));
    for (const auto& q : net.postset(id)) p.push_back(pindex.at(q));
  }

  std::vector<std::uint16_t> initial(ss.places.size(), 0);
  for (const auto& [pid, n] : net.initial_marking()) initial[pindex.at(pid)] = static_cast<std::uint16_t>(n);

  std::unordered_map<std::vector<std::uint16_t>, std::size_t, TokensHash> seen;
  seen.emplace(initial, 0);
  ss.markings.push_back(initial);
  ss.edges.emplace_back();
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (std::size_t t = 0; t < ss.transitions.size(); ++t) {
      const auto& m = ss.markings[s];
      bool enabled = true;
      for (auto p : consume[t]) enabled = enabled && m[p] > 0;
      if (!enabled) continue;
      auto next = m;
      for (auto p : consume[t]) --next[p];
      for (auto p : produce[t]) {
        if (next[p] >= kTokenLimit) {
          ss.overflow = true;
          ss.complete = false;
          return ss;
        }
        ++next[p];
      }
      auto [it, inserted] = seen.emplace(next, ss.markings.size());
      if (inserted) {
        if (ss.markings.size() >= max_states) {
          ss.complete = false;
          return ss;
        }
        ss.markings.push_back(std::move(next));
        ss.edges.emplace_back();
        queue.push_back(it->second);
      }
      ss.edges[s].emplace_back(t, it->second);
    }
  }
  return ss;
}

SoundnessReport analyze_soundness(const AcceptingOCPN& net, std::size_t max_states) {
  auto ss = explore(net, max_states);
  SoundnessReport report;
  report.states = ss.markings.size();
  if (ss.overflow) {
    report.reason = "net is unbounded";
    return report;
  }
  if (!ss.complete) {
    throw StateSpaceExceeded("state space exceeds " + std::to_string(max_states) + " markings");
  }

  std::vector<std::uint16_t> final_tokens(ss.places.size(), 0);
  for (std::size_t i = 0; i < ss.places.size(); ++i) {
    auto it = net.final_marking().find(ss.places[i]);
    if (it != net.final_marking().end()) final_tokens[i] = static_cast<std::uint16_t>(it->second);
  }

  std::optional<std::size_t> final_state;
  for (std::size_t s = 0; s < ss.markings.size(); ++s) {
    const auto& m = ss.markings[s];
    if (m == final_tokens) {
      final_state = s;
      continue;
    }
    bool covers = true;
    for (std::size_t p = 0; p < m.size(); ++p) covers = covers && m[p] >= final_tokens[p];
    if (covers) {
      report.reason = "improper completion: a marking strictly covers the final marking";
      return report;
    }
  }
  if (!final_state) {
    report.reason = "final marking is unreachable";
    return report;
  }

  std::vector<std::vector<std::size_t>> reverse(ss.markings.size());
  std::vector<bool> fired(ss.transitions.size(), false);
  for (std::size_t s = 0; s < ss.edges.size(); ++s) {
    for (auto [t, d] : ss.edges[s]) {
      reverse[d].push_back(s);
      fired[t] = true;
    }
  }
  std::vector<bool> reaches(ss.markings.size(), false);
  std::deque<std::size_t> queue{*final_state};
  reaches[*final_state] = true;
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (auto p : reverse[s]) {
      if (!reaches[p]) {
        reaches[p] = true;
        queue.push_back(p);
      }
    }
  }
  for (std::size_t s = 0; s < reaches.size(); ++s) {
    if (!reaches[s]) {
      report.reason = "no option to complete from a reachable marking";
      return report;
    }
  }
  for (std::size_t t = 0; t < fired.size(); ++t) {
    if (!fired[t]) {
      report.reason = "dead transition " + ss.transitions[t];
      return report;
    }
  }
  report.sound = true;
  return report;
}

bool check_soundness(const AcceptingOCPN& net, std::size_t max_states) {
  return analyze_soundness(net, max_states).sound;
}

}  // namespace inexa::net
