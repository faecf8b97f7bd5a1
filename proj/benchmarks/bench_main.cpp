#include <benchmark/benchmark.h>

#include <cstdio>
#include <random>
#include <sstream>

#include "inexa/abstraction.hpp"
#include "inexa/discovery.hpp"
#include "inexa/ocel_json.hpp"
#include "inexa/replay.hpp"
#include "inexa/session.hpp"

using namespace inexa;

namespace {

// Order handling with a variable number of items per order.
std::string synthetic_log(int orders, unsigned seed) {
  std::mt19937 rng(seed);
  std::ostringstream events, objects;
  int next_event = 0;
  long clock = 0;
  bool first = true;
  auto emit = [&](const std::string& activity, const std::string& order, const std::vector<std::string>& items) {
    char ts[32];
    long t = clock++;
    std::snprintf(ts, sizeof ts, "2024-01-%02ldT%02ld:%02ld:%02ld", 1 + t / 86400 % 28, t / 3600 % 24, t / 60 % 60,
                  t % 60);
    events << (first ? "" : ",") << "{\"id\":\"ev" << next_event++ << "\",\"activity\":\"" << activity
           << "\",\"timestamp\":\"" << ts << "\",\"relations\":{";
    first = false;
    bool sep = false;
    if (!order.empty()) {
      events << "\"workflow:order\":[\"" << order << "\"]";
      sep = true;
    }
    if (!items.empty()) {
      events << (sep ? "," : "") << "\"workflow:item\":[";
      for (std::size_t i = 0; i < items.size(); ++i) events << (i ? "," : "") << '"' << items[i] << '"';
      events << ']';
    }
    events << "}}";
  };
  for (int o = 0; o < orders; ++o) {
    std::string order = "o" + std::to_string(o);
    std::vector<std::string> items;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) items.push_back(order + "i" + std::to_string(i));
    emit("place order", order, items);
    emit("check credit", order, {});
    for (const auto& item : items) {
      emit("pick item", "", {item});
      if (rng() % 3 == 0) emit("wrap gift", "", {item});
      emit("label item", "", {item});
    }
    emit("ship order", order, items);
    emit(rng() % 2 ? "send invoice" : "send reminder", order, {});
    emit("close order", order, {});
  }
  return "{\"events\":[" + events.str() + "]}";
}

ocel::EventLog cached_log(int orders) {
  static std::map<int, ocel::EventLog> cache;
  auto it = cache.find(orders);
  if (it == cache.end()) it = cache.emplace(orders, ocel::parse_log(synthetic_log(orders, 5))).first;
  return it->second;
}

void BM_Parse(benchmark::State& state) {
  auto text = synthetic_log(static_cast<int>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(ocel::parse_log(text));
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Parse)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Discover(benchmark::State& state) {
  auto log = cached_log(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(discovery::discover_models(log));
  state.counters["events"] = static_cast<double>(log.events().size());
}
BENCHMARK(BM_Discover)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Replay(benchmark::State& state) {
  auto log = cached_log(static_cast<int>(state.range(0)));
  auto net = discovery::discover(log);
  for (auto _ : state) benchmark::DoNotOptimize(net::replay(log, net));
}
BENCHMARK(BM_Replay)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SessionInitialize(benchmark::State& state) {
  auto log = cached_log(static_cast<int>(state.range(0)));
  session::SessionOptions options;
  options.threshold = 10;
  for (auto _ : state) {
    session::Session s(log, options);
    benchmark::DoNotOptimize(s.history().size());
  }
}
BENCHMARK(BM_SessionInitialize)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Overlay(benchmark::State& state) {
  session::SessionOptions options;
  options.threshold = 10;
  session::Session s(cached_log(static_cast<int>(state.range(0))), options);
  auto log = s.log();
  auto original = s.original();
  auto replayed = net::replay(log, original);
  state.counters["steps"] = static_cast<double>(s.history().size());
  for (auto _ : state) benchmark::DoNotOptimize(abstraction::overlay(log, original, abstraction::Repository::standard(), &replayed));
}
BENCHMARK(BM_Overlay)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
