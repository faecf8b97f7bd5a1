#include <gtest/gtest.h>

#include "checks.hpp"
#include "inexa/errors.hpp"
#include "inexa/soundness.hpp"
#include "nets.hpp"

using namespace inexa;
using testkit::NetBuilder;

TEST(Soundness, SequenceIsSound) {
  auto r = net::analyze_soundness(testkit::sequence_abc());
  EXPECT_TRUE(r.sound) << r.reason;
  EXPECT_EQ(r.states, 4u);
}

TEST(Soundness, DeadTransition) {
  auto n = NetBuilder()
               .place("i", "workflow:c", 1, 0)
               .place("o", "workflow:c", 0, 1)
               .place("never", "workflow:c")
               .transition("t0", "a")
               .transition("t1", "b")
               .chain({"i", "t0", "o"})
               .chain({"never", "t1", "o"})
               .build();
  auto r = net::analyze_soundness(n);
  EXPECT_FALSE(r.sound);
  EXPECT_NE(r.reason.find("t1"), std::string::npos);
}

TEST(Soundness, ImproperCompletion) {
  // AND split without join leaves a token behind
  auto n = NetBuilder()
               .place("i", "workflow:c", 1, 0)
               .place("o", "workflow:c", 0, 1)
               .place("x", "workflow:c")
               .transition("t0", "a")
               .chain({"i", "t0", "o"})
               .arc("t0", "x")
               .build();
  EXPECT_FALSE(net::check_soundness(n));
}

TEST(Soundness, NoOptionToComplete) {
  auto n = NetBuilder()
               .place("i", "workflow:c", 1, 0)
               .place("o", "workflow:c", 0, 1)
               .place("trap", "workflow:c")
               .transition("t0", "a")
               .transition("t1", "b")
               .chain({"i", "t0", "o"})
               .chain({"i", "t1", "trap"})
               .build();
  auto r = net::analyze_soundness(n);
  EXPECT_FALSE(r.sound);
}

TEST(Soundness, UnboundedNet) {
  auto n = NetBuilder()
               .place("i", "workflow:c", 1, 0)
               .place("o", "workflow:c", 0, 1)
               .place("heap", "workflow:c")
               .transition("t0", "grow")
               .transition("t1", "done")
               .chain({"i", "t0", "i"})
               .arc("t0", "heap")
               .chain({"i", "t1", "o"})
               .build();
  auto r = net::analyze_soundness(n, 1000000);
  EXPECT_FALSE(r.sound);
}

TEST(Soundness, BoundIsReported) {
  std::string text = "and(a, b, c, d, e, f, g, h)";
  auto n = NetBuilder().place("i", "workflow:c", 1, 0).place("o", "workflow:c", 0, 1).transition("s", "").transition(
      "j", "");
  n.chain({"i", "s"}).chain({"j", "o"});
  for (int k = 0; k < 8; ++k) {
    auto a = "a" + std::to_string(k), b = "b" + std::to_string(k), t = "t" + std::to_string(k);
    n.place(a, "workflow:c").place(b, "workflow:c").transition(t, std::string(1, char('a' + k)));
    n.chain({"s", a, t, b, "j"});
  }
  auto net = n.build();
  EXPECT_TRUE(net::check_soundness(net));
  EXPECT_THROW(net::analyze_soundness(net, 100), StateSpaceExceeded);
}

TEST(Soundness, FixtureProjectionsAreSound) {
  for (const auto* g : {"bank_upper.json", "bank_lower.json"}) {
    auto n = testkit::load_golden(g);
    EXPECT_TRUE(net::check_soundness(n)) << g;
  }
}
