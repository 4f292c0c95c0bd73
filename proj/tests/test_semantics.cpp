#include "tempohorn/semantics.hpp"

#include "tempohorn/property.hpp"
#include "tempohorn/wellformed.hpp"

#include "testutil.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace tempohorn;
using namespace tempohorn::semantics;
using tempohorn::model::BusinessProcessSpec;

namespace {

PropertySpec deadlineProperty(long long slack) {
    // Ts=0, Tp>Ts, Te>Tp+slack over the payment and completion waypoints
    PropertySpec p;
    p.waypoints = {{Fluent::completes("p")}, {Fluent::completes("end")}};
    p.timeVars = {"Ts", "Tp", "Te"};
    p.violation.addEq(chc::LinearTerm::var("Ts"), chc::LinearTerm(0));
    p.violation.addGt(chc::LinearTerm::var("Tp"), chc::LinearTerm::var("Ts"));
    p.violation.addGt(chc::LinearTerm::var("Te"),
                      chc::LinearTerm::var("Tp") + chc::LinearTerm(slack));
    p.violation.normalize();
    return p;
}

// Replays a trace against step(), checking every transition is legal.
void checkTraceReplays(const BusinessProcessSpec & spec, const std::vector<TraceStep> & trace) {
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        if (trace[i + 1].label.rfind("waypoint", 0) == 0) {
            CHECK(trace[i + 1].fluents == trace[i].fluents);
            CHECK(trace[i + 1].time == trace[i].time);
            continue;
        }
        TimedState cur{trace[i].fluents, trace[i].time};
        auto succ = step(spec, cur);
        bool found = false;
        for (auto const & tr : succ)
            if (tr.next.fluents == trace[i + 1].fluents && tr.next.time == trace[i + 1].time)
                found = true;
        CHECK(found);
    }
}

} // namespace

TEST_CASE("initial state is begins(start) at time zero") {
    auto spec = testutil::loadPO();
    auto s = initial_state(spec);
    CHECK(s.fluents == FluentSet{Fluent::begins("start")});
    CHECK(s.time == 0);

    auto minimal = BusinessProcessSpec::parse("start(s). end(e). seq(s,e).");
    CHECK(initial_state(minimal).fluents == FluentSet{Fluent::begins("s")});
}

TEST_CASE("S1 on a zero-duration event yields a single successor") {
    auto spec = testutil::loadPO();
    auto succ = step(spec, {{Fluent::begins("start")}, 0});
    REQUIRE(succ.size() == 1);
    CHECK(succ[0].rule == Rule::S1);
    CHECK(succ[0].next.fluents == FluentSet{Fluent::enacting("start", 0)});
    CHECK(succ[0].next.time == 0);
}

TEST_CASE("S1 enumerates every admissible task duration") {
    auto spec = testutil::loadPO();
    auto succ = step(spec, {{Fluent::begins("a")}, 3});
    REQUIRE(succ.size() == 6); // durations 1..6
    for (auto const & tr : succ) CHECK(tr.rule == Rule::S1);
}

TEST_CASE("S2 enables all successors of a parallel branch") {
    auto spec = testutil::loadPO();
    auto succ = step(spec, {{Fluent::completes("g3")}, 5});
    REQUIRE(succ.size() == 1);
    CHECK(succ[0].rule == Rule::S2);
    CHECK(succ[0].next.fluents
          == FluentSet{Fluent::enables("g3", "i"), Fluent::enables("g3", "o")});
}

TEST_CASE("S7 advances time by the least positive residual") {
    auto spec = testutil::loadPO();
    auto succ = step(spec, {{Fluent::enacting("i", 1), Fluent::enacting("o", 3)}, 2});
    REQUIRE(succ.size() == 1);
    CHECK(succ[0].rule == Rule::S7);
    CHECK(succ[0].next.fluents == FluentSet{Fluent::enacting("i", 0), Fluent::enacting("o", 2)});
    CHECK(succ[0].next.time == 3);
}

TEST_CASE("S4 waits for all predecessors of a parallel merge") {
    auto spec = testutil::loadPO();
    auto blocked = step(spec, {{Fluent::enables("s", "g6"), Fluent::enacting("sd", 2)}, 9});
    REQUIRE(blocked.size() == 1);
    CHECK(blocked[0].rule == Rule::S7); // only time can advance

    auto ready =
        step(spec, {{Fluent::enables("s", "g6"), Fluent::enables("g5", "g6")}, 9});
    REQUIRE(ready.size() == 1);
    CHECK(ready[0].rule == Rule::S4);
    CHECK(ready[0].next.fluents == FluentSet{Fluent::begins("g6")});
}

TEST_CASE("match_waypoint is exact set equality") {
    CHECK(match_waypoint({{Fluent::completes("p")}, 2}, {Fluent::completes("p")}));
    CHECK_FALSE(match_waypoint({{Fluent::completes("p"), Fluent::enacting("a", 1)}, 2},
                               {Fluent::completes("p")}));
    CHECK(match_waypoint({{}, 0}, {}));
}

TEST_CASE("step rejects malformed fluents") {
    auto spec = testutil::loadPO();
    CHECK_THROWS_AS(step(spec, {{Fluent::enacting("g3", 2)}, 0}), std::logic_error);
    CHECK_THROWS_AS(step(spec, {{Fluent::enables("g3", "end")}, 0}), std::logic_error);
    CHECK_THROWS_AS(step(spec, {{Fluent::begins("nosuch")}, 0}), std::logic_error);
}

TEST_CASE("the 9-unit deadline holds exhaustively; 8 units is violated at exactly 9") {
    auto spec = testutil::loadPO();

    auto ok = explore(spec, deadlineProperty(9));
    CHECK(ok.outcome == OracleVerdict::Outcome::NoViolation);
    CHECK(ok.exhaustive);

    auto bad = explore(spec, deadlineProperty(8));
    REQUIRE(bad.outcome == OracleVerdict::Outcome::Violated);
    REQUIRE(bad.waypointTimes.size() == 2);
    CHECK(bad.waypointTimes[1] - bad.waypointTimes[0] == 9);
    checkTraceReplays(spec, bad.trace);
}

TEST_CASE("a minimal-duration standard-delivery run completes at 7 with payment at 2") {
    auto spec = testutil::loadPO();
    PropertySpec pin;
    pin.waypoints = {{Fluent::completes("p")}, {Fluent::completes("end")}};
    pin.timeVars = {"T0", "T1", "T2"};
    pin.violation.addEq(chc::LinearTerm::var("T1"), chc::LinearTerm(2));
    pin.violation.addEq(chc::LinearTerm::var("T2"), chc::LinearTerm(7));
    pin.violation.normalize();
    auto found = explore(spec, pin);
    REQUIRE(found.outcome == OracleVerdict::Outcome::Violated);
    CHECK(found.waypointTimes == std::vector<long long>{2, 7});
    checkTraceReplays(spec, found.trace);
}

TEST_CASE("instantaneous rules preserve time; S7 strictly increases it") {
    auto spec = testutil::loadPO();
    std::mt19937_64 rng(5);
    TimedState s = initial_state(spec);
    for (int i = 0; i < 300; ++i) {
        auto succ = step(spec, s);
        if (succ.empty()) {
            s = initial_state(spec);
            continue;
        }
        bool anyS7 = false, anyOther = false;
        for (auto const & tr : succ) {
            if (tr.rule == Rule::S7) {
                anyS7 = true;
                CHECK(tr.next.time > s.time);
                bool anyZero = false;
                for (auto const & f : tr.next.fluents)
                    if (f.kind == FluentKind::Enacting && f.residual == 0) anyZero = true;
                CHECK(anyZero);
            } else {
                anyOther = true;
                CHECK(tr.next.time == s.time);
            }
            for (auto const & f : tr.next.fluents)
                if (f.kind == FluentKind::Enacting) CHECK(f.residual >= 0);
        }
        CHECK_FALSE((anyS7 && anyOther)); // S7 is mutually exclusive with S1-S6
        s = succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng)].next;
    }
}

TEST_CASE("a single task of fixed duration completes exactly at that time") {
    for (long long d = 1; d <= 5; ++d) {
        auto spec = BusinessProcessSpec::parse(
            "start(s). end(e). task(t). seq(s,t). seq(t,e). duration(t,D) :- D>=" +
            std::to_string(d) + ", D=<" + std::to_string(d) + ".");
        PropertySpec prop;
        prop.waypoints = {{Fluent::completes("e")}};
        prop.timeVars = {"T0", "T1"};
        prop.violation.addEq(chc::LinearTerm::var("T1"), chc::LinearTerm(d));
        prop.violation.normalize();
        auto hit = explore(spec, prop);
        CHECK(hit.outcome == OracleVerdict::Outcome::Violated); // the run exists

        PropertySpec off;
        off.waypoints = prop.waypoints;
        off.timeVars = prop.timeVars;
        off.violation.add({chc::LinearTerm::var("T1"), chc::Rel::Neq, chc::LinearTerm(d)});
        off.violation.normalize();
        auto miss = explore(spec, off);
        CHECK(miss.outcome == OracleVerdict::Outcome::NoViolation);
        CHECK(miss.exhaustive);
    }
    // the two-object model completes at time 0
    auto tiny = BusinessProcessSpec::parse("start(s). end(e). seq(s,e).");
    PropertySpec zero;
    zero.waypoints = {{Fluent::completes("e")}};
    zero.timeVars = {"T0", "T1"};
    zero.violation.addEq(chc::LinearTerm::var("T1"), chc::LinearTerm(0));
    auto hit = explore(tiny, zero);
    CHECK(hit.outcome == OracleVerdict::Outcome::Violated);
}

TEST_CASE("reachable completion times are independent of expansion order") {
    // loop-free purchase order variant: drop the add-item loop edge
    std::string po = testutil::fixture("po.pl");
    auto pos = po.find("seq(g2,g1).");
    REQUIRE(pos != std::string::npos);
    po.erase(pos, 11);
    auto spec = BusinessProcessSpec::parse(po);
    REQUIRE(tempohorn::wellformed::check_well_formed(spec).empty());

    auto collect = [&](bool reversed) {
        std::set<long long> times;
        std::vector<TimedState> stack{initial_state(spec)};
        std::set<std::string> seen;
        FluentSet done{Fluent::completes("end")};
        while (!stack.empty()) {
            TimedState s = stack.back();
            stack.pop_back();
            std::string key = printFluentSet(s.fluents) + "@" + std::to_string(s.time);
            if (!seen.insert(key).second) continue;
            if (s.fluents == done) times.insert(s.time);
            auto succ = step(spec, s);
            if (reversed) std::reverse(succ.begin(), succ.end());
            for (auto const & tr : succ) stack.push_back(tr.next);
        }
        return times;
    };
    auto a = collect(false), b = collect(true);
    CHECK(a == b);
    CHECK_FALSE(a.empty());
}

TEST_CASE("bounded exploration reports the bound instead of exhausting") {
    auto spec = testutil::loadPO();
    ExploreBounds tiny;
    tiny.maxStates = 10;
    auto v = explore(spec, deadlineProperty(9), tiny);
    CHECK(v.outcome == OracleVerdict::Outcome::NoViolation);
    CHECK_FALSE(v.exhaustive);
    CHECK(v.boundHit == "max-states");
}

TEST_CASE("simulate returns a replayable seeded run") {
    auto spec = testutil::loadPO();
    auto t1 = simulate(spec, 42);
    auto t2 = simulate(spec, 42);
    REQUIRE(t1.size() == t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].fluents == t2[i].fluents);
        CHECK(t1[i].time == t2[i].time);
    }
    checkTraceReplays(spec, t1);
    std::string text = renderTrace(t1);
    CHECK(text.find("t=0 init {begins(start)}") == 0);
}
