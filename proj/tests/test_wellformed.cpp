#include "tempohorn/wellformed.hpp"

#include "testutil.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>

using namespace tempohorn::wellformed;
using tempohorn::model::BusinessProcessSpec;

namespace {

// The seven targeted single-condition mutations of the purchase order model.
// Each yields exactly one violation, tagged with its condition.
std::map<int, std::string> targetedMutations() {
    std::string po = testutil::fixture("po.pl");
    std::map<int, std::string> m;
    m[1] = po + "start(start2). seq(start2,g1).";
    m[2] = po + "task(z). duration(z,D) :- D>=1, D=<1. seq(z,z).";
    m[3] = po + "seq(g2,start).";
    m[4] = po + "seq(end,g1).";
    m[5] = po + "seq(g2,g4).";
    m[6] = po + "seq(a,g1).";
    // condition 7 needs a gateway-only cycle: retype the add-item task as an
    // exclusive branch, turning the g1 -> a -> g2 -> g1 loop gateway-only
    std::string retyped = po;
    auto cut = [&](const std::string & needle) {
        auto pos = retyped.find(needle);
        REQUIRE(pos != std::string::npos);
        retyped.erase(pos, needle.size());
    };
    cut("task(a).");
    cut("duration(a, D) :- D>=1, D=<6.");
    m[7] = retyped + "exc_branch(a).";
    return m;
}

// Independent oracle for condition 2: boolean matrix transitive closure.
std::pair<std::vector<std::vector<bool>>, std::vector<std::string>>
matrixClosure(const BusinessProcessSpec & spec) {
    std::vector<std::string> ids;
    for (auto const & o : spec.objects()) ids.push_back(o.id);
    std::size_t n = ids.size();
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = true; // reflexive
    for (auto const & [a, b] : spec.flows()) {
        auto ia = std::find(ids.begin(), ids.end(), a) - ids.begin();
        auto ib = std::find(ids.begin(), ids.end(), b) - ids.begin();
        m[static_cast<std::size_t>(ia)][static_cast<std::size_t>(ib)] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (m[i][k] && m[k][j]) m[i][j] = true;
    return {m, ids};
}

} // namespace

TEST_CASE("the purchase order model is well-formed") {
    auto spec = testutil::loadPO();
    CHECK(check_well_formed(spec).empty());
}

TEST_CASE("adding flow g1->g2 creates the gateway-only cycle g1,g2,g1") {
    auto spec = BusinessProcessSpec::parse(testutil::fixture("po.pl") + "seq(g1,g2).");
    auto vs = check_well_formed(spec);
    auto it = std::find_if(vs.begin(), vs.end(), [](const Violation & v) {
        return v.condition == Condition::GatewayOnlyCycle;
    });
    REQUIRE(it != vs.end());
    CHECK(it->witness == std::vector<std::string>{"g1", "g2", "g1"});

    auto cycle = gateway_only_cycle(spec);
    REQUIRE(cycle.has_value());
    CHECK(*cycle == std::vector<std::string>{"g1", "g2", "g1"});
}

TEST_CASE("a second end event violates condition 1") {
    auto spec =
        BusinessProcessSpec::parse(testutil::fixture("po.pl") + "end(end2). seq(g6,end2).");
    auto vs = check_well_formed(spec);
    auto it = std::find_if(vs.begin(), vs.end(), [](const Violation & v) {
        return v.condition == Condition::UniqueStartEnd;
    });
    REQUIRE(it != vs.end());
    CHECK(it->witness == std::vector<std::string>{"end", "end2"});
}

TEST_CASE("gateway_only_cycle is absent on the purchase order and chains") {
    CHECK_FALSE(gateway_only_cycle(testutil::loadPO()).has_value());
    auto chain = BusinessProcessSpec::parse(
        "start(s). end(e). task(t). duration(t,D) :- D>=1, D=<2. seq(s,t). seq(t,e).");
    CHECK_FALSE(gateway_only_cycle(chain).has_value());
    CHECK(check_well_formed(chain).empty());
}

TEST_CASE("each targeted mutation yields exactly its one intended violation") {
    for (auto const & [condition, text] : targetedMutations()) {
        CAPTURE(condition);
        auto spec = BusinessProcessSpec::parse(text);
        auto vs = check_well_formed(spec);
        REQUIRE(vs.size() == 1);
        CHECK(static_cast<int>(vs[0].condition) == condition);
    }
}

TEST_CASE("condition 2 agrees with an independent matrix closure") {
    auto mutations = targetedMutations();
    std::vector<std::string> sources{testutil::fixture("po.pl"), mutations[2], mutations[4]};
    for (auto const & text : sources) {
        auto spec = BusinessProcessSpec::parse(text);
        auto [m, ids] = matrixClosure(spec);
        auto starts = spec.startIds();
        auto ends = spec.endIds();
        auto vs = check_well_formed(spec);

        for (std::size_t i = 0; i < ids.size(); ++i) {
            bool onPath = false;
            for (auto const & s : starts)
                for (auto const & e : ends) {
                    auto is = static_cast<std::size_t>(
                        std::find(ids.begin(), ids.end(), s) - ids.begin());
                    auto ie = static_cast<std::size_t>(
                        std::find(ids.begin(), ids.end(), e) - ids.begin());
                    if (m[is][i] && m[i][ie]) onPath = true;
                }
            bool reported = std::any_of(vs.begin(), vs.end(), [&](const Violation & v) {
                return v.condition == Condition::OnStartEndPath && v.witness[0] == ids[i];
            });
            CHECK(reported == !onPath);
        }
    }
}

TEST_CASE("reports are deterministic") {
    auto spec = BusinessProcessSpec::parse(testutil::fixture("po.pl") + "seq(g1,g2).");
    auto a = check_well_formed(spec);
    auto b = check_well_formed(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].condition == b[i].condition);
        CHECK(a[i].witness == b[i].witness);
        CHECK(a[i].message == b[i].message);
    }
    CHECK(renderText(a) == renderText(b));
    CHECK(renderJson(a).find("\"condition\"") != std::string::npos);
}
