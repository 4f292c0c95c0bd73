#include "tempohorn/chc.hpp"

#include "testutil.hpp"

#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <vector>

using namespace tempohorn::chc;

namespace {

LinearTerm V(const std::string & v) { return LinearTerm::var(v); }
LinearTerm N(Int c) { return LinearTerm(c); }

// Brute-force integer-point oracle: all assignments over the box [lo,hi]^vars.
template <typename F>
void forBox(const std::vector<std::string> & vars, Int lo, Int hi, F && f) {
    std::map<std::string, Int> env;
    auto rec = [&](auto && self, std::size_t i) -> void {
        if (i == vars.size()) {
            f(env);
            return;
        }
        for (Int v = lo; v <= hi; ++v) {
            env[vars[i]] = v;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
}

std::set<std::vector<Int>> bruteProjection(const LinearConstraint & c,
                                           const std::vector<std::string> & allVars,
                                           const std::vector<std::string> & keepVars, Int lo,
                                           Int hi) {
    std::set<std::vector<Int>> points;
    forBox(allVars, lo, hi, [&](const std::map<std::string, Int> & env) {
        if (!c.evaluate(env)) return;
        std::vector<Int> q;
        for (auto const & v : keepVars) q.push_back(env.at(v));
        points.insert(std::move(q));
    });
    return points;
}

} // namespace

TEST_CASE("normalize gives one canonical form for mirrored equalities") {
    LinearConstraint a, b;
    a.addEq(V("C"), V("D"));
    b.addEq(V("D"), V("C"));
    CHECK(a.normalized() == b.normalized());
    CHECK(a.normalized().conjuncts().size() == 1);
}

TEST_CASE("normalize collapses duplicate bounds") {
    LinearConstraint c;
    c.addGe(V("D"), N(1));
    c.addLe(N(1), V("D"));
    c.normalize();
    CHECK(c.conjuncts().size() == 1);
    CHECK(c.conjuncts()[0].kind == Conjunct::Kind::Ge0);
    CHECK(c.conjuncts()[0].poly == V("D") - N(1));
}

TEST_CASE("strict inequalities tighten over the integers") {
    LinearConstraint c;
    c.addGt(V("A"), N(0));
    c.normalize();
    REQUIRE(c.conjuncts().size() == 1);
    CHECK(c.conjuncts()[0].poly == V("A") - N(1)); // A-1 >= 0
}

TEST_CASE("normalize detects ground and gcd contradictions") {
    LinearConstraint c;
    c.addGe(N(0), N(1));
    c.normalize();
    CHECK(c.isTriviallyFalse());

    LinearConstraint d; // 2A = 1 has no integer solution
    d.addEq(V("A").scaled(2), N(1));
    d.normalize();
    CHECK(d.isTriviallyFalse());
}

TEST_CASE("normalize is idempotent and permutation-insensitive") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coeff(-3, 3), nconj(1, 4), rel(0, 5);
    std::vector<std::string> vars{"A", "B", "C", "D"};
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<AtomicConstraint> atoms;
        int n = nconj(rng);
        for (int i = 0; i < n; ++i) {
            LinearTerm l, r;
            for (auto const & v : vars) l = l + LinearTerm::var(v, coeff(rng));
            l = l + N(coeff(rng));
            r = N(coeff(rng));
            atoms.push_back({l, static_cast<Rel>(rel(rng)), r});
        }
        LinearConstraint c;
        for (auto const & a : atoms) c.add(a);
        LinearConstraint norm = c.normalized();
        CHECK(norm.normalized() == norm);

        std::shuffle(atoms.begin(), atoms.end(), rng);
        LinearConstraint perm;
        for (auto const & a : atoms) perm.add(a);
        CHECK(perm.normalized() == norm);
    }
}

TEST_CASE("is_satisfiable on interval constraints") {
    LinearConstraint empty;
    CHECK(is_satisfiable(empty) == SatResult::SatExact);

    LinearConstraint box; // 1 <= A <= 6
    box.addGe(V("A"), N(1));
    box.addLe(V("A"), N(6));
    CHECK(is_satisfiable(box.normalized()) == SatResult::SatExact);

    LinearConstraint contra;
    contra.addGe(V("A"), N(1));
    contra.addLe(V("A"), N(0));
    CHECK(is_satisfiable(contra.normalized()) == SatResult::UnsatExact);
}

TEST_CASE("is_satisfiable agrees with brute force on random constraints") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coeff(-2, 2), nconj(1, 3), rel(0, 5), cst(-4, 4);
    std::vector<std::string> vars{"A", "B", "C"};
    for (int iter = 0; iter < 300; ++iter) {
        LinearConstraint c;
        // box-bound every variable so the brute check is complete
        for (auto const & v : vars) {
            c.addGe(V(v), N(-5));
            c.addLe(V(v), N(5));
        }
        int n = nconj(rng);
        for (int i = 0; i < n; ++i) {
            LinearTerm l;
            for (auto const & v : vars) l = l + LinearTerm::var(v, coeff(rng));
            c.add({l, static_cast<Rel>(rel(rng)), N(cst(rng))});
        }
        c.normalize();
        bool bruteSat = false;
        forBox(vars, -5, 5, [&](const std::map<std::string, Int> & env) {
            if (c.evaluate(env)) bruteSat = true;
        });
        SatResult got = is_satisfiable(c);
        // exact answers must never contradict the ground truth
        if (bruteSat) CHECK(got != SatResult::UnsatExact);
        if (!bruteSat) CHECK(got != SatResult::SatExact);
    }
}

TEST_CASE("is_satisfiable is exact on unit-coefficient constraints") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> unit(-1, 1), nconj(1, 4), rel(0, 5), cst(-4, 4);
    std::vector<std::string> vars{"A", "B", "C"};
    for (int iter = 0; iter < 300; ++iter) {
        LinearConstraint c;
        for (auto const & v : vars) {
            c.addGe(V(v), N(-5));
            c.addLe(V(v), N(5));
        }
        int n = nconj(rng);
        for (int i = 0; i < n; ++i) {
            LinearTerm l;
            for (auto const & v : vars) l = l + LinearTerm::var(v, unit(rng));
            c.add({l, static_cast<Rel>(rel(rng)), N(cst(rng))});
        }
        c.normalize();
        bool bruteSat = false;
        forBox(vars, -5, 5, [&](const std::map<std::string, Int> & env) {
            if (c.evaluate(env)) bruteSat = true;
        });
        SatResult got = is_satisfiable(c);
        CHECK(got == (bruteSat ? SatResult::SatExact : SatResult::UnsatExact));
    }
}

TEST_CASE("project substitutes equality-defined locals") {
    LinearConstraint c; // E=0, F=A+B, A>0
    c.addEq(V("E"), N(0));
    c.addEq(V("F"), V("A") + V("B"));
    c.addGt(V("A"), N(0));
    auto p = project(c.normalized(), {"A", "B"});
    CHECK_FALSE(p.approximate());
    LinearConstraint expect;
    expect.addGt(V("A"), N(0));
    CHECK(p == expect.normalized());
}

TEST_CASE("project drops a bounded local entirely") {
    LinearConstraint c;
    c.addGe(V("D"), N(1));
    c.addLe(V("D"), N(6));
    auto p = project(c.normalized(), {});
    CHECK(p.isTop());
    CHECK_FALSE(p.approximate());
}

TEST_CASE("project follows substitution chains") {
    LinearConstraint c; // E=0, A=E
    c.addEq(V("E"), N(0));
    c.addEq(V("A"), V("E"));
    auto p = project(c.normalized(), {"A"});
    LinearConstraint expect;
    expect.addEq(V("A"), N(0));
    CHECK(p == expect.normalized());
}

TEST_CASE("project never strengthens and is exact on the unit fragment") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> coeff(-3, 3), pick(0, 2), nconj(1, 3), rel(0, 5);
    std::vector<std::string> all{"A", "B", "C", "D"};
    for (int iter = 0; iter < 150; ++iter) {
        std::vector<std::string> keep{"A", "B"};
        std::vector<std::string> elim{"C", "D"};
        LinearConstraint c;
        for (auto const & v : elim) { // bound eliminated vars inside the box
            c.addGe(V(v), N(-5));
            c.addLe(V(v), N(5));
        }
        int n = nconj(rng);
        for (int i = 0; i < n; ++i) {
            LinearTerm l;
            for (auto const & v : all) l = l + LinearTerm::var(v, coeff(rng));
            c.add({l, static_cast<Rel>(rel(rng)), N(coeff(rng))});
        }
        c.normalize();
        if (!c.disequalities().empty()) continue;
        LinearConstraint p = project(c, {"A", "B"});

        auto truth = bruteProjection(c, all, keep, -5, 5);
        forBox(keep, -5, 5, [&](const std::map<std::string, Int> & env) {
            std::vector<Int> q{env.at("A"), env.at("B")};
            bool inTruth = truth.count(q) > 0;
            bool inProj = p.evaluate(env);
            if (inTruth) CHECK(inProj); // projection never strengthens
            if (!p.approximate() && !inTruth)
                CHECK_FALSE(inProj); // exact when unflagged
        });
    }
}

TEST_CASE("implies is a certain-only check") {
    LinearConstraint a, b;
    a.addGe(V("A"), N(2));
    b.addGe(V("A"), N(0));
    CHECK(implies(a.normalized(), b.normalized()));
    CHECK_FALSE(implies(b.normalized(), a.normalized()));
    CHECK(equivalent(a.normalized(), a.normalized()));
}

TEST_CASE("normalize_clause purifies heads") {
    HornClause cl; // p(X,X) :- X>0
    cl.head = Atom{"p", {std::string("X"), std::string("X")}};
    cl.constraint.addGt(V("X"), N(0));
    HornClause norm = normalize_clause(cl);
    REQUIRE(norm.head.has_value());
    REQUIRE(norm.head->args.size() == 2);
    CHECK(argVar(norm.head->args[0]) != argVar(norm.head->args[1]));
    // X1 = X2 and X1 >= 1 must both be present
    CHECK(norm.constraint.conjuncts().size() == 2);
}

TEST_CASE("normalize_clause lifts head constants") {
    HornClause cl; // p(3).
    cl.head = Atom{"p", {Int(3)}};
    HornClause norm = normalize_clause(cl);
    REQUIRE(norm.head.has_value());
    CHECK(argIsVar(norm.head->args[0]));
    REQUIRE(norm.constraint.conjuncts().size() == 1);
    CHECK(norm.constraint.conjuncts()[0].kind == Conjunct::Kind::Eq0);
}

TEST_CASE("normalize_clause keeps already-pure clauses stable") {
    auto cs = parseClauses("new10(A,B,C) :- A=0, B=C.");
    REQUIRE(cs.clauses.size() == 1);
    CHECK(canonicalKey(cs.clauses[0]) == canonicalKey(normalize_clause(cs.clauses[0])));
}

TEST_CASE("normalize_clause preserves clause meaning on random instances") {
    std::mt19937_64 rng(31);
    // unit coefficients keep equality-defined locals within the enumeration box
    std::uniform_int_distribution<int> coeff(-1, 1), nconj(1, 3), rel(0, 4), relsize(1, 4);
    std::vector<std::string> headVars{"H1", "H2"};
    std::vector<std::string> locals{"L1", "L2"};
    for (int iter = 0; iter < 60; ++iter) {
        HornClause cl;
        cl.head = Atom{"p", {std::string("H1"), std::string("H2")}};
        cl.body.push_back(Atom{"q", {std::string("L1"), std::string("H1")}});
        int n = nconj(rng);
        std::vector<std::string> all{"H1", "H2", "L1", "L2"};
        for (int i = 0; i < n; ++i) {
            LinearTerm l;
            for (auto const & v : all) l = l + LinearTerm::var(v, coeff(rng));
            cl.constraint.add({l, static_cast<Rel>(rel(rng)), N(coeff(rng))});
        }
        HornClause norm = normalize_clause(cl);

        // random relation for q over [-2,2]^2
        std::set<std::vector<Int>> qRel;
        int sz = relsize(rng);
        std::uniform_int_distribution<Int> val(-2, 2);
        for (int i = 0; i < sz; ++i) qRel.insert({val(rng), val(rng)});

        auto holds = [&](const HornClause & clause, Int h1, Int h2) {
            // existential truth of the body under head assignment (h1,h2)
            std::set<std::string> varset = clause.constraint.variables();
            for (auto const & a : clause.body)
                for (auto const & arg : a.args)
                    if (argIsVar(arg)) varset.insert(argVar(arg));
            std::vector<std::string> headNames;
            for (auto const & arg : clause.head->args) {
                varset.insert(argVar(arg));
                headNames.push_back(argVar(arg));
            }
            std::vector<std::string> rest;
            for (auto const & v : varset)
                if (v != headNames[0] && v != headNames[1]) rest.push_back(v);
            bool found = false;
            forBox(rest, -16, 16, [&](std::map<std::string, Int> env) {
                if (found) return;
                env[headNames[0]] = h1;
                env[headNames[1]] = h2;
                if (!clause.constraint.evaluate(env)) return;
                for (auto const & a : clause.body) {
                    std::vector<Int> tup;
                    for (auto const & arg : a.args)
                        tup.push_back(argIsVar(arg) ? env.at(argVar(arg)) : argInt(arg));
                    if (!qRel.count(tup)) return;
                }
                found = true;
            });
            return found;
        };

        for (Int h1 = -2; h1 <= 2; ++h1)
            for (Int h2 = -2; h2 <= 2; ++h2) CHECK(holds(cl, h1, h2) == holds(norm, h1, h2));
    }
}

TEST_CASE("clause text round-trips through print and parse") {
    auto cs = parseClauses(testutil::fixture("po_reach_clauses.pl"));
    CHECK(cs.clauses.size() == 51);
    std::string printed = printClauseSet(cs);
    auto reparsed = parseClauses(printed);
    REQUIRE(reparsed.clauses.size() == cs.clauses.size());
    for (std::size_t i = 0; i < cs.clauses.size(); ++i)
        CHECK(canonicalKey(cs.clauses[i]) == canonicalKey(reparsed.clauses[i]));
}

TEST_CASE("clause parser rejects structured arguments and bad arity") {
    CHECK_THROWS_AS(parseClauses("p(f(X)) :- X=0."), ClauseParseError);
    CHECK_THROWS_AS(parseClauses("p(A) :- q(A). p(A,B) :- A=B."), std::logic_error);
}

TEST_CASE("disequalities split into convex cases") {
    LinearConstraint c;
    c.add({V("A"), Rel::Neq, N(0)});
    c.normalize();
    auto cases = splitDisequalities(c);
    REQUIRE(cases.size() == 2);
    std::map<std::string, Int> pos{{"A", 1}}, neg{{"A", -1}}, zero{{"A", 0}};
    CHECK((cases[0].evaluate(pos) || cases[1].evaluate(pos)));
    CHECK((cases[0].evaluate(neg) || cases[1].evaluate(neg)));
    CHECK_FALSE(cases[0].evaluate(zero));
    CHECK_FALSE(cases[1].evaluate(zero));
}
