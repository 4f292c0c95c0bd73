#include "tempohorn/backend.hpp"

#include "tempohorn/minimizer.hpp"

#include "testutil.hpp"
#include "testutil_solver.hpp"

#include <doctest.h>

using namespace tempohorn;
using namespace tempohorn::backend;

namespace {

chc::ClauseSet parseNormalized(const std::string & text) {
    auto cs = chc::parseClauses(text);
    chc::normalizeClauseSet(cs);
    return cs;
}

} // namespace

TEST_CASE("emission is deterministic and structurally complete") {
    auto cs = parseNormalized(testutil::fixture("po_reach_clauses.pl"));
    std::string a = emit_smtlib(cs), b = emit_smtlib(cs);
    CHECK(a == b);
    CHECK(a.find("(set-logic HORN)") == 0);
    CHECK(a.find("(check-sat)") != std::string::npos);
    std::size_t decls = 0, asserts = 0;
    for (std::size_t pos = 0; (pos = a.find("(declare-fun", pos)) != std::string::npos; ++pos)
        ++decls;
    for (std::size_t pos = 0; (pos = a.find("(assert", pos)) != std::string::npos; ++pos)
        ++asserts;
    CHECK(decls == 13);
    CHECK(asserts == 51);
}

TEST_CASE("a bounded relation avoids the goal: solver answers sat") {
    auto cs = parseNormalized("p(X) :- X=0.\nfalse :- X>0, p(X).\n");
    auto verdict = run_solver(testutil::solverOrDie(), emit_smtlib(cs));
    CHECK(verdict.outcome == SolverVerdict::Outcome::Satisfiable);
}

TEST_CASE("a populated relation forces the goal: solver answers unsat") {
    auto cs = parseNormalized("p(X) :- X=1.\nfalse :- p(X).\n");
    auto verdict = run_solver(testutil::solverOrDie(), emit_smtlib(cs));
    CHECK(verdict.outcome == SolverVerdict::Outcome::Unsatisfiable);
}

TEST_CASE("both reach clause sets are satisfiable") {
    for (auto const * name : {"po_reach_clauses.pl", "po_reach_clauses_min.pl"}) {
        CAPTURE(name);
        auto cs = parseNormalized(testutil::fixture(name));
        auto verdict = run_solver(testutil::solverOrDie(), emit_smtlib(cs));
        CHECK(verdict.outcome == SolverVerdict::Outcome::Satisfiable);
    }
}

TEST_CASE("solver verdicts survive predicate-equivalence minimization") {
    auto cs = parseNormalized(testutil::fixture("po_reach_clauses.pl"));
    auto partition = minimizer::coarsest_cp_equivalence(cs);
    auto renamed = minimizer::apply_renaming(cs, partition);
    auto before = run_solver(testutil::solverOrDie(), emit_smtlib(cs));
    auto after = run_solver(testutil::solverOrDie(), emit_smtlib(renamed));
    CHECK(before.outcome == SolverVerdict::Outcome::Satisfiable);
    CHECK(after.outcome == before.outcome);
}

TEST_CASE("verdicts do not depend on the representative choice") {
    auto cs = parseNormalized(testutil::fixture("po_reach_clauses.pl"));
    auto partition = minimizer::coarsest_cp_equivalence(cs);
    // flip every class to its greatest member instead of its least
    minimizer::Partition alt = partition;
    for (auto const & cls : alt.classes)
        for (auto const & m : cls) alt.representative[m] = cls.back();
    auto a = run_solver(testutil::solverOrDie(), emit_smtlib(minimizer::apply_renaming(cs, partition)));
    auto b = run_solver(testutil::solverOrDie(), emit_smtlib(minimizer::apply_renaming(cs, alt)));
    CHECK(a.outcome == SolverVerdict::Outcome::Satisfiable);
    CHECK(b.outcome == a.outcome);
}

TEST_CASE("a missing executable reports a solver error") {
    SolverConfig cfg{{"/nonexistent/solver-binary"}, 5.0};
    auto verdict = run_solver(cfg, "(check-sat)\n");
    CHECK(verdict.outcome == SolverVerdict::Outcome::SolverError);
}

TEST_CASE("timeouts are enforced") {
    SolverConfig cfg{{"sh", "-c", "sleep 30"}, 0.3};
    auto verdict = run_solver(cfg, "(check-sat)\n");
    CHECK(verdict.outcome == SolverVerdict::Outcome::Timeout);
    CHECK(verdict.elapsedSec < 5.0);
}

TEST_CASE("unparseable output reports a solver error; unknown passes through") {
    SolverConfig garbage{{"sh", "-c", "echo blargh"}, 5.0};
    CHECK(run_solver(garbage, "x").outcome == SolverVerdict::Outcome::SolverError);
    SolverConfig unknown{{"sh", "-c", "echo unknown"}, 5.0};
    CHECK(run_solver(unknown, "x").outcome == SolverVerdict::Outcome::Unknown);
}
