/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "tempohorn/backend.hpp"
#include "tempohorn/chc.hpp"
#include "tempohorn/minimizer.hpp"
#include "tempohorn/model.hpp"
#include "tempohorn/property.hpp"
#include "tempohorn/semantics.hpp"
#include "tempohorn/specializer.hpp"
#include "tempohorn/wellformed.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

// exit codes: 0 property holds / ok, 1 property violated / violations found,
// 2 solver unknown or timeout, 3 usage, 4 input/validation errors,
// 5 oracle disagreement under --oracle strict
constexpr int kExitHolds = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 3;
constexpr int kExitInput = 4;
constexpr int kExitOracleDisagreement = 5;

using namespace tempohorn;

std::string readFile(const std::string & path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void writeOutput(const std::string & path, const std::string & content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

struct CommonOpts {
    std::string solverCmd;
    double timeoutSec = 60.0;
    std::string out;
};

backend::SolverConfig resolveSolver(const CommonOpts & opts) {
    if (!opts.solverCmd.empty()) return backend::makeSolverConfig(opts.solverCmd, opts.timeoutSec);
    if (auto cfg = backend::defaultSolver(opts.timeoutSec)) return *cfg;
    throw std::runtime_error(
        "no CHC solver found: pass --solver, set TEMPOHORN_SOLVER, or put z3 on PATH");
}

semantics::ExploreBounds parseOracleBounds(const std::string & s) {
    semantics::ExploreBounds b;
    if (s.empty()) return b;
    auto comma = s.find(',');
    b.maxStates = std::stoull(s.substr(0, comma));
    if (comma != std::string::npos) b.maxSegmentOffset = std::stoll(s.substr(comma + 1));
    return b;
}

struct LoadedProblem {
    model::BusinessProcessSpec spec;
    property::ParsedProperty prop;
};

LoadedProblem loadProblem(const std::string & modelPath, const std::string & propertyPath) {
    auto spec = model::BusinessProcessSpec::parse(readFile(modelPath));
    auto violations = wellformed::check_well_formed(spec);
    if (!violations.empty())
        throw std::runtime_error("model is not well-formed:\n" + wellformed::renderText(violations));
    auto prop = property::parseProperty(readFile(propertyPath));
    property::validateAgainst(prop, spec);
    return {std::move(spec), std::move(prop)};
}

int cmdCheckWf(const std::string & modelPath, bool json) {
    auto spec = model::BusinessProcessSpec::parse(readFile(modelPath));
    auto violations = wellformed::check_well_formed(spec);
    std::cout << (json ? wellformed::renderJson(violations) : wellformed::renderText(violations));
    return violations.empty() ? kExitHolds : kExitViolated;
}

int cmdSimulate(const std::string & modelPath, std::uint64_t seed, std::size_t maxSteps) {
    auto spec = model::BusinessProcessSpec::parse(readFile(modelPath));
    auto trace = semantics::simulate(spec, seed, maxSteps);
    std::cout << semantics::renderTrace(trace);
    return kExitHolds;
}

int cmdCompile(const LoadedProblem & p, bool minimize, const std::string & out) {
    auto result = specializer::specialize(p.spec, p.prop.spec);
    for (auto const & w : result.warnings) std::cerr << "warning: " << w << "\n";
    chc::ClauseSet cs = std::move(result.clauses);
    if (minimize) {
        auto partition = minimizer::coarsest_cp_equivalence(cs);
        cs = minimizer::apply_renaming(cs, partition);
    }
    writeOutput(out, chc::printClauseSet(cs));
    return kExitHolds;
}

int cmdMinimize(const std::string & clausePath, const std::string & out,
                const std::string & partitionOut) {
    chc::ClauseSet cs = chc::parseClauses(readFile(clausePath));
    chc::normalizeClauseSet(cs);
    auto partition = minimizer::coarsest_cp_equivalence(cs);
    if (!partitionOut.empty())
        writeOutput(partitionOut, minimizer::renderPartition(partition));
    else
        std::cerr << minimizer::renderPartition(partition);
    auto renamed = minimizer::apply_renaming(cs, partition);
    std::cerr << "clauses: " << cs.clauses.size() << " -> " << renamed.clauses.size() << "\n";
    writeOutput(out, chc::printClauseSet(renamed));
    return kExitHolds;
}

int cmdEmit(const LoadedProblem & p, bool minimize, const std::string & out) {
    auto result = specializer::specialize(p.spec, p.prop.spec);
    for (auto const & w : result.warnings) std::cerr << "warning: " << w << "\n";
    chc::ClauseSet cs = std::move(result.clauses);
    if (minimize) {
        auto partition = minimizer::coarsest_cp_equivalence(cs);
        cs = minimizer::apply_renaming(cs, partition);
    }
    writeOutput(out, backend::emit_smtlib(cs));
    return kExitHolds;
}

int solveClauses(const chc::ClauseSet & cs, const CommonOpts & opts) {
    auto cfg = resolveSolver(opts);
    auto verdict = backend::run_solver(cfg, backend::emit_smtlib(cs));
    std::cout << backend::outcomeName(verdict.outcome) << "\n";
    switch (verdict.outcome) {
        case backend::SolverVerdict::Outcome::Satisfiable: return kExitHolds;
        case backend::SolverVerdict::Outcome::Unsatisfiable: return kExitViolated;
        case backend::SolverVerdict::Outcome::Unknown:
        case backend::SolverVerdict::Outcome::Timeout: return kExitUnknown;
        case backend::SolverVerdict::Outcome::SolverError:
            std::cerr << verdict.raw << "\n";
            return kExitInput;
    }
    return kExitInput;
}

int cmdSolve(const std::string & clausePath, const CommonOpts & opts) {
    chc::ClauseSet cs = chc::parseClauses(readFile(clausePath));
    chc::normalizeClauseSet(cs);
    return solveClauses(cs, opts);
}

int cmdVerify(const LoadedProblem & p, bool minimize, const CommonOpts & opts,
              const std::string & oracleMode, const std::string & oracleBounds) {
    auto result = specializer::specialize(p.spec, p.prop.spec);
    for (auto const & w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::size_t before = result.clauses.clauses.size();
    chc::ClauseSet cs = std::move(result.clauses);
    if (minimize) {
        auto partition = minimizer::coarsest_cp_equivalence(cs);
        cs = minimizer::apply_renaming(cs, partition);
        std::cerr << "clauses: " << before << " -> " << cs.clauses.size()
                  << " after predicate-equivalence minimization\n";
    } else {
        std::cerr << "clauses: " << before << " (minimization off)\n";
    }

    auto cfg = resolveSolver(opts);
    auto verdict = backend::run_solver(cfg, backend::emit_smtlib(cs));
    std::cerr << "solver: " << backend::outcomeName(verdict.outcome) << " in "
              << verdict.elapsedSec << "s\n";

    std::optional<semantics::OracleVerdict> oracle;
    if (oracleMode != "off") {
        oracle = semantics::explore(p.spec, p.prop.spec, parseOracleBounds(oracleBounds));
        bool violated = oracle->outcome == semantics::OracleVerdict::Outcome::Violated;
        std::cerr << "oracle: "
                  << (violated            ? "violated (counterexample found)"
                      : oracle->exhaustive ? "no violation (exhaustive)"
                                           : "no violation (within bounds)")
                  << ", " << oracle->statesVisited << " states\n";
    }

    int rc;
    switch (verdict.outcome) {
        case backend::SolverVerdict::Outcome::Satisfiable:
            std::cout << "property holds\n";
            rc = kExitHolds;
            break;
        case backend::SolverVerdict::Outcome::Unsatisfiable:
            std::cout << "property violated\n";
            if (oracle && oracle->outcome == semantics::OracleVerdict::Outcome::Violated) {
                std::cout << "counterexample run:\n"
                          << semantics::renderTrace(oracle->trace);
            }
            rc = kExitViolated;
            break;
        case backend::SolverVerdict::Outcome::Unknown:
        case backend::SolverVerdict::Outcome::Timeout:
            std::cout << "inconclusive (" << backend::outcomeName(verdict.outcome) << ")\n";
            rc = kExitUnknown;
            break;
        default:
            std::cerr << verdict.raw << "\n";
            return kExitInput;
    }

    if (oracle) {
        bool solverViolated = verdict.outcome == backend::SolverVerdict::Outcome::Unsatisfiable;
        bool solverDefinitive = solverViolated
            || verdict.outcome == backend::SolverVerdict::Outcome::Satisfiable;
        bool oracleViolated = oracle->outcome == semantics::OracleVerdict::Outcome::Violated;
        bool oracleDefinitive = oracleViolated || oracle->exhaustive;
        if (solverDefinitive && oracleDefinitive) {
            if (solverViolated == oracleViolated) {
                std::cerr << "oracle agreement: yes\n";
            } else {
                std::cerr << "oracle agreement: NO - solver and oracle disagree\n";
                if (oracleMode == "strict") return kExitOracleDisagreement;
            }
        } else {
            std::cerr << "oracle agreement: inconclusive\n";
        }
    }
    return rc;
}

} // namespace

int main(int argc, char ** argv) {
    CLI::App app{"Verification of time-aware business processes via constrained Horn clauses"};
    app.require_subcommand(1);

    std::string modelPath, propertyPath, clausePath;
    CommonOpts common;
    bool json = false;
    bool minimize = true;
    std::uint64_t seed = 0;
    std::size_t maxSteps = 10000;
    std::string partitionOut;
    std::string oracleMode = "advisory";
    std::string oracleBounds;

    auto * checkWf = app.add_subcommand("check-wf", "check well-formedness of a model");
    checkWf->add_option("model", modelPath, "model file")->required();
    checkWf->add_flag("--json", json, "machine-readable report");

    auto * simulate = app.add_subcommand("simulate", "print one maximal run");
    simulate->add_option("model", modelPath, "model file")->required();
    simulate->add_option("--seed", seed, "random choice seed");
    simulate->add_option("--max-steps", maxSteps, "step limit");

    auto * compile = app.add_subcommand("compile", "emit interpreter-free clauses as text");
    compile->add_option("model", modelPath, "model file")->required();
    compile->add_option("property", propertyPath, "property file")->required();
    compile->add_flag("--minimize,!--no-minimize", minimize, "apply predicate-equivalence minimization");
    compile->add_option("--out", common.out, "output path (default stdout)");

    auto * minimizeCmd = app.add_subcommand("minimize", "minimize a clause file");
    minimizeCmd->add_option("clauses", clausePath, "clause file")->required();
    minimizeCmd->add_option("--out", common.out, "output path (default stdout)");
    minimizeCmd->add_option("--partition-out", partitionOut, "write the partition here");

    auto * emit = app.add_subcommand("emit", "emit an SMT-LIB HORN script");
    emit->add_option("model", modelPath, "model file")->required();
    emit->add_option("property", propertyPath, "property file")->required();
    emit->add_flag("--minimize,!--no-minimize", minimize, "apply predicate-equivalence minimization");
    emit->add_option("--out", common.out, "output path (default stdout)");

    auto * solve = app.add_subcommand("solve", "solve a clause file with the configured solver");
    solve->add_option("clauses", clausePath, "clause file")->required();
    solve->add_option("--solver", common.solverCmd, "solver command");
    solve->add_option("--timeout", common.timeoutSec, "solver timeout in seconds");

    auto * verify = app.add_subcommand("verify", "full pipeline: specialize, minimize, solve");
    verify->add_option("model", modelPath, "model file")->required();
    verify->add_option("property", propertyPath, "property file")->required();
    verify->add_flag("--minimize,!--no-minimize", minimize, "apply predicate-equivalence minimization");
    verify->add_option("--solver", common.solverCmd, "solver command");
    verify->add_option("--timeout", common.timeoutSec, "solver timeout in seconds");
    verify->add_option("--oracle", oracleMode, "off|advisory|strict")
        ->check(CLI::IsMember({"off", "advisory", "strict"}));
    verify->add_option("--oracle-bounds", oracleBounds, "STATES[,SLACK] exploration bounds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError & e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (checkWf->parsed()) return cmdCheckWf(modelPath, json);
        if (simulate->parsed()) return cmdSimulate(modelPath, seed, maxSteps);
        if (compile->parsed())
            return cmdCompile(loadProblem(modelPath, propertyPath), minimize, common.out);
        if (minimizeCmd->parsed()) return cmdMinimize(clausePath, common.out, partitionOut);
        if (emit->parsed())
            return cmdEmit(loadProblem(modelPath, propertyPath), minimize, common.out);
        if (solve->parsed()) return cmdSolve(clausePath, common);
        if (verify->parsed())
            return cmdVerify(loadProblem(modelPath, propertyPath), minimize, common, oracleMode,
                             oracleBounds);
    } catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}
