/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "tempohorn/chc.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tempohorn::backend {

/// Emits an SMT-LIB HORN script: one relation declaration per predicate, one
/// universally quantified assertion per clause, goals imply false. Emission is
/// deterministic and byte-stable for a given clause set.
std::string emit_smtlib(const chc::ClauseSet & cs);

struct SolverConfig {
    std::vector<std::string> command; // executable and fixed arguments
    double timeoutSec = 60.0;
};

/// Splits a command string on whitespace.
SolverConfig makeSolverConfig(const std::string & commandLine, double timeoutSec = 60.0);

/// Default solver: $TEMPOHORN_SOLVER, else z3 on PATH.
std::optional<SolverConfig> defaultSolver(double timeoutSec = 60.0);

struct SolverVerdict {
    enum class Outcome { Satisfiable, Unsatisfiable, Unknown, Timeout, SolverError };
    Outcome outcome = Outcome::SolverError;
    std::string raw;    // captured solver output
    double elapsedSec = 0.0;
};

const char * outcomeName(SolverVerdict::Outcome o);

/// Writes the script to a temporary file, runs the solver with the file path
/// appended to its command, enforces the timeout, and parses the first
/// sat/unsat/unknown token of its output.
SolverVerdict run_solver(const SolverConfig & config, const std::string & script);

} // namespace tempohorn::backend
