#pragma once

#include "tempohorn/backend.hpp"

#include <cstdlib>
#include <string>

#include <unistd.h>

namespace testutil {

// Resolves the solver for tests: $TEMPOHORN_SOLVER, then z3 on PATH, then the
// bundled z3 WebAssembly wrapper under tools/ (requires node + z3-solver).
inline tempohorn::backend::SolverConfig solverOrDie(double timeoutSec = 60.0) {
    if (auto cfg = tempohorn::backend::defaultSolver(timeoutSec)) return *cfg;
    std::string wrapper = std::string(TEMPOHORN_TOOLS_DIR) + "/z3smt2.cjs";
    if (access(wrapper.c_str(), R_OK) == 0)
        return tempohorn::backend::SolverConfig{{"node", wrapper}, timeoutSec};
    throw std::runtime_error("no CHC solver available for tests: set TEMPOHORN_SOLVER");
}

} // namespace testutil
