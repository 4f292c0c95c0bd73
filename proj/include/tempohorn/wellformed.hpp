/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "tempohorn/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tempohorn::wellformed {

/// The seven structural conditions, plus kind disjointness.
enum class Condition {
    UniqueStartEnd = 1,  // exactly one start and one end event
    OnStartEndPath = 2,  // every object lies on a start-to-end path (seq*)
    StartDegree = 3,     // start: one successor, no predecessor
    EndDegree = 4,       // end: one predecessor, no successor
    GatewayDegree = 5,   // branch: one predecessor; merge: one successor
    TaskDegree = 6,      // task: one predecessor and one successor
    GatewayOnlyCycle = 7,
    Disjointness = 8,    // an object with two kinds (rejected by the parser)
};

struct Violation {
    Condition condition;
    std::vector<std::string> witness;
    std::string message;
};

std::vector<Violation> check_well_formed(const model::BusinessProcessSpec & spec);

/// A cycle [x0,...,xk=x0] through gateways only, if any.
std::optional<std::vector<std::string>>
gateway_only_cycle(const model::BusinessProcessSpec & spec);

std::string renderText(const std::vector<Violation> & vs);
std::string renderJson(const std::vector<Violation> & vs);

} // namespace tempohorn::wellformed
