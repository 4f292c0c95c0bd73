/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "tempohorn/model.hpp"
#include "tempohorn/semantics.hpp"

#include <string_view>

namespace tempohorn::property {

struct PropertyParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParsedProperty {
    semantics::PropertySpec spec;
    semantics::FluentSet source; // the first reach atom's source state
};

/// Parses a reachability property written as a goal clause, e.g.
///
///   false :- Ts=0, Tp>Ts, Te>Tp+9,
///       reach(s([begins(start)],Ts), s([completes(p)],Tp)),
///       reach(s([completes(p)],Tp), s([completes(end)],Te)).
///
/// The reach atoms must chain (target of one is the source of the next), and
/// the remaining body must be a linear constraint over the chained time
/// variables. The initial time variable is fixed to 0 by the engines.
ParsedProperty parseProperty(std::string_view text);

/// Checks the property against a concrete model: fluents must name declared
/// objects and the chain source must be the model's initial state.
void validateAgainst(const ParsedProperty & prop, const model::BusinessProcessSpec & spec);

std::string printProperty(const ParsedProperty & prop);

} // namespace tempohorn::property
