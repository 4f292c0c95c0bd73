/*
 * Copyright (c) 2026 The tempohorn authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tempohorn::model {

enum class Kind { Task, StartEvent, EndEvent, ParBranch, ParMerge, ExcBranch, ExcMerge };

const char * kindName(Kind k);

struct FlowObject {
    std::string id;
    Kind kind;
};

struct DurationBound {
    long long min = 0;
    long long max = 0;

    bool operator==(const DurationBound &) const = default;
};

struct ModelError : std::runtime_error {
    int line, col;
    ModelError(const std::string & msg, int line_ = 0, int col_ = 0)
        : std::runtime_error(line_ > 0 ? msg + " at line " + std::to_string(line_) + ", column "
                                             + std::to_string(col_)
                                       : msg),
          line(line_), col(col_) {}
};

/// Immutable fact base for one business process: flow objects, sequence flows
/// and duration bounds, with derived successor/predecessor indexes.
/// Build-then-freeze: safe to share across threads once constructed.
class BusinessProcessSpec {
public:
    static BusinessProcessSpec parse(std::string_view text);

    /// Assembles a spec from raw facts with the same validation as parse.
    /// Durations may omit events and gateways; they default to (0,0).
    static BusinessProcessSpec fromFacts(
        const std::vector<FlowObject> & objects,
        const std::vector<std::pair<std::string, std::string>> & flows,
        const std::map<std::string, DurationBound> & durations);

    const std::vector<FlowObject> & objects() const { return objects_; }
    const std::vector<std::pair<std::string, std::string>> & flows() const { return flows_; }
    const std::map<std::string, DurationBound> & taskDurations() const { return durations_; }

    bool has(const std::string & id) const { return kinds_.count(id) > 0; }
    Kind kind(const std::string & id) const;

    const std::vector<std::string> & successors(const std::string & id) const;
    const std::vector<std::string> & predecessors(const std::string & id) const;

    DurationBound durationBounds(const std::string & id) const;

    std::vector<std::string> startIds() const;
    std::vector<std::string> endIds() const;
    /// The unique start event; throws unless exactly one exists.
    const std::string & startId() const;

    bool isTask(const std::string & id) const { return kind(id) == Kind::Task; }
    bool isGateway(const std::string & id) const;

    std::string toText() const;

    bool operator==(const BusinessProcessSpec & o) const {
        return kinds_ == o.kinds_ && flows_ == o.flows_ && durations_ == o.durations_;
    }

private:
    BusinessProcessSpec() = default;
    void finalize(); // sorts, validates endpoints/durations, builds indexes

    std::vector<FlowObject> objects_;                        // sorted by id
    std::map<std::string, Kind> kinds_;
    std::vector<std::pair<std::string, std::string>> flows_; // sorted, unique
    std::map<std::string, DurationBound> durations_;         // tasks only
    std::map<std::string, std::vector<std::string>> succ_, pred_;
};

} // namespace tempohorn::model
