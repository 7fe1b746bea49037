#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gorec/discover.hpp"

namespace gorec {

enum class MoveKind { Sync, Log, Model };

struct Move {
    MoveKind kind;
    std::optional<std::size_t> trace_event;  // set for Sync and Log
    std::optional<std::size_t> model_event;  // set for Sync and Model
    double cost = 0.0;
};

struct MoveCosts {
    double sync = 0.0;
    double model = 0.0;
    double log = 1.0;
};

struct Alignment {
    std::vector<Move> moves;
    double total_cost = 0.0;

    std::size_t length() const { return moves.size(); }
    /// Length of the maximal run of Log moves at the end of the alignment
    /// (any trailing Model move resets the run).
    std::size_t trailing_log_run() const;

    /// Two-row table mirroring the usual alignment notation, with ">>" for
    /// skips: first row is the trace side, second the model side.
    std::string to_table() const;
    std::string to_json() const;
};

/// Optimal alignment between an observed event sequence (possibly a prefix)
/// and a goal model: a minimum-cost path through the synchronous product,
/// always completed to END via model moves. Deterministic: among min-cost
/// alignments the shortest is chosen, and among those the lexicographically
/// smallest under per-node successor order Sync < Model (by target state) <
/// Log.
Alignment optimal_alignment(const std::vector<std::size_t>& events, const GoalModel& model,
                            const MoveCosts& costs = {});

}  // namespace gorec
