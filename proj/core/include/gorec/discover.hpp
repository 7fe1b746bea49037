#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gorec/quantize.hpp"

namespace gorec {

/// Directly-follows automaton for one goal. States are START, END, and one
/// state per event symbol; an arc into state e is a transition labeled e.
/// A run is a START -> ... -> END path and its label sequence is the event
/// states visited.
struct GoalModel {
    static constexpr std::size_t kStart = 0;
    static constexpr std::size_t kEnd = 1;
    static std::size_t symbol_state(std::size_t symbol) { return symbol + 2; }
    static std::size_t state_symbol(std::size_t state) { return state - 2; }

    std::string goal;
    std::size_t n_states = 2;  // START, END, then max observed symbol + 3
    struct Arc {
        std::size_t to;
        std::size_t count;
    };
    std::vector<std::vector<Arc>> adjacency;  // per state, sorted by target
    double filter_threshold = 0.0;

    bool has_arc(std::size_t from, std::size_t to) const;
    std::size_t arc_total() const;

    std::string to_json() const;
    static GoalModel from_json(const std::string& text);
    std::string to_dot() const;
};

/// Build the directly-follows model of one goal's event log. Arcs whose
/// relative frequency falls below filter_threshold are dropped, then states
/// off every START-END path are pruned.
GoalModel build_model(const std::vector<EventTrace>& log, double filter_threshold = 0.0);

/// Language membership: does `events` label some START -> END path?
bool accepts(const GoalModel& model, const std::vector<std::size_t>& events);

/// True when at least one START -> END path exists.
bool has_path(const GoalModel& model);

}  // namespace gorec
