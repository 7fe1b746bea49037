#include "gorec/discover.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "gorec/errors.hpp"
#include "json.hpp"

namespace gorec {

bool GoalModel::has_arc(std::size_t from, std::size_t to) const {
    if (from >= adjacency.size()) return false;
    const auto& arcs = adjacency[from];
    const auto it = std::lower_bound(arcs.begin(), arcs.end(), to,
                                     [](const Arc& a, std::size_t t) { return a.to < t; });
    return it != arcs.end() && it->to == to;
}

std::size_t GoalModel::arc_total() const {
    std::size_t total = 0;
    for (const auto& arcs : adjacency)
        for (const auto& arc : arcs) total += arc.count;
    return total;
}

namespace {

std::vector<bool> reachable_from(const GoalModel& model, std::size_t source, bool reverse) {
    std::vector<std::vector<std::size_t>> edges(model.n_states);
    for (std::size_t s = 0; s < model.adjacency.size(); ++s)
        for (const auto& arc : model.adjacency[s])
            reverse ? edges[arc.to].push_back(s) : edges[s].push_back(arc.to);
    std::vector<bool> seen(model.n_states, false);
    std::queue<std::size_t> frontier;
    frontier.push(source);
    seen[source] = true;
    while (!frontier.empty()) {
        const auto s = frontier.front();
        frontier.pop();
        for (auto t : edges[s])
            if (!seen[t]) {
                seen[t] = true;
                frontier.push(t);
            }
    }
    return seen;
}

}  // namespace

GoalModel build_model(const std::vector<EventTrace>& log, double filter_threshold) {
    if (log.empty()) throw validation_error("build_model: empty event log");
    if (filter_threshold < 0.0 || filter_threshold >= 1.0)
        throw domain_error("filter_threshold must be in [0, 1)");

    GoalModel model;
    model.goal = log.front().goal;
    model.filter_threshold = filter_threshold;

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> counts;
    std::size_t max_symbol = 0;
    for (const auto& trace : log) {
        if (trace.events.empty())
            throw validation_error("build_model: trace '" + trace.trace_id + "' has no events");
        std::size_t prev = GoalModel::kStart;
        for (std::size_t symbol : trace.events) {
            max_symbol = std::max(max_symbol, symbol);
            const std::size_t state = GoalModel::symbol_state(symbol);
            ++counts[{prev, state}];
            prev = state;
        }
        ++counts[{prev, GoalModel::kEnd}];
    }

    model.n_states = GoalModel::symbol_state(max_symbol) + 1;
    model.adjacency.assign(model.n_states, {});

    std::size_t total = 0;
    for (const auto& [arc, count] : counts) total += count;
    for (const auto& [arc, count] : counts) {
        if (static_cast<double>(count) / static_cast<double>(total) < filter_threshold) continue;
        model.adjacency[arc.first].push_back({arc.second, count});
    }
    // std::map iteration already yields sorted targets per source.

    // Prune states not on any START-END path.
    const auto fwd = reachable_from(model, GoalModel::kStart, false);
    const auto bwd = reachable_from(model, GoalModel::kEnd, true);
    for (std::size_t s = 0; s < model.n_states; ++s) {
        auto& arcs = model.adjacency[s];
        if (!(fwd[s] && bwd[s])) {
            arcs.clear();
            continue;
        }
        arcs.erase(std::remove_if(arcs.begin(), arcs.end(),
                                  [&](const GoalModel::Arc& a) { return !(fwd[a.to] && bwd[a.to]); }),
                   arcs.end());
    }
    if (!has_path(model))
        throw infeasible_error("build_model: filtering at threshold " +
                               std::to_string(filter_threshold) +
                               " disconnected every START-END path");
    return model;
}

bool accepts(const GoalModel& model, const std::vector<std::size_t>& events) {
    std::size_t state = GoalModel::kStart;
    for (std::size_t symbol : events) {
        const std::size_t next = GoalModel::symbol_state(symbol);
        if (next >= model.n_states || !model.has_arc(state, next)) return false;
        state = next;
    }
    return model.has_arc(state, GoalModel::kEnd);
}

bool has_path(const GoalModel& model) {
    const auto fwd = reachable_from(model, GoalModel::kStart, false);
    return fwd[GoalModel::kEnd];
}

std::string GoalModel::to_json() const {
    nlohmann::ordered_json j;
    j["goal"] = goal;
    j["n_states"] = n_states;
    j["filter_threshold"] = filter_threshold;
    nlohmann::ordered_json arcs = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < adjacency.size(); ++s)
        for (const auto& arc : adjacency[s])
            arcs.push_back({{"from", s}, {"to", arc.to}, {"count", arc.count}});
    j["arcs"] = arcs;
    return j.dump(2);
}

GoalModel GoalModel::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    GoalModel m;
    m.goal = j.at("goal").get<std::string>();
    m.n_states = j.at("n_states").get<std::size_t>();
    m.filter_threshold = j.at("filter_threshold").get<double>();
    m.adjacency.assign(m.n_states, {});
    for (const auto& arc : j.at("arcs"))
        m.adjacency[arc.at("from").get<std::size_t>()].push_back(
            {arc.at("to").get<std::size_t>(), arc.at("count").get<std::size_t>()});
    for (auto& arcs : m.adjacency)
        std::sort(arcs.begin(), arcs.end(),
                  [](const Arc& a, const Arc& b) { return a.to < b.to; });
    return m;
}

std::string GoalModel::to_dot() const {
    std::string dot = "digraph \"" + goal + "\" {\n  rankdir=LR;\n";
    auto label = [](std::size_t s) {
        if (s == kStart) return std::string("START");
        if (s == kEnd) return std::string("END");
        return "e" + std::to_string(state_symbol(s));
    };
    for (std::size_t s = 0; s < adjacency.size(); ++s)
        for (const auto& arc : adjacency[s])
            dot += "  \"" + label(s) + "\" -> \"" + label(arc.to) + "\" [label=\"" +
                   std::to_string(arc.count) + "\"];\n";
    dot += "}\n";
    return dot;
}

}  // namespace gorec
