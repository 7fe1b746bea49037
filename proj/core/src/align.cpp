#include "gorec/align.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

#include "gorec/errors.hpp"
#include "json.hpp"

namespace gorec {

std::size_t Alignment::trailing_log_run() const {
    std::size_t run = 0;
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
        if (it->kind != MoveKind::Log) break;
        ++run;
    }
    return run;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Product node (trace position i, model state s) flattened to i * S + s.
struct Edge {
    std::size_t to;
    double cost;
    std::size_t length;  // 0 for the silent transition into END
    MoveKind kind;       // meaningless when length == 0
    std::size_t symbol;  // event symbol of the move
};

struct ProductGraph {
    std::size_t states;
    std::size_t positions;  // trace length + 1
    std::vector<std::vector<Edge>> successors;  // in canonical order per node

    std::size_t node(std::size_t i, std::size_t s) const { return i * states + s; }
};

ProductGraph build_product(const std::vector<std::size_t>& events, const GoalModel& model,
                           const MoveCosts& costs) {
    ProductGraph graph;
    graph.states = model.n_states;
    graph.positions = events.size() + 1;
    graph.successors.resize(graph.states * graph.positions);

    for (std::size_t i = 0; i < graph.positions; ++i) {
        for (std::size_t s = 0; s < graph.states; ++s) {
            auto& out = graph.successors[graph.node(i, s)];
            const bool has_event = i < events.size();
            const std::size_t next_state =
                has_event ? GoalModel::symbol_state(events[i]) : 0;
            // Successor order fixes the canonical alignment:
            // Sync, silent END, Model by target state, Log.
            if (has_event && next_state < graph.states && model.has_arc(s, next_state))
                out.push_back({graph.node(i + 1, next_state), costs.sync, 1, MoveKind::Sync,
                               events[i]});
            if (s < model.adjacency.size())
                for (const auto& arc : model.adjacency[s]) {
                    if (arc.to == GoalModel::kEnd)
                        out.push_back({graph.node(i, GoalModel::kEnd), 0.0, 0, MoveKind::Model, 0});
                    else
                        out.push_back({graph.node(i, arc.to), costs.model, 1, MoveKind::Model,
                                       GoalModel::state_symbol(arc.to)});
                }
            if (has_event)
                out.push_back({graph.node(i + 1, s), costs.log, 1, MoveKind::Log, events[i]});
        }
    }
    return graph;
}

}  // namespace

Alignment optimal_alignment(const std::vector<std::size_t>& events, const GoalModel& model,
                            const MoveCosts& costs) {
    if (!has_path(model))
        throw infeasible_error("optimal_alignment: model '" + model.goal +
                               "' has no START-END path");
    if (costs.sync < 0.0 || costs.model < 0.0 || costs.log < 0.0)
        throw domain_error("optimal_alignment: move costs must be non-negative");

    const ProductGraph graph = build_product(events, model, costs);
    const std::size_t node_count = graph.successors.size();
    const std::size_t start = graph.node(0, GoalModel::kStart);
    const std::size_t accept = graph.node(events.size(), GoalModel::kEnd);

    // Cost-to-accept and (among min-cost) moves-to-accept per node, via
    // Dijkstra over reversed edges with compound weight (cost, length).
    // Length breaks ties so zero-cost model cycles are never taken.
    std::vector<std::vector<Edge>> reverse(node_count);
    for (std::size_t u = 0; u < node_count; ++u)
        for (const auto& e : graph.successors[u]) {
            Edge back = e;
            back.to = u;
            reverse[e.to].push_back(back);
        }

    std::vector<double> cost_to_accept(node_count, kInf);
    std::vector<std::size_t> len_to_accept(node_count, 0);
    using Entry = std::tuple<double, std::size_t, std::size_t>;  // cost, len, node
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    std::vector<bool> settled(node_count, false);
    cost_to_accept[accept] = 0.0;
    queue.emplace(0.0, 0, accept);
    while (!queue.empty()) {
        const auto [cost, len, v] = queue.top();
        queue.pop();
        if (settled[v]) continue;
        settled[v] = true;
        for (const auto& e : reverse[v]) {
            const double c = cost + e.cost;
            const std::size_t l = len + e.length;
            if (c < cost_to_accept[e.to] ||
                (c == cost_to_accept[e.to] && !settled[e.to] && l < len_to_accept[e.to])) {
                cost_to_accept[e.to] = c;
                len_to_accept[e.to] = l;
                queue.emplace(c, l, e.to);
            }
        }
    }
    if (cost_to_accept[start] == kInf)
        throw infeasible_error("optimal_alignment: no alignment found (unreachable END)");

    // Forward walk: take the first successor in canonical order that stays
    // on a (cost, length)-optimal path. Length strictly decreases on every
    // non-silent step, so the walk terminates.
    Alignment alignment;
    std::size_t node = start;
    while (node != accept) {
        bool stepped = false;
        for (const auto& e : graph.successors[node]) {
            if (e.cost + cost_to_accept[e.to] == cost_to_accept[node] &&
                e.length + len_to_accept[e.to] == len_to_accept[node]) {
                if (e.length > 0) {
                    Move move;
                    move.kind = e.kind;
                    move.cost = e.cost;
                    if (e.kind != MoveKind::Model) move.trace_event = e.symbol;
                    if (e.kind != MoveKind::Log) move.model_event = e.symbol;
                    alignment.moves.push_back(move);
                    alignment.total_cost += e.cost;
                }
                node = e.to;
                stepped = true;
                break;
            }
        }
        if (!stepped)
            throw std::logic_error("optimal_alignment: reconstruction lost the optimal path");
    }
    return alignment;
}

std::string Alignment::to_table() const {
    std::string trace_row = "trace:";
    std::string model_row = "model:";
    for (const auto& move : moves) {
        trace_row += move.trace_event ? " e" + std::to_string(*move.trace_event) : " >>";
        model_row += move.model_event ? " e" + std::to_string(*move.model_event) : " >>";
    }
    return trace_row + "\n" + model_row + "\n";
}

std::string Alignment::to_json() const {
    nlohmann::ordered_json j;
    j["total_cost"] = total_cost;
    j["length"] = moves.size();
    j["trailing_log_run"] = trailing_log_run();
    nlohmann::ordered_json ms = nlohmann::ordered_json::array();
    for (const auto& move : moves) {
        nlohmann::ordered_json m;
        m["kind"] = move.kind == MoveKind::Sync   ? "sync"
                    : move.kind == MoveKind::Log ? "log"
                                                 : "model";
        if (move.trace_event) m["trace_event"] = *move.trace_event;
        if (move.model_event) m["model_event"] = *move.model_event;
        m["cost"] = move.cost;
        ms.push_back(m);
    }
    j["moves"] = ms;
    return j.dump(2);
}

}  // namespace gorec
