#pragma once

#include <string>
#include <vector>

#include "gorec/dataset.hpp"
#include "gorec/quantize.hpp"

namespace gorec::testing {

inline EventTrace make_events(const std::string& id, const std::string& goal,
                              std::vector<std::size_t> events) {
    return EventTrace{id, goal, std::move(events)};
}

inline std::vector<EventTrace> make_log(const std::string& goal,
                                        const std::vector<std::vector<std::size_t>>& traces) {
    std::vector<EventTrace> log;
    for (std::size_t i = 0; i < traces.size(); ++i)
        log.push_back(EventTrace{"t" + std::to_string(i + 1), goal, traces[i]});
    return log;
}

inline ContinuousTrace make_trace(const std::string& id, const std::string& goal,
                                  std::vector<std::vector<double>> rows) {
    return ContinuousTrace{id, goal, std::move(rows), 0.1};
}

}  // namespace gorec::testing
