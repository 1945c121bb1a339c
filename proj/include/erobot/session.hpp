#pragma once

// Project snapshots, deterministic replay, and trace comparison.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "erobot/robot.hpp"
#include "erobot/world.hpp"

namespace erobot::session {

inline constexpr int kProjectVersion = 1;

/// Text snapshot of a robot: `[section]` headers and `key=value` lines, LTM
/// rows in the field dump format with exact E-states.
std::string save_project(const robot::Robot& r);
/// Throws ParseError naming the line on malformed input or a version mismatch.
robot::Robot load_project(std::string_view text);

struct TraceLog {
    std::vector<world::HistoryRow> rows;
    std::vector<std::string> diagnostics;

    std::string render() const;
};

/// Loads `project` and takes up to `steps` memory-mode steps, stopping on
/// halt, starvation, boundary or a full LTM. A project left in teacher mode cannot be
/// replayed and yields a diagnostic only.
TraceLog replay(std::string_view project, long steps);

struct TraceDivergence {
    std::size_t index = 0; ///< first differing row; equals the shorter length when one is a prefix
    std::string a;        ///< formatted row, empty past the end
    std::string b;
};

std::optional<TraceDivergence> trace_diff(const TraceLog& a, const TraceLog& b);

} // namespace erobot::session
