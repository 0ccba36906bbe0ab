// CSV and SVG emission for run traces.
#pragma once

#include "lieobs/sim.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace lieobs {

inline constexpr const char* kCsvHeader = "t,dE,btilde_w,btilde_v,lyap,lyap_dot,phi,condX";

/// Header plus one row per step, 17 significant digits, LF line endings.
void write_csv(std::ostream& out, const std::vector<TraceRow>& trace);
/// Throws std::runtime_error if the file cannot be written.
void write_csv(const std::string& path, const std::vector<TraceRow>& trace);

/// Three stacked line charts: d(E) and |btilde| on a log axis, L on a linear axis.
std::string render_svg(const std::vector<TraceRow>& trace);
void write_svg(const std::string& path, const std::vector<TraceRow>& trace);

}  // namespace lieobs
