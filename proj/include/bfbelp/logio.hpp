#pragma once

// SimLog CSV serialization. The column set is shared by every row kind:
//
//   obstacle    id = index; x,y,z = centre; eta, rho0, hard_radius
//   drone       id = drone; x..vz = state; cmd_*; target_*; component
//   prediction  id = agent; x,y,z = forecast at lead_tick; origin_tick, lead_tick
//   fusion      id = -1; status none|stale|fresh; x,y,z = fused forecast at
//               lead_tick; intercept_* = steering point; contributors, rejected
//
// Unused cells are empty. Wall-clock timings live in a separate file so the
// log itself is reproducible byte for byte.

#include <iosfwd>
#include <string>
#include <vector>

#include "bfbelp/scenario.hpp"

namespace bfbelp {

extern const char* const kLogHeader;

void write_log_csv(std::ostream& os, const SimLog& log);
/// Throws InputError naming the offending line.
SimLog read_log_csv(std::istream& is);

void write_log_file(const std::string& path, const SimLog& log);
SimLog read_log_file(const std::string& path);

/// agent, origin_tick, elapsed_s for every prediction in the log.
void write_timing_csv(std::ostream& os, const SimLog& log);

}  // namespace bfbelp
