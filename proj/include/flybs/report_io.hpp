#pragma once

#include "flybs/engine.hpp"

#include <string>
#include <vector>

namespace flybs {

// Deterministic float formatting shared by every emitted file.
std::string fmt_double(double v);

// Per-step metrics CSV (fixed schema, one row per time step).
void write_steps_csv(const std::string& path, const std::vector<StepReport>& reports);

// User trajectory log, one row per (step, user): step,user_id,x,y,z.
// Step 0 holds the initial placement.
void write_trajectories_csv(const std::string& path,
                            const std::vector<std::vector<Vec3>>& steps);
std::vector<std::vector<Vec3>> read_trajectories_csv(const std::string& path);

}  // namespace flybs
