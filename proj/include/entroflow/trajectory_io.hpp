#pragma once

#include <string>

#include "entroflow/flow.hpp"

namespace entroflow {

/// Persists a trajectory as a directory: "manifest.txt" (key = value lines in
/// deterministic order) plus one geometry file per snapshot.
void write_trajectory(const std::string& dir, const Trajectory& traj);

/// Loads a trajectory directory written by write_trajectory.
Trajectory read_trajectory(const std::string& dir);

}  // namespace entroflow
