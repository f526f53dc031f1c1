#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entroflow/curvature.hpp"
#include "entroflow/surface.hpp"

namespace entroflow {

enum class Scheme { Explicit, SemiImplicit };

enum class Termination { ReachedTime, SingularityDetected, StepFloor };

std::string to_string(Scheme s);
std::string to_string(Termination t);
Scheme scheme_from_string(const std::string& s);

struct FlowState {
    Surface surface;
    double time = 0.0;
    long step_count = 0;
    // Remesh epoch: snapshots share vertex correspondence iff epochs match.
    long epoch = 0;
};

/// One mean curvature flow step.
///   Explicit:      X <- X - dt * H * nu  per vertex.
///   SemiImplicit:  (M + dt L) X_new = M X with the cotangent stiffness matrix
///                  (n = 2) or the arc-length second-difference operator
///                  (n = 1) assembled on the current surface.
FlowState step(const FlowState& state, double dt, Scheme scheme);

struct FlowControls {
    double t_end = 1.0;
    double cfl = 0.5;              // dt = cfl * h_min^2 / (2 (n+1))
    long remesh_every = 0;         // 0 disables remeshing
    double snapshot_every = 0.0;   // 0 records every accepted step
    Scheme scheme = Scheme::SemiImplicit;
    double curvature_blowup = 1e3;   // NearSingular when max|A| * diam0 exceeds this
    double volume_floor = 1e-9;      // ... or |volume| < volume_floor * |volume0|
};

struct Trajectory {
    std::vector<FlowState> snapshots;
    FlowControls controls;
    Termination termination = Termination::ReachedTime;
    std::optional<double> singular_time;
    std::optional<Eigen::VectorXd> singular_point;
    double max_dt = 0.0;
    double min_dt = 0.0;
    long total_steps = 0;

    const FlowState& front() const { return snapshots.front(); }
    const FlowState& back() const { return snapshots.back(); }
};

/// Runs the flow with adaptive steps until t_end, singularity detection, or
/// the step floor dt < 1e-14 * diam0^2. Remeshes every `remesh_every` steps to
/// the initial mean edge scaled by (area / area0)^{1/(2n)}.
Trajectory run_flow(const Surface& initial, const FlowControls& controls);

struct SingularityProbe {
    bool near_singular = false;
    Eigen::VectorXd location;  // area-weighted centroid of top-1% |A| vertices
};

SingularityProbe detect_singularity(const FlowState& state, double initial_diameter,
                                    double initial_volume,
                                    double curvature_blowup = 1e3,
                                    double volume_floor = 1e-9);

/// Huisken's monotone quantity along the trajectory: the time series
/// t -> \int_{M_t} Phi_{(y, tau)} for snapshot times t < tau.
std::vector<std::pair<double, double>> huisken_series(const Trajectory& traj,
                                                      const Eigen::VectorXd& y,
                                                      double tau);

struct PinchingReport {
    std::vector<double> times;
    std::vector<double> max_ratio;  // max over vertices of |A|^2 / H^2
    std::vector<bool> valid;        // false where min vertex H <= 0
    // Running max over valid snapshots (the constant C of the pinching bound).
    double overall_max = 0.0;
};

/// Per-snapshot max of |A|^2 / H^2 using the quadric-fit curvature pair, so
/// the algebraic floor |A|^2 >= H^2 / n holds by construction. Snapshots with
/// min cotangent H <= 0 are flagged invalid and excluded from the max.
PinchingReport pinching_report(const Trajectory& traj);

/// Snapshot selection helper shared by rescaling and density estimation:
/// nearest snapshot in time, with linear vertex interpolation between
/// bracketing snapshots when they share a remesh epoch. Returns the surface
/// and the time it actually represents.
std::pair<Surface, double> surface_at_time(const Trajectory& traj, double t);

}  // namespace entroflow
