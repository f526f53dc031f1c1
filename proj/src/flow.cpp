#include "entroflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Geometry>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "entroflow/gaussian.hpp"
#include "entroflow/remesh.hpp"

namespace entroflow {

std::string to_string(Scheme s) {
    return s == Scheme::Explicit ? "explicit" : "semi-implicit";
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::ReachedTime: return "ReachedTime";
        case Termination::SingularityDetected: return "SingularityDetected";
        case Termination::StepFloor: return "StepFloor";
    }
    return "unknown";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "explicit") return Scheme::Explicit;
    if (s == "semi-implicit") return Scheme::SemiImplicit;
    throw Error("unknown scheme: " + s);
}

namespace {

// Lumped mass and stiffness of the Laplace-Beltrami operator on the current
// geometry: cotangent weights for meshes, inverse edge lengths for polylines.
void assemble_operators(const Surface& s, Eigen::VectorXd& mass,
                        Eigen::SparseMatrix<double>& stiffness) {
    const Eigen::Index v = s.vertices.rows();
    std::vector<Eigen::Triplet<double>> trips;
    mass = Eigen::VectorXd::Zero(v);

    if (s.dim == 1) {
        for (Eigen::Index i = 0; i < v; ++i) {
            const Eigen::Index j = (i + 1) % v;
            const double len = (s.vertices.row(j) - s.vertices.row(i)).norm();
            if (!(len > 0.0)) throw DegenerateElement("zero edge in flow step");
            const double w = 1.0 / len;
            trips.emplace_back(i, i, w);
            trips.emplace_back(j, j, w);
            trips.emplace_back(i, j, -w);
            trips.emplace_back(j, i, -w);
            mass(i) += 0.5 * len;
            mass(j) += 0.5 * len;
        }
    } else {
        for (Eigen::Index f = 0; f < s.faces.rows(); ++f) {
            const int idx[3] = {s.faces(f, 0), s.faces(f, 1), s.faces(f, 2)};
            const Eigen::Vector3d p[3] = {s.vertices.row(idx[0]),
                                          s.vertices.row(idx[1]),
                                          s.vertices.row(idx[2])};
            const double area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
            if (!(area > 0.0)) throw DegenerateElement("zero triangle in flow step");
            for (int k = 0; k < 3; ++k) {
                const Eigen::Vector3d ea = p[(k + 1) % 3] - p[k];
                const Eigen::Vector3d eb = p[(k + 2) % 3] - p[k];
                const double cross = ea.cross(eb).norm();
                const double w = cross > 0.0 ? 0.5 * ea.dot(eb) / cross : 0.0;
                const int a = idx[(k + 1) % 3], b = idx[(k + 2) % 3];
                trips.emplace_back(a, a, w);
                trips.emplace_back(b, b, w);
                trips.emplace_back(a, b, -w);
                trips.emplace_back(b, a, -w);
                mass(idx[k]) += area / 3.0;
            }
        }
    }
    stiffness.resize(v, v);
    stiffness.setFromTriplets(trips.begin(), trips.end());
}

}  // namespace

namespace {

// Semi-implicit stepper that reuses the symbolic factorization while the mesh
// topology is unchanged (the sparsity pattern only changes at remeshes).
class SemiImplicitStepper {
  public:
    void advance(FlowState& state, double dt) {
        Eigen::VectorXd mass;
        Eigen::SparseMatrix<double> stiffness;
        assemble_operators(state.surface, mass, stiffness);
        // Monitor for the singularity prefilter: |M^{-1} L X| bounds |H|.
        max_mcv_ = ((stiffness * state.surface.vertices).rowwise().norm().array() /
                    mass.array())
                       .maxCoeff();
        Eigen::SparseMatrix<double> system = dt * stiffness;
        for (Eigen::Index i = 0; i < mass.size(); ++i)
            system.coeffRef(i, i) += mass(i);

        if (state.epoch != epoch_ || mass.size() != size_) {
            solver_.analyzePattern(system);
            epoch_ = state.epoch;
            size_ = mass.size();
        }
        solver_.factorize(system);
        if (solver_.info() != Eigen::Success)
            throw SolveFailure("semi-implicit factorization failed");
        const Eigen::MatrixXd rhs = mass.asDiagonal() * state.surface.vertices;
        state.surface.vertices = solver_.solve(rhs);
        if (solver_.info() != Eigen::Success || !state.surface.vertices.allFinite())
            throw SolveFailure("semi-implicit solve failed");
        state.time += dt;
        state.step_count += 1;
    }

    double max_mcv() const { return max_mcv_; }

  private:
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
    long epoch_ = -1;
    Eigen::Index size_ = -1;
    double max_mcv_ = 0.0;
};

double explicit_advance(FlowState& state, double dt) {
    const CurvatureField cf = compute_curvature_basic(state.surface);
    state.surface.vertices -=
        dt * (cf.normal.array().colwise() * cf.mean_curvature.array()).matrix();
    state.time += dt;
    state.step_count += 1;
    return cf.mean_curvature.cwiseAbs().maxCoeff();
}

}  // namespace

FlowState step(const FlowState& state, double dt, Scheme scheme) {
    if (!(dt >= 0.0)) throw Error("time step must be non-negative");
    FlowState next = state;
    if (dt == 0.0) {
        next.step_count += 1;
        return next;
    }
    if (scheme == Scheme::Explicit) {
        explicit_advance(next, dt);
    } else {
        SemiImplicitStepper stepper;
        stepper.advance(next, dt);
    }
    return next;
}

SingularityProbe detect_singularity(const FlowState& state, double initial_diameter,
                                    double initial_volume, double curvature_blowup,
                                    double volume_floor) {
    SingularityProbe probe;
    const CurvatureField cf = compute_curvature(state.surface);
    const Eigen::ArrayXd a_norm = cf.second_form_norm_sq.array().max(0.0).sqrt();
    const double max_a = a_norm.maxCoeff();
    const double volume = enclosed_volume(state.surface);

    const bool curvature_blown = max_a * initial_diameter > curvature_blowup;
    const bool volume_gone = std::abs(volume) < volume_floor * std::abs(initial_volume);
    if (!curvature_blown && !volume_gone) return probe;

    probe.near_singular = true;
    // Area-weighted centroid of the top-1% curvature vertices.
    const Eigen::Index v = state.surface.vertices.rows();
    std::vector<Eigen::Index> order(static_cast<size_t>(v));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return a_norm(a) > a_norm(b); });
    const Eigen::Index top = std::max<Eigen::Index>(1, v / 100);
    Eigen::VectorXd loc = Eigen::VectorXd::Zero(state.surface.ambient_dim());
    double weight = 0.0;
    for (Eigen::Index r = 0; r < top; ++r) {
        const Eigen::Index i = order[static_cast<size_t>(r)];
        loc += cf.vertex_area(i) * state.surface.vertices.row(i).transpose();
        weight += cf.vertex_area(i);
    }
    probe.location = loc / weight;
    return probe;
}

Trajectory run_flow(const Surface& initial, const FlowControls& controls) {
    validate(initial, true);
    if (!(controls.cfl > 0.0 && controls.cfl <= 1.0)) throw Error("cfl must be in (0, 1]");
    if (controls.t_end < 0.0) throw Error("t_end must be non-negative");

    Trajectory traj;
    traj.controls = controls;
    traj.min_dt = std::numeric_limits<double>::infinity();

    const double diam0 = diameter(initial);
    const double vol0 = enclosed_volume(initial);
    const double area0 = total_measure(initial);
    const double mean_edge0 = mean_edge_length(initial);
    const double dt_floor = 1e-14 * diam0 * diam0;
    const int n = initial.dim;

    FlowState state{initial, 0.0, 0, 0};
    traj.snapshots.push_back(state);
    double next_snapshot = controls.snapshot_every;

    if (controls.t_end == 0.0) {
        traj.min_dt = 0.0;
        return traj;
    }

    SemiImplicitStepper stepper;
    while (true) {
        const double h_min = min_edge_length(state.surface);
        double dt = controls.cfl * h_min * h_min / (2.0 * (n + 1));
        if (dt < dt_floor) {
            traj.termination = Termination::StepFloor;
            break;
        }
        bool hits_end = false;
        if (state.time + dt >= controls.t_end) {
            dt = controls.t_end - state.time;
            hits_end = true;
        }

        double max_h = 0.0;
        if (controls.scheme == Scheme::Explicit) {
            max_h = explicit_advance(state, dt);
        } else {
            stepper.advance(state, dt);
            max_h = stepper.max_mcv();
        }
        traj.max_dt = std::max(traj.max_dt, dt);
        traj.min_dt = std::min(traj.min_dt, dt);
        ++traj.total_steps;

        if (controls.remesh_every > 0 && state.step_count % controls.remesh_every == 0 &&
            !hits_end) {
            const double area = total_measure(state.surface);
            const double target =
                mean_edge0 * std::pow(area / area0, 1.0 / (2.0 * n));
            state.surface = remesh(state.surface, target);
            state.epoch += 1;
        }

        // Cheap prefilter before the full |A|-based probe: the mean curvature
        // bound covers round-point blowups (where |A| and |H| grow together)
        // with a wide margin, and the volume floor is checked directly.
        const double volume = enclosed_volume(state.surface);
        const bool candidate =
            max_h * diam0 > 0.2 * controls.curvature_blowup ||
            std::abs(volume) < 10.0 * controls.volume_floor * std::abs(vol0);
        const SingularityProbe probe =
            candidate ? detect_singularity(state, diam0, vol0,
                                           controls.curvature_blowup,
                                           controls.volume_floor)
                      : SingularityProbe{};
        if (probe.near_singular) {
            traj.termination = Termination::SingularityDetected;
            traj.singular_time = state.time;
            traj.singular_point = probe.location;
            traj.snapshots.push_back(state);
            return traj;
        }

        if (state.time >= next_snapshot || controls.snapshot_every <= 0.0) {
            traj.snapshots.push_back(state);
            if (controls.snapshot_every > 0.0)
                while (next_snapshot <= state.time) next_snapshot += controls.snapshot_every;
        }

        if (hits_end) {
            traj.termination = Termination::ReachedTime;
            break;
        }
    }

    if (traj.snapshots.back().time < state.time) traj.snapshots.push_back(state);
    return traj;
}

std::vector<std::pair<double, double>> huisken_series(const Trajectory& traj,
                                                      const Eigen::VectorXd& y,
                                                      double tau) {
    std::vector<std::pair<double, double>> series;
    series.reserve(traj.snapshots.size());
    for (const auto& snap : traj.snapshots) {
        if (!(snap.time < tau))
            throw NonpositiveScale("huisken series needs snapshot times < tau");
        series.emplace_back(snap.time,
                            f_functional(snap.surface, GaussianCenter{y, tau - snap.time}));
    }
    return series;
}

PinchingReport pinching_report(const Trajectory& traj) {
    PinchingReport report;
    for (const auto& snap : traj.snapshots) {
        const CurvatureField cf = compute_curvature(snap.surface);
        report.times.push_back(snap.time);
        const bool valid = cf.mean_curvature.minCoeff() > 0.0;
        report.valid.push_back(valid);
        double max_ratio = 0.0;
        for (Eigen::Index i = 0; i < cf.fit_mean_curvature.size(); ++i) {
            const double h2 = cf.fit_mean_curvature(i) * cf.fit_mean_curvature(i);
            if (h2 > 0.0)
                max_ratio = std::max(max_ratio, cf.second_form_norm_sq(i) / h2);
        }
        report.max_ratio.push_back(max_ratio);
        if (valid) report.overall_max = std::max(report.overall_max, max_ratio);
    }
    return report;
}

std::pair<Surface, double> surface_at_time(const Trajectory& traj, double t) {
    const auto& snaps = traj.snapshots;
    if (snaps.empty()) throw OutOfRange("trajectory has no snapshots");
    const double t_first = snaps.front().time, t_last = snaps.back().time;
    const double slack = 1e-12 * std::max(1.0, std::abs(t_last));
    if (t < t_first - slack || t > t_last + slack)
        throw OutOfRange("requested time outside trajectory range");

    // First snapshot with time >= t.
    size_t hi = 0;
    while (hi + 1 < snaps.size() && snaps[hi].time < t) ++hi;
    if (hi == 0 || snaps[hi].time == t) return {snaps[hi].surface, snaps[hi].time};
    const size_t lo = hi - 1;

    const auto& a = snaps[lo];
    const auto& b = snaps[hi];
    if (a.epoch == b.epoch && a.surface.vertices.rows() == b.surface.vertices.rows()) {
        const double w = (t - a.time) / (b.time - a.time);
        Surface interp = a.surface;
        interp.vertices =
            (1.0 - w) * a.surface.vertices + w * b.surface.vertices;
        return {interp, t};
    }
    // No vertex correspondence across a remesh: nearest snapshot.
    const auto& nearest = (t - a.time <= b.time - t) ? a : b;
    return {nearest.surface, nearest.time};
}

}  // namespace entroflow
