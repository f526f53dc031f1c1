#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "entroflow/entropy.hpp"
#include "entroflow/flow.hpp"
#include "entroflow/gaussian.hpp"
#include "entroflow/hausdorff.hpp"
#include "entroflow/rescale.hpp"
#include "entroflow/shapes.hpp"

using namespace entroflow;

namespace {

// Unit-circle flow into the detected singularity, densely snapshotted and
// without remeshing so every pair of snapshots interpolates.
const Trajectory& circle_traj() {
    static const Trajectory traj = [] {
        FlowControls controls;
        controls.t_end = 0.6;
        controls.cfl = 0.5;
        controls.snapshot_every = 5e-4;
        return run_flow(make_circle(1.0, 256), controls);
    }();
    return traj;
}

// Round-sphere flow (R0 = 1, T = 1/4) into the detected singularity.
const Trajectory& sphere_traj() {
    static const Trajectory traj = [] {
        FlowControls controls;
        controls.t_end = 0.3;
        controls.cfl = 0.5;
        controls.snapshot_every = 2.5e-4;
        return run_flow(make_icosphere(1.0, 3), controls);
    }();
    return traj;
}

Surface make_open_cylinder(double radius, double half_length, int angular, int axial) {
    Surface s;
    s.dim = 2;
    s.vertices.resize(angular * (axial + 1), 3);
    for (int j = 0; j <= axial; ++j) {
        const double z = -half_length + 2.0 * half_length * j / axial;
        for (int i = 0; i < angular; ++i) {
            const double a = 2.0 * M_PI * i / angular;
            s.vertices.row(j * angular + i) << radius * std::cos(a),
                radius * std::sin(a), z;
        }
    }
    std::vector<Eigen::Vector3i> faces;
    for (int j = 0; j < axial; ++j) {
        for (int i = 0; i < angular; ++i) {
            const int a = j * angular + i;
            const int b = j * angular + (i + 1) % angular;
            const int c = a + angular;
            const int d = b + angular;
            faces.emplace_back(a, b, d);
            faces.emplace_back(a, d, c);
        }
    }
    s.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
    for (size_t f = 0; f < faces.size(); ++f)
        s.faces.row(static_cast<Eigen::Index>(f)) = faces[f].transpose();
    return s;
}

}  // namespace

TEST_CASE("parabolic rescale with lambda = 1 selects the plain snapshot") {
    const Trajectory& traj = circle_traj();
    const auto& snaps = traj.snapshots;
    const double t0 = snaps.back().time;
    const double delta = t0 - snaps[snaps.size() - 2].time;
    const Surface s =
        parabolic_rescale(traj, Eigen::Vector2d::Zero(), t0, 1.0, -delta);
    CHECK(s.vertices == snaps[snaps.size() - 2].surface.vertices);
}

TEST_CASE("rescaled shrinking circle at s = -1 is the sqrt(2) circle") {
    const Trajectory& traj = circle_traj();
    for (double lambda : {0.5, 0.25, 0.1}) {
        const Surface resc =
            parabolic_rescale(traj, Eigen::Vector2d::Zero(), 0.5, lambda, -1.0);
        const double r = resc.vertices.rowwise().norm().mean();
        CHECK(std::abs(r - std::sqrt(2.0)) < 2e-3);
    }
    CHECK_THROWS_AS(
        parabolic_rescale(circle_traj(), Eigen::Vector2d::Zero(), 0.5, 1.0, -2.0),
        OutOfRange);
}

TEST_CASE("rescaling scales curvature by lambda") {
    const Trajectory& traj = circle_traj();
    const double t0 = 0.5;
    const double lambda = 0.3;
    // Pick s so the requested time lands exactly on a snapshot.
    const auto& snap = traj.snapshots[200];
    const double s_par = (snap.time - t0) / (lambda * lambda);
    const Surface resc =
        parabolic_rescale(traj, Eigen::Vector2d::Zero(), t0, lambda, s_par);
    const CurvatureField orig = compute_curvature(snap.surface);
    const CurvatureField scaled = compute_curvature(resc);
    CHECK((scaled.mean_curvature * (1.0 / lambda) - orig.mean_curvature)
              .cwiseAbs()
              .maxCoeff() < 1e-9);
}

TEST_CASE("rescaling covariance of the F-functional") {
    const Trajectory& traj = circle_traj();
    const double t0 = 0.5;
    Eigen::Vector2d x0(0.05, -0.02);
    for (double lambda : {0.7, 0.2}) {
        const auto& snap = traj.snapshots[150];
        const double s_par = (snap.time - t0) / (lambda * lambda);
        const Surface resc = parabolic_rescale(traj, x0, t0, lambda, s_par);
        const double left = f_functional(resc, {Eigen::VectorXd::Zero(2), 1.0});
        const double right = f_functional(snap.surface, {x0, lambda * lambda});
        CHECK(std::abs(left - right) < 1e-8);
    }
}

TEST_CASE("gaussian density at singular, regular, and unreached points") {
    const Trajectory& traj = circle_traj();

    // Singular point of the shrinking circle.
    const DensityEstimate singular = gaussian_density(
        traj, Eigen::Vector2d::Zero(), 0.5, {0.3, 0.4, 0.45, 0.475, 0.4875});
    CHECK(std::abs(singular.value - std::sqrt(2.0 * M_PI / M_E)) < 5e-3);
    CHECK(singular.value >= 1.0 - singular.extrapolation_error - 0.05);
    for (size_t i = 1; i < singular.samples.size(); ++i)
        CHECK(singular.samples[i].first > singular.samples[i - 1].first);

    // Regular point: on the circle at time 0.2.
    const double r02 = std::sqrt(1.0 - 2.0 * 0.2);
    const DensityEstimate regular =
        gaussian_density(traj, Eigen::Vector2d(r02, 0.0), 0.2,
                         {0.12, 0.16, 0.18, 0.19, 0.195});
    CHECK(std::abs(regular.value - 1.0) < 2e-2);
    CHECK(regular.value >= 1.0 - regular.extrapolation_error - 0.05);

    // A point the flow never reaches.
    const DensityEstimate unreached = gaussian_density(
        traj, Eigen::Vector2d(2.0, 0.0), 0.3, {0.1, 0.2, 0.25, 0.28});
    CHECK(unreached.value <= 1e-3);

    CHECK_THROWS_AS(
        gaussian_density(traj, Eigen::Vector2d::Zero(), 0.5, {0.3, 0.4}),
        InsufficientSamples);
    CHECK_THROWS_AS(
        gaussian_density(traj, Eigen::Vector2d::Zero(), 0.5, {0.9, 1.0, 1.1}),
        InsufficientSamples);
}

TEST_CASE("density never exceeds the initial entropy") {
    const Trajectory& traj = circle_traj();
    const double lambda0 = entropy(traj.front().surface).lambda;
    const DensityEstimate singular = gaussian_density(
        traj, Eigen::Vector2d::Zero(), 0.5, {0.3, 0.4, 0.45, 0.475});
    CHECK(singular.value <= lambda0 + 2e-3);
    const DensityEstimate off = gaussian_density(
        traj, Eigen::Vector2d(0.3, 0.1), 0.4, {0.2, 0.3, 0.35, 0.38});
    CHECK(off.value <= lambda0 + 2e-3);
}

TEST_CASE("density at the shrinking-sphere singularity equals the Stone value") {
    const Trajectory& traj = sphere_traj();  // T = 1/4
    const DensityEstimate est = gaussian_density(
        traj, Eigen::Vector3d::Zero(), 0.25, {0.15, 0.2, 0.225, 0.2375, 0.24375});
    CHECK(std::abs(est.value - stone_entropy(2)) < 5e-3);
}

TEST_CASE("shrinker residual of discrete shrinkers") {
    const Surface circle = make_circle(std::sqrt(2.0), 4096);
    const ShrinkerReport rc = shrinker_residual(circle);
    CHECK(rc.linf_residual <= 2e-3);
    CHECK(rc.classification == ShrinkerClass::Sphere);
    CHECK(rc.radius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(rc.shrinker_radius_deviation < 1e-6);
    CHECK(rc.l2_residual <= rc.linf_residual);

    const Surface sphere = make_icosphere(2.0, 4);
    const ShrinkerReport rs = shrinker_residual(sphere);
    CHECK(rs.linf_residual <= 5e-2);
    CHECK(rs.classification == ShrinkerClass::Sphere);
    CHECK(rs.radius == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(rs.l2_residual <= rs.linf_residual);
}

TEST_CASE("unit circle misses the shrinker equation by exactly one half") {
    const Surface circle = make_circle(1.0, 1024);
    const ShrinkerReport r = shrinker_residual(circle);
    for (Eigen::Index i = 0; i < r.residual.size(); ++i)
        CHECK(r.residual(i) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(r.l2_residual == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(r.classification == ShrinkerClass::Sphere);
    CHECK(r.radius == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.shrinker_radius_deviation == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0))
                                             .epsilon(1e-4));
}

TEST_CASE("classification distinguishes planes and cylinders") {
    const Surface disk = make_planar_disk(2.0, 10);
    const ShrinkerReport rp = shrinker_residual(disk);
    CHECK(rp.classification == ShrinkerClass::Plane);
    CHECK(rp.plane_error < 1e-10);

    const Surface cyl = make_open_cylinder(1.2, 2.5, 64, 40);
    const ShrinkerReport rc = shrinker_residual(cyl);
    CHECK(rc.classification == ShrinkerClass::Cylinder);
    CHECK(rc.radius == doctest::Approx(1.2).epsilon(1e-3));
    CHECK(std::abs(rc.axis.normalized()(2)) == doctest::Approx(1.0).epsilon(1e-6));

    // A generic ellipsoid fits none of the models at the 2e-2 threshold.
    const ShrinkerReport re = shrinker_residual(make_ellipsoid({2.0, 1.0, 1.0}, 3));
    CHECK(re.classification == ShrinkerClass::Unknown);
    CHECK(re.fit_error >= 2e-2);
}

TEST_CASE("sphere shrinker residual decays at least linearly under refinement") {
    double prev = -1.0, prev_h = 0.0;
    for (int level : {2, 3, 4}) {
        const Surface sphere = make_icosphere(2.0, level);
        const ShrinkerReport r = shrinker_residual(sphere);
        const double h = mean_edge_length(sphere);
        if (prev > 0.0) {
            const double rate = std::log(prev / r.linf_residual) / std::log(prev_h / h);
            CHECK(rate >= 1.0);
        }
        prev = r.linf_residual;
        prev_h = h;
    }
    // n = 1: the circumcircle formula is exact on regular polygons, so the
    // sqrt(2)-circle residual is roundoff at any resolution.
    for (int m : {256, 512, 1024})
        CHECK(shrinker_residual(make_circle(std::sqrt(2.0), m)).linf_residual < 1e-12);
}

TEST_CASE("tangent flow of the shrinking circle is the sqrt(2) circle") {
    const Trajectory& traj = circle_traj();
    const RescaleSequence seq =
        tangent_flow_extract(traj, Eigen::Vector2d::Zero(), 0.5, 4);
    REQUIRE(seq.rescaled.size() == 4);

    const Surface limit = make_circle(std::sqrt(2.0), 4096);
    double prev_dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 4; ++j) {
        CHECK(seq.scales[j] == doctest::Approx(0.5 * std::pow(2.0, -j)));
        const double dist = hausdorff_distance(seq.rescaled[j], limit);
        CHECK(dist < 5e-3);
        CHECK(dist <= prev_dist + 1e-3);  // non-increasing along the sequence
        prev_dist = dist;
        CHECK(seq.reports[j].linf_residual <= 1e-2);
        if (!std::isnan(seq.self_similarity[j]))
            CHECK(seq.self_similarity[j] <= 2.0 * dist + 1e-2);
    }
    for (double d : seq.pairwise_hausdorff) CHECK(d < 1e-2);

    CHECK_THROWS_AS(tangent_flow_extract(traj, Eigen::Vector2d::Zero(), 0.5, 2),
                    Error);
}

TEST_CASE("tangent flow of a shrinking sphere classifies as the round shrinker") {
    const Trajectory& traj = sphere_traj();
    REQUIRE(traj.termination == Termination::SingularityDetected);
    REQUIRE(traj.singular_point.has_value());
    const double t0 = 0.25;
    const RescaleSequence seq =
        tangent_flow_extract(traj, *traj.singular_point, t0, 3);
    for (int j = 0; j < 3; ++j) {
        CHECK(seq.reports[j].classification == ShrinkerClass::Sphere);
        CHECK(seq.reports[j].radius == doctest::Approx(2.0).epsilon(2.5e-2));
    }
    // Residuals do not grow toward the finer scales.
    CHECK(seq.reports.back().linf_residual <=
          seq.reports.front().linf_residual + 1e-2);
}
