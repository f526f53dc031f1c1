#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entroflow/flow.hpp"
#include "entroflow/surface.hpp"

namespace entroflow {

/// Parabolic rescaling M^lambda_s = lambda^{-1} (M_{lambda^2 s + t0} - x0).
/// The snapshot at lambda^2 s + t0 is selected (with interpolation when vertex
/// correspondence exists). Throws OutOfRange when the time leaves the
/// trajectory's snapshot range.
Surface parabolic_rescale(const Trajectory& traj, const Eigen::VectorXd& x0,
                          double t0, double lambda, double s);

struct DensityEstimate {
    double value = 0.0;  // extrapolated Gaussian density Theta
    std::vector<std::pair<double, double>> samples;  // (t, \int Phi) pairs
    double extrapolation_error = 0.0;
};

/// Gaussian density Theta(M_t, x0, t0) = lim_{t -> t0} \int Phi_{(x0,t0)}:
/// evaluates the integral at the requested times and Richardson-extrapolates
/// the last >= 3 samples linearly in (t0 - t). The error estimate is the
/// difference between the two finest extrapolants.
/// Throws InsufficientSamples when fewer than 3 samples are usable.
DensityEstimate gaussian_density(const Trajectory& traj, const Eigen::VectorXd& x0,
                                 double t0, const std::vector<double>& times);

enum class ShrinkerClass { Plane, Sphere, Cylinder, Unknown };

std::string to_string(ShrinkerClass c);

struct ShrinkerReport {
    Eigen::VectorXd residual;  // per vertex: H - <X, nu> / 2
    double l2_residual = 0.0;  // area-weighted RMS
    double linf_residual = 0.0;
    ShrinkerClass classification = ShrinkerClass::Unknown;
    double fit_error = 0.0;            // relative geometric error of the winner
    double plane_error = 0.0;          // raw fit errors, always reported
    double sphere_error = 0.0;
    double cylinder_error = 0.0;       // n = 2 only; +inf for polygons
    double radius = 0.0;               // sphere/cylinder radius
    Eigen::VectorXd axis;              // cylinder axis (n = 2)
    double shrinker_radius_deviation = 0.0;  // |radius - sqrt(2k)| / sqrt(2k)
};

/// Self-shrinker residual H - <X, nu>/2 with least-squares classification
/// against plane, sphere and (n = 2) circular-cylinder models. The best fit
/// wins when its relative geometric error is below `fit_threshold`; raw fit
/// errors are always reported.
ShrinkerReport shrinker_residual(const Surface& s, double fit_threshold = 2e-2);

struct RescaleSequence {
    Eigen::VectorXd center;
    double singular_time = 0.0;
    std::vector<double> scales;            // lambda_j, strictly decreasing
    std::vector<Surface> rescaled;         // M^j_{-1}
    std::vector<double> pairwise_hausdorff;  // d(M^j, M^{j+1})
    std::vector<ShrinkerReport> reports;     // shrinker residual per scale
    // Self-similarity check d(sqrt(2) M^j_{-1}, M^j_{-2}); NaN where s = -2
    // leaves the trajectory.
    std::vector<double> self_similarity;
};

/// Tangent-flow extraction at (x0, t0): dyadic scales
/// lambda_j = 2^{-j} sqrt(t0 - t_mid) (t_mid the midpoint between the first
/// snapshot time and t0), rescaled slices at s = -1, pairwise Hausdorff
/// distances, shrinker residuals, and the self-similarity check at s = -2.
RescaleSequence tangent_flow_extract(const Trajectory& traj,
                                     const Eigen::VectorXd& x0, double t0,
                                     int scale_count);

}  // namespace entroflow
