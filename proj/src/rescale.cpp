#include "entroflow/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "entroflow/curvature.hpp"
#include "entroflow/gaussian.hpp"
#include "entroflow/hausdorff.hpp"

namespace entroflow {

std::string to_string(ShrinkerClass c) {
    switch (c) {
        case ShrinkerClass::Plane: return "Plane";
        case ShrinkerClass::Sphere: return "Sphere";
        case ShrinkerClass::Cylinder: return "Cylinder";
        case ShrinkerClass::Unknown: return "Unknown";
    }
    return "Unknown";
}

Surface parabolic_rescale(const Trajectory& traj, const Eigen::VectorXd& x0,
                          double t0, double lambda, double s) {
    if (!(lambda > 0.0)) throw Error("rescale factor must be positive");
    auto [surface, t_actual] = surface_at_time(traj, lambda * lambda * s + t0);
    (void)t_actual;
    surface.vertices.rowwise() -= x0.transpose();
    surface.vertices /= lambda;
    return surface;
}

DensityEstimate gaussian_density(const Trajectory& traj, const Eigen::VectorXd& x0,
                                 double t0, const std::vector<double>& times) {
    std::map<double, double> samples;  // actual snapshot time -> integral
    for (double t : times) {
        if (!(t < t0)) continue;
        try {
            const auto [surface, t_actual] = surface_at_time(traj, t);
            if (!(t_actual < t0)) continue;
            samples[t_actual] =
                f_functional(surface, GaussianCenter{x0, t0 - t_actual});
        } catch (const OutOfRange&) {
            continue;  // unusable sample
        }
    }
    if (samples.size() < 3)
        throw InsufficientSamples("gaussian density needs >= 3 usable times");

    DensityEstimate est;
    est.samples.assign(samples.begin(), samples.end());

    // Richardson extrapolation, first order in h = t0 - t: for consecutive
    // samples, E = F2 + (F2 - F1) * h2 / (h1 - h2).
    std::vector<double> extrapolants;
    for (size_t i = 1; i < est.samples.size(); ++i) {
        const double h1 = t0 - est.samples[i - 1].first;
        const double h2 = t0 - est.samples[i].first;
        const double f1 = est.samples[i - 1].second;
        const double f2 = est.samples[i].second;
        extrapolants.push_back(f2 + (f2 - f1) * h2 / (h1 - h2));
    }
    est.value = extrapolants.back();
    est.extrapolation_error =
        std::abs(extrapolants.back() - extrapolants[extrapolants.size() - 2]);
    return est;
}

namespace {

struct Fit {
    double error = std::numeric_limits<double>::infinity();
    double radius = 0.0;
    Eigen::VectorXd axis;
};

Fit fit_plane(const Eigen::MatrixXd& pts, double diam) {
    const Eigen::RowVectorXd mean = pts.colwise().mean();
    const Eigen::MatrixXd centered = pts.rowwise() - mean;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centered.transpose() * centered /
                                                       pts.rows());
    const Eigen::VectorXd normal = eig.eigenvectors().col(0);
    Fit fit;
    fit.error = std::sqrt((centered * normal).squaredNorm() / pts.rows()) / diam;
    fit.axis = normal;
    return fit;
}

Fit fit_sphere(const Eigen::MatrixXd& pts, double diam) {
    // Algebraic fit: |x|^2 = 2 c.x + rho, linear in (c, rho).
    const Eigen::Index m = pts.rows(), d = pts.cols();
    Eigen::MatrixXd a(m, d + 1);
    a.leftCols(d) = 2.0 * pts;
    a.col(d).setOnes();
    const Eigen::VectorXd b = pts.rowwise().squaredNorm();
    const Eigen::VectorXd sol = (a.transpose() * a).ldlt().solve(a.transpose() * b);
    const Eigen::VectorXd center = sol.head(d);
    const double r2 = sol(d) + center.squaredNorm();
    Fit fit;
    if (!(r2 > 0.0)) return fit;
    fit.radius = std::sqrt(r2);
    if (fit.radius > 100.0 * diam) return fit;  // degenerate: effectively a plane
    const Eigen::VectorXd dist = (pts.rowwise() - center.transpose()).rowwise().norm();
    fit.error = std::sqrt((dist.array() - fit.radius).square().mean()) / fit.radius;
    return fit;
}

Fit fit_cylinder(const Eigen::MatrixXd& pts, double diam) {
    // Axis from PCA (largest-variance direction), then a radial circle fit in
    // the orthogonal plane.
    const Eigen::RowVectorXd mean = pts.colwise().mean();
    const Eigen::MatrixXd centered = pts.rowwise() - mean;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(centered.transpose() * centered /
                                                       pts.rows());
    const Eigen::VectorXd axis = eig.eigenvectors().col(pts.cols() - 1);

    // Orthonormal frame of the cross-section plane.
    Eigen::Vector3d az = axis;
    const Eigen::Vector3d u = az.unitOrthogonal();
    const Eigen::Vector3d w = az.cross(u);
    Eigen::MatrixXd plane(pts.rows(), 2);
    plane.col(0) = centered * u;
    plane.col(1) = centered * w;

    Fit circle = fit_sphere(plane, diam);
    Fit fit;
    if (!std::isfinite(circle.error)) return fit;
    fit.error = circle.error;
    fit.radius = circle.radius;
    fit.axis = axis;
    return fit;
}

}  // namespace

ShrinkerReport shrinker_residual(const Surface& s, double fit_threshold) {
    const CurvatureField cf = compute_curvature(s);
    const Eigen::Index v = s.vertices.rows();

    ShrinkerReport report;
    report.residual.resize(v);
    for (Eigen::Index i = 0; i < v; ++i)
        report.residual(i) =
            cf.mean_curvature(i) -
            0.5 * s.vertices.row(i).dot(cf.normal.row(i));

    const double total_area = cf.vertex_area.sum();
    report.l2_residual = std::sqrt(
        (cf.vertex_area.array() * report.residual.array().square()).sum() / total_area);
    report.linf_residual = report.residual.cwiseAbs().maxCoeff();

    const double diam = diameter(s);
    const Fit plane = fit_plane(s.vertices, diam);
    const Fit sphere = fit_sphere(s.vertices, diam);
    const Fit cylinder =
        s.dim == 2 ? fit_cylinder(s.vertices, diam) : Fit{};

    report.plane_error = plane.error;
    report.sphere_error = sphere.error;
    report.cylinder_error = cylinder.error;

    report.classification = ShrinkerClass::Unknown;
    report.fit_error = std::min({plane.error, sphere.error, cylinder.error});
    if (report.fit_error < fit_threshold) {
        if (plane.error == report.fit_error) {
            report.classification = ShrinkerClass::Plane;
        } else if (sphere.error == report.fit_error) {
            report.classification = ShrinkerClass::Sphere;
            report.radius = sphere.radius;
        } else {
            report.classification = ShrinkerClass::Cylinder;
            report.radius = cylinder.radius;
            report.axis = cylinder.axis;
        }
    }

    // Shrinker labeling: the round S^k factor of a shrinker has radius
    // sqrt(2k); k = n for spheres, n - 1 for cylinders.
    if (report.classification == ShrinkerClass::Sphere ||
        report.classification == ShrinkerClass::Cylinder) {
        const int k = report.classification == ShrinkerClass::Sphere ? s.dim : s.dim - 1;
        if (k >= 1) {
            const double target = std::sqrt(2.0 * k);
            report.shrinker_radius_deviation = std::abs(report.radius - target) / target;
        }
    }
    return report;
}

RescaleSequence tangent_flow_extract(const Trajectory& traj, const Eigen::VectorXd& x0,
                                     double t0, int scale_count) {
    if (scale_count < 3) throw Error("tangent flow extraction needs >= 3 scales");
    RescaleSequence seq;
    seq.center = x0;
    seq.singular_time = t0;

    const double t_first = traj.snapshots.front().time;
    const double t_mid = 0.5 * (t_first + t0);
    const double lambda_base = std::sqrt(t0 - t_mid);

    for (int j = 0; j < scale_count; ++j) {
        const double lambda = std::ldexp(lambda_base, -j);
        seq.scales.push_back(lambda);
        seq.rescaled.push_back(parabolic_rescale(traj, x0, t0, lambda, -1.0));
        seq.reports.push_back(shrinker_residual(seq.rescaled.back()));
        double self_sim = std::numeric_limits<double>::quiet_NaN();
        try {
            const Surface at_s2 = parabolic_rescale(traj, x0, t0, lambda, -2.0);
            Surface doubled = seq.rescaled.back();
            doubled.vertices *= std::sqrt(2.0);
            self_sim = hausdorff_distance(doubled, at_s2);
        } catch (const OutOfRange&) {
            // s = -2 precedes the trajectory at this scale.
        }
        seq.self_similarity.push_back(self_sim);
    }
    for (int j = 0; j + 1 < scale_count; ++j)
        seq.pairwise_hausdorff.push_back(
            hausdorff_distance(seq.rescaled[j], seq.rescaled[j + 1]));
    return seq;
}

}  // namespace entroflow
