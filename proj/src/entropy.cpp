#include "entroflow/entropy.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "entroflow/parallel.hpp"

namespace entroflow {

namespace {

struct StartResult {
    double value = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd x0;
    double t0 = 1.0;
    bool converged = false;
    double gradient_norm = std::numeric_limits<double>::infinity();
    bool diverged = false;
};

// BFGS ascent on (x0, log t0) with Armijo backtracking.
StartResult ascend(const SurfaceQuadrature& quad, Eigen::VectorXd x0, double t0,
                   double t0_floor, const EntropyOptions& opts) {
    const int d = static_cast<int>(x0.size());
    const int dim = d + 1;

    Eigen::VectorXd p(dim);
    p.head(d) = x0;
    p(d) = std::log(t0);

    auto eval = [&](const Eigen::VectorXd& point, Eigen::VectorXd& grad) {
        const GaussianCenter g{point.head(d), std::exp(point(d))};
        const FGradient fg = f_gradient(quad, g);
        grad.resize(dim);
        grad.head(d) = fg.d_x0;
        grad(d) = fg.d_log_t0;
        return fg.value;
    };

    Eigen::VectorXd grad(dim);
    double value = eval(p, grad);
    StartResult res;
    if (!std::isfinite(value) || !grad.allFinite()) {
        res.diverged = true;
        return res;
    }

    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(dim, dim);
    int iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        if (grad.norm() < opts.gradient_tol) break;

        Eigen::VectorXd dir = hinv * grad;  // ascent direction
        if (dir.dot(grad) <= 0.0) dir = grad;

        double alpha = 1.0;
        Eigen::VectorXd p_new;
        Eigen::VectorXd grad_new(dim);
        double value_new = value;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            p_new = p + alpha * dir;
            if (std::exp(p_new(dim - 1)) < t0_floor) {
                alpha *= 0.5;
                continue;
            }
            value_new = eval(p_new, grad_new);
            if (std::isfinite(value_new) && grad_new.allFinite() &&
                value_new >= value + 1e-4 * alpha * dir.dot(grad)) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;  // line search exhausted; keep the best point

        const Eigen::VectorXd s = p_new - p;
        const Eigen::VectorXd y = grad_new - grad;  // gradient of F, ascent form
        const double sy = -s.dot(y);                // descent-form curvature s.(-y)
        if (sy > 1e-12 * s.norm() * y.norm()) {
            // Standard BFGS inverse update on the negated gradient.
            const Eigen::VectorXd ym = -y;
            const Eigen::MatrixXd outer =
                (Eigen::MatrixXd::Identity(dim, dim) - s * ym.transpose() / sy);
            hinv = outer * hinv * outer.transpose() + s * s.transpose() / sy;
        }
        p = p_new;
        grad = grad_new;
        value = value_new;
    }

    res.value = value;
    res.x0 = p.head(d);
    res.t0 = std::exp(p(d));
    res.gradient_norm = grad.norm();
    res.converged = res.gradient_norm < opts.gradient_tol;
    return res;
}

}  // namespace

EntropyResult entropy(const Surface& s, const EntropyOptions& opts) {
    const SurfaceQuadrature quad = build_quadrature(s);
    const double diam = diameter(s);
    const double t0_floor = 1e-12 * diam * diam;
    const Eigen::Index v = s.vertices.rows();

    // Deterministic start centers: centroid plus vertex_starts vertices,
    // evenly indexed unless a seed requests a random sample.
    std::vector<Eigen::VectorXd> centers;
    centers.push_back(centroid(s));
    const int k = static_cast<int>(std::min<Eigen::Index>(opts.vertex_starts, v));
    if (opts.seed == 0) {
        for (int i = 0; i < k; ++i)
            centers.push_back(
                s.vertices.row((static_cast<Eigen::Index>(i) * v) / k).transpose());
    } else {
        std::mt19937_64 rng(opts.seed);
        std::uniform_int_distribution<Eigen::Index> pick(0, v - 1);
        for (int i = 0; i < k; ++i)
            centers.push_back(s.vertices.row(pick(rng)).transpose());
    }

    std::vector<std::pair<Eigen::VectorXd, double>> starts;
    for (const auto& c : centers)
        for (double f : opts.scale_factors) starts.emplace_back(c, (diam * f) * (diam * f));

    std::vector<StartResult> results(starts.size());
    parallel_for(starts.size(), [&](size_t i) {
        results[i] = ascend(quad, starts[i].first, starts[i].second, t0_floor, opts);
    });

    for (const auto& r : results)
        if (r.diverged) throw OptimizerDiverged("entropy iterate became non-finite");

    // Deterministic reduction: strict improvement only, so ties go to the
    // smallest start index.
    size_t best = 0;
    for (size_t i = 1; i < results.size(); ++i)
        if (results[i].value > results[best].value) best = i;

    EntropyResult out;
    out.lambda = results[best].value;
    out.argmax = GaussianCenter{results[best].x0, results[best].t0};
    out.starts_tried = static_cast<int>(starts.size());
    out.converged = results[best].converged;
    out.best_gradient_norm = results[best].gradient_norm;
    return out;
}

}  // namespace entroflow
