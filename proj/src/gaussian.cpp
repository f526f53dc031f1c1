#include "entroflow/gaussian.hpp"

#include <cmath>

#include <Eigen/Geometry>

namespace entroflow {

double phi_kernel(const Eigen::VectorXd& x, double t, int n) {
    if (!(t > 0.0)) throw NonpositiveScale("phi kernel needs t > 0");
    return std::pow(4.0 * M_PI * t, -0.5 * n) * std::exp(-x.squaredNorm() / (4.0 * t));
}

double ecker_cutoff(const Eigen::VectorXd& x, double t, const CutoffSpec& spec, int n) {
    if (!(spec.rho > 0.0)) throw Error("cutoff radius must be positive");
    const double u = 1.0 - ((x - spec.x0).squaredNorm() + 2.0 * n * (t - spec.t0)) /
                               (spec.rho * spec.rho);
    return u > 0.0 ? u * u * u : 0.0;
}

SurfaceQuadrature build_quadrature(const Surface& s) {
    SurfaceQuadrature q;
    q.dim = s.dim;
    if (s.dim == 1) {
        // 2-point Gauss-Legendre per segment.
        const Eigen::Index v = s.vertices.rows();
        q.nodes.resize(2 * v, 2);
        q.weights.resize(2 * v);
        const double offset = 0.5 / std::sqrt(3.0);
        for (Eigen::Index i = 0; i < v; ++i) {
            const Eigen::RowVector2d a = s.vertices.row(i);
            const Eigen::RowVector2d b = s.vertices.row((i + 1) % v);
            const double len = (b - a).norm();
            q.nodes.row(2 * i) = a + (0.5 - offset) * (b - a);
            q.nodes.row(2 * i + 1) = a + (0.5 + offset) * (b - a);
            q.weights(2 * i) = 0.5 * len;
            q.weights(2 * i + 1) = 0.5 * len;
        }
    } else {
        // 3-point mid-edge rule per triangle (exact for quadratics).
        const Eigen::Index nf = s.faces.rows();
        q.nodes.resize(3 * nf, 3);
        q.weights.resize(3 * nf);
        for (Eigen::Index f = 0; f < nf; ++f) {
            const Eigen::RowVector3d a = s.vertices.row(s.faces(f, 0));
            const Eigen::RowVector3d b = s.vertices.row(s.faces(f, 1));
            const Eigen::RowVector3d c = s.vertices.row(s.faces(f, 2));
            const double area = 0.5 * (b - a).cross(c - a).norm();
            q.nodes.row(3 * f) = 0.5 * (a + b);
            q.nodes.row(3 * f + 1) = 0.5 * (b + c);
            q.nodes.row(3 * f + 2) = 0.5 * (c + a);
            q.weights.segment<3>(3 * f).setConstant(area / 3.0);
        }
    }
    return q;
}

namespace {

void check_center(const SurfaceQuadrature& q, const GaussianCenter& g) {
    if (!(g.t0 > 0.0)) throw NonpositiveScale("Gaussian scale t0 must be positive");
    if (g.x0.size() != q.nodes.cols())
        throw DimensionMismatch("Gaussian center dimension does not match surface");
}

}  // namespace

double f_functional(const SurfaceQuadrature& q, const GaussianCenter& g) {
    check_center(q, g);
    const double inv4t = 1.0 / (4.0 * g.t0);
    const Eigen::ArrayXd r2 =
        (q.nodes.rowwise() - g.x0.transpose()).rowwise().squaredNorm().array();
    const double prefactor = std::pow(4.0 * M_PI * g.t0, -0.5 * q.dim);
    return prefactor * ((-r2 * inv4t).exp() * q.weights.array()).sum();
}

double f_functional(const Surface& s, const GaussianCenter& g) {
    return f_functional(build_quadrature(s), g);
}

FGradient f_gradient(const SurfaceQuadrature& q, const GaussianCenter& g) {
    check_center(q, g);
    const double inv4t = 1.0 / (4.0 * g.t0);
    const Eigen::MatrixXd diff = q.nodes.rowwise() - g.x0.transpose();
    const Eigen::ArrayXd r2 = diff.rowwise().squaredNorm().array();
    const double prefactor = std::pow(4.0 * M_PI * g.t0, -0.5 * q.dim);
    const Eigen::ArrayXd density =
        prefactor * (-r2 * inv4t).exp() * q.weights.array();

    FGradient out;
    out.value = density.sum();
    // d/dx0 exp(-|x-x0|^2/4t0) pulls down (x - x0) / (2 t0).
    out.d_x0 = diff.transpose() * density.matrix() / (2.0 * g.t0);
    // d/d(log t0): t0 d/dt0 of each term gives (r^2 / 4t0 - n/2).
    out.d_log_t0 = (density * (r2 * inv4t - 0.5 * q.dim)).sum();
    return out;
}

FGradient f_gradient(const Surface& s, const GaussianCenter& g) {
    return f_gradient(build_quadrature(s), g);
}

double localized_f(const SurfaceQuadrature& q, const GaussianCenter& g, double t,
                   const CutoffSpec& spec) {
    if (!(g.t0 - t > 0.0)) throw NonpositiveScale("localized F needs t < t0");
    const int n = q.dim;
    const double scale = g.t0 - t;
    const double inv4t = 1.0 / (4.0 * scale);
    const double prefactor = std::pow(4.0 * M_PI * scale, -0.5 * n);
    const double inv_rho2 = 1.0 / (spec.rho * spec.rho);

    const Eigen::ArrayXd r2_phi =
        (q.nodes.rowwise() - g.x0.transpose()).rowwise().squaredNorm().array();
    const Eigen::ArrayXd r2_cut =
        (q.nodes.rowwise() - spec.x0.transpose()).rowwise().squaredNorm().array();
    const Eigen::ArrayXd u =
        (1.0 - (r2_cut + 2.0 * n * (t - spec.t0)) * inv_rho2).max(0.0);
    return prefactor *
           ((-r2_phi * inv4t).exp() * u.cube() * q.weights.array()).sum();
}

double localized_f(const Surface& s, const GaussianCenter& g, double t,
                   const CutoffSpec& spec) {
    return localized_f(build_quadrature(s), g, t, spec);
}

double unit_sphere_area(int k) {
    if (k < 0) throw UnsupportedIndex("sphere index must be >= 0");
    // omega_k = 2 pi^{(k+1)/2} / Gamma((k+1)/2)
    return 2.0 * std::pow(M_PI, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

double stone_entropy(int k) {
    if (k < 1)
        throw UnsupportedIndex(
            "stone_entropy starts at S^1; the flat factor is kFlatEntropy");
    return unit_sphere_area(k) * std::pow(k / (2.0 * M_PI), 0.5 * k) *
           std::exp(-0.5 * k);
}

std::pair<double, double> cylinder_product_check(int k, double truncation_radius) {
    if (k != 1 && k != 2) throw UnsupportedIndex("cylinder check supports k in {1, 2}");
    if (!(truncation_radius > 0.0)) throw Error("truncation radius must be positive");
    const int n = k + 1;  // dimension of S^k x R
    const double L = truncation_radius;
    const double radius = std::sqrt(2.0 * k);

    // Spherical factor: the integrand is constant on S^k(sqrt(2k)), so the
    // factor is the geometric area times e^{-k/2}. Areas from elementary
    // geometry, independent of the Gamma-function closed form.
    const double sphere_area =
        k == 1 ? 2.0 * M_PI * radius : 4.0 * M_PI * radius * radius;
    const double sphere_factor = sphere_area * std::exp(-0.5 * k);

    // Axial factor by composite 8-point Gauss-Legendre quadrature of
    // exp(-z^2/4) over [-L, L].
    static const double gl_x[4] = {0.1834346424956498, 0.5255324099163290,
                                   0.7966664774136267, 0.9602898564975363};
    static const double gl_w[4] = {0.3626837833783620, 0.3137066458778873,
                                   0.2223810344533745, 0.1012285362903763};
    const int panels = 64;
    double axial = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double z0 = -L + 2.0 * L * p / panels;
        const double z1 = -L + 2.0 * L * (p + 1) / panels;
        const double mid = 0.5 * (z0 + z1), half = 0.5 * (z1 - z0);
        for (int i = 0; i < 4; ++i) {
            for (double sgn : {-1.0, 1.0}) {
                const double z = mid + sgn * half * gl_x[i];
                axial += half * gl_w[i] * std::exp(-z * z / 4.0);
            }
        }
    }

    const double prefactor = std::pow(4.0 * M_PI, -0.5 * n);
    const double value = prefactor * sphere_factor * axial;
    // Discarded tail: 2 \int_L^inf e^{-z^2/4} dz = 2 sqrt(pi) erfc(L/2).
    const double bound =
        prefactor * sphere_factor * 2.0 * std::sqrt(M_PI) * std::erfc(0.5 * L);
    return {value, bound};
}

}  // namespace entroflow
