#pragma once

#include <utility>

#include <Eigen/Core>

#include "entroflow/surface.hpp"

namespace entroflow {

/// Entropy of the flat factor: lambda(R^n) = 1. Kept as a named constant; the
/// closed-form chain stone_entropy(k) starts at k = 1.
inline constexpr double kFlatEntropy = 1.0;

/// A Gaussian center: spatial point x0 and scale t0 > 0 (length^2 units).
struct GaussianCenter {
    Eigen::VectorXd x0;
    double t0 = 1.0;
};

/// Space-time cutoff parameters for the localized functional: center (x0, t0)
/// and radius rho > 0.
struct CutoffSpec {
    Eigen::VectorXd x0;
    double t0 = 0.0;
    double rho = 1.0;
};

/// Backward heat kernel weight Phi(x, t) = (4 pi t)^{-n/2} exp(-|x|^2 / 4t).
double phi_kernel(const Eigen::VectorXd& x, double t, int n);

/// Cubic cutoff phi_{(x0,t0),rho}(x, t) = max(0, 1 - (|x-x0|^2 + 2n(t-t0)) / rho^2)^3.
double ecker_cutoff(const Eigen::VectorXd& x, double t, const CutoffSpec& spec, int n);

/// Fixed element quadrature for surface integrals: 2-point Gauss per segment,
/// 3-point mid-edge rule per triangle (both exact for quadratics).
struct SurfaceQuadrature {
    Eigen::MatrixXd nodes;    // #Q x (n+1)
    Eigen::VectorXd weights;  // element measure shares, sum = total measure
    int dim = 1;
};

SurfaceQuadrature build_quadrature(const Surface& s);

/// F(surface; x0, t0) = (4 pi t0)^{-n/2} \int exp(-|x - x0|^2 / 4 t0).
double f_functional(const Surface& s, const GaussianCenter& g);
double f_functional(const SurfaceQuadrature& q, const GaussianCenter& g);

/// Value of F together with its exact gradient with respect to (x0, log t0),
/// obtained by differentiating the quadrature sum.
struct FGradient {
    double value = 0.0;
    Eigen::VectorXd d_x0;   // dF/dx0
    double d_log_t0 = 0.0;  // dF/d(log t0)
};

FGradient f_gradient(const Surface& s, const GaussianCenter& g);
FGradient f_gradient(const SurfaceQuadrature& q, const GaussianCenter& g);

/// Localized functional \int Phi_{(x0,t0)}(x, t) phi_{(x0,t0),rho}(x, t) over
/// the surface at flow time t < t0. Throws NonpositiveScale when t >= t0.
double localized_f(const Surface& s, const GaussianCenter& g, double t,
                   const CutoffSpec& spec);
double localized_f(const SurfaceQuadrature& q, const GaussianCenter& g, double t,
                   const CutoffSpec& spec);

/// Closed-form entropy of the round k-sphere,
/// lambda(S^k) = omega_k (k / 2 pi)^{k/2} e^{-k/2}, k >= 1; this also covers
/// every generalized cylinder S^k x R^{n-k}. Throws UnsupportedIndex for
/// k <= 0 (the flat factor is kFlatEntropy, not part of the chain).
double stone_entropy(int k);

/// Surface area of the unit k-sphere in R^{k+1}.
double unit_sphere_area(int k);

/// F of the truncated cylinder S^k(sqrt(2k)) x [-L, L] at (0, 1) by product
/// quadrature, plus a rigorous Gaussian tail bound for the discarded part.
/// k in {1, 2}.
std::pair<double, double> cylinder_product_check(int k, double truncation_radius);

}  // namespace entroflow
