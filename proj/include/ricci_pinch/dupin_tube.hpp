#pragma once

// Tubes over a submanifold g: L^{n-l} -> S^{n+m} with variable radius tau,
//
//   Psi(x,w) = cos tau g - sin tau (g_* grad tau + sqrt(1 - |grad tau|^2) w),
//   N(x,w)   = sin tau g + cos tau (g_* grad tau + sqrt(1 - |grad tau|^2) w),
//
// together with the regularity endomorphism P(x,w), the focal map of a Dupin
// principal normal and finite-difference checks of the identities they obey.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ricci_pinch/curvature.hpp"

namespace rpinch {

using VecFn = std::function<VectorXd(const VectorXd&)>;
using MatFn = std::function<MatrixXd(const VectorXd&)>;
using ScalarFn = std::function<double(const VectorXd&)>;
/// Element i is the ambient_dim x base_dim matrix whose column j is d_i d_j g.
using SecondFn = std::function<std::vector<MatrixXd>(const VectorXd&)>;

/// Base data (g, tau, normal frame) of a tube, in local coordinates x on L.
/// Derivative evaluators may be left empty; central differences are used then.
struct TubePatch {
    std::string name;
    int base_dim = 0;
    int ambient_dim = 0;  // n + m + 1
    VecFn g;
    MatFn g_jacobian;
    SecondFn g_second;
    ScalarFn tau;
    VecFn tau_gradient;  // coordinate gradient
    MatFn tau_hessian;   // coordinate second derivatives
    /// Orthonormal basis of the normal space of g in the sphere (columns).
    MatFn normal_frame;
    VectorXd sample_point;

    int normal_rank() const { return ambient_dim - 1 - base_dim; }
    /// Dimension of the unit normal bundle, i.e. of the tube hypersurface.
    int tube_dim() const { return ambient_dim - 2; }
};

/// A point of the unit normal bundle: base coordinates and unit normal
/// coordinates with respect to the patch's normal frame.
struct TubePoint {
    VectorXd x;
    VectorXd w;
};

/// Tangent vector to the unit normal bundle: base part dx, fiber part dw.
struct TubeTangent {
    VectorXd dx;
    VectorXd dw;
};

/// Derived geometry of the base at x. Tangent quantities with suffix _on are
/// expressed in the orthonormal frame E = J G^{-1/2}.
struct BaseGeometry {
    VectorXd g;
    MatrixXd J;
    MatrixXd G;
    MatrixXd G_inv_sqrt;
    MatrixXd E;
    MatrixXd F;
    std::vector<MatrixXd> d2g;
    double tau;
    VectorXd dtau;
    MatrixXd hess_coord;  // covariant Hessian in coordinates
    VectorXd grad_on;
    MatrixXd hess_on;
    double rho;  // sqrt(1 - |grad tau|^2)
};

/// Throws std::invalid_argument when |grad tau| >= 1, tau is outside
/// (0, pi/2) or |g| deviates from 1 by more than 1e-10.
BaseGeometry base_geometry(const TubePatch& P, const VectorXd& x);

VectorXd tube_point(const TubePatch& P, const TubePoint& q);
VectorXd tube_gauss(const TubePatch& P, const TubePoint& q);

/// Shape operator A^g_w of the base in the orthonormal tangent frame.
MatrixXd base_shape_operator(const TubePatch& P, const TubePoint& q);

/// P(x,w) = cos tau (I - grad tau grad tau^T) - sin tau Hess tau + sin tau rho A^g_w.
MatrixXd p_endomorphism(const TubePatch& P, const TubePoint& q);

/// Psi_* V assembled from P(x,w), the second fundamental form of g and the
/// normal connection of the frame.
VectorXd dpsi_formula(const TubePatch& P, const TubePoint& q, const TubeTangent& V);

/// Central difference (step h) of Psi along (x + t dx, (w + t dw)/|w + t dw|).
VectorXd dpsi_fd(const TubePatch& P, const TubePoint& q, const TubeTangent& V, double h = 1e-5);
VectorXd dgauss_fd(const TubePatch& P, const TubePoint& q, const TubeTangent& V, double h = 1e-5);

/// Local chart (x, u) of the unit normal bundle around q with
/// w(x,u) = (w + B u)/|w + B u|, B an orthonormal basis of w^perp.
struct TubeChart {
    TubePoint center;
    MatrixXd fiber_basis;
    TubePoint at(const VectorXd& params) const;
    int dim() const;
};

TubeChart tube_chart(const TubePatch& P, const TubePoint& q);

/// Jacobian of Psi (ambient_dim x tube_dim) in the chart of tube_chart.
MatrixXd tube_jacobian(const TubePatch& P, const TubePoint& q, double h = 1e-5);
MatrixXd gauss_jacobian(const TubePatch& P, const TubePoint& q, double h = 1e-5);

/// |<Psi_* V, N>| for the chart direction v (normalized).
double gauss_orthogonality_residual(const TubePatch& P, const TubePoint& q, const VectorXd& v);

/// |N_* V + cot tau Psi_* V| along the great-circle fiber curve
/// w(t) = cos t w + sin t V/|V|. Throws when V has a base component above 1e-10
/// or is not tangent to the fiber.
double vertical_shape_check(const TubePatch& P, const TubePoint& q, const TubeTangent& V);

/// Shape operator of the tube with respect to N in an orthonormal tangent
/// frame, from Richardson-extrapolated differences (base step 1e-3).
ShapeOperatorSet tube_shape_operator(const TubePatch& P, const TubePoint& q);

/// g(x) = (cos x, sin x, 0, 0) in S^3 with normals e3, e4 and
/// tau = tau0 + slope x.
TubePatch great_circle_s3(double tau0, double slope = 0.0);

/// g(x) = (a cos x, a sin x, sqrt(1-a^2), 0) with normals
/// (sqrt(1-a^2) cos x, sqrt(1-a^2) sin x, -a, 0) and e4; the first normal has
/// principal curvature -cot(arcsin a).
TubePatch small_circle(double a, double tau0);

/// Great S^2 in S^{ell+3} (gnomonic chart) with constant normals e4..e_{ell+4};
/// tau = tau0 + slope x_1. Constant tau gives S^2(cos tau) x S^ell(sin tau).
TubePatch sphere_base(int ell, double tau0, double slope = 0.0);

/// Builds a named patch: "great-circle-s3" (tau, slope), "small-circle" (a, tau),
/// "sphere-base" (ell, tau, slope). Unknown names or keys throw.
TubePatch make_patch(const std::string& name, const std::map<std::string, double>& params);

/// Splits "small-circle(a=0.5,tau=0.3)" into a name and key=value pairs.
std::pair<std::string, std::map<std::string, double>> parse_patch_spec(const std::string& spec);

/// A submanifold f with a distinguished unit normal field xi, the norm of the
/// Dupin principal normal eta = |eta| xi, and coordinate directions spanning E_eta.
struct SubmanifoldPatch {
    std::string name;
    int dim = 0;
    int ambient_dim = 0;
    VecFn f;
    VecFn xi;
    ScalarFn eta_norm;
    MatFn dupin_directions;
    VectorXd sample_point;
};

/// S^p(r) x S^{n-p}(s) in S^{n+1}, gnomonic charts on both factors, with
/// eta = (s/r) xi the first-factor principal normal (multiplicity p).
SubmanifoldPatch clifford_torus_patch(int n, int p, double r);

/// Umbilical sphere of spherical radius rho around e0, every direction in E_eta.
SubmanifoldPatch umbilical_sphere_patch(int n, double rho);

/// The tube Psi over P near q with eta = cot tau N (fiber directions span E_eta).
SubmanifoldPatch tube_submanifold(const TubePatch& P, const TubePoint& q);

/// h = cos sigma f + sin sigma xi with cot sigma = |eta|; throws unless
/// sigma lies in (0, pi/2).
VectorXd focal_point(const SubmanifoldPatch& S, const VectorXd& x);
MatrixXd focal_jacobian(const SubmanifoldPatch& S, const VectorXd& x, double h = 1e-5);

/// dim of the joint kernel of A_a - eta_a I equals dim ker(A_xi - |eta| I).
bool generic_check(const ShapeOperatorSet& S, const VectorXd& eta);

struct RegularityCrossing {
    double det_zero;            // parameter where det P changes sign
    double sigma_min_zero;      // parameter minimizing the Jacobian's smallest singular value
    double sigma_min_at_zero;   // that minimum
    double sigma_min_generic;   // smallest singular value at the interval ends
};

/// Locates det P = 0 by bisection and the minimum of sigma_min(Psi_*) by
/// golden-section search over t in [lo, hi] for the family t -> family(t) at q.
RegularityCrossing regularity_crossing(const std::function<TubePatch(double)>& family, const TubePoint& q,
                                       double lo, double hi);

/// Smallest singular value of the Jacobian of Psi at q.
double jacobian_sigma_min(const TubePatch& P, const TubePoint& q);

}  // namespace rpinch
