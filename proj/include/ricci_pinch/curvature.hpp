#pragma once

// Pointwise curvature quantities of a submanifold f: M^n -> S^{n+m}, given by
// its shape operators A_1..A_m in an orthonormal normal basis xi_1..xi_m.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rpinch {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Relative tolerance separating "satisfied with equality" from "strict".
inline constexpr double kEqualityTol = 1e-9;
/// Absolute cut below which the mean curvature is treated as zero.
inline constexpr double kMinimalTol = 1e-9;
/// Maximum absolute asymmetry accepted for a shape operator.
inline constexpr double kSymmetryTol = 1e-12;

/// The triple (n, k, H) entering the Ricci pinching bound.
class PinchingParams {
public:
    /// Throws std::invalid_argument unless n >= 4, 2 <= k <= n/2 and H >= 0.
    PinchingParams(int n, int k, double H);

    int n() const noexcept { return n_; }
    int k() const noexcept { return k_; }
    double H() const noexcept { return H_; }

private:
    int n_;
    int k_;
    double H_;
};

/// b(n,k,H) together with the two roots of t^2 - nHt + b - n + 1.
struct PinchScalars {
    double b;
    double lambda;
    double mu;
};

/// b(n,k,H) = n(k-1)/k + n(k-1)H/(2k^2) (nH + sqrt(n^2H^2 + 4k(n-k))).
double pinch_bound(const PinchingParams& p);

PinchScalars pinch_scalars(const PinchingParams& p);

/// P(t) = t^2 - nHt + b(n,k,H) - n + 1; its roots are lambda and mu.
double pinch_poly_eval(const PinchingParams& p, double t);

/// Strict inequality n^2 (k-2) H^2 < 4(n-k), which guarantees mu < lambda.
bool h_bound_check(const PinchingParams& p);

/// m symmetric n x n shape operators of a spherical submanifold at a point.
///
/// When `aligned` is set the first normal xi_1 is the unit mean curvature
/// direction, so tr A_alpha = 0 for alpha >= 2 whenever H > 0.
class ShapeOperatorSet {
public:
    ShapeOperatorSet(std::vector<MatrixXd> operators, bool aligned = false, std::string label = {});

    int n() const noexcept { return n_; }
    int m() const noexcept { return static_cast<int>(ops_.size()); }
    bool aligned() const noexcept { return aligned_; }
    const std::string& label() const noexcept { return label_; }
    const std::vector<MatrixXd>& operators() const noexcept { return ops_; }
    const MatrixXd& operator[](int alpha) const { return ops_.at(static_cast<std::size_t>(alpha)); }

    /// Traces (tr A_1, ..., tr A_m); the mean curvature vector is this over n.
    VectorXd traces() const;

    /// A_xi = sum_alpha xi_alpha A_alpha for normal coordinates xi.
    MatrixXd shape_operator(const VectorXd& xi) const;

    /// Normal coordinates of alpha_f(X, Y) = sum_alpha <A_alpha X, Y> xi_alpha.
    VectorXd second_fundamental_form(const VectorXd& X, const VectorXd& Y) const;

    /// Same submanifold with the normal basis rotated so that xi_1 is the mean
    /// curvature direction (Gram-Schmidt completion). Returns a copy flagged as
    /// aligned; minimal inputs come back unchanged apart from the flag.
    ShapeOperatorSet aligned_to_mean_curvature() const;

    ShapeOperatorSet with_label(std::string label) const;

private:
    int n_;
    std::vector<MatrixXd> ops_;
    bool aligned_;
    std::string label_;
};

struct MeanCurvature {
    double H;
    /// Unit normal coordinates of the mean curvature vector; empty when H <= kMinimalTol.
    std::optional<VectorXd> direction;
};

MeanCurvature mean_curvature(const ShapeOperatorSet& S);

/// Ricci operator from the Gauss equation: (n-1) I + sum tr(A_a) A_a - sum A_a^2.
MatrixXd ricci_operator(const ShapeOperatorSet& S);

/// Ric(X) for a unit vector X evaluated term by term from the Gauss equation,
/// without forming the Ricci operator.
double ricci_direct(const ShapeOperatorSet& S, const VectorXd& X);

/// Minimum of Ric over unit tangent directions.
double ricci_min(const ShapeOperatorSet& S);

struct ShapeBoundsResult {
    bool ok;
    double lower;  // mu(n,k,H)
    double upper;  // lambda(n,k,H)
    /// Human-readable description of the first violating eigenvalue, if any.
    std::optional<std::string> violation;
};

/// Checks mu(n,k,H) <= <A_1 X, X> <= lambda(n,k,H) (H > 0, requires the aligned
/// flag) or the same bounds for A_xi over 64 deterministic unit normals (H = 0).
ShapeBoundsResult shape_bounds_check(const ShapeOperatorSet& S, int k);

/// Deterministic low-discrepancy unit vectors on S^{m-1} (Halton points pushed
/// through Box-Muller). For m = 1 this is {+1, -1}.
std::vector<VectorXd> sample_unit_normals(int m, int count = 64);

}  // namespace rpinch
