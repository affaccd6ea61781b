#pragma once

// Decides the Ricci pinching condition Ric >= b(n,k,H) at a point and extracts
// the Dupin principal normal that accompanies the equality case.

#include <optional>
#include <vector>

#include "ricci_pinch/curvature.hpp"
#include "ricci_pinch/lawson_simons.hpp"

namespace rpinch {

struct PinchVerdict {
    int k;
    bool holds;
    bool strict;
    double b;
    double ricci_min;
    /// Unit eigenvectors of the Ricci operator whose eigenvalue is within tolerance of b.
    std::vector<VectorXd> equality_directions;
    /// Largest k in [2, n/2] for which the condition holds.
    std::optional<int> max_k;
};

/// Throws std::invalid_argument for k outside [2, n/2] or n < 4.
PinchVerdict check_star(const ShapeOperatorSet& S, int k);

std::optional<int> max_pinch_k(const ShapeOperatorSet& S);

struct DupinDetection {
    VectorXd eta;          // normal coordinates
    double norm_eta;
    MatrixXd subspace;     // orthonormal basis of E_eta (n x multiplicity)
    int multiplicity;
    bool collinear_with_H;
    /// k = 2 and H = 0: only alpha(X,Y) = <X,Y> eta for X, Y in the equality
    /// plane is guaranteed, with |eta| <= lambda(n,2,0).
    bool weak;
    /// alpha(X, .) = <X, .> eta holds for X in the equality plane against every tangent Y.
    bool full_relation;
};

/// Orthonormal basis of E_eta = intersection over a of ker(A_a - eta_a I).
/// Singular values below 1e-7 times the operator scale count as zero.
MatrixXd dupin_subspace(const ShapeOperatorSet& S, const VectorXd& eta);

/// All Dupin candidates built from the equality planes of the Lawson-Simons
/// functional at p = k, deduplicated by eta. Empty when the condition fails,
/// is strict, or no equality plane exists.
std::vector<DupinDetection> dupin_detect_all(const ShapeOperatorSet& S, int k,
                                             const LSOptions& options = {});

/// First candidate of dupin_detect_all (full relation first, then |eta| closest
/// to lambda(n,k,H), then larger multiplicity).
std::optional<DupinDetection> dupin_detect(const ShapeOperatorSet& S, int k,
                                           const LSOptions& options = {});

/// k <= ell <= n-k-1 when k < n/2; ell == k when n is even and k == n/2.
bool multiplicity_window_check(int n, int k, int ell);

/// ls_value(S, V) - k(n-k) for a k-plane V whose orthogonal complement is the
/// candidate E_eta. A positive value rules out multiplicity n-k.
double equality_frame_excess(const ShapeOperatorSet& S, const SubspaceFrame& V, const VectorXd& eta);

}  // namespace rpinch
