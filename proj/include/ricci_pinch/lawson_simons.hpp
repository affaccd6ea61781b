#pragma once

// The Lawson-Simons functional
//
//   LS(V) = sum_{i<=p<j} ( 2 |alpha(e_i,e_j)|^2 - <alpha(e_i,e_i), alpha(e_j,e_j)> )
//
// for an orthonormal basis e_1..e_n whose first p vectors span V. It depends
// only on the p-plane V, so it is treated as a function on the Grassmannian.

#include <cstdint>
#include <random>
#include <vector>

#include "ricci_pinch/curvature.hpp"

namespace rpinch {

/// An orthonormal p-frame in R^n, 1 <= p <= n-1.
class SubspaceFrame {
public:
    /// Columns must be orthonormal to within 1e-10; throws std::invalid_argument otherwise.
    explicit SubspaceFrame(MatrixXd basis);

    /// Orthonormalizes the columns of `spanning` (thin QR) first.
    static SubspaceFrame from_span(const MatrixXd& spanning);

    int n() const noexcept { return static_cast<int>(basis_.rows()); }
    int p() const noexcept { return static_cast<int>(basis_.cols()); }
    const MatrixXd& basis() const noexcept { return basis_; }
    MatrixXd projector() const { return basis_ * basis_.transpose(); }

    /// Orthonormal basis of the orthogonal complement (n x (n-p)).
    MatrixXd complement() const;

private:
    MatrixXd basis_;
};

/// Largest principal angle between two planes of equal dimension.
double max_principal_angle(const SubspaceFrame& a, const SubspaceFrame& b);

/// Projector form: 2 sum_a |(I-P) A_a P|_F^2 - sum_a tr(P A_a)(tr A_a - tr(P A_a)).
double ls_value(const ShapeOperatorSet& S, const SubspaceFrame& V);

/// Literal double sum over an orthonormal completion of V.
double ls_value_frame_sum(const ShapeOperatorSet& S, const SubspaceFrame& V);

/// Euclidean gradient of the projector form with respect to the n x p basis.
MatrixXd ls_euclidean_gradient(const ShapeOperatorSet& S, const MatrixXd& Y);

enum class LSClass { below, equality, above };

const char* to_string(LSClass c);

/// Classifies `value` against the bound p(n-p) with relative tolerance kEqualityTol.
LSClass classify_ls(double value, double bound);

struct LSOptions {
    int restarts = 100;
    std::uint64_t seed = 0x5eed5eedULL;
    int max_iterations = 500;
    double gradient_tol = 1e-10;
    double initial_step = 0.1;
};

/// Outcome of one gradient-ascent run.
struct LSRun {
    double start_value;
    double value;
    SubspaceFrame frame;
    bool converged;
    int iterations;
    int seed_index;
};

struct LSResult {
    double value;
    SubspaceFrame maximizer;
    double bound;
    LSClass classification;
    /// Set when the best run stopped on the iteration cap before the gradient
    /// norm reached the tolerance.
    bool not_converged_warning;
    std::vector<LSRun> runs;
};

/// Multistart projected-gradient ascent on the Grassmannian of p-planes.
/// Seeds: `restarts` uniform random planes plus windows of p consecutive
/// eigenvectors of every A_a and of the Ricci operator.
LSResult ls_max(const ShapeOperatorSet& S, int p, const LSOptions& options = {});

/// Single ascent run from a given starting frame.
LSRun ls_ascend(const ShapeOperatorSet& S, const SubspaceFrame& start, const LSOptions& options,
                int seed_index = -1);

/// Brute-force maximum over `samples` uniform random p-planes plus every
/// coordinate p-plane when n <= 14.
double ls_oracle(const ShapeOperatorSet& S, int p, int samples, std::uint64_t seed = 0x0c0ffeeULL);

struct EqualitySubspace {
    SubspaceFrame frame;
    double value;
    /// True when every A_a acts on the plane as a multiple of the identity.
    bool eigenspace_contained;
};

/// Maximizers with |value - p(n-p)| within tolerance, deduplicated by
/// principal angle (< 1e-6). Empty when the maximum is strictly below the bound.
std::vector<EqualitySubspace> equality_subspaces(const ShapeOperatorSet& S, int p,
                                                 const LSOptions& options = {});

/// Uniformly distributed random p-plane in R^n (QR of a Gaussian matrix).
SubspaceFrame random_plane(int n, int p, std::mt19937_64& rng);

}  // namespace rpinch
