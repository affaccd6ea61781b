#include "ricci_pinch/pinch_verdict.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rpinch {

namespace {

constexpr double kKernelRelTol = 1e-7;
constexpr double kPlaneTol = 1e-6;

double tolerance_for(double b) { return kEqualityTol * (1.0 + std::abs(b)); }

struct RicciSpectrum {
    VectorXd values;
    MatrixXd vectors;
};

RicciSpectrum ricci_spectrum(const ShapeOperatorSet& S) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(ricci_operator(S));
    return RicciSpectrum{es.eigenvalues(), es.eigenvectors()};
}

std::optional<int> max_k_from(int n, double ric_min, double H) {
    std::optional<int> best;
    for (int k = 2; 2 * k <= n; ++k) {
        const double b = pinch_bound(PinchingParams(n, k, H));
        if (ric_min >= b - tolerance_for(b)) {
            best = k;
        }
    }
    return best;
}

double operator_scale(const ShapeOperatorSet& S) {
    double scale = 1.0;
    for (const MatrixXd& A : S.operators()) {
        scale = std::max(scale, A.cwiseAbs().maxCoeff());
    }
    return scale;
}

}  // namespace

PinchVerdict check_star(const ShapeOperatorSet& S, int k) {
    const MeanCurvature mc = mean_curvature(S);
    const PinchingParams params(S.n(), k, mc.H);
    const double b = pinch_bound(params);
    const RicciSpectrum spec = ricci_spectrum(S);
    const double ric_min = spec.values.minCoeff();
    const double tol = tolerance_for(b);

    PinchVerdict v{
        .k = k,
        .holds = ric_min >= b - tol,
        .strict = ric_min > b + tol,
        .b = b,
        .ricci_min = ric_min,
        .equality_directions = {},
        .max_k = max_k_from(S.n(), ric_min, mc.H),
    };
    for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
        if (std::abs(spec.values(i) - b) <= tol) {
            v.equality_directions.emplace_back(spec.vectors.col(i));
        }
    }
    return v;
}

std::optional<int> max_pinch_k(const ShapeOperatorSet& S) {
    if (S.n() < 4) {
        return std::nullopt;
    }
    return max_k_from(S.n(), ricci_min(S), mean_curvature(S).H);
}

MatrixXd dupin_subspace(const ShapeOperatorSet& S, const VectorXd& eta) {
    const int n = S.n();
    const int m = S.m();
    if (eta.size() != m) {
        throw std::invalid_argument("dupin_subspace: eta has wrong dimension");
    }
    MatrixXd stacked(static_cast<Eigen::Index>(m) * n, n);
    for (int a = 0; a < m; ++a) {
        stacked.middleRows(static_cast<Eigen::Index>(a) * n, n) =
            S[a] - eta(a) * MatrixXd::Identity(n, n);
    }
    Eigen::JacobiSVD<MatrixXd> svd(stacked, Eigen::ComputeFullV);
    const double threshold = kKernelRelTol * operator_scale(S);
    const VectorXd& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > threshold) {
            ++rank;
        }
    }
    return svd.matrixV().rightCols(n - rank);
}

std::vector<DupinDetection> dupin_detect_all(const ShapeOperatorSet& S, int k,
                                             const LSOptions& options) {
    const PinchVerdict verdict = check_star(S, k);
    if (!verdict.holds || verdict.strict) {
        return {};
    }
    const MeanCurvature mc = mean_curvature(S);
    const double lambda = pinch_scalars(PinchingParams(S.n(), k, mc.H)).lambda;
    const bool weak = (k == 2 && !mc.direction);
    const double scale = operator_scale(S);

    std::vector<DupinDetection> out;
    for (const EqualitySubspace& eq : equality_subspaces(S, k, options)) {
        const MatrixXd& V = eq.frame.basis();
        VectorXd eta(S.m());
        double plane_resid = 0.0;
        for (int a = 0; a < S.m(); ++a) {
            const MatrixXd B = V.transpose() * S[a] * V;
            eta(a) = B.trace() / k;
            plane_resid = std::max(plane_resid, (B - eta(a) * MatrixXd::Identity(k, k)).norm());
        }
        // The ascent only locates V to roughly the square root of machine
        // precision; the joint kernel is recomputed from eta, which is accurate
        // to second order in that error.
        MatrixXd E = dupin_subspace(S, eta);
        const bool full = E.cols() >= k;
        if (full) {
            for (int a = 0; a < S.m(); ++a) {
                eta(a) = (E.transpose() * S[a] * E).trace() / static_cast<double>(E.cols());
            }
            E = dupin_subspace(S, eta);
        }
        if (!full && !(weak && plane_resid < kPlaneTol * scale)) {
            continue;
        }
        const bool seen = std::any_of(out.begin(), out.end(), [&](const DupinDetection& d) {
            return (d.eta - eta).norm() < kPlaneTol * scale;
        });
        if (seen) {
            continue;
        }
        DupinDetection det;
        det.eta = eta;
        det.norm_eta = eta.norm();
        det.weak = weak;
        det.full_relation = full;
        det.subspace = full ? E : V;
        det.multiplicity = static_cast<int>(det.subspace.cols());
        det.collinear_with_H =
            mc.direction ? std::abs(std::abs(mc.direction->dot(eta)) - det.norm_eta) <=
                               1e-9 * (1.0 + det.norm_eta)
                         : true;
        out.push_back(std::move(det));
    }
    std::stable_sort(out.begin(), out.end(), [lambda](const DupinDetection& a, const DupinDetection& b) {
        if (a.full_relation != b.full_relation) {
            return a.full_relation;
        }
        const double da = std::abs(a.norm_eta - lambda);
        const double db = std::abs(b.norm_eta - lambda);
        if (std::abs(da - db) > 1e-12) {
            return da < db;
        }
        return a.multiplicity > b.multiplicity;
    });
    return out;
}

std::optional<DupinDetection> dupin_detect(const ShapeOperatorSet& S, int k, const LSOptions& options) {
    auto all = dupin_detect_all(S, k, options);
    if (all.empty()) {
        return std::nullopt;
    }
    return std::move(all.front());
}

bool multiplicity_window_check(int n, int k, int ell) {
    (void)PinchingParams(n, k, 0.0);
    if (2 * k == n) {
        return ell == k;
    }
    return k <= ell && ell <= n - k - 1;
}

double equality_frame_excess(const ShapeOperatorSet& S, const SubspaceFrame& V, const VectorXd& eta) {
    if (V.n() != S.n() || eta.size() != S.m()) {
        throw std::invalid_argument("equality_frame_excess: dimension mismatch");
    }
    const int k = V.p();
    return ls_value(S, V) - static_cast<double>(k) * (S.n() - k);
}

}  // namespace rpinch
