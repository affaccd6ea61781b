#include "ricci_pinch/curvature.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rpinch {

PinchingParams::PinchingParams(int n, int k, double H) : n_(n), k_(k), H_(H) {
    if (n < 4) {
        throw std::invalid_argument("PinchingParams: n must be >= 4, got " + std::to_string(n));
    }
    if (k < 2 || 2 * k > n) {
        throw std::invalid_argument("PinchingParams: k must satisfy 2 <= k <= n/2, got k=" +
                                    std::to_string(k) + " n=" + std::to_string(n));
    }
    if (!(H >= 0.0) || !std::isfinite(H)) {
        throw std::invalid_argument("PinchingParams: H must be finite and >= 0");
    }
}

namespace {

double discriminant_root(const PinchingParams& p) {
    const double n = p.n();
    const double k = p.k();
    const double nH = n * p.H();
    return std::sqrt(nH * nH + 4.0 * k * (n - k));
}

}  // namespace

double pinch_bound(const PinchingParams& p) {
    const double n = p.n();
    const double k = p.k();
    const double H = p.H();
    return n * (k - 1) / k + n * (k - 1) * H / (2 * k * k) * (n * H + discriminant_root(p));
}

PinchScalars pinch_scalars(const PinchingParams& p) {
    const double n = p.n();
    const double k = p.k();
    const double nH = n * p.H();
    const double root = discriminant_root(p);
    return PinchScalars{
        .b = pinch_bound(p),
        .lambda = (nH + root) / (2 * k),
        .mu = ((2 * k - 1) * nH - root) / (2 * k),
    };
}

double pinch_poly_eval(const PinchingParams& p, double t) {
    return t * t - p.n() * p.H() * t + pinch_bound(p) - p.n() + 1;
}

bool h_bound_check(const PinchingParams& p) {
    const double n = p.n();
    const double k = p.k();
    return n * n * (k - 2) * p.H() * p.H() < 4 * (n - k);
}

ShapeOperatorSet::ShapeOperatorSet(std::vector<MatrixXd> operators, bool aligned, std::string label)
    : n_(0), ops_(std::move(operators)), aligned_(aligned), label_(std::move(label)) {
    if (ops_.empty()) {
        throw std::invalid_argument("ShapeOperatorSet: codimension m must be >= 1");
    }
    n_ = static_cast<int>(ops_.front().rows());
    if (n_ < 1) {
        throw std::invalid_argument("ShapeOperatorSet: tangent dimension must be >= 1");
    }
    for (std::size_t a = 0; a < ops_.size(); ++a) {
        const MatrixXd& A = ops_[a];
        if (A.rows() != n_ || A.cols() != n_) {
            throw std::invalid_argument("ShapeOperatorSet: operator " + std::to_string(a) +
                                        " is not " + std::to_string(n_) + "x" + std::to_string(n_));
        }
        if (!A.allFinite()) {
            throw std::invalid_argument("ShapeOperatorSet: operator " + std::to_string(a) +
                                        " has non-finite entries");
        }
        const double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
        if (asym > kSymmetryTol) {
            std::ostringstream os;
            os << "ShapeOperatorSet: operator " << a << " not symmetric (max asymmetry " << asym << ")";
            throw std::invalid_argument(os.str());
        }
    }
    if (aligned_) {
        const VectorXd tr = traces();
        if (tr.norm() / n_ > kMinimalTol) {
            for (int a = 1; a < m(); ++a) {
                if (std::abs(tr(a)) > 1e-9) {
                    throw std::invalid_argument(
                        "ShapeOperatorSet: aligned flag set but tr A_" + std::to_string(a + 1) +
                        " != 0");
                }
            }
            if (tr(0) <= 0.0) {
                throw std::invalid_argument(
                    "ShapeOperatorSet: aligned flag set but tr A_1 is not positive");
            }
        }
    }
}

VectorXd ShapeOperatorSet::traces() const {
    VectorXd tr(m());
    for (int a = 0; a < m(); ++a) {
        tr(a) = ops_[static_cast<std::size_t>(a)].trace();
    }
    return tr;
}

MatrixXd ShapeOperatorSet::shape_operator(const VectorXd& xi) const {
    if (xi.size() != m()) {
        throw std::invalid_argument("shape_operator: normal vector has wrong dimension");
    }
    MatrixXd A = MatrixXd::Zero(n_, n_);
    for (int a = 0; a < m(); ++a) {
        A += xi(a) * ops_[static_cast<std::size_t>(a)];
    }
    return A;
}

VectorXd ShapeOperatorSet::second_fundamental_form(const VectorXd& X, const VectorXd& Y) const {
    VectorXd out(m());
    for (int a = 0; a < m(); ++a) {
        out(a) = Y.dot(ops_[static_cast<std::size_t>(a)] * X);
    }
    return out;
}

ShapeOperatorSet ShapeOperatorSet::aligned_to_mean_curvature() const {
    const VectorXd tr = traces();
    const double norm = tr.norm();
    if (norm / n_ <= kMinimalTol) {
        return ShapeOperatorSet(ops_, true, label_);
    }
    // Orthonormal basis of R^m whose first column is the mean curvature direction.
    MatrixXd basis = MatrixXd::Identity(m(), m());
    basis.col(0) = tr / norm;
    Eigen::HouseholderQR<MatrixXd> qr(basis);
    MatrixXd Q = qr.householderQ();
    if (Q.col(0).dot(tr) < 0) {
        Q = -Q;
    }
    std::vector<MatrixXd> rotated;
    rotated.reserve(ops_.size());
    for (int b = 0; b < m(); ++b) {
        MatrixXd A = shape_operator(Q.col(b));
        A = 0.5 * (A + A.transpose());
        if (b > 0) {
            // Exact zero trace for the complementary normals.
            A -= (A.trace() / n_) * MatrixXd::Identity(n_, n_);
        }
        rotated.push_back(std::move(A));
    }
    return ShapeOperatorSet(std::move(rotated), true, label_);
}

ShapeOperatorSet ShapeOperatorSet::with_label(std::string label) const {
    ShapeOperatorSet copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

MeanCurvature mean_curvature(const ShapeOperatorSet& S) {
    const VectorXd tr = S.traces();
    const double H = tr.norm() / S.n();
    if (H <= kMinimalTol) {
        return MeanCurvature{H, std::nullopt};
    }
    return MeanCurvature{H, VectorXd(tr / tr.norm())};
}

MatrixXd ricci_operator(const ShapeOperatorSet& S) {
    const int n = S.n();
    MatrixXd R = (n - 1.0) * MatrixXd::Identity(n, n);
    for (const MatrixXd& A : S.operators()) {
        R += A.trace() * A - A * A;
    }
    return 0.5 * (R + R.transpose());
}

double ricci_direct(const ShapeOperatorSet& S, const VectorXd& X) {
    double ric = S.n() - 1.0;
    for (const MatrixXd& A : S.operators()) {
        const VectorXd AX = A * X;
        ric += A.trace() * X.dot(AX) - AX.squaredNorm();
    }
    return ric;
}

double ricci_min(const ShapeOperatorSet& S) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(ricci_operator(S), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

namespace {

double radical_inverse(std::uint64_t index, int base) {
    double result = 0.0;
    double f = 1.0 / base;
    while (index > 0) {
        result += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
        index /= static_cast<std::uint64_t>(base);
        f /= base;
    }
    return result;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

}  // namespace

std::vector<VectorXd> sample_unit_normals(int m, int count) {
    if (m < 1) {
        throw std::invalid_argument("sample_unit_normals: m must be >= 1");
    }
    if (m == 1) {
        return {VectorXd::Constant(1, 1.0), VectorXd::Constant(1, -1.0)};
    }
    const int pairs = (m + 1) / 2;
    if (2 * pairs > static_cast<int>(std::size(kPrimes))) {
        throw std::invalid_argument("sample_unit_normals: codimension too large");
    }
    std::vector<VectorXd> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 1; static_cast<int>(out.size()) < count; ++i) {
        VectorXd g(2 * pairs);
        for (int j = 0; j < pairs; ++j) {
            const double u1 = radical_inverse(i, kPrimes[2 * j]);
            const double u2 = radical_inverse(i, kPrimes[2 * j + 1]);
            const double rad = std::sqrt(-2.0 * std::log(u1));
            g(2 * j) = rad * std::cos(2 * std::numbers::pi * u2);
            g(2 * j + 1) = rad * std::sin(2 * std::numbers::pi * u2);
        }
        VectorXd v = g.head(m);
        const double nv = v.norm();
        if (nv < 1e-12) {
            continue;
        }
        out.push_back(v / nv);
    }
    return out;
}

ShapeBoundsResult shape_bounds_check(const ShapeOperatorSet& S, int k) {
    const MeanCurvature mc = mean_curvature(S);
    const PinchingParams params(S.n(), k, mc.H);
    const PinchScalars ps = pinch_scalars(params);
    const double eps = kEqualityTol;
    ShapeBoundsResult result{true, ps.mu, ps.lambda, std::nullopt};

    auto check_operator = [&](const MatrixXd& A, const std::string& name) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(A, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            const double ev = es.eigenvalues()(i);
            if (ev < ps.mu - eps || ev > ps.lambda + eps) {
                std::ostringstream os;
                os.precision(17);
                os << "eigenvalue " << ev << " of " << name << " outside [" << ps.mu << ", "
                   << ps.lambda << "]";
                result.ok = false;
                result.violation = os.str();
                return false;
            }
        }
        return true;
    };

    if (mc.direction) {
        if (!S.aligned()) {
            throw std::invalid_argument(
                "shape_bounds_check: H > 0 requires a normal basis aligned with the mean curvature");
        }
        check_operator(S[0], "A_1");
        return result;
    }
    for (const VectorXd& xi : sample_unit_normals(S.m())) {
        if (!check_operator(S.shape_operator(xi), "A_xi")) {
            break;
        }
    }
    return result;
}

}  // namespace rpinch
