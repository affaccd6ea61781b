#include "ricci_pinch/lawson_simons.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rpinch {

namespace {

constexpr double kOrthonormalTol = 1e-10;
constexpr double kDedupAngle = 1e-6;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

MatrixXd thin_q(const MatrixXd& M) {
    Eigen::HouseholderQR<MatrixXd> qr(M);
    MatrixXd Q = qr.householderQ() * MatrixXd::Identity(M.rows(), M.cols());
    // Fix column signs so the retraction is continuous in M.
    const MatrixXd R = qr.matrixQR().topRows(M.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        if (R(j, j) < 0) {
            Q.col(j) = -Q.col(j);
        }
    }
    return Q;
}

void check_dims(const ShapeOperatorSet& S, int p) {
    if (p < 1 || p > S.n() - 1) {
        throw std::invalid_argument("Lawson-Simons: p must satisfy 1 <= p <= n-1");
    }
}

double ls_value_of_basis(const ShapeOperatorSet& S, const MatrixXd& Y) {
    double cross = 0.0;
    double diag = 0.0;
    for (const MatrixXd& A : S.operators()) {
        const MatrixXd AY = A * Y;
        const MatrixXd B = Y.transpose() * AY;
        cross += AY.squaredNorm() - B.squaredNorm();
        const double t = B.trace();
        diag += t * (A.trace() - t);
    }
    return 2.0 * cross - diag;
}

bool acts_as_scalar(const ShapeOperatorSet& S, const MatrixXd& Y) {
    for (const MatrixXd& A : S.operators()) {
        const MatrixXd AY = A * Y;
        const MatrixXd B = Y.transpose() * AY;
        const double rho = B.trace() / static_cast<double>(Y.cols());
        const double scale = 1.0 + A.cwiseAbs().maxCoeff();
        if ((AY - rho * Y).norm() > 1e-7 * scale) {
            return false;
        }
    }
    return true;
}

std::vector<SubspaceFrame> eigen_window_seeds(const ShapeOperatorSet& S, int p) {
    std::vector<MatrixXd> sources(S.operators().begin(), S.operators().end());
    sources.push_back(ricci_operator(S));
    std::vector<SubspaceFrame> seeds;
    for (const MatrixXd& M : sources) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
        const MatrixXd& V = es.eigenvectors();
        for (int start = 0; start + p <= S.n(); ++start) {
            seeds.emplace_back(SubspaceFrame::from_span(V.middleCols(start, p)));
        }
    }
    return seeds;
}

}  // namespace

SubspaceFrame::SubspaceFrame(MatrixXd basis) : basis_(std::move(basis)) {
    if (basis_.cols() < 1 || basis_.cols() >= basis_.rows()) {
        throw std::invalid_argument("SubspaceFrame: need 1 <= p <= n-1");
    }
    const MatrixXd gram = basis_.transpose() * basis_;
    const double err = (gram - MatrixXd::Identity(p(), p())).cwiseAbs().maxCoeff();
    if (err > kOrthonormalTol) {
        throw std::invalid_argument("SubspaceFrame: basis is not orthonormal");
    }
}

SubspaceFrame SubspaceFrame::from_span(const MatrixXd& spanning) {
    return SubspaceFrame(thin_q(spanning));
}

MatrixXd SubspaceFrame::complement() const {
    Eigen::HouseholderQR<MatrixXd> qr(basis_);
    const MatrixXd Q = qr.householderQ();
    return Q.rightCols(n() - p());
}

double max_principal_angle(const SubspaceFrame& a, const SubspaceFrame& b) {
    if (a.n() != b.n() || a.p() != b.p()) {
        throw std::invalid_argument("max_principal_angle: dimension mismatch");
    }
    // Largest singular value of (I - P_a) B is the sine of the largest angle.
    const MatrixXd resid = b.basis() - a.basis() * (a.basis().transpose() * b.basis());
    Eigen::JacobiSVD<MatrixXd> svd(resid);
    const double s = std::clamp(svd.singularValues()(0), 0.0, 1.0);
    return std::asin(s);
}

double ls_value(const ShapeOperatorSet& S, const SubspaceFrame& V) {
    if (V.n() != S.n()) {
        throw std::invalid_argument("ls_value: frame dimension does not match the shape operators");
    }
    return ls_value_of_basis(S, V.basis());
}

double ls_value_frame_sum(const ShapeOperatorSet& S, const SubspaceFrame& V) {
    if (V.n() != S.n()) {
        throw std::invalid_argument("ls_value_frame_sum: dimension mismatch");
    }
    const int n = S.n();
    const int p = V.p();
    MatrixXd E(n, n);
    E << V.basis(), V.complement();
    // alpha(e_i, e_j) has normal components (E^T A_a E)_{ij}.
    std::vector<MatrixXd> blocks;
    blocks.reserve(static_cast<std::size_t>(S.m()));
    for (const MatrixXd& A : S.operators()) {
        blocks.push_back(E.transpose() * A * E);
    }
    double total = 0.0;
    for (int i = 0; i < p; ++i) {
        for (int j = p; j < n; ++j) {
            double off = 0.0;
            double inner = 0.0;
            for (const MatrixXd& B : blocks) {
                off += B(i, j) * B(i, j);
                inner += B(i, i) * B(j, j);
            }
            total += 2.0 * off - inner;
        }
    }
    return total;
}

MatrixXd ls_euclidean_gradient(const ShapeOperatorSet& S, const MatrixXd& Y) {
    MatrixXd G = MatrixXd::Zero(Y.rows(), Y.cols());
    for (const MatrixXd& A : S.operators()) {
        const MatrixXd AY = A * Y;
        const MatrixXd B = Y.transpose() * AY;
        const double t = B.trace();
        G += 4.0 * (A * AY) - 8.0 * (AY * B) + 2.0 * (2.0 * t - A.trace()) * AY;
    }
    return G;
}

const char* to_string(LSClass c) {
    switch (c) {
        case LSClass::below: return "below";
        case LSClass::equality: return "equality";
        case LSClass::above: return "above";
    }
    return "unknown";
}

LSClass classify_ls(double value, double bound) {
    const double tol = kEqualityTol * (1.0 + std::abs(bound));
    if (value > bound + tol) {
        return LSClass::above;
    }
    if (value >= bound - tol) {
        return LSClass::equality;
    }
    return LSClass::below;
}

SubspaceFrame random_plane(int n, int p, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXd M(n, p);
    for (int j = 0; j < p; ++j) {
        for (int i = 0; i < n; ++i) {
            M(i, j) = gauss(rng);
        }
    }
    return SubspaceFrame::from_span(M);
}

LSRun ls_ascend(const ShapeOperatorSet& S, const SubspaceFrame& start, const LSOptions& options,
                int seed_index) {
    MatrixXd Y = start.basis();
    double f = ls_value_of_basis(S, Y);
    const double f0 = f;
    bool converged = false;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        const MatrixXd G = ls_euclidean_gradient(S, Y);
        const MatrixXd Gh = G - Y * (Y.transpose() * G);
        const double gnorm = Gh.norm();
        if (gnorm < options.gradient_tol) {
            converged = true;
            break;
        }
        double step = options.initial_step;
        bool accepted = false;
        while (step > 1e-18) {
            const MatrixXd Yn = thin_q(Y + step * Gh);
            const double fn = ls_value_of_basis(S, Yn);
            if (fn > f + 1e-4 * step * gnorm * gnorm) {
                Y = Yn;
                f = fn;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // No ascent direction left at working precision.
            converged = gnorm < 1e-6 * (1.0 + std::abs(f));
            break;
        }
    }
    return LSRun{f0, f, SubspaceFrame(Y), converged, it, seed_index};
}

LSResult ls_max(const ShapeOperatorSet& S, int p, const LSOptions& options) {
    check_dims(S, p);
    const int n = S.n();
    std::vector<SubspaceFrame> seeds;
    seeds.reserve(static_cast<std::size_t>(options.restarts));
    for (int r = 0; r < options.restarts; ++r) {
        std::mt19937_64 rng(splitmix64(options.seed + static_cast<std::uint64_t>(r)));
        seeds.push_back(random_plane(n, p, rng));
    }
    for (SubspaceFrame& s : eigen_window_seeds(S, p)) {
        seeds.push_back(std::move(s));
    }

    std::vector<LSRun> runs;
    runs.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        runs.push_back(ls_ascend(S, seeds[i], options, static_cast<int>(i)));
    }
    std::stable_sort(runs.begin(), runs.end(), [](const LSRun& a, const LSRun& b) {
        if (a.value != b.value) {
            return a.value > b.value;
        }
        return a.seed_index < b.seed_index;
    });

    const double bound = static_cast<double>(p) * (n - p);
    const LSRun& best = runs.front();
    return LSResult{
        .value = best.value,
        .maximizer = best.frame,
        .bound = bound,
        .classification = classify_ls(best.value, bound),
        .not_converged_warning = !best.converged,
        .runs = std::move(runs),
    };
}

double ls_oracle(const ShapeOperatorSet& S, int p, int samples, std::uint64_t seed) {
    check_dims(S, p);
    const int n = S.n();
    double best = -std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        best = std::max(best, ls_value_frame_sum(S, random_plane(n, p, rng)));
    }
    if (n <= 14) {
        std::vector<int> pick(static_cast<std::size_t>(p));
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            MatrixXd B = MatrixXd::Zero(n, p);
            for (int j = 0; j < p; ++j) {
                B(pick[static_cast<std::size_t>(j)], j) = 1.0;
            }
            best = std::max(best, ls_value_frame_sum(S, SubspaceFrame(B)));
            int j = p - 1;
            while (j >= 0 && pick[static_cast<std::size_t>(j)] == n - p + j) {
                --j;
            }
            if (j < 0) {
                break;
            }
            ++pick[static_cast<std::size_t>(j)];
            for (int t = j + 1; t < p; ++t) {
                pick[static_cast<std::size_t>(t)] = pick[static_cast<std::size_t>(t - 1)] + 1;
            }
        }
    }
    return best;
}

std::vector<EqualitySubspace> equality_subspaces(const ShapeOperatorSet& S, int p,
                                                 const LSOptions& options) {
    const LSResult res = ls_max(S, p, options);
    std::vector<EqualitySubspace> out;
    for (const LSRun& run : res.runs) {
        if (classify_ls(run.value, res.bound) != LSClass::equality) {
            continue;
        }
        const bool duplicate = std::any_of(out.begin(), out.end(), [&](const EqualitySubspace& e) {
            return max_principal_angle(e.frame, run.frame) < kDedupAngle;
        });
        if (!duplicate) {
            out.push_back(EqualitySubspace{run.frame, run.value, acts_as_scalar(S, run.frame.basis())});
        }
    }
    return out;
}

}  // namespace rpinch
