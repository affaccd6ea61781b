#include "ricci_pinch/dupin_tube.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ricci_pinch/pinch_verdict.hpp"

namespace rpinch {

namespace {

using std::numbers::pi;

constexpr double kUnitTol = 1e-10;
constexpr double kRichardsonStep = 1e-3;

VectorXd central(const std::function<VectorXd(double)>& c, double h) {
    return (c(h) - c(-h)) / (2.0 * h);
}

VectorXd richardson(const std::function<VectorXd(double)>& c, double h) {
    return (4.0 * central(c, 0.5 * h) - central(c, h)) / 3.0;
}

VectorXd unit(const VectorXd& v) { return v / v.norm(); }

MatrixXd fd_jacobian(const VecFn& f, const VectorXd& x, double h) {
    const VectorXd f0 = f(x);
    MatrixXd J(f0.size(), x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        J.col(i) = central([&](double t) {
            VectorXd y = x;
            y(i) += t;
            return f(y);
        }, h);
    }
    return J;
}

MatrixXd jacobian_of(const TubePatch& P, const VectorXd& x) {
    return P.g_jacobian ? P.g_jacobian(x) : fd_jacobian(P.g, x, 1e-5);
}

std::vector<MatrixXd> second_of(const TubePatch& P, const VectorXd& x) {
    if (P.g_second) {
        return P.g_second(x);
    }
    const int d = P.base_dim;
    std::vector<MatrixXd> out;
    const double h = 1e-4;
    for (int i = 0; i < d; ++i) {
        MatrixXd Di(P.ambient_dim, d);
        for (int j = 0; j < d; ++j) {
            VectorXd pp = x, pm = x, mp = x, mm = x;
            pp(i) += h; pp(j) += h;
            pm(i) += h; pm(j) -= h;
            mp(i) -= h; mp(j) += h;
            mm(i) -= h; mm(j) -= h;
            Di.col(j) = (P.g(pp) - P.g(pm) - P.g(mp) + P.g(mm)) / (4.0 * h * h);
        }
        out.push_back(std::move(Di));
    }
    return out;
}

VectorXd tau_gradient_of(const TubePatch& P, const VectorXd& x) {
    if (P.tau_gradient) {
        return P.tau_gradient(x);
    }
    VectorXd grad(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        VectorXd a = x, b = x;
        a(i) += 1e-5;
        b(i) -= 1e-5;
        grad(i) = (P.tau(a) - P.tau(b)) / 2e-5;
    }
    return grad;
}

MatrixXd tau_hessian_of(const TubePatch& P, const VectorXd& x) {
    if (P.tau_hessian) {
        return P.tau_hessian(x);
    }
    const double h = 1e-4;
    const Eigen::Index d = x.size();
    MatrixXd H(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            VectorXd pp = x, pm = x, mp = x, mm = x;
            pp(i) += h; pp(j) += h;
            pm(i) += h; pm(j) -= h;
            mp(i) -= h; mp(j) += h;
            mm(i) -= h; mm(j) -= h;
            H(i, j) = (P.tau(pp) - P.tau(pm) - P.tau(mp) + P.tau(mm)) / (4.0 * h * h);
        }
    }
    return 0.5 * (H + H.transpose());
}

void check_point(const TubePatch& P, const TubePoint& q) {
    if (q.x.size() != P.base_dim) {
        throw std::invalid_argument("tube point: base coordinates have wrong dimension");
    }
    if (q.w.size() != P.normal_rank()) {
        throw std::invalid_argument("tube point: normal coordinates have wrong dimension");
    }
    if (std::abs(q.w.norm() - 1.0) > kUnitTol) {
        throw std::invalid_argument("tube point: w must be a unit vector");
    }
}

TubePoint along(const TubePoint& q, const TubeTangent& V, double t) {
    return TubePoint{q.x + t * V.dx, unit(q.w + t * V.dw)};
}

// Gnomonic chart y(x) = (1, x)/sqrt(1 + |x|^2) of the unit sphere S^d.
struct Gnomonic {
    VectorXd y;
    MatrixXd J;
    std::vector<MatrixXd> d2;
};

Gnomonic gnomonic(const VectorXd& x) {
    const Eigen::Index d = x.size();
    VectorXd u(d + 1);
    u << 1.0, x;
    const double s = 1.0 + x.squaredNorm();
    const double s12 = 1.0 / std::sqrt(s);
    const double s32 = s12 / s;
    const double s52 = s32 / s;
    Gnomonic out;
    out.y = u * s12;
    out.J = MatrixXd(d + 1, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        VectorXd e = VectorXd::Zero(d + 1);
        e(i + 1) = 1.0;
        out.J.col(i) = e * s12 - u * (x(i) * s32);
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        MatrixXd Di(d + 1, d);
        VectorXd ei = VectorXd::Zero(d + 1);
        ei(i + 1) = 1.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            VectorXd ej = VectorXd::Zero(d + 1);
            ej(j + 1) = 1.0;
            Di.col(j) = -ei * (x(j) * s32) - ej * (x(i) * s32) - u * ((i == j ? 1.0 : 0.0) * s32) +
                        u * (3.0 * x(i) * x(j) * s52);
        }
        out.d2.push_back(std::move(Di));
    }
    return out;
}

}  // namespace

BaseGeometry base_geometry(const TubePatch& P, const VectorXd& x) {
    if (x.size() != P.base_dim) {
        throw std::invalid_argument("base_geometry: coordinates have wrong dimension");
    }
    BaseGeometry b;
    b.g = P.g(x);
    if (std::abs(b.g.norm() - 1.0) > kUnitTol) {
        throw std::invalid_argument("base_geometry: g(x) is not on the unit sphere");
    }
    b.J = jacobian_of(P, x);
    b.G = b.J.transpose() * b.J;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(b.G);
    b.G_inv_sqrt = es.operatorInverseSqrt();
    b.E = b.J * b.G_inv_sqrt;
    b.F = P.normal_frame(x);
    if (b.F.rows() != P.ambient_dim || b.F.cols() != P.normal_rank()) {
        throw std::invalid_argument("base_geometry: normal frame has wrong shape");
    }
    b.d2g = second_of(P, x);
    b.tau = P.tau(x);
    if (!(b.tau > 0.0 && b.tau < pi / 2.0)) {
        throw std::invalid_argument("base_geometry: tau must lie in (0, pi/2)");
    }
    b.dtau = tau_gradient_of(P, x);
    const VectorXd grad_amb = b.J * b.G.ldlt().solve(b.dtau);
    const MatrixXd Hraw = tau_hessian_of(P, x);
    b.hess_coord = Hraw;
    for (int i = 0; i < P.base_dim; ++i) {
        for (int j = 0; j < P.base_dim; ++j) {
            b.hess_coord(i, j) -= grad_amb.dot(b.d2g[static_cast<std::size_t>(i)].col(j));
        }
    }
    b.grad_on = b.G_inv_sqrt * b.dtau;
    b.hess_on = b.G_inv_sqrt * b.hess_coord * b.G_inv_sqrt;
    const double g2 = b.grad_on.squaredNorm();
    if (g2 >= 1.0) {
        throw std::invalid_argument("base_geometry: |grad tau| must be < 1");
    }
    b.rho = std::sqrt(1.0 - g2);
    return b;
}

VectorXd tube_point(const TubePatch& P, const TubePoint& q) {
    check_point(P, q);
    const BaseGeometry b = base_geometry(P, q.x);
    return std::cos(b.tau) * b.g - std::sin(b.tau) * (b.E * b.grad_on + b.rho * (b.F * q.w));
}

VectorXd tube_gauss(const TubePatch& P, const TubePoint& q) {
    check_point(P, q);
    const BaseGeometry b = base_geometry(P, q.x);
    return std::sin(b.tau) * b.g + std::cos(b.tau) * (b.E * b.grad_on + b.rho * (b.F * q.w));
}

MatrixXd base_shape_operator(const TubePatch& P, const TubePoint& q) {
    check_point(P, q);
    const BaseGeometry b = base_geometry(P, q.x);
    const VectorXd W = b.F * q.w;
    MatrixXd L(P.base_dim, P.base_dim);
    for (int i = 0; i < P.base_dim; ++i) {
        L.row(i) = W.transpose() * b.d2g[static_cast<std::size_t>(i)];
    }
    const MatrixXd A = b.G_inv_sqrt * L * b.G_inv_sqrt;
    return 0.5 * (A + A.transpose());
}

MatrixXd p_endomorphism(const TubePatch& P, const TubePoint& q) {
    const BaseGeometry b = base_geometry(P, q.x);
    const MatrixXd A = base_shape_operator(P, q);
    const int d = P.base_dim;
    return std::cos(b.tau) * (MatrixXd::Identity(d, d) - b.grad_on * b.grad_on.transpose()) -
           std::sin(b.tau) * b.hess_on + std::sin(b.tau) * b.rho * A;
}

VectorXd dpsi_formula(const TubePatch& P, const TubePoint& q, const TubeTangent& V) {
    check_point(P, q);
    const BaseGeometry b = base_geometry(P, q.x);
    const double st = std::sin(b.tau);
    const double ct = std::cos(b.tau);
    const VectorXd W = b.F * q.w;

    const VectorXd z_on = b.G * (b.G_inv_sqrt * V.dx);
    const VectorXd grad_coord = b.G.ldlt().solve(b.dtau);

    VectorXd second = VectorXd::Zero(P.ambient_dim);
    for (int i = 0; i < P.base_dim; ++i) {
        second += V.dx(i) * (b.d2g[static_cast<std::size_t>(i)] * grad_coord);
    }
    const VectorXd alpha = b.F * (b.F.transpose() * second);
    const double z_grad = V.dx.dot(b.dtau);
    const double hess_term = V.dx.dot(b.hess_coord * grad_coord);

    VectorXd dW = b.F * (V.dw - q.w.dot(V.dw) * q.w);
    if (V.dx.norm() > 0.0) {
        const MatrixXd dF = (P.normal_frame(q.x + 1e-5 * V.dx) - P.normal_frame(q.x - 1e-5 * V.dx)) / 2e-5;
        dW += dF * q.w;
    }
    const VectorXd nabla_perp = b.F * (b.F.transpose() * dW);

    return b.E * (p_endomorphism(P, q) * z_on) - st * alpha - ct * z_grad * b.rho * W +
           st * hess_term / b.rho * W - st * b.rho * nabla_perp;
}

VectorXd dpsi_fd(const TubePatch& P, const TubePoint& q, const TubeTangent& V, double h) {
    return central([&](double t) { return tube_point(P, along(q, V, t)); }, h);
}

VectorXd dgauss_fd(const TubePatch& P, const TubePoint& q, const TubeTangent& V, double h) {
    return central([&](double t) { return tube_gauss(P, along(q, V, t)); }, h);
}

TubePoint TubeChart::at(const VectorXd& params) const {
    const Eigen::Index d = center.x.size();
    return TubePoint{center.x + params.head(d), unit(center.w + fiber_basis * params.tail(params.size() - d))};
}

int TubeChart::dim() const { return static_cast<int>(center.x.size() + fiber_basis.cols()); }

TubeChart tube_chart(const TubePatch& P, const TubePoint& q) {
    check_point(P, q);
    const int c = P.normal_rank();
    Eigen::HouseholderQR<MatrixXd> qr(q.w);
    const MatrixXd Q = qr.householderQ();
    return TubeChart{q, Q.rightCols(c - 1)};
}

namespace {

MatrixXd chart_jacobian(const TubePatch& P, const TubePoint& q,
                        const std::function<VectorXd(const TubePoint&)>& map, double h, bool extrapolate) {
    const TubeChart chart = tube_chart(P, q);
    const int dim = chart.dim();
    MatrixXd J(P.ambient_dim, dim);
    for (int i = 0; i < dim; ++i) {
        auto curve = [&](double t) {
            VectorXd v = VectorXd::Zero(dim);
            v(i) = t;
            return map(chart.at(v));
        };
        J.col(i) = extrapolate ? richardson(curve, h) : central(curve, h);
    }
    return J;
}

}  // namespace

MatrixXd tube_jacobian(const TubePatch& P, const TubePoint& q, double h) {
    return chart_jacobian(P, q, [&P](const TubePoint& p) { return tube_point(P, p); }, h, false);
}

MatrixXd gauss_jacobian(const TubePatch& P, const TubePoint& q, double h) {
    return chart_jacobian(P, q, [&P](const TubePoint& p) { return tube_gauss(P, p); }, h, false);
}

double gauss_orthogonality_residual(const TubePatch& P, const TubePoint& q, const VectorXd& v) {
    const TubeChart chart = tube_chart(P, q);
    if (v.size() != chart.dim()) {
        throw std::invalid_argument("gauss_orthogonality_residual: direction has wrong dimension");
    }
    const VectorXd dir = unit(v);
    const VectorXd dpsi = central([&](double t) { return tube_point(P, chart.at(t * dir)); }, 1e-5);
    return std::abs(dpsi.dot(tube_gauss(P, q)));
}

double vertical_shape_check(const TubePatch& P, const TubePoint& q, const TubeTangent& V) {
    check_point(P, q);
    if (V.dx.norm() > 1e-10) {
        throw std::invalid_argument("vertical_shape_check: V has a component along the base");
    }
    if (std::abs(V.dw.dot(q.w)) > 1e-10) {
        throw std::invalid_argument("vertical_shape_check: V is not tangent to the fiber");
    }
    const double speed = V.dw.norm();
    if (speed == 0.0) {
        return 0.0;
    }
    const VectorXd dir = V.dw / speed;
    auto fiber = [&](double t) { return TubePoint{q.x, std::cos(speed * t) * q.w + std::sin(speed * t) * dir}; };
    const double cot_tau = 1.0 / std::tan(P.tau(q.x));
    auto residual = [&](bool extrapolate) {
        auto psi = [&](double t) { return tube_point(P, fiber(t)); };
        auto nu = [&](double t) { return tube_gauss(P, fiber(t)); };
        const VectorXd dpsi = extrapolate ? richardson(psi, kRichardsonStep) : central(psi, 1e-5);
        const VectorXd dnu = extrapolate ? richardson(nu, kRichardsonStep) : central(nu, 1e-5);
        return std::pair{(dnu + cot_tau * dpsi).norm(), dpsi.norm()};
    };
    auto [res, scale] = residual(false);
    if (res > 1e-6 * scale) {
        res = residual(true).first;
    }
    return res;
}

ShapeOperatorSet tube_shape_operator(const TubePatch& P, const TubePoint& q) {
    auto psi = [&P](const TubePoint& p) { return tube_point(P, p); };
    auto nu = [&P](const TubePoint& p) { return tube_gauss(P, p); };
    const MatrixXd Jp = chart_jacobian(P, q, psi, kRichardsonStep, true);
    const MatrixXd Jn = chart_jacobian(P, q, nu, kRichardsonStep, true);
    const MatrixXd G = Jp.transpose() * Jp;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(G);
    // N_* = -Psi_* A, so A = -G^{-1} Jp^T Jn in chart coordinates.
    const MatrixXd A_coord = -G.ldlt().solve(Jp.transpose() * Jn);
    MatrixXd A = es.operatorSqrt() * A_coord * es.operatorInverseSqrt();
    A = 0.5 * (A + A.transpose());
    return ShapeOperatorSet({A}, false, P.name);
}

TubePatch great_circle_s3(double tau0, double slope) {
    TubePatch P;
    P.name = "great-circle-s3";
    P.base_dim = 1;
    P.ambient_dim = 4;
    P.g = [](const VectorXd& x) {
        VectorXd g(4);
        g << std::cos(x(0)), std::sin(x(0)), 0.0, 0.0;
        return g;
    };
    P.g_jacobian = [](const VectorXd& x) {
        MatrixXd J(4, 1);
        J << -std::sin(x(0)), std::cos(x(0)), 0.0, 0.0;
        return J;
    };
    P.g_second = [](const VectorXd& x) {
        MatrixXd D(4, 1);
        D << -std::cos(x(0)), -std::sin(x(0)), 0.0, 0.0;
        return std::vector<MatrixXd>{D};
    };
    P.tau = [tau0, slope](const VectorXd& x) { return tau0 + slope * x(0); };
    P.tau_gradient = [slope](const VectorXd&) { return VectorXd::Constant(1, slope); };
    P.tau_hessian = [](const VectorXd&) { return MatrixXd::Zero(1, 1); };
    P.normal_frame = [](const VectorXd&) {
        MatrixXd F = MatrixXd::Zero(4, 2);
        F(2, 0) = 1.0;
        F(3, 1) = 1.0;
        return F;
    };
    P.sample_point = VectorXd::Constant(1, 0.3);
    return P;
}

TubePatch small_circle(double a, double tau0) {
    if (!(a > 0.0 && a < 1.0)) {
        throw std::invalid_argument("small_circle: a must lie in (0, 1)");
    }
    const double b = std::sqrt(1.0 - a * a);
    TubePatch P;
    P.name = "small-circle";
    P.base_dim = 1;
    P.ambient_dim = 4;
    P.g = [a, b](const VectorXd& x) {
        VectorXd g(4);
        g << a * std::cos(x(0)), a * std::sin(x(0)), b, 0.0;
        return g;
    };
    P.g_jacobian = [a](const VectorXd& x) {
        MatrixXd J(4, 1);
        J << -a * std::sin(x(0)), a * std::cos(x(0)), 0.0, 0.0;
        return J;
    };
    P.g_second = [a](const VectorXd& x) {
        MatrixXd D(4, 1);
        D << -a * std::cos(x(0)), -a * std::sin(x(0)), 0.0, 0.0;
        return std::vector<MatrixXd>{D};
    };
    P.tau = [tau0](const VectorXd&) { return tau0; };
    P.tau_gradient = [](const VectorXd&) { return VectorXd::Zero(1); };
    P.tau_hessian = [](const VectorXd&) { return MatrixXd::Zero(1, 1); };
    P.normal_frame = [a, b](const VectorXd& x) {
        MatrixXd F = MatrixXd::Zero(4, 2);
        F.col(0) << b * std::cos(x(0)), b * std::sin(x(0)), -a, 0.0;
        F(3, 1) = 1.0;
        return F;
    };
    P.sample_point = VectorXd::Constant(1, 0.2);
    return P;
}

TubePatch sphere_base(int ell, double tau0, double slope) {
    if (ell < 1) {
        throw std::invalid_argument("sphere_base: ell must be >= 1");
    }
    const int N = ell + 4;
    TubePatch P;
    P.name = "sphere-base";
    P.base_dim = 2;
    P.ambient_dim = N;
    P.g = [N](const VectorXd& x) {
        VectorXd g = VectorXd::Zero(N);
        g.head(3) = gnomonic(x).y;
        return g;
    };
    P.g_jacobian = [N](const VectorXd& x) {
        MatrixXd J = MatrixXd::Zero(N, 2);
        J.topRows(3) = gnomonic(x).J;
        return J;
    };
    P.g_second = [N](const VectorXd& x) {
        const Gnomonic gn = gnomonic(x);
        std::vector<MatrixXd> out;
        for (const MatrixXd& D : gn.d2) {
            MatrixXd full = MatrixXd::Zero(N, 2);
            full.topRows(3) = D;
            out.push_back(std::move(full));
        }
        return out;
    };
    P.tau = [tau0, slope](const VectorXd& x) { return tau0 + slope * x(0); };
    P.tau_gradient = [slope](const VectorXd&) {
        VectorXd g = VectorXd::Zero(2);
        g(0) = slope;
        return g;
    };
    P.tau_hessian = [](const VectorXd&) { return MatrixXd::Zero(2, 2); };
    P.normal_frame = [N](const VectorXd&) {
        MatrixXd F = MatrixXd::Zero(N, N - 3);
        F.bottomRows(N - 3) = MatrixXd::Identity(N - 3, N - 3);
        return F;
    };
    P.sample_point = VectorXd(2);
    P.sample_point << 0.15, -0.1;
    return P;
}

TubePatch make_patch(const std::string& name, const std::map<std::string, double>& params) {
    auto take = [&params, &name](std::initializer_list<std::string> allowed) {
        for (const auto& [key, value] : params) {
            (void)value;
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                throw std::invalid_argument("patch " + name + ": unknown parameter '" + key + "'");
            }
        }
    };
    auto get = [&params](const std::string& key, double fallback) {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "great-circle-s3") {
        take({"tau", "slope"});
        return great_circle_s3(get("tau", pi / 4.0), get("slope", 0.0));
    }
    if (name == "small-circle") {
        take({"a", "tau"});
        return small_circle(get("a", 0.5), get("tau", 0.3));
    }
    if (name == "sphere-base") {
        take({"ell", "tau", "slope"});
        const double ell = get("ell", 2.0);
        if (ell != std::floor(ell)) {
            throw std::invalid_argument("patch sphere-base: ell must be an integer");
        }
        return sphere_base(static_cast<int>(ell), get("tau", pi / 4.0), get("slope", 0.0));
    }
    throw std::invalid_argument("unknown patch '" + name + "'");
}

std::pair<std::string, std::map<std::string, double>> parse_patch_spec(const std::string& spec) {
    const auto open = spec.find('(');
    std::map<std::string, double> params;
    if (open == std::string::npos) {
        return {spec, params};
    }
    if (spec.back() != ')') {
        throw std::invalid_argument("patch spec '" + spec + "': missing ')'");
    }
    const std::string name = spec.substr(0, open);
    std::stringstream body(spec.substr(open + 1, spec.size() - open - 2));
    std::string item;
    while (std::getline(body, item, ',')) {
        if (item.empty()) {
            continue;
        }
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("patch spec '" + spec + "': expected key=value, got '" + item + "'");
        }
        std::size_t used = 0;
        const std::string value = item.substr(eq + 1);
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size()) {
            throw std::invalid_argument("patch spec '" + spec + "': '" + value + "' is not a number");
        }
        params[item.substr(0, eq)] = v;
    }
    return {name, params};
}

SubmanifoldPatch clifford_torus_patch(int n, int p, double r) {
    if (p < 1 || p > n - 1 || !(r > 0.0 && r < 1.0)) {
        throw std::invalid_argument("clifford_torus_patch: need 1 <= p <= n-1 and 0 < r < 1");
    }
    const double s = std::sqrt(1.0 - r * r);
    SubmanifoldPatch S;
    S.name = "clifford-torus";
    S.dim = n;
    S.ambient_dim = n + 2;
    S.f = [n, p, r, s](const VectorXd& x) {
        VectorXd f(n + 2);
        f << r * gnomonic(x.head(p)).y, s * gnomonic(x.tail(n - p)).y;
        return f;
    };
    S.xi = [n, p, r, s](const VectorXd& x) {
        VectorXd xi(n + 2);
        xi << -s * gnomonic(x.head(p)).y, r * gnomonic(x.tail(n - p)).y;
        return xi;
    };
    S.eta_norm = [r, s](const VectorXd&) { return s / r; };
    S.dupin_directions = [n, p](const VectorXd&) {
        MatrixXd D = MatrixXd::Zero(n, p);
        D.topRows(p) = MatrixXd::Identity(p, p);
        return D;
    };
    S.sample_point = VectorXd::LinSpaced(n, 0.05, 0.3);
    return S;
}

SubmanifoldPatch umbilical_sphere_patch(int n, double rho) {
    if (n < 1 || !(rho > 0.0 && rho < pi / 2.0)) {
        throw std::invalid_argument("umbilical_sphere_patch: need n >= 1 and 0 < rho < pi/2");
    }
    SubmanifoldPatch S;
    S.name = "umbilical-sphere";
    S.dim = n;
    S.ambient_dim = n + 2;
    S.f = [n, rho](const VectorXd& x) {
        VectorXd f(n + 2);
        f << std::cos(rho), std::sin(rho) * gnomonic(x).y;
        return f;
    };
    S.xi = [n, rho](const VectorXd& x) {
        VectorXd xi(n + 2);
        xi << std::sin(rho), -std::cos(rho) * gnomonic(x).y;
        return xi;
    };
    S.eta_norm = [rho](const VectorXd&) { return 1.0 / std::tan(rho); };
    S.dupin_directions = [n](const VectorXd&) { return MatrixXd::Identity(n, n); };
    S.sample_point = VectorXd::LinSpaced(n, -0.2, 0.25);
    return S;
}

SubmanifoldPatch tube_submanifold(const TubePatch& P, const TubePoint& q) {
    const TubeChart chart = tube_chart(P, q);
    SubmanifoldPatch S;
    S.name = P.name + "-tube";
    S.dim = chart.dim();
    S.ambient_dim = P.ambient_dim;
    S.f = [P, chart](const VectorXd& v) { return tube_point(P, chart.at(v)); };
    S.xi = [P, chart](const VectorXd& v) { return tube_gauss(P, chart.at(v)); };
    S.eta_norm = [P, chart](const VectorXd& v) { return 1.0 / std::tan(P.tau(chart.at(v).x)); };
    const int d = P.base_dim;
    const int dim = chart.dim();
    S.dupin_directions = [d, dim](const VectorXd&) {
        MatrixXd D = MatrixXd::Zero(dim, dim - d);
        D.bottomRows(dim - d) = MatrixXd::Identity(dim - d, dim - d);
        return D;
    };
    S.sample_point = VectorXd::Zero(dim);
    return S;
}

VectorXd focal_point(const SubmanifoldPatch& S, const VectorXd& x) {
    const double e = S.eta_norm(x);
    if (!(e > 0.0) || !std::isfinite(e)) {
        throw std::invalid_argument("focal_point: sigma must lie in (0, pi/2)");
    }
    const double sigma = std::atan2(1.0, e);
    return std::cos(sigma) * S.f(x) + std::sin(sigma) * S.xi(x);
}

MatrixXd focal_jacobian(const SubmanifoldPatch& S, const VectorXd& x, double h) {
    return fd_jacobian([&S](const VectorXd& y) { return focal_point(S, y); }, x, h);
}

bool generic_check(const ShapeOperatorSet& S, const VectorXd& eta) {
    const double norm = eta.norm();
    if (!(norm > 0.0)) {
        throw std::invalid_argument("generic_check: eta must be nonzero");
    }
    const Eigen::Index joint = dupin_subspace(S, eta).cols();
    const ShapeOperatorSet along_xi({S.shape_operator(eta / norm)});
    const Eigen::Index single = dupin_subspace(along_xi, VectorXd::Constant(1, norm)).cols();
    return joint == single;
}

double jacobian_sigma_min(const TubePatch& P, const TubePoint& q) {
    Eigen::JacobiSVD<MatrixXd> svd(tube_jacobian(P, q));
    return svd.singularValues().minCoeff();
}

RegularityCrossing regularity_crossing(const std::function<TubePatch(double)>& family, const TubePoint& q,
                                       double lo, double hi) {
    auto det_at = [&](double t) { return p_endomorphism(family(t), q).determinant(); };
    auto sigma_at = [&](double t) { return jacobian_sigma_min(family(t), q); };

    double a = lo;
    double b = hi;
    double fa = det_at(a);
    if (fa * det_at(b) > 0.0) {
        throw std::invalid_argument("regularity_crossing: det P does not change sign on the interval");
    }
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = det_at(mid);
        if (fm == 0.0) {
            a = b = mid;
            break;
        }
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    const double det_zero = 0.5 * (a + b);

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x0 = lo;
    double x3 = hi;
    double x1 = x3 - inv_phi * (x3 - x0);
    double x2 = x0 + inv_phi * (x3 - x0);
    double f1 = sigma_at(x1);
    double f2 = sigma_at(x2);
    while (x3 - x0 > 1e-9) {
        if (f1 < f2) {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - inv_phi * (x3 - x0);
            f1 = sigma_at(x1);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + inv_phi * (x3 - x0);
            f2 = sigma_at(x2);
        }
    }
    const double sigma_zero = 0.5 * (x0 + x3);
    return RegularityCrossing{
        .det_zero = det_zero,
        .sigma_min_zero = sigma_zero,
        .sigma_min_at_zero = sigma_at(sigma_zero),
        .sigma_min_generic = std::min(sigma_at(lo), sigma_at(hi)),
    };
}

}  // namespace rpinch
