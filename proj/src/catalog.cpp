#include "ricci_pinch/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rpinch {

namespace {

using std::numbers::pi;

double tolerance_for(double b) { return kEqualityTol * (1.0 + std::abs(b)); }

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

void check_multiplicities(int g, const std::vector<int>& mult) {
    if (g != 1 && g != 2 && g != 3 && g != 4 && g != 6) {
        throw std::invalid_argument("isoparametric: g must be one of 1, 2, 3, 4, 6");
    }
    if (static_cast<int>(mult.size()) != g) {
        throw std::invalid_argument("isoparametric: expected " + std::to_string(g) + " multiplicities");
    }
    for (int i = 0; i < g; ++i) {
        if (mult[static_cast<std::size_t>(i)] < 1) {
            throw std::invalid_argument("isoparametric: multiplicities must be positive");
        }
        if (mult[static_cast<std::size_t>(i)] != mult[static_cast<std::size_t>((i + 2) % g)]) {
            throw std::invalid_argument("isoparametric: multiplicities must satisfy m_i = m_{i+2}");
        }
    }
}

double minimality_residual(int g, const std::vector<int>& mult, double theta) {
    double s = 0.0;
    for (int i = 0; i < g; ++i) {
        s += mult[static_cast<std::size_t>(i)] / std::tan(theta + i * pi / g);
    }
    return s;
}

std::vector<HomologyGroup> table_from_degrees(int n, const std::vector<std::pair<int, std::string>>& nonzero) {
    std::vector<HomologyGroup> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
        std::string group = "0";
        for (const auto& [deg, grp] : nonzero) {
            if (deg == i) {
                group = grp;
            }
        }
        out.push_back({i, group});
    }
    return out;
}

std::vector<HomologyGroup> sphere_product_homology(int p, int q) {
    const int n = p + q;
    if (p == q) {
        return table_from_degrees(n, {{0, "Z"}, {p, "Z^2"}, {n, "Z"}});
    }
    return table_from_degrees(n, {{0, "Z"}, {p, "Z"}, {q, "Z"}, {n, "Z"}});
}

std::optional<int> max_k_analytic(const AnalyticDescriptor& d) {
    std::optional<int> best;
    for (int k = 2; 2 * k <= d.n; ++k) {
        const double b = pinch_bound(PinchingParams(d.n, k, d.H));
        if (d.ricci_min >= b - tolerance_for(b)) {
            best = k;
        }
    }
    return best;
}

}  // namespace

std::vector<double> isoparametric_curvatures(const IsoparametricSpec& spec) {
    check_multiplicities(spec.g, spec.multiplicities);
    if (!(spec.theta > 0.0 && spec.theta < pi / spec.g)) {
        throw std::invalid_argument("isoparametric: theta must lie in (0, pi/g)");
    }
    std::vector<double> out;
    for (int i = 0; i < spec.g; ++i) {
        out.push_back(1.0 / std::tan(spec.theta + i * pi / spec.g));
    }
    return out;
}

ShapeOperatorSet isoparametric(const IsoparametricSpec& spec, std::string label) {
    const std::vector<double> lambdas = isoparametric_curvatures(spec);
    int n = 0;
    for (int m : spec.multiplicities) {
        n += m;
    }
    VectorXd diag(n);
    int pos = 0;
    for (int i = 0; i < spec.g; ++i) {
        const int m = spec.multiplicities[static_cast<std::size_t>(i)];
        diag.segment(pos, m).setConstant(lambdas[static_cast<std::size_t>(i)]);
        pos += m;
    }
    MatrixXd A = diag.asDiagonal();
    return ShapeOperatorSet({A}, false, std::move(label)).aligned_to_mean_curvature();
}

MinimalIsoparametric minimal_isoparametric(int g, const std::vector<int>& multiplicities) {
    check_multiplicities(g, multiplicities);
    if (g == 1) {
        throw std::invalid_argument("minimal_isoparametric: g = 1 has no root in (0, pi)");
    }
    // The residual decreases from +inf to -inf on (0, pi/g).
    double lo = 0.0;
    double hi = pi / g;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (minimality_residual(g, multiplicities, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double theta = 0.5 * (lo + hi);
    const double residual = std::abs(minimality_residual(g, multiplicities, theta));
    if (!std::isfinite(residual) || residual > 1e-9) {
        throw std::runtime_error("minimal_isoparametric: bisection did not find a root");
    }
    ShapeOperatorSet S = isoparametric({g, theta, multiplicities});
    return MinimalIsoparametric{theta, std::move(S), residual};
}

double g4_minimal_cot(int m1, int m2) {
    const double q = static_cast<double>(m2) / m1;
    return std::sqrt(q) + std::sqrt(1.0 + q);
}

int clifford_delta(int r) {
    if (r < 1) {
        throw std::invalid_argument("clifford_delta: r must be >= 1");
    }
    static constexpr int base[8] = {1, 2, 4, 4, 8, 8, 8, 8};
    int factor = 1;
    while (r > 8) {
        r -= 8;
        factor *= 16;
    }
    return factor * base[r - 1];
}

std::optional<std::pair<int, int>> fkm_pair(int r, int s) {
    if (r < 1 || s < 1) {
        throw std::invalid_argument("fkm_pair: r and s must be >= 1");
    }
    const int m2 = s * clifford_delta(r) - r - 1;
    if (m2 <= 0) {
        return std::nullopt;
    }
    return std::make_pair(r, m2);
}

CatalogEntry clifford_torus(int n, int p, double r) {
    if (!(r > 0.0 && r < 1.0)) {
        throw std::invalid_argument("clifford_torus: r must lie in (0, 1)");
    }
    if (p < 2 || p > n - 2) {
        throw std::invalid_argument("clifford_torus: need 2 <= p <= n-2");
    }
    const double s = std::sqrt(1.0 - r * r);
    VectorXd diag(n);
    diag.head(p).setConstant(s / r);
    diag.tail(n - p).setConstant(-r / s);
    const MatrixXd A = diag.asDiagonal();

    std::ostringstream label;
    label << "clifford-" << n << "-" << p << "-r2=" << fmt(r * r);
    ShapeOperatorSet S = ShapeOperatorSet({A}, false, label.str()).aligned_to_mean_curvature();

    CatalogEntry e{
        .label = label.str(),
        .description = "S^" + std::to_string(p) + "(r) x S^" + std::to_string(n - p) + "(sqrt(1-r^2))",
        .dim = n,
        .ambient = n + 1,
        .data = std::move(S),
    };
    e.expected_homology = sphere_product_homology(p, n - p);
    return e;
}

CatalogEntry g4_minimal_entry(int m1, int m2, std::string label) {
    MinimalIsoparametric mi = minimal_isoparametric(4, {m1, m2, m1, m2});
    const int n = 2 * (m1 + m2);
    if (label.empty()) {
        label = "isop-" + std::to_string(m1) + "-" + std::to_string(m2);
    }
    return CatalogEntry{
        .label = label,
        .description = "minimal isoparametric hypersurface, g = 4, (m1,m2) = (" + std::to_string(m1) + "," +
                       std::to_string(m2) + ")",
        .dim = n,
        .ambient = n + 1,
        .data = mi.operators.with_label(label),
    };
}

CatalogEntry focal_entry(int m1, int m2) {
    if (m1 < 1 || m2 < 1) {
        throw std::invalid_argument("focal_entry: multiplicities must be positive");
    }
    const int n = m1 + 2 * m2;
    CatalogEntry e{
        .label = "focal-" + std::to_string(m1) + "-" + std::to_string(m2),
        .description = "focal submanifold M_+ of a g = 4 family with (m1,m2) = (" + std::to_string(m1) + "," +
                       std::to_string(m2) + ")",
        .dim = n,
        .ambient = 2 * (m1 + m2) + 1,
        .data = AnalyticDescriptor{n, 2.0 * (m2 - 1), 0.0, true},
    };
    const int kmax = n / (m1 + 2);
    e.expected_max_k = kmax >= 2 ? std::optional<int>(kmax) : std::nullopt;
    e.expected_equality = false;
    e.expected_homology = table_from_degrees(n, {{0, "Z"}, {m2, "Z"}, {m1 + m2, "Z"}, {n, "Z"}});
    return e;
}

CatalogEntry projective_entry(ProjectiveFamily family, int m) {
    int d = 0;
    int ambient = 0;
    double ric = 0.0;
    std::string name;
    switch (family) {
        case ProjectiveFamily::complex:
            if (m < 2) {
                throw std::invalid_argument("projective_entry: CP^m needs m >= 2");
            }
            d = 2;
            ric = m;
            ambient = m * m + 2 * m - 1;
            name = "proj-C-" + std::to_string(m);
            break;
        case ProjectiveFamily::quaternionic:
            if (m < 2) {
                throw std::invalid_argument("projective_entry: HP^m needs m >= 2");
            }
            d = 4;
            ric = 2.0 * m * (m + 2) / (m + 1);
            ambient = 2 * m * m + 3 * m - 1;
            name = "proj-H-" + std::to_string(m);
            break;
        case ProjectiveFamily::octonionic:
            if (m != 2) {
                throw std::invalid_argument("projective_entry: the Cayley plane has m = 2");
            }
            d = 8;
            ric = 12.0;
            ambient = 25;
            name = "proj-O-2";
            break;
    }
    const int n = d * m;
    std::vector<std::pair<int, std::string>> nonzero;
    for (int i = 0; i <= n; i += d) {
        nonzero.emplace_back(i, "Z");
    }
    CatalogEntry e{
        .label = name,
        .description = "minimal embedding of a projective space of real dimension " + std::to_string(n),
        .dim = n,
        .ambient = ambient,
        .data = AnalyticDescriptor{n, ric, 0.0, false},
    };
    e.expected_homology = table_from_degrees(n, nonzero);
    return e;
}

std::vector<CatalogEntry> catalog() {
    std::vector<CatalogEntry> out;

    auto cartan = [](int m) {
        MinimalIsoparametric mi = minimal_isoparametric(3, {m, m, m});
        const int n = 3 * m;
        const std::string label = "cartan-" + std::to_string(n);
        CatalogEntry e{
            .label = label,
            .description = "Cartan minimal isoparametric hypersurface, g = 3, m = " + std::to_string(m),
            .dim = n,
            .ambient = n + 1,
            .data = mi.operators.with_label(label),
        };
        e.expected_max_k = std::optional<int>(n / 4);
        e.expected_equality = true;
        e.expected_dupin_norm = std::sqrt(3.0);
        e.expected_multiplicity = m;
        return e;
    };
    out.push_back(cartan(4));
    out.push_back(cartan(8));

    auto g4 = [&out](int m1, int m2, const std::string& label, int kmax) {
        CatalogEntry e = g4_minimal_entry(m1, m2, label);
        e.expected_max_k = std::optional<int>(kmax);
        e.expected_equality = false;
        out.push_back(std::move(e));
    };
    g4(4, 5, "isop-4-5", 2);
    g4(4, 3, "isop-4-3", 2);
    g4(4, 7, "isop-4-7", 2);
    g4(4, 11, "isop-4-11", 3);
    g4(6, 9, "isop-6-9", 3);
    for (int m = 2; m <= 5; ++m) {
        g4(4, 4 * m - 5, "isop-vi-m" + std::to_string(m), 2);
    }

    for (auto [m1, m2] : {std::pair{1, 3}, std::pair{2, 3}, std::pair{4, 7}, std::pair{6, 9}, std::pair{4, 5}}) {
        out.push_back(focal_entry(m1, m2));
    }

    for (int m = 2; m <= 6; ++m) {
        CatalogEntry e = projective_entry(ProjectiveFamily::complex, m);
        e.expected_max_k = std::optional<int>(2);
        e.expected_equality = true;
        out.push_back(std::move(e));
    }
    for (int m = 2; m <= 4; ++m) {
        CatalogEntry e = projective_entry(ProjectiveFamily::quaternionic, m);
        e.expected_max_k = std::optional<int>(m == 2 ? 3 : 2);
        e.expected_equality = (m == 2);
        out.push_back(std::move(e));
    }
    {
        CatalogEntry e = projective_entry(ProjectiveFamily::octonionic, 2);
        e.expected_max_k = std::optional<int>(4);
        e.expected_equality = true;
        out.push_back(std::move(e));
    }

    auto torus = [&out](int n, int p, double r2, bool equality, std::optional<double> dupin_norm) {
        CatalogEntry e = clifford_torus(n, p, std::sqrt(r2));
        e.expected_max_k = std::optional<int>(p);
        e.expected_equality = equality;
        e.expected_dupin_norm = dupin_norm;
        e.expected_multiplicity = equality ? std::optional<int>(p) : std::nullopt;
        out.push_back(std::move(e));
    };
    torus(4, 2, 0.5, true, 1.0);
    torus(5, 2, 0.4, true, std::sqrt(1.5));
    torus(7, 3, 3.0 / 7.0, true, std::sqrt(4.0 / 3.0));
    torus(7, 3, 0.41, true, std::nullopt);

    // Constructed for completeness; no verdict is claimed for these.
    {
        MinimalIsoparametric g6 = minimal_isoparametric(6, {1, 1, 1, 1, 1, 1});
        out.push_back(CatalogEntry{"isop-g6-1", "minimal isoparametric hypersurface, g = 6, m = 1", 6, 7,
                                   g6.operators.with_label("isop-g6-1")});
    }
    {
        MinimalIsoparametric g6 = minimal_isoparametric(6, {2, 2, 2, 2, 2, 2});
        out.push_back(CatalogEntry{"isop-g6-2", "minimal isoparametric hypersurface, g = 6, m = 2", 12, 13,
                                   g6.operators.with_label("isop-g6-2")});
    }
    {
        ShapeOperatorSet S = isoparametric({1, pi / 4.0, {6}}, "isop-g1-6");
        out.push_back(CatalogEntry{"isop-g1-6", "small sphere S^6(1/sqrt 2), g = 1", 6, 7, std::move(S)});
    }
    return out;
}

std::optional<CatalogEntry> find_entry(const std::string& label) {
    for (CatalogEntry& e : catalog()) {
        if (e.label == label) {
            return std::move(e);
        }
    }
    return std::nullopt;
}

PinchVerdict analytic_verdict(const AnalyticDescriptor& d, int k) {
    const double b = pinch_bound(PinchingParams(d.n, k, d.H));
    const double tol = tolerance_for(b);
    const bool holds = d.ricci_min >= b - tol;
    PinchVerdict v{
        .k = k,
        .holds = holds,
        .strict = holds && (d.open_bound || d.ricci_min > b + tol),
        .b = b,
        .ricci_min = d.ricci_min,
        .equality_directions = {},
        .max_k = std::nullopt,
    };
    v.max_k = max_k_analytic(d);
    return v;
}

bool homology_consistent_with_pinching(const std::vector<HomologyGroup>& table, int n, int k, bool strict) {
    auto vanishes = [&table](int i) {
        for (const HomologyGroup& h : table) {
            if (h.degree == i) {
                return h.group == "0";
            }
        }
        return false;
    };
    auto range_vanishes = [&vanishes](int from, int to) {
        for (int i = from; i <= to; ++i) {
            if (!vanishes(i)) {
                return false;
            }
        }
        return true;
    };
    const bool case_i = range_vanishes(1, k) && range_vanishes(n - k, n - 1);
    if (strict) {
        return case_i;
    }
    const bool case_ii = range_vanishes(1, k - 1) && range_vanishes(n - k + 1, n - 1) && !vanishes(k);
    return case_i || case_ii;
}

SweepResult run_entry(const CatalogEntry& entry, const LSOptions& options) {
    SweepResult res{
        .label = entry.label,
        .passed = true,
        .mismatches = {},
        .max_k = std::nullopt,
        .equality = false,
        .bound_based = false,
        .verdicts = {},
        .dupin = std::nullopt,
    };
    const int n = entry.dim;
    if (entry.matrix_backed()) {
        const ShapeOperatorSet& S = entry.operators();
        for (int k = 2; 2 * k <= n; ++k) {
            res.verdicts.push_back(check_star(S, k));
        }
        res.max_k = max_pinch_k(S);
    } else {
        const AnalyticDescriptor& d = std::get<AnalyticDescriptor>(entry.data);
        res.bound_based = d.open_bound;
        for (int k = 2; 2 * k <= n; ++k) {
            res.verdicts.push_back(analytic_verdict(d, k));
        }
        res.max_k = max_k_analytic(d);
    }
    if (res.max_k) {
        const PinchVerdict& top = res.verdicts[static_cast<std::size_t>(*res.max_k - 2)];
        res.equality = top.holds && !top.strict;
    }

    auto mismatch = [&res](const std::string& what) {
        res.passed = false;
        res.mismatches.push_back(what);
    };
    auto show = [](const std::optional<int>& k) { return k ? std::to_string(*k) : std::string("none"); };

    if (entry.expected_max_k) {
        if (*entry.expected_max_k != res.max_k) {
            mismatch("max_k: expected " + show(*entry.expected_max_k) + ", computed " + show(res.max_k));
        } else if (res.max_k && entry.expected_equality != res.equality) {
            mismatch(std::string("equality at k=") + show(res.max_k) + ": expected " +
                     (entry.expected_equality ? "equality" : "strict") + ", computed " +
                     (res.equality ? "equality" : "strict"));
        }
    }

    if (entry.matrix_backed() && res.max_k && res.equality &&
        (entry.expected_dupin_norm || entry.expected_multiplicity)) {
        res.dupin = dupin_detect(entry.operators(), *res.max_k, options);
        if (!res.dupin) {
            mismatch("dupin: expected a Dupin principal normal, none detected");
        } else {
            if (entry.expected_dupin_norm &&
                std::abs(res.dupin->norm_eta - *entry.expected_dupin_norm) > kEqualityTol) {
                mismatch("dupin |eta|: expected " + fmt(*entry.expected_dupin_norm) + ", computed " +
                         fmt(res.dupin->norm_eta));
            }
            if (entry.expected_multiplicity && res.dupin->multiplicity != *entry.expected_multiplicity) {
                mismatch("dupin multiplicity: expected " + std::to_string(*entry.expected_multiplicity) +
                         ", computed " + std::to_string(res.dupin->multiplicity));
            }
        }
    }

    if (!entry.expected_homology.empty() && res.max_k) {
        if (static_cast<int>(entry.expected_homology.size()) != n + 1) {
            mismatch("homology: table does not cover degrees 0.." + std::to_string(n));
        } else if (!homology_consistent_with_pinching(entry.expected_homology, n, *res.max_k, !res.equality)) {
            mismatch("homology: table contradicts the vanishing range for k=" + std::to_string(*res.max_k));
        }
    }
    return res;
}

std::vector<SweepResult> catalog_sweep(const LSOptions& options) {
    std::vector<SweepResult> out;
    for (const CatalogEntry& e : catalog()) {
        out.push_back(run_entry(e, options));
    }
    return out;
}

}  // namespace rpinch
