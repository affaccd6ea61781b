#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <set>

#include "ricci_pinch/catalog.hpp"

using namespace rpinch;

namespace {

constexpr double kPi = std::numbers::pi;

// Dimension of an irreducible module of the Clifford algebra on r-1 generators:
// 2 to the number of i in 1..r-1 with i = 0, 1, 2, 4 mod 8.
int radon_hurwitz_delta(int r) {
    int count = 0;
    for (int i = 1; i <= r - 1; ++i) {
        const int c = i % 8;
        if (c == 0 || c == 1 || c == 2 || c == 4) {
            ++count;
        }
    }
    return 1 << count;
}

VectorXd spectrum(const ShapeOperatorSet& S) { return S[0].diagonal(); }

std::vector<double> distinct(const VectorXd& d) {
    std::vector<double> out;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (out.empty() || std::abs(out.back() - d(i)) > 1e-12) {
            out.push_back(d(i));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("Clifford torus construction") {
    for (int m = 2; m <= 6; ++m) {
        const CatalogEntry e = clifford_torus(2 * m + 1, m, std::sqrt(m / (2.0 * m + 1.0)));
        CHECK(mean_curvature(e.operators()).H < 1e-12);
    }
    const CatalogEntry t = clifford_torus(4, 2, std::sqrt(0.5));
    const PinchVerdict v = check_star(t.operators(), 2);
    CHECK(v.holds);
    CHECK_FALSE(v.strict);
    const auto d = dupin_detect(t.operators(), 2);
    REQUIRE(d.has_value());
    CHECK(d->multiplicity == 2);

    CHECK(check_star(clifford_torus(7, 3, std::sqrt(0.41)).operators(), 3).holds);
    CHECK_THROWS_AS(clifford_torus(4, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(clifford_torus(4, 1, 0.5), std::invalid_argument);
}

TEST_CASE("Clifford window sweep") {
    for (int n : {6, 7, 10}) {
        for (int p = 2; p <= n - 2; ++p) {
            const double lo = (p - 1.0) / (n - 2.0);
            const double hi = static_cast<double>(p) / n;
            if (2 * p > n) {
                // The window is empty beyond n/2; the condition is posed only for k <= n/2.
                CHECK(lo > hi);
                continue;
            }
            for (int i = 0; i < 200; ++i) {
                const double r2 = 0.005 + 0.99 * i / 199.0;
                const CatalogEntry e = clifford_torus(n, p, std::sqrt(r2));
                const bool inside = r2 >= lo - 1e-12 && r2 <= hi + 1e-12;
                INFO("n=" << n << " p=" << p << " r2=" << r2);
                REQUIRE(check_star(e.operators(), p).holds == inside);
            }
            for (double r2 : {lo, hi}) {
                const PinchVerdict v = check_star(clifford_torus(n, p, std::sqrt(r2)).operators(), p);
                CHECK(v.holds);
                CHECK_FALSE(v.strict);
            }
        }
    }
}

TEST_CASE("isoparametric spectra") {
    const double theta = 0.4;
    const ShapeOperatorSet g2 = isoparametric({2, theta, {3, 4}});
    const CatalogEntry torus = clifford_torus(7, 3, std::sin(theta));
    CHECK((spectrum(g2) - spectrum(torus.operators())).norm() < 1e-12);

    const ShapeOperatorSet g3 = isoparametric({3, kPi / 6.0, {4, 4, 4}});
    const auto d3 = distinct(spectrum(g3));
    REQUIRE(d3.size() == 3);
    CHECK(d3[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(std::abs(d3[1]) < 1e-12);
    CHECK(d3[2] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-12));

    const ShapeOperatorSet g4 = isoparametric({4, std::atan(2.0 / (3.0 + std::sqrt(5.0))), {4, 5, 4, 5}});
    const auto d4 = distinct(spectrum(g4));
    REQUIRE(d4.size() == 4);
    CHECK(d4[3] == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-12));

    CHECK_THROWS_AS(isoparametric({5, 0.1, {1, 1, 1, 1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(isoparametric({4, 0.1, {1, 2, 3, 4}}), std::invalid_argument);
    CHECK_THROWS_AS(isoparametric({3, 2.0, {1, 1, 1}}), std::invalid_argument);
}

TEST_CASE("minimal isoparametric solutions") {
    for (int n = 4; n <= 12; ++n) {
        for (int p = 1; p < n; ++p) {
            const MinimalIsoparametric s = minimal_isoparametric(2, {p, n - p});
            CHECK(std::abs(s.operators[0].trace()) < 1e-10);
            CHECK(std::sin(s.theta) * std::sin(s.theta) == doctest::Approx(static_cast<double>(p) / n).epsilon(1e-10));
        }
    }
    const MinimalIsoparametric g3 = minimal_isoparametric(3, {4, 4, 4});
    CHECK(1.0 / std::tan(g3.theta) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));

    for (int m1 = 1; m1 <= 9; ++m1) {
        for (int m2 = 1; m2 <= 20; ++m2) {
            const MinimalIsoparametric s = minimal_isoparametric(4, {m1, m2, m1, m2});
            REQUIRE(s.residual < 1e-12 * (1.0 + m1 + m2));
            REQUIRE(std::abs(s.operators[0].trace()) < 1e-10);
            const double cot = std::sqrt(static_cast<double>(m2) / m1) + std::sqrt(1.0 + static_cast<double>(m2) / m1);
            REQUIRE(std::abs(1.0 / std::tan(s.theta) - cot) < 1e-10 * cot);
            REQUIRE(std::abs(g4_minimal_cot(m1, m2) - cot) < 1e-14 * cot);

            const auto d = distinct(spectrum(s.operators));
            REQUIRE(d.size() == 4);
            REQUIRE(std::abs(d[1] - (d[0] - 1.0) / (d[0] + 1.0)) < 1e-12 * (1.0 + std::abs(d[1])));
            REQUIRE(std::abs(d[2] + 1.0 / d[0]) < 1e-12);
            REQUIRE(std::abs(d[3] + 1.0 / d[1]) < 1e-12 * (1.0 + std::abs(d[3])));
            const double ric = 2.0 * (m1 + m2) - 1.0 - std::max(d[0] * d[0], d[3] * d[3]);
            REQUIRE(std::abs(ricci_min(s.operators) - ric) < 1e-9);
        }
    }
    for (int m : {1, 2}) {
        const MinimalIsoparametric s = minimal_isoparametric(6, std::vector<int>(6, m));
        CHECK(std::abs(s.operators[0].trace()) < 1e-10);
    }
}

TEST_CASE("Clifford module dimensions") {
    const int table[8] = {1, 2, 4, 4, 8, 8, 8, 8};
    for (int r = 1; r <= 8; ++r) {
        CHECK(clifford_delta(r) == table[r - 1]);
    }
    for (int r = 1; r <= 40; ++r) {
        CHECK(clifford_delta(r) == radon_hurwitz_delta(r));
    }
    CHECK(clifford_delta(9) == 16);
    CHECK(clifford_delta(17) == 256);
}

TEST_CASE("FKM multiplicities") {
    CHECK(fkm_pair(4, 2) == std::make_pair(4, 3));
    CHECK_FALSE(fkm_pair(4, 1).has_value());
    CHECK(fkm_pair(4, 3) == std::make_pair(4, 7));
    CHECK(2 * (4 + 3) == 14);
    CHECK(2 * (4 + 7) == 22);
    for (int s = 2; s <= 8; ++s) {
        CHECK(fkm_pair(4, s) == std::make_pair(4, 4 * s - 5));
    }
}

TEST_CASE("FKM hypersurfaces with large s pinch up to r/2") {
    // r = 2 leaves no admissible level: the asymptotic condition reads k <= 1.
    CHECK_FALSE(max_pinch_k(g4_minimal_entry(2, 79).operators()).has_value());
    for (int r = 4; r <= 8; r += 2) {
        const int delta = clifford_delta(r);
        int s = 1;
        while (s * delta <= 20 * (r + 2)) {
            ++s;
        }
        const auto pair = fkm_pair(r, s);
        REQUIRE(pair.has_value());
        const CatalogEntry e = g4_minimal_entry(pair->first, pair->second);
        const std::optional<int> k = max_pinch_k(e.operators());
        INFO("r=" << r << " s=" << s << " (m1,m2)=(" << pair->first << "," << pair->second << ")");
        REQUIRE(k.has_value());
        CHECK(*k >= r / 2);
        for (int j = 2; j <= r / 2; ++j) {
            CHECK(check_star(e.operators(), j).strict);
        }
    }
}

TEST_CASE("focal entries") {
    struct Case {
        int m1, m2, n, ambient, max_k;
        std::vector<int> z;
    };
    const std::vector<Case> cases{
        {2, 3, 8, 11, 2, {0, 3, 5, 8}},
        {6, 9, 24, 31, 3, {0, 9, 15, 24}},
        {4, 5, 14, 19, 2, {0, 5, 9, 14}},
        {1, 3, 7, 9, 2, {0, 3, 4, 7}},
        {4, 7, 18, 23, 3, {0, 7, 11, 18}},
    };
    for (const Case& c : cases) {
        const CatalogEntry e = focal_entry(c.m1, c.m2);
        INFO(e.label);
        CHECK(e.dim == c.n);
        CHECK(e.ambient == c.ambient);
        REQUIRE(e.expected_max_k.has_value());
        CHECK(*e.expected_max_k == c.max_k);
        CHECK(c.max_k == (c.m1 + 2 * c.m2) / (c.m1 + 2));
        REQUIRE(e.expected_homology.size() == static_cast<std::size_t>(c.n + 1));
        for (const HomologyGroup& h : e.expected_homology) {
            const bool z = std::find(c.z.begin(), c.z.end(), h.degree) != c.z.end();
            CHECK(h.group == (z ? "Z" : "0"));
        }
        const auto& d = std::get<AnalyticDescriptor>(e.data);
        CHECK(d.open_bound);
        CHECK(d.ricci_min == doctest::Approx(2.0 * (c.m2 - 1)));
        CHECK(analytic_verdict(d, c.max_k).holds);
        if (2 * (c.max_k + 1) <= c.n) {
            CHECK_FALSE(analytic_verdict(d, c.max_k + 1).holds);
        }
        CHECK(homology_consistent_with_pinching(e.expected_homology, c.n, c.max_k, true));
    }
}

TEST_CASE("projective entries") {
    for (int m = 2; m <= 6; ++m) {
        const CatalogEntry e = projective_entry(ProjectiveFamily::complex, m);
        const auto& d = std::get<AnalyticDescriptor>(e.data);
        CHECK(e.dim == 2 * m);
        CHECK(d.ricci_min == doctest::Approx(m));
        const PinchVerdict v = analytic_verdict(d, 2);
        CHECK(v.holds);
        CHECK_FALSE(v.strict);
        if (2 * 3 <= e.dim) {
            CHECK_FALSE(analytic_verdict(d, 3).holds);
        }
    }
    const CatalogEntry h2 = projective_entry(ProjectiveFamily::quaternionic, 2);
    const auto& dh = std::get<AnalyticDescriptor>(h2.data);
    CHECK(h2.dim == 8);
    CHECK(dh.ricci_min == doctest::Approx(16.0 / 3.0));
    CHECK(analytic_verdict(dh, 3).b == doctest::Approx(16.0 / 3.0));
    CHECK_FALSE(analytic_verdict(dh, 3).strict);
    CHECK_FALSE(analytic_verdict(dh, 4).holds);

    const CatalogEntry o = projective_entry(ProjectiveFamily::octonionic, 2);
    const auto& dof = std::get<AnalyticDescriptor>(o.data);
    CHECK(o.dim == 16);
    CHECK(o.ambient == 25);
    CHECK(analytic_verdict(dof, 4).holds);
    CHECK_FALSE(analytic_verdict(dof, 4).strict);
    CHECK_FALSE(analytic_verdict(dof, 5).holds);

    CHECK_THROWS_AS(projective_entry(ProjectiveFamily::complex, 1), std::invalid_argument);
    CHECK_THROWS_AS(projective_entry(ProjectiveFamily::octonionic, 3), std::invalid_argument);
}

TEST_CASE("catalog lookup and labels") {
    const auto all = catalog();
    std::set<std::string> labels;
    for (const CatalogEntry& e : all) {
        CHECK(labels.insert(e.label).second);
        if (!e.matrix_backed()) {
            CHECK(std::get<AnalyticDescriptor>(e.data).ricci_min > 0.0);
        }
    }
    CHECK(find_entry("cartan-12").has_value());
    CHECK_FALSE(find_entry("no-such-entry").has_value());
}

TEST_CASE("Cartan entries") {
    const SweepResult r12 = run_entry(*find_entry("cartan-12"));
    CHECK(r12.passed);
    CHECK(r12.max_k == 3);
    REQUIRE(r12.dupin.has_value());
    CHECK(r12.dupin->norm_eta == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    CHECK(r12.dupin->multiplicity == 4);

    const SweepResult r24 = run_entry(*find_entry("cartan-24"));
    CHECK(r24.passed);
    CHECK(r24.max_k == 6);
    REQUIRE(r24.dupin.has_value());
    CHECK(r24.dupin->norm_eta == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    CHECK(r24.dupin->multiplicity == 8);
}

TEST_CASE("entries without recorded expectations") {
    for (const char* label : {"isop-g6-1", "isop-g6-2", "isop-g1-6"}) {
        const auto e = find_entry(label);
        REQUIRE(e.has_value());
        CHECK_FALSE(e->expected_max_k.has_value());
        CHECK(run_entry(*e).passed);
    }
}

TEST_CASE("homology consistency helper") {
    std::vector<HomologyGroup> sphere;
    for (int i = 0; i <= 8; ++i) {
        sphere.push_back({i, (i == 0 || i == 8) ? "Z" : "0"});
    }
    CHECK(homology_consistent_with_pinching(sphere, 8, 4, true));
    std::vector<HomologyGroup> product = sphere;
    product[4].group = "Z^2";
    CHECK_FALSE(homology_consistent_with_pinching(product, 8, 4, true));
    CHECK(homology_consistent_with_pinching(product, 8, 4, false));
}
