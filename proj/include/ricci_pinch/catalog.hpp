#pragma once

// Catalog of explicit spherical submanifolds: Clifford tori, isoparametric
// hypersurfaces (g = 1, 2, 3, 4, 6), focal submanifolds of g = 4 families and
// the minimal embeddings of projective spaces, with their expected verdicts.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ricci_pinch/curvature.hpp"
#include "ricci_pinch/lawson_simons.hpp"
#include "ricci_pinch/pinch_verdict.hpp"

namespace rpinch {

/// Closed-form Ricci data for entries whose full operator set is not built.
struct AnalyticDescriptor {
    int n;
    double ricci_min;
    double H;
    /// Ric > ricci_min strictly (ricci_min is an infimum, not attained).
    bool open_bound;
};

struct HomologyGroup {
    int degree;
    std::string group;  // "Z", "0", "Z^2", ...
};

struct CatalogEntry {
    std::string label;
    std::string description;
    int dim;
    int ambient;  // dimension of the target sphere
    std::variant<ShapeOperatorSet, AnalyticDescriptor> data;
    /// nullopt: no expectation recorded. Inner nullopt: expected to fail for every k.
    std::optional<std::optional<int>> expected_max_k{};
    bool expected_equality = false;
    std::optional<double> expected_dupin_norm{};
    std::optional<int> expected_multiplicity{};
    /// Full table H_0..H_n when known; empty otherwise.
    std::vector<HomologyGroup> expected_homology{};

    bool matrix_backed() const { return std::holds_alternative<ShapeOperatorSet>(data); }
    const ShapeOperatorSet& operators() const { return std::get<ShapeOperatorSet>(data); }
};

struct IsoparametricSpec {
    int g;
    double theta;
    std::vector<int> multiplicities;  // m_1..m_g with m_i = m_{i+2}
};

/// Principal curvatures cot(theta + (i-1) pi/g), strictly decreasing.
std::vector<double> isoparametric_curvatures(const IsoparametricSpec& spec);

/// Diagonal operator with blocks cot(theta + (i-1) pi/g) I_{m_i}. Throws on
/// invalid g, theta or multiplicities.
ShapeOperatorSet isoparametric(const IsoparametricSpec& spec, std::string label = {});

struct MinimalIsoparametric {
    double theta;
    ShapeOperatorSet operators;
    double residual;  // |sum m_i cot(theta + (i-1) pi/g)|
};

/// Root of sum m_i cot(theta + (i-1) pi/g) = 0 on (0, pi/g) by bisection.
MinimalIsoparametric minimal_isoparametric(int g, const std::vector<int>& multiplicities);

/// sqrt(m2/m1) + sqrt(1 + m2/m1): cot(theta) of the minimal g = 4 hypersurface.
double g4_minimal_cot(int m1, int m2);

/// Dimension of the irreducible module of the Clifford algebra C_{r-1}.
int clifford_delta(int r);

/// FKM multiplicities (r, s delta_r - r - 1) when the second one is positive.
std::optional<std::pair<int, int>> fkm_pair(int r, int s);

/// S^p(r) x S^{n-p}(sqrt(1-r^2)) in S^{n+1}.
CatalogEntry clifford_torus(int n, int p, double r);

/// Minimal g = 4 isoparametric hypersurface with multiplicities (m1, m2).
CatalogEntry g4_minimal_entry(int m1, int m2, std::string label = {});

/// Focal submanifold M_+ of a g = 4 family: n = m1 + 2 m2, Ric > 2(m2 - 1).
CatalogEntry focal_entry(int m1, int m2);

enum class ProjectiveFamily { complex, quaternionic, octonionic };

/// Minimal embeddings of CP^m, HP^m (m >= 2) and the Cayley plane (m = 2).
CatalogEntry projective_entry(ProjectiveFamily family, int m);

/// Every built-in entry, in a fixed order.
std::vector<CatalogEntry> catalog();

std::optional<CatalogEntry> find_entry(const std::string& label);

/// Verdict of Ric >= b at level k against an analytic descriptor.
PinchVerdict analytic_verdict(const AnalyticDescriptor& d, int k);

struct SweepResult {
    std::string label;
    bool passed;
    std::vector<std::string> mismatches;
    std::optional<int> max_k;
    bool equality;
    bool bound_based;
    std::vector<PinchVerdict> verdicts;  // k = 2 .. n/2
    std::optional<DupinDetection> dupin;
};

SweepResult run_entry(const CatalogEntry& entry, const LSOptions& options = {});

std::vector<SweepResult> catalog_sweep(const LSOptions& options = {});

/// True when the table vanishes in degrees 1..k and n-k..n-1 (Thm1-i), or in
/// degrees 1..k-1 and n-k+1..n-1 with H_k nonzero (Thm1-ii).
bool homology_consistent_with_pinching(const std::vector<HomologyGroup>& table, int n, int k,
                                       bool strict);

}  // namespace rpinch
