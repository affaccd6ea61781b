#pragma once

// Topological conclusions attached to a pinching verdict, configuration-driven
// runs, and JSON / Markdown rendering of their results.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ricci_pinch/catalog.hpp"
#include "ricci_pinch/serialization.hpp"

namespace rpinch {

enum class TopologyCase {
    thm1_i,
    thm1_ii,
    thm2_sphere,
    thm2_torus,
    thm2_cp2,
    thm3_sphere,
    thm3_bundle_a,
    thm3_bundle_b,
};

/// "Thm1-i", "Thm1-ii", "Thm2-sphere", ...
const char* to_string(TopologyCase c);

struct TopologyAlternative {
    TopologyCase which;
    std::string statement;
    /// Degrees 0..n. Groups are "Z", "0", "Z^2", "nonzero", "Z^β₃", "Z_q" or "?" (not determined).
    std::vector<HomologyGroup> homology;
    std::vector<std::string> notes;
};

struct TopologyReport {
    int n;
    int k;
    bool hypothesis_satisfied;
    bool strict;
    std::vector<TopologyAlternative> alternatives;
    std::vector<std::string> notes;
};

struct ConclusionOptions {
    /// The mean curvature vanishes nowhere on M (a global fact the pointwise
    /// data cannot certify). Needed for the bundle description when n = 5 and
    /// for the Dupin normal when k = 2.
    bool mean_curvature_nonzero_everywhere = false;
};

/// Possible topologies of a compact M^n satisfying the verdict everywhere.
/// A strict verdict selects a single alternative; otherwise every case the
/// pointwise data cannot exclude is listed.
TopologyReport homology_conclusion(int n, int k, const PinchVerdict& verdict,
                                   const std::optional<DupinDetection>& dupin,
                                   const ConclusionOptions& options = {});

/// Plain-text rendering used by the golden files.
std::string render_topology_text(const TopologyReport& r);

json to_json(const TopologyReport& r);

std::string superscript(int value);
std::string subscript(int value);

/// Short closed form for common constants: integers, p/q with q <= 12, √N and
/// √(p/q); falls back to ten significant digits.
std::string closed_form(double x);

/// "Z at 0, 9, 15, 24" style summary of a homology table, grouped by group.
std::string homology_summary(const std::vector<HomologyGroup>& table);

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<int> restarts;
};

struct Report {
    json body = json::object();
    std::vector<std::string> mismatches;
    std::optional<std::uint64_t> seed;
};

/// Runs a configuration document. Exactly one of "entry", "operators" or
/// "patch" selects the subject; "checks" lists the computations. Schema
/// violations throw ConfigError with a field path.
Report run_config(const json& config, const RunOptions& overrides = {});

/// Sweep of one catalog entry with its verdict table, Dupin data and topology.
Report catalog_report(const CatalogEntry& entry, const LSOptions& options = {},
                      const ConclusionOptions& conclusion = {});

enum class Format { json, markdown };

/// Throws std::invalid_argument for anything but "json" or "markdown".
Format parse_format(const std::string& name);

/// JSON: {"metadata": {...}, "report": body, "mismatches": [...]} rendered
/// canonically. Markdown: tables of verdicts, homology and checks.
std::string render(const Report& report, Format format);

}  // namespace rpinch
