#include "ricci_pinch/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ricci_pinch/dupin_tube.hpp"

namespace rpinch {

namespace {

constexpr const char* kToolName = "ricci-pinch";
constexpr const char* kToolVersion = "0.1.0";

std::string digits_in(int value, const char* const table[10]) {
    std::string out;
    if (value < 0) {
        out += "-";
        value = -value;
    }
    const std::string plain = std::to_string(value);
    for (char c : plain) {
        out += table[c - '0'];
    }
    return out;
}

std::string sphere(int d) { return "S" + superscript(d); }

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string beta(int i) { return "Z^β" + subscript(i); }

std::vector<HomologyGroup> table_of(int n, const std::string& fill) {
    std::vector<HomologyGroup> t;
    for (int i = 0; i <= n; ++i) {
        t.push_back({i, fill});
    }
    t.front().group = "Z";
    t.back().group = "Z";
    return t;
}

TopologyAlternative sphere_alternative(TopologyCase c, int n) {
    return {c, "homeomorphic to " + sphere(n), table_of(n, "0"), {}};
}

TopologyAlternative thm1_i(int n, int k) {
    TopologyAlternative a{TopologyCase::thm1_i,
                          "H_i(M;Z) = 0 for 1 ≤ i ≤ " + std::to_string(k) + " and " + std::to_string(n - k) +
                              " ≤ i ≤ " + std::to_string(n - 1),
                          table_of(n, "?"),
                          {}};
    for (int i = 1; i <= k; ++i) {
        a.homology[static_cast<std::size_t>(i)].group = "0";
        a.homology[static_cast<std::size_t>(n - i)].group = "0";
    }
    if (2 * k < n) {
        const int d = n - k - 1;
        if (a.homology[static_cast<std::size_t>(d)].group == "?") {
            a.homology[static_cast<std::size_t>(d)].group = beta(k + 1);
        }
        a.notes.push_back("H_" + std::to_string(d) + "(M;Z) = " + beta(k + 1) + " (torsion free)");
    }
    return a;
}

TopologyAlternative thm1_ii(int n, int k, const std::optional<DupinDetection>& dupin) {
    TopologyAlternative a{TopologyCase::thm1_ii,
                          "H_" + std::to_string(k) + "(M;Z) ≠ 0 and H_" + std::to_string(n - k) + "(M;Z) = " + beta(k),
                          table_of(n, "?"),
                          {}};
    for (int i = 1; i <= k - 1; ++i) {
        a.homology[static_cast<std::size_t>(i)].group = "0";
        a.homology[static_cast<std::size_t>(n - i)].group = "0";
    }
    a.homology[static_cast<std::size_t>(k)].group = "nonzero";
    a.homology[static_cast<std::size_t>(n - k)].group = beta(k);
    if (2 * k == n) {
        a.notes.push_back("Dupin principal normal η with multiplicity ℓ = " + std::to_string(k) +
                          " and Ric = b on E_η");
    } else {
        a.notes.push_back("Dupin principal normal η with multiplicity " + std::to_string(k) + " ≤ ℓ ≤ " +
                          std::to_string(n - k - 1) + " and Ric = b on E_η");
    }
    if (dupin) {
        a.notes.push_back("detected at the sample point: ‖η‖ = " + closed_form(dupin->norm_eta) +
                          ", ℓ = " + std::to_string(dupin->multiplicity) + (dupin->weak ? " (weak form)" : ""));
    }
    return a;
}

std::vector<TopologyAlternative> thm2_alternatives(int n, bool strict) {
    std::vector<TopologyAlternative> out{sphere_alternative(TopologyCase::thm2_sphere, n)};
    out.back().notes.push_back("necessarily the case when the inequality is strict at some point");
    if (strict) {
        return out;
    }
    const int h = n / 2;
    TopologyAlternative torus{TopologyCase::thm2_torus,
                              "the minimal embedding of the torus T" + superscript(n) + subscript(h) + "(1/√2) into " +
                                  sphere(n + 1),
                              table_of(n, "0"),
                              {"homeomorphic to " + sphere(h) + "×" + sphere(h)}};
    torus.homology[static_cast<std::size_t>(h)].group = "Z^2";
    out.push_back(std::move(torus));
    if (n == 4) {
        TopologyAlternative cp2{TopologyCase::thm2_cp2, "the minimal embedding of CP²₄/₃ into S⁷", table_of(n, "0"),
                                {}};
        cp2.homology[2].group = "Z";
        out.push_back(std::move(cp2));
    }
    return out;
}

std::vector<TopologyAlternative> thm3_alternatives(int n, bool strict, const std::optional<DupinDetection>& dupin,
                                                   const ConclusionOptions& options, std::vector<std::string>& notes) {
    std::vector<TopologyAlternative> out{sphere_alternative(TopologyCase::thm3_sphere, n)};
    out.back().notes.push_back("necessarily the case when the inequality is strict at some point");
    if (strict) {
        return out;
    }
    const int k = (n - 1) / 2;
    if (n == 5 && !options.mean_curvature_nonzero_everywhere) {
        notes.push_back("the sphere bundle description for n = 5 needs H ≠ 0 everywhere; supply the flag to enable it");
        out.push_back(thm1_ii(n, k, dupin));
        return out;
    }
    const bool forced_a = n % 4 == 1;
    std::string statement = "diffeomorphic to an " + sphere(k) + "-bundle over a homotopy " + sphere(k + 1) +
                            ", with the homology of " + sphere(k) + "×" + sphere(k + 1);
    if (n == 5 || n == 13) {
        statement += "; homeomorphic to " + sphere(k) + "×" + sphere(k + 1);
    }
    TopologyAlternative a{TopologyCase::thm3_bundle_a, statement, table_of(n, "0"), {}};
    a.homology[static_cast<std::size_t>(k)].group = "Z";
    a.homology[static_cast<std::size_t>(k + 1)].group = "Z";
    if (forced_a) {
        a.notes.push_back("necessarily the case for n = 4r+1 (r = " + std::to_string((n - 1) / 4) + ")");
    }
    out.push_back(std::move(a));
    if (!forced_a) {
        TopologyAlternative b{TopologyCase::thm3_bundle_b,
                              "diffeomorphic to an " + sphere(k) + "-bundle over a homotopy " + sphere(k + 1) +
                                  " with H_" + std::to_string(k) + "(M;Z) = Z_q for some q > 1",
                              table_of(n, "0"),
                              {}};
        b.homology[static_cast<std::size_t>(k)].group = "Z_q";
        out.push_back(std::move(b));
    }
    return out;
}

json homology_to_json(const std::vector<HomologyGroup>& t) {
    json out = json::array();
    for (const HomologyGroup& h : t) {
        out.push_back(json{{"degree", h.degree}, {"group", h.group}});
    }
    return out;
}

}  // namespace

const char* to_string(TopologyCase c) {
    switch (c) {
        case TopologyCase::thm1_i: return "Thm1-i";
        case TopologyCase::thm1_ii: return "Thm1-ii";
        case TopologyCase::thm2_sphere: return "Thm2-sphere";
        case TopologyCase::thm2_torus: return "Thm2-torus";
        case TopologyCase::thm2_cp2: return "Thm2-CP2";
        case TopologyCase::thm3_sphere: return "Thm3-sphere";
        case TopologyCase::thm3_bundle_a: return "Thm3-bundle-a";
        case TopologyCase::thm3_bundle_b: return "Thm3-bundle-b";
    }
    return "?";
}

std::string superscript(int value) {
    static const char* const table[10] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    return digits_in(value, table);
}

std::string subscript(int value) {
    static const char* const table[10] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
    return digits_in(value, table);
}

std::string closed_form(double x) {
    if (!std::isfinite(x)) {
        return fmt(x);
    }
    constexpr double tol = 1e-9;
    const std::string sign = x < 0 ? "-" : "";
    const double a = std::abs(x);
    auto near = [&](double u, double v) { return std::abs(u - v) <= tol * (1.0 + std::abs(v)); };
    if (near(a, std::round(a))) {
        return sign + std::to_string(static_cast<long long>(std::round(a)));
    }
    for (int q = 2; q <= 12; ++q) {
        const double p = std::round(a * q);
        if (near(a, p / q) && std::gcd(static_cast<long long>(p), static_cast<long long>(q)) == 1) {
            return sign + std::to_string(static_cast<long long>(p)) + "/" + std::to_string(q);
        }
    }
    const double sq = a * a;
    if (sq < 1e6 && near(sq, std::round(sq))) {
        return sign + "√" + std::to_string(static_cast<long long>(std::round(sq)));
    }
    for (int q = 2; q <= 12; ++q) {
        const double p = std::round(sq * q);
        if (p > 0 && near(sq, p / q) && std::gcd(static_cast<long long>(p), static_cast<long long>(q)) == 1) {
            return sign + "√(" + std::to_string(static_cast<long long>(p)) + "/" + std::to_string(q) + ")";
        }
    }
    return fmt(x);
}

std::string homology_summary(const std::vector<HomologyGroup>& table) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<int>> degrees;
    bool zeros = false;
    for (const HomologyGroup& h : table) {
        if (h.group == "0") {
            zeros = true;
            continue;
        }
        if (!degrees.contains(h.group)) {
            order.push_back(h.group);
        }
        degrees[h.group].push_back(h.degree);
    }
    std::string out;
    for (const std::string& g : order) {
        if (!out.empty()) {
            out += "; ";
        }
        out += g + " at ";
        const std::vector<int>& ds = degrees[g];
        for (std::size_t i = 0; i < ds.size(); ++i) {
            out += (i ? ", " : "") + std::to_string(ds[i]);
        }
    }
    if (zeros) {
        out += out.empty() ? "0 everywhere" : "; 0 elsewhere";
    }
    return out;
}

TopologyReport homology_conclusion(int n, int k, const PinchVerdict& verdict,
                                   const std::optional<DupinDetection>& dupin, const ConclusionOptions& options) {
    if (n < 4 || k < 2 || 2 * k > n) {
        throw std::invalid_argument("homology_conclusion: need n >= 4 and 2 <= k <= n/2");
    }
    TopologyReport r{n, k, verdict.holds, verdict.strict, {}, {}};
    if (!verdict.holds) {
        r.notes.push_back("hypothesis not satisfied: Ric_min = " + fmt(verdict.ricci_min) + " < b = " + fmt(verdict.b));
        return r;
    }
    if (2 * k == n) {
        r.alternatives = thm2_alternatives(n, verdict.strict);
    } else if (n % 2 == 1 && n >= 5 && 2 * k == n - 1) {
        r.alternatives = thm3_alternatives(n, verdict.strict, dupin, options, r.notes);
    } else {
        r.alternatives.push_back(thm1_i(n, k));
        if (verdict.strict) {
            r.alternatives.back().notes.push_back("necessarily the case when the inequality is strict at some point");
        } else {
            r.alternatives.push_back(thm1_ii(n, k, dupin));
        }
    }
    if (!verdict.strict) {
        r.notes.push_back("equality at the sample point; the global alternative is not decided by pointwise data");
    }
    return r;
}

std::string render_topology_text(const TopologyReport& r) {
    std::ostringstream out;
    out << "n=" << r.n << ", k=" << r.k << ": ";
    if (!r.hypothesis_satisfied) {
        out << "hypothesis not satisfied\n";
    } else {
        out << "Ric ≥ b(n,k,H) holds " << (r.strict ? "strictly" : "with equality") << "\n";
    }
    for (const TopologyAlternative& a : r.alternatives) {
        out << "[" << to_string(a.which) << "] " << a.statement << "\n";
        out << "  homology: " << homology_summary(a.homology) << "\n";
        for (const std::string& note : a.notes) {
            out << "  note: " << note << "\n";
        }
    }
    for (const std::string& note : r.notes) {
        out << "note: " << note << "\n";
    }
    return out.str();
}

json to_json(const TopologyReport& r) {
    json alts = json::array();
    for (const TopologyAlternative& a : r.alternatives) {
        alts.push_back(json{{"case", to_string(a.which)},
                            {"statement", a.statement},
                            {"homology", homology_to_json(a.homology)},
                            {"notes", a.notes}});
    }
    return json{{"n", r.n},
                {"k", r.k},
                {"hypothesis_satisfied", r.hypothesis_satisfied},
                {"strict", r.strict},
                {"alternatives", alts},
                {"notes", r.notes}};
}

// ---------------------------------------------------------------------------
// Configuration runs

namespace {

const std::set<std::string> kCommonKeys = {"entry", "operators", "patch",  "checks", "k",
                                           "seed",  "restarts",  "samples", "expect", "h_nonzero_everywhere",
                                           "ls_p"};

const std::map<std::string, std::set<std::string>> kEntryParams = {
    {"clifford-torus", {"n", "p", "r2", "r"}},
    {"focal", {"m1", "m2"}},
    {"g4-minimal", {"m1", "m2"}},
    {"projective", {"family", "m"}},
    {"isoparametric", {"g", "theta", "multiplicities"}},
};

const std::map<std::string, std::set<std::string>> kPatchParams = {
    {"great-circle-s3", {"tau", "slope"}},
    {"small-circle", {"a", "tau"}},
    {"sphere-base", {"ell", "tau", "slope"}},
    {"clifford-torus", {"n", "p", "r", "r2"}},
};

const std::set<std::string> kMatrixChecks = {"star", "dupin", "ls-max", "bounds", "topology"};
const std::set<std::string> kPatchChecks = {"unit-sphere", "gauss-orthogonality", "vertical-shape", "dpsi",
                                            "regularity", "focal-roundtrip", "dupin"};

const json& field(const json& doc, const std::string& key) { return doc.at(key); }

long long get_int(const json& doc, const std::string& key) {
    const json& v = field(doc, key);
    if (!v.is_number_integer()) {
        throw ConfigError("$." + key, "expected an integer");
    }
    return v.get<long long>();
}

double get_real(const json& doc, const std::string& key) {
    const json& v = field(doc, key);
    if (!v.is_number()) {
        throw ConfigError("$." + key, "expected a number");
    }
    return v.get<double>();
}

long long require_int(const json& doc, const std::string& key) {
    if (!doc.contains(key)) {
        throw ConfigError("$." + key, "missing required field");
    }
    return get_int(doc, key);
}

int as_int(long long v, const std::string& key) {
    if (v < -1000000 || v > 1000000) {
        throw ConfigError("$." + key, "out of range");
    }
    return static_cast<int>(v);
}

CatalogEntry build_entry(const json& config) {
    const json& e = config.at("entry");
    if (!e.is_string()) {
        throw ConfigError("$.entry", "expected a string");
    }
    const std::string name = e.get<std::string>();
    auto params = kEntryParams.find(name);
    const std::set<std::string> allowed = params == kEntryParams.end() ? std::set<std::string>{} : params->second;
    for (auto it = config.begin(); it != config.end(); ++it) {
        if (!kCommonKeys.contains(it.key()) && !allowed.contains(it.key())) {
            const bool known = std::any_of(kEntryParams.begin(), kEntryParams.end(),
                                           [&](const auto& kv) { return kv.second.contains(it.key()); }) ||
                               std::any_of(kPatchParams.begin(), kPatchParams.end(),
                                           [&](const auto& kv) { return kv.second.contains(it.key()); });
            throw ConfigError("$." + it.key(), known ? "not a parameter of entry \"" + name + "\"" : "unknown field");
        }
    }
    try {
        if (name == "clifford-torus") {
            const int n = as_int(require_int(config, "n"), "n");
            const int p = as_int(require_int(config, "p"), "p");
            if (config.contains("r2") == config.contains("r")) {
                throw ConfigError("$.r2", "give exactly one of \"r2\" and \"r\"");
            }
            const double r = config.contains("r") ? get_real(config, "r") : std::sqrt(get_real(config, "r2"));
            return clifford_torus(n, p, r);
        }
        if (name == "focal" || name == "g4-minimal") {
            const int m1 = as_int(require_int(config, "m1"), "m1");
            const int m2 = as_int(require_int(config, "m2"), "m2");
            return name == "focal" ? focal_entry(m1, m2) : g4_minimal_entry(m1, m2);
        }
        if (name == "projective") {
            if (!config.contains("family")) {
                throw ConfigError("$.family", "missing required field");
            }
            const json& f = config.at("family");
            const std::string fam = f.is_string() ? f.get<std::string>() : std::string{};
            ProjectiveFamily family;
            if (fam == "C") {
                family = ProjectiveFamily::complex;
            } else if (fam == "H") {
                family = ProjectiveFamily::quaternionic;
            } else if (fam == "O") {
                family = ProjectiveFamily::octonionic;
            } else {
                throw ConfigError("$.family", "expected \"C\", \"H\" or \"O\"");
            }
            const int m = config.contains("m") ? as_int(get_int(config, "m"), "m") : 2;
            return projective_entry(family, m);
        }
        if (name == "isoparametric") {
            const int g = as_int(require_int(config, "g"), "g");
            if (!config.contains("theta")) {
                throw ConfigError("$.theta", "missing required field");
            }
            const double theta = get_real(config, "theta");
            if (!config.contains("multiplicities") || !config.at("multiplicities").is_array()) {
                throw ConfigError("$.multiplicities", "expected an array of integers");
            }
            std::vector<int> mult;
            const json& arr = config.at("multiplicities");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                if (!arr[i].is_number_integer()) {
                    throw ConfigError("$.multiplicities[" + std::to_string(i) + "]", "expected an integer");
                }
                mult.push_back(arr[i].get<int>());
            }
            const IsoparametricSpec spec{g, theta, mult};
            ShapeOperatorSet S = isoparametric(spec, "isoparametric");
            CatalogEntry entry{.label = S.label(),
                               .description = "isoparametric hypersurface",
                               .dim = S.n(),
                               .ambient = S.n() + 1,
                               .data = S};
            return entry;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& ex) {
        throw ConfigError("$.entry", ex.what());
    }
    std::optional<CatalogEntry> found = find_entry(name);
    if (!found) {
        throw ConfigError("$.entry", "unknown catalog entry \"" + name + "\"");
    }
    return *found;
}

std::vector<std::string> parse_checks(const json& config, const std::set<std::string>& allowed,
                                      std::vector<std::string> fallback) {
    if (!config.contains("checks")) {
        return fallback;
    }
    const json& c = config.at("checks");
    if (!c.is_array()) {
        throw ConfigError("$.checks", "expected an array of strings");
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const std::string path = "$.checks[" + std::to_string(i) + "]";
        if (!c[i].is_string()) {
            throw ConfigError(path, "expected a string");
        }
        const std::string name = c[i].get<std::string>();
        if (!allowed.contains(name)) {
            std::string list;
            for (const std::string& a : allowed) {
                list += (list.empty() ? "" : ", ") + a;
            }
            throw ConfigError(path, "unknown check \"" + name + "\" (expected one of: " + list + ")");
        }
        if (std::find(out.begin(), out.end(), name) == out.end()) {
            out.push_back(name);
        }
    }
    return out;
}

bool wants(const std::vector<std::string>& checks, const std::string& name) {
    return std::find(checks.begin(), checks.end(), name) != checks.end();
}

LSOptions ls_options(const json& config, const RunOptions& overrides) {
    LSOptions o;
    if (config.contains("seed")) {
        const json& s = config.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            throw ConfigError("$.seed", "expected a non-negative integer");
        }
        o.seed = s.get<std::uint64_t>();
    }
    if (config.contains("restarts")) {
        const long long r = get_int(config, "restarts");
        if (r < 1) {
            throw ConfigError("$.restarts", "must be >= 1");
        }
        o.restarts = as_int(r, "restarts");
    }
    if (overrides.seed) {
        o.seed = *overrides.seed;
    }
    if (overrides.restarts) {
        o.restarts = *overrides.restarts;
    }
    return o;
}

ConclusionOptions conclusion_options(const json& config) {
    ConclusionOptions c;
    if (config.contains("h_nonzero_everywhere")) {
        if (!config.at("h_nonzero_everywhere").is_boolean()) {
            throw ConfigError("$.h_nonzero_everywhere", "expected a boolean");
        }
        c.mean_curvature_nonzero_everywhere = config.at("h_nonzero_everywhere").get<bool>();
    }
    return c;
}

json subject_json(const CatalogEntry& e) {
    json s{{"kind", "entry"},
           {"label", e.label},
           {"description", e.description},
           {"n", e.dim},
           {"ambient", e.ambient},
           {"data", e.matrix_backed() ? "operators" : "analytic"}};
    if (e.matrix_backed()) {
        s["m"] = e.operators().m();
        s["H"] = mean_curvature(e.operators()).H;
    } else {
        const auto& d = std::get<AnalyticDescriptor>(e.data);
        s["H"] = d.H;
        s["ricci_infimum"] = d.ricci_min;
        s["open_bound"] = d.open_bound;
    }
    return s;
}

PinchVerdict verdict_for(const CatalogEntry& e, int k) {
    return e.matrix_backed() ? check_star(e.operators(), k) : analytic_verdict(std::get<AnalyticDescriptor>(e.data), k);
}

std::optional<int> max_k_of(const CatalogEntry& e) {
    std::optional<int> best;
    for (int k = 2; 2 * k <= e.dim; ++k) {
        if (verdict_for(e, k).holds) {
            best = k;
        }
    }
    return best;
}

json int_or_null(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

struct Expectations {
    std::optional<std::optional<int>> max_k;
    std::optional<bool> holds;
    std::optional<bool> equality;
    std::optional<double> dupin_norm;
    std::optional<int> multiplicity;
    std::optional<bool> pass;
};

Expectations parse_expect(const json& config, bool patch) {
    Expectations x;
    if (!config.contains("expect")) {
        return x;
    }
    const json& e = config.at("expect");
    if (!e.is_object()) {
        throw ConfigError("$.expect", "expected an object");
    }
    for (auto it = e.begin(); it != e.end(); ++it) {
        const std::string path = "$.expect." + it.key();
        const json& v = it.value();
        if (patch) {
            if (it.key() != "pass") {
                throw ConfigError(path, "unknown field (tube runs accept only \"pass\")");
            }
        }
        if (it.key() == "max_k") {
            if (v.is_null()) {
                x.max_k = std::optional<int>{};
            } else if (v.is_number_integer()) {
                x.max_k = std::optional<int>{v.get<int>()};
            } else {
                throw ConfigError(path, "expected an integer or null");
            }
        } else if (it.key() == "holds" || it.key() == "equality" || it.key() == "pass") {
            if (!v.is_boolean()) {
                throw ConfigError(path, "expected a boolean");
            }
            (it.key() == "holds" ? x.holds : it.key() == "equality" ? x.equality : x.pass) = v.get<bool>();
        } else if (it.key() == "dupin_norm") {
            if (!v.is_number()) {
                throw ConfigError(path, "expected a number");
            }
            x.dupin_norm = v.get<double>();
        } else if (it.key() == "multiplicity") {
            if (!v.is_number_integer()) {
                throw ConfigError(path, "expected an integer");
            }
            x.multiplicity = v.get<int>();
        } else {
            throw ConfigError(path, "unknown field");
        }
    }
    return x;
}

Report run_matrix(const CatalogEntry& entry, const json& config, const RunOptions& overrides) {
    const std::vector<std::string> checks = parse_checks(config, kMatrixChecks, {"star"});
    const LSOptions options = ls_options(config, overrides);
    const ConclusionOptions conclusion = conclusion_options(config);
    const Expectations expect = parse_expect(config, false);
    const int n = entry.dim;
    if (n < 4) {
        throw ConfigError("$", "the pinching condition needs n >= 4");
    }

    std::vector<int> ks;
    if (config.contains("k")) {
        const long long k = get_int(config, "k");
        if (k < 2 || 2 * k > n) {
            throw ConfigError("$.k", "must satisfy 2 <= k <= n/2 = " + std::to_string(n / 2));
        }
        ks.push_back(static_cast<int>(k));
    } else {
        for (int k = 2; 2 * k <= n; ++k) {
            ks.push_back(k);
        }
    }
    const bool need_matrix = wants(checks, "dupin") || wants(checks, "ls-max") || wants(checks, "bounds");
    if (need_matrix && !entry.matrix_backed()) {
        throw ConfigError("$.checks", "entry \"" + entry.label + "\" has no operator data; only star and topology apply");
    }

    Report rep;
    rep.seed = options.seed;
    rep.body["subject"] = subject_json(entry);
    rep.body["checks"] = checks;
    const std::optional<int> max_k = max_k_of(entry);
    rep.body["max_k"] = int_or_null(max_k);

    std::map<int, PinchVerdict> verdicts;
    std::map<int, std::optional<DupinDetection>> dupins;
    for (int k : ks) {
        verdicts.emplace(k, verdict_for(entry, k));
    }
    const bool run_dupin = wants(checks, "dupin");
    if (run_dupin || wants(checks, "star")) {
        json rows = json::array();
        for (int k : ks) {
            const PinchVerdict& v = verdicts.at(k);
            std::optional<DupinDetection> d;
            if (run_dupin && v.holds && !v.strict) {
                d = dupin_detect(entry.operators(), k, options);
            }
            dupins[k] = d;
            rows.push_back(verdict_to_json(v, d));
        }
        rep.body["verdicts"] = rows;
    }

    if (wants(checks, "ls-max")) {
        std::vector<int> ps;
        if (config.contains("ls_p")) {
            const long long p = get_int(config, "ls_p");
            if (p < 1 || p >= n) {
                throw ConfigError("$.ls_p", "must satisfy 1 <= p < n");
            }
            ps.push_back(static_cast<int>(p));
        } else {
            ps = ks;
        }
        json rows = json::array();
        for (int p : ps) {
            rows.push_back(to_json(ls_max(entry.operators(), p, options), p));
        }
        rep.body["ls_max"] = rows;
    }

    if (wants(checks, "bounds")) {
        json rows = json::array();
        for (int k : ks) {
            if (!verdicts.at(k).holds) {
                continue;
            }
            const ShapeBoundsResult b = shape_bounds_check(entry.operators(), k);
            rows.push_back(json{{"k", k},
                                {"ok", b.ok},
                                {"lower", b.lower},
                                {"upper", b.upper},
                                {"violation", b.violation ? json(*b.violation) : json(nullptr)}});
            if (!b.ok) {
                rep.mismatches.push_back("bounds at k=" + std::to_string(k) + ": " + b.violation.value_or("violated"));
            }
        }
        rep.body["bounds"] = rows;
    }

    if (wants(checks, "topology")) {
        const int k = config.contains("k") ? ks.front() : max_k.value_or(2);
        const PinchVerdict v = verdict_for(entry, k);
        std::optional<DupinDetection> d;
        if (dupins.contains(k)) {
            d = dupins.at(k);
        } else if (v.holds && !v.strict && entry.matrix_backed()) {
            d = dupin_detect(entry.operators(), k, options);
        }
        rep.body["topology"] = to_json(homology_conclusion(n, k, v, d, conclusion));
    }
    if (!entry.expected_homology.empty()) {
        rep.body["expected_homology"] = homology_to_json(entry.expected_homology);
    }

    const int k0 = ks.front();
    if (expect.max_k && *expect.max_k != max_k) {
        rep.mismatches.push_back("max_k: expected " + (*expect.max_k ? std::to_string(**expect.max_k) : "none") +
                                 ", got " + (max_k ? std::to_string(*max_k) : "none"));
    }
    if (expect.holds && *expect.holds != verdicts.at(k0).holds) {
        rep.mismatches.push_back("holds at k=" + std::to_string(k0) + ": expected " +
                                 (*expect.holds ? "true" : "false"));
    }
    if (expect.equality) {
        const PinchVerdict& v = verdicts.at(k0);
        const bool eq = v.holds && !v.strict;
        if (eq != *expect.equality) {
            rep.mismatches.push_back("equality at k=" + std::to_string(k0) + ": expected " +
                                     (*expect.equality ? "true" : "false"));
        }
    }
    if (expect.dupin_norm || expect.multiplicity) {
        const std::optional<DupinDetection>* d = dupins.contains(k0) ? &dupins.at(k0) : nullptr;
        if (!d || !d->has_value()) {
            rep.mismatches.push_back("dupin at k=" + std::to_string(k0) + ": expected a Dupin normal, none detected" +
                                     (run_dupin ? "" : " (add the \"dupin\" check)"));
        } else {
            const DupinDetection& dd = **d;
            if (expect.dupin_norm && std::abs(dd.norm_eta - *expect.dupin_norm) > 1e-9 * (1.0 + *expect.dupin_norm)) {
                rep.mismatches.push_back("dupin norm: expected " + fmt(*expect.dupin_norm) + ", got " +
                                         fmt(dd.norm_eta));
            }
            if (expect.multiplicity && dd.multiplicity != *expect.multiplicity) {
                rep.mismatches.push_back("multiplicity: expected " + std::to_string(*expect.multiplicity) + ", got " +
                                         std::to_string(dd.multiplicity));
            }
        }
    }
    return rep;
}

struct TubeSampler {
    const TubePatch& P;
    std::mt19937_64 rng;
    std::normal_distribution<double> normal{0.0, 1.0};

    VectorXd gaussian(int d) {
        VectorXd v(d);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            v(i) = normal(rng);
        }
        return v;
    }
    TubePoint point() {
        TubePoint q{P.sample_point + 0.05 * gaussian(P.base_dim), gaussian(P.normal_rank())};
        q.w.normalize();
        return q;
    }
    VectorXd fiber_tangent(const VectorXd& w) {
        VectorXd dw = gaussian(static_cast<int>(w.size()));
        dw -= dw.dot(w) * w;
        return dw / dw.norm();
    }
};

json check_row(double value, double tolerance, int samples) {
    return json{{"value", value}, {"tolerance", tolerance}, {"samples", samples}, {"pass", value < tolerance}};
}

int sample_count(const json& config, int fallback) {
    if (!config.contains("samples")) {
        return fallback;
    }
    const long long s = get_int(config, "samples");
    if (s < 1 || s > 1000000) {
        throw ConfigError("$.samples", "must lie in [1, 1000000]");
    }
    return static_cast<int>(s);
}

// The focal map of S^p(r) x S^{n-p}(s) collapses the first factor, so its
// Jacobian has rank n - p.
Report run_torus_patch(const json& config, const std::map<std::string, double>& params,
                       const RunOptions& overrides) {
    auto need = [&](const char* key) {
        if (!params.contains(key)) {
            throw ConfigError(std::string("$.") + key, "missing required field");
        }
        return params.at(key);
    };
    const double nd = need("n");
    const double pd = need("p");
    if (nd != std::floor(nd) || pd != std::floor(pd)) {
        throw ConfigError("$.n", "n and p must be integers");
    }
    if (params.contains("r") == params.contains("r2")) {
        throw ConfigError("$.r", "give exactly one of \"r\" and \"r2\"");
    }
    const int n = static_cast<int>(nd);
    const int p = static_cast<int>(pd);
    const double r = params.contains("r") ? params.at("r") : std::sqrt(params.at("r2"));
    for (const char* key : {"k", "ls_p", "h_nonzero_everywhere", "expect"}) {
        if (config.contains(key)) {
            throw ConfigError(std::string("$.") + key, "not used by the clifford-torus patch");
        }
    }
    parse_checks(config, {"focal-rank"}, {"focal-rank"});
    const SubmanifoldPatch S = [&] {
        try {
            return clifford_torus_patch(n, p, r);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("$.patch", e.what());
        }
    }();
    const LSOptions options = ls_options(config, overrides);
    const int samples = std::min(sample_count(config, 200), 1000);
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    const int rank = n - p;
    double small = 0.0;
    double large = std::numeric_limits<double>::infinity();
    double unit = 0.0;
    for (int i = 0; i < samples; ++i) {
        VectorXd x = S.sample_point;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            x(j) += 0.05 * normal(rng);
        }
        unit = std::max(unit, std::abs(focal_point(S, x).norm() - 1.0));
        const VectorXd sv = Eigen::JacobiSVD<MatrixXd>(focal_jacobian(S, x)).singularValues();
        large = std::min(large, sv(rank - 1));
        if (sv.size() > rank) {
            small = std::max(small, sv.tail(sv.size() - rank).maxCoeff());
        }
    }
    Report rep;
    rep.seed = options.seed;
    rep.body["subject"] = json{{"kind", "patch"},
                               {"name", "clifford-torus"},
                               {"parameters", json{{"n", n}, {"p", p}, {"r", r}}},
                               {"base_dim", n},
                               {"normal_rank", 1},
                               {"tube_dim", n}};
    rep.body["checks"] = json::array({"focal-rank"});
    json row = check_row(small, 1e-6, samples);
    row["expected_rank"] = rank;
    row["smallest_kept_singular_value"] = large;
    row["unit_error"] = unit;
    row["pass"] = small < 1e-6 && large > 1e-2 && unit < 1e-10;
    rep.body["tube"] = json{{"focal-rank", row}};
    if (!row["pass"].get<bool>()) {
        rep.mismatches.push_back("focal-rank: check failed");
    }
    return rep;
}

Report run_patch(const json& config, const RunOptions& overrides) {
    const json& p = config.at("patch");
    if (!p.is_string()) {
        throw ConfigError("$.patch", "expected a string");
    }
    auto [name, params] = [&] {
        try {
            return parse_patch_spec(p.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError("$.patch", e.what());
        }
    }();
    auto known = kPatchParams.find(name);
    if (known == kPatchParams.end()) {
        throw ConfigError("$.patch", "unknown patch \"" + name + "\"");
    }
    for (auto it = config.begin(); it != config.end(); ++it) {
        if (kCommonKeys.contains(it.key())) {
            continue;
        }
        if (!known->second.contains(it.key())) {
            throw ConfigError("$." + it.key(), "not a parameter of patch \"" + name + "\"");
        }
        params[it.key()] = get_real(config, it.key());
    }
    if (name == "clifford-torus") {
        return run_torus_patch(config, params, overrides);
    }
    for (const char* key : {"k", "ls_p", "h_nonzero_everywhere"}) {
        if (config.contains(key)) {
            throw ConfigError(std::string("$.") + key, "not used by tube checks");
        }
    }
    TubePatch P = [&] {
        try {
            return make_patch(name, params);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("$.patch", e.what());
        }
    }();

    const std::vector<std::string> checks =
        parse_checks(config, kPatchChecks, {"unit-sphere", "gauss-orthogonality", "vertical-shape", "dpsi",
                                            "focal-roundtrip", "dupin"});
    const LSOptions options = ls_options(config, overrides);
    const Expectations expect = parse_expect(config, true);
    const int samples = sample_count(config, 1000);
    if (wants(checks, "regularity") && name != "small-circle") {
        throw ConfigError("$.checks", "the regularity check needs the small-circle patch");
    }

    Report rep;
    rep.seed = options.seed;
    json params_json = json::object();
    for (const auto& [key, value] : params) {
        params_json[key] = value;
    }
    rep.body["subject"] = json{{"kind", "patch"},
                               {"name", name},
                               {"parameters", params_json},
                               {"base_dim", P.base_dim},
                               {"normal_rank", P.normal_rank()},
                               {"tube_dim", P.tube_dim()}};
    rep.body["checks"] = checks;
    TubeSampler sampler{P, std::mt19937_64(options.seed)};
    json results = json::object();

    try {
        if (wants(checks, "unit-sphere")) {
            double worst = 0.0;
            for (int i = 0; i < samples; ++i) {
                const TubePoint q = sampler.point();
                const VectorXd psi = tube_point(P, q);
                const VectorXd N = tube_gauss(P, q);
                worst = std::max({worst, std::abs(psi.norm() - 1.0), std::abs(N.norm() - 1.0), std::abs(psi.dot(N))});
            }
            results["unit-sphere"] = check_row(worst, 1e-10, samples);
        }
        if (wants(checks, "gauss-orthogonality")) {
            double worst = 0.0;
            for (int i = 0; i < samples; ++i) {
                const TubePoint q = sampler.point();
                worst = std::max(worst, gauss_orthogonality_residual(P, q, sampler.gaussian(P.tube_dim())));
            }
            results["gauss-orthogonality"] = check_row(worst, 1e-6, samples);
        }
        if (wants(checks, "vertical-shape")) {
            double worst = 0.0;
            const int count = P.normal_rank() > 1 ? samples : 0;
            for (int i = 0; i < count; ++i) {
                const TubePoint q = sampler.point();
                const TubeTangent V{VectorXd::Zero(P.base_dim), sampler.fiber_tangent(q.w)};
                worst = std::max(worst, vertical_shape_check(P, q, V));
            }
            results["vertical-shape"] = check_row(worst, 1e-6, count);
        }
        if (wants(checks, "dpsi")) {
            double worst = 0.0;
            for (int i = 0; i < samples; ++i) {
                const TubePoint q = sampler.point();
                TubeTangent V{sampler.gaussian(P.base_dim), VectorXd::Zero(P.normal_rank())};
                if (P.normal_rank() > 1) {
                    V.dw = sampler.fiber_tangent(q.w);
                }
                const VectorXd exact = dpsi_formula(P, q, V);
                worst = std::max(worst, (exact - dpsi_fd(P, q, V)).norm() / (1.0 + exact.norm()));
            }
            results["dpsi"] = check_row(worst, 1e-6, samples);
        }
        if (wants(checks, "focal-roundtrip")) {
            double worst = 0.0;
            double rank_defect = 0.0;
            const int count = std::min(samples, 200);
            for (int i = 0; i < count; ++i) {
                const TubePoint q = sampler.point();
                const SubmanifoldPatch S = tube_submanifold(P, q);
                const VectorXd v = 0.01 * sampler.gaussian(S.dim);
                const TubeChart chart = tube_chart(P, q);
                worst = std::max(worst, (focal_point(S, v) - P.g(chart.at(v).x)).norm());
                const MatrixXd Jh = focal_jacobian(S, v) * S.dupin_directions(v);
                rank_defect = std::max(rank_defect, Jh.norm());
            }
            json row = check_row(std::max(worst, rank_defect), 1e-6, count);
            row["roundtrip_error"] = worst;
            row["fiber_derivative"] = rank_defect;
            results["focal-roundtrip"] = row;
        }
        if (wants(checks, "dupin")) {
            TubePoint q{P.sample_point, VectorXd::Zero(P.normal_rank())};
            q.w(0) = 1.0;
            const ShapeOperatorSet S = tube_shape_operator(P, q);
            const double cot = 1.0 / std::tan(P.tau(q.x));
            VectorXd eta = VectorXd::Constant(1, cot);
            if (dupin_subspace(S, eta).cols() == 0) {
                eta = -eta;
            }
            const int ell = static_cast<int>(dupin_subspace(S, eta).cols());
            const bool generic = generic_check(S, eta);
            const int expected = P.normal_rank() - 1;
            results["dupin"] = json{{"eta", eta(0)},
                                    {"multiplicity", ell},
                                    {"expected_multiplicity", expected},
                                    {"generic", generic},
                                    {"pass", ell == expected && generic}};
        }
        if (wants(checks, "regularity")) {
            const double a = params.at("a");
            const double rho = std::asin(a);
            const double lo = std::max(0.02, rho - 0.25);
            const double hi = std::min(std::numbers::pi / 2 - 0.02, rho + 0.25);
            TubePoint q{P.sample_point, VectorXd::Zero(P.normal_rank())};
            q.w(0) = 1.0;
            const RegularityCrossing rc =
                regularity_crossing([a](double t) { return small_circle(a, t); }, q, lo, hi);
            const double gap = std::abs(rc.det_zero - rc.sigma_min_zero);
            results["regularity"] = json{{"det_zero", rc.det_zero},
                                         {"sigma_min_zero", rc.sigma_min_zero},
                                         {"sigma_min_at_zero", rc.sigma_min_at_zero},
                                         {"sigma_min_generic", rc.sigma_min_generic},
                                         {"value", gap},
                                         {"tolerance", 1e-3},
                                         {"pass", gap < 1e-3 && rc.sigma_min_at_zero < 1e-6 &&
                                                      rc.sigma_min_generic > 1e-3}};
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError("$.patch", e.what());
    }

    rep.body["tube"] = results;
    bool all_pass = true;
    for (auto it = results.begin(); it != results.end(); ++it) {
        if (!it.value().at("pass").get<bool>()) {
            all_pass = false;
            if (!expect.pass || *expect.pass) {
                rep.mismatches.push_back(it.key() + ": check failed");
            }
        }
    }
    if (expect.pass && !*expect.pass && all_pass) {
        rep.mismatches.push_back("expected at least one failing check");
    }
    return rep;
}

}  // namespace

Report run_config(const json& config, const RunOptions& overrides) {
    if (!config.is_object()) {
        throw ConfigError("$", "expected an object");
    }
    const int subjects = static_cast<int>(config.contains("entry")) + static_cast<int>(config.contains("operators")) +
                         static_cast<int>(config.contains("patch"));
    if (subjects != 1) {
        throw ConfigError("$", "exactly one of \"entry\", \"operators\" or \"patch\" is required");
    }
    if (config.contains("patch")) {
        return run_patch(config, overrides);
    }
    if (config.contains("entry")) {
        return run_matrix(build_entry(config), config, overrides);
    }
    for (auto it = config.begin(); it != config.end(); ++it) {
        if (!kCommonKeys.contains(it.key())) {
            throw ConfigError("$." + it.key(), "unknown field");
        }
    }
    ShapeOperatorSet S = shape_operators_from_json(config.at("operators"), "$.operators");
    if (S.label().empty()) {
        S = S.with_label("inline");
    }
    CatalogEntry entry{.label = S.label(),
                       .description = "inline operators",
                       .dim = S.n(),
                       .ambient = S.n() + S.m(),
                       .data = S};
    return run_matrix(entry, config, overrides);
}

Report catalog_report(const CatalogEntry& entry, const LSOptions& options, const ConclusionOptions& conclusion) {
    const SweepResult sweep = run_entry(entry, options);
    Report rep;
    rep.seed = options.seed;
    rep.body["subject"] = subject_json(entry);
    rep.body["max_k"] = int_or_null(sweep.max_k);
    rep.body["bound_based"] = sweep.bound_based;

    std::optional<DupinDetection> dupin = sweep.dupin;
    if (!dupin && sweep.max_k && sweep.equality && entry.matrix_backed()) {
        dupin = dupin_detect(entry.operators(), *sweep.max_k, options);
    }
    json rows = json::array();
    for (const PinchVerdict& v : sweep.verdicts) {
        const bool attach = sweep.max_k && v.k == *sweep.max_k;
        rows.push_back(verdict_to_json(v, attach ? dupin : std::nullopt));
    }
    rep.body["verdicts"] = rows;

    json expected = json::object();
    if (entry.expected_max_k) {
        expected["max_k"] = int_or_null(*entry.expected_max_k);
        expected["equality"] = entry.expected_equality;
    }
    if (entry.expected_dupin_norm) {
        expected["dupin_norm"] = *entry.expected_dupin_norm;
    }
    if (entry.expected_multiplicity) {
        expected["multiplicity"] = *entry.expected_multiplicity;
    }
    rep.body["expected"] = expected;
    if (!entry.expected_homology.empty()) {
        rep.body["expected_homology"] = homology_to_json(entry.expected_homology);
    }
    if (sweep.max_k) {
        const PinchVerdict& v = sweep.verdicts.at(static_cast<std::size_t>(*sweep.max_k - 2));
        rep.body["topology"] = to_json(homology_conclusion(entry.dim, *sweep.max_k, v, dupin, conclusion));
    }
    rep.mismatches = sweep.mismatches;
    return rep;
}

Format parse_format(const std::string& name) {
    if (name == "json") {
        return Format::json;
    }
    if (name == "markdown") {
        return Format::markdown;
    }
    throw std::invalid_argument("unknown format \"" + name + "\" (expected json or markdown)");
}

namespace {

std::string verdict_state(const json& v) {
    if (!v.at("holds").get<bool>()) {
        return "fails";
    }
    return v.at("strict").get<bool>() ? "strict" : "equality";
}

std::vector<HomologyGroup> homology_from_json(const json& arr) {
    std::vector<HomologyGroup> t;
    for (const json& h : arr) {
        t.push_back({h.at("degree").get<int>(), h.at("group").get<std::string>()});
    }
    return t;
}

std::string cell(const json& v) {
    if (v.is_number_float()) {
        return closed_form(v.get<double>());
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "yes" : "no";
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

void markdown_body(const json& body, std::ostringstream& out) {
    if (body.contains("subject")) {
        const json& s = body.at("subject");
        if (s.at("kind") == "patch") {
            out << "# Tube patch: " << s.at("name").get<std::string>() << "\n\n";
            out << "base dimension " << s.at("base_dim") << ", normal rank " << s.at("normal_rank")
                << ", tube dimension " << s.at("tube_dim") << "\n\n";
        } else {
            out << "# Report: " << s.at("label").get<std::string>() << "\n\n";
            out << s.at("description").get<std::string>() << ", n = " << s.at("n") << " in S"
                << superscript(s.at("ambient").get<int>()) << ", H = " << cell(s.at("H")) << "\n\n";
        }
    }
    if (body.contains("max_k")) {
        out << "max k: " << (body.at("max_k").is_null() ? std::string("none") : body.at("max_k").dump()) << "\n\n";
    }
    if (body.contains("verdicts")) {
        out << "## Verdicts\n\n| k | verdict | Dupin normal | multiplicity |\n|---|---|---|---|\n";
        for (const json& v : body.at("verdicts")) {
            std::string eta = "-";
            std::string ell = "-";
            if (!v.at("dupin").is_null()) {
                const json& d = v.at("dupin");
                eta = "‖η‖=" + closed_form(d.at("norm_eta").get<double>()) + (d.at("weak").get<bool>() ? " (weak)" : "");
                ell = "ℓ=" + d.at("multiplicity").dump();
            }
            out << "| k=" << v.at("k") << " | " << verdict_state(v) << " | " << eta << " | " << ell << " |\n";
        }
        out << "\n";
    }
    if (body.contains("ls_max")) {
        out << "## Lawson-Simons maximum\n\n| p | maximum | p(n-p) | class |\n|---|---|---|---|\n";
        for (const json& r : body.at("ls_max")) {
            out << "| " << r.at("p") << " | " << fmt(r.at("value").get<double>()) << " | " << cell(r.at("bound"))
                << " | " << r.at("classification").get<std::string>() << " |\n";
        }
        out << "\n";
    }
    if (body.contains("bounds")) {
        out << "## Eigenvalue bounds\n\n| k | μ | λ | within |\n|---|---|---|---|\n";
        for (const json& r : body.at("bounds")) {
            out << "| " << r.at("k") << " | " << cell(r.at("lower")) << " | " << cell(r.at("upper")) << " | "
                << cell(r.at("ok")) << " |\n";
        }
        out << "\n";
    }
    if (body.contains("expected_homology")) {
        out << "## Homology\n\n| table | groups |\n|---|---|\n| expected | "
            << homology_summary(homology_from_json(body.at("expected_homology"))) << " |\n\n";
    }
    if (body.contains("topology")) {
        const json& t = body.at("topology");
        out << "## Topology (k=" << t.at("k") << ")\n\n";
        if (t.at("alternatives").empty()) {
            out << "No conclusion.\n\n";
        } else {
            out << "| case | conclusion | homology |\n|---|---|---|\n";
            for (const json& a : t.at("alternatives")) {
                out << "| " << a.at("case").get<std::string>() << " | " << a.at("statement").get<std::string>()
                    << " | " << homology_summary(homology_from_json(a.at("homology"))) << " |\n";
            }
            out << "\n";
            for (const json& a : t.at("alternatives")) {
                for (const json& note : a.at("notes")) {
                    out << "- " << a.at("case").get<std::string>() << ": " << note.get<std::string>() << "\n";
                }
            }
        }
        for (const json& note : t.at("notes")) {
            out << "- " << note.get<std::string>() << "\n";
        }
        out << "\n";
    }
    if (body.contains("tube")) {
        out << "## Tube checks\n\n| check | value | tolerance | result |\n|---|---|---|---|\n";
        for (auto it = body.at("tube").begin(); it != body.at("tube").end(); ++it) {
            const json& r = it.value();
            const std::string value = r.contains("value") ? fmt(r.at("value").get<double>())
                                                          : "ℓ=" + r.at("multiplicity").dump();
            const std::string tol = r.contains("tolerance") ? fmt(r.at("tolerance").get<double>())
                                                            : "ℓ=" + r.at("expected_multiplicity").dump();
            out << "| " << it.key() << " | " << value << " | " << tol << " | "
                << (r.at("pass").get<bool>() ? "pass" : "FAIL") << " |\n";
        }
        out << "\n";
    }
}

}  // namespace

std::string render(const Report& report, Format format) {
    if (format == Format::json) {
        json metadata{{"tool", kToolName}, {"version", kToolVersion}};
        metadata["seed"] = report.seed ? json(*report.seed) : json(nullptr);
        json doc{{"metadata", metadata}, {"report", report.body}};
        if (!report.mismatches.empty()) {
            doc["mismatches"] = report.mismatches;
        }
        return render_canonical(doc);
    }
    std::ostringstream out;
    markdown_body(report.body, out);
    if (!report.mismatches.empty()) {
        out << "## Expectation mismatches\n\n";
        for (const std::string& m : report.mismatches) {
            out << "- " << m << "\n";
        }
        out << "\n";
    }
    std::string text = out.str();
    if (text.empty()) {
        text = "(empty report)\n";
    }
    while (text.size() > 1 && text[text.size() - 1] == '\n' && text[text.size() - 2] == '\n') {
        text.pop_back();
    }
    return text;
}

}  // namespace rpinch
