#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ricci_pinch/report.hpp"

using namespace rpinch;

namespace {

std::string read_golden(const std::string& name) {
    std::ifstream in(std::string(RP_GOLDEN_DIR) + "/" + name);
    REQUIRE_MESSAGE(in.good(), "missing golden file " << name);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

PinchVerdict verdict(int n, int k, bool strict, double H = 0.0) {
    const double b = pinch_bound(PinchingParams(n, k, H));
    return PinchVerdict{k, true, strict, b, strict ? b + 1.0 : b, {}, k};
}

std::set<TopologyCase> cases_of(const TopologyReport& r) {
    std::set<TopologyCase> out;
    for (const TopologyAlternative& a : r.alternatives) {
        out.insert(a.which);
    }
    return out;
}

bool mentions(const TopologyReport& r, const std::string& text) {
    for (const TopologyAlternative& a : r.alternatives) {
        if (a.statement.find(text) != std::string::npos) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("golden topology conclusions") {
    const TopologyReport five = homology_conclusion(5, 2, verdict(5, 2, false, 0.3), std::nullopt, {true});
    CHECK(render_topology_text(five) == read_golden("topology_n5_k2_h.txt"));
    CHECK(mentions(five, "homeomorphic to S²×S³"));

    const TopologyReport thirteen = homology_conclusion(13, 6, verdict(13, 6, false), std::nullopt);
    CHECK(render_topology_text(thirteen) == read_golden("topology_n13_k6.txt"));
    CHECK(mentions(thirteen, "homeomorphic to S⁶×S⁷"));

    const TopologyReport eight = homology_conclusion(8, 4, verdict(8, 4, true), std::nullopt);
    CHECK(render_topology_text(eight) == read_golden("topology_n8_k4_strict.txt"));
    REQUIRE(eight.alternatives.size() == 1);
    CHECK(eight.alternatives.front().statement == "homeomorphic to S⁸");
}

TEST_CASE("sphere bundle refinement") {
    const TopologyReport n9 = homology_conclusion(9, 4, verdict(9, 4, false), std::nullopt);
    CHECK(cases_of(n9) == std::set{TopologyCase::thm3_sphere, TopologyCase::thm3_bundle_a});
    bool forced = false;
    for (const TopologyAlternative& a : n9.alternatives) {
        for (const std::string& note : a.notes) {
            forced = forced || note.find("necessarily the case for n = 4r+1") != std::string::npos;
        }
    }
    CHECK(forced);

    const TopologyReport n7 = homology_conclusion(7, 3, verdict(7, 3, false), std::nullopt);
    CHECK(cases_of(n7) ==
          std::set{TopologyCase::thm3_sphere, TopologyCase::thm3_bundle_a, TopologyCase::thm3_bundle_b});
    for (const TopologyAlternative& a : n7.alternatives) {
        if (a.which == TopologyCase::thm3_bundle_b) {
            CHECK(a.homology[3].group == "Z_q");
        }
    }

    const TopologyReport n5 = homology_conclusion(5, 2, verdict(5, 2, false), std::nullopt);
    CHECK(cases_of(n5) == std::set{TopologyCase::thm3_sphere, TopologyCase::thm1_ii});
    CHECK_FALSE(n5.notes.empty());
}

TEST_CASE("even dimension at k = n/2") {
    const TopologyReport four = homology_conclusion(4, 2, verdict(4, 2, false), std::nullopt);
    CHECK(cases_of(four) == std::set{TopologyCase::thm2_sphere, TopologyCase::thm2_torus, TopologyCase::thm2_cp2});
    const TopologyReport six = homology_conclusion(6, 3, verdict(6, 3, false), std::nullopt);
    CHECK(cases_of(six) == std::set{TopologyCase::thm2_sphere, TopologyCase::thm2_torus});
    CHECK(mentions(six, "T⁶₃(1/√2)"));
}

TEST_CASE("every combination maps to one case set") {
    for (int n = 4; n <= 41; ++n) {
        for (int k = 2; 2 * k <= n; ++k) {
            for (const bool strict : {false, true}) {
                for (const bool flag : {false, true}) {
                    const TopologyReport r = homology_conclusion(n, k, verdict(n, k, strict), std::nullopt, {flag});
                    INFO("n=" << n << " k=" << k << " strict=" << strict << " flag=" << flag);
                    REQUIRE_FALSE(r.alternatives.empty());
                    std::set<TopologyCase> expected;
                    if (2 * k == n) {
                        expected = {TopologyCase::thm2_sphere};
                        if (!strict) {
                            expected.insert(TopologyCase::thm2_torus);
                            if (n == 4) {
                                expected.insert(TopologyCase::thm2_cp2);
                            }
                        }
                    } else if (2 * k == n - 1) {
                        expected = {TopologyCase::thm3_sphere};
                        if (!strict) {
                            if (n == 5 && !flag) {
                                expected.insert(TopologyCase::thm1_ii);
                            } else {
                                expected.insert(TopologyCase::thm3_bundle_a);
                                if (n % 4 == 3) {
                                    expected.insert(TopologyCase::thm3_bundle_b);
                                }
                            }
                        }
                    } else {
                        expected = {TopologyCase::thm1_i};
                        if (!strict) {
                            expected.insert(TopologyCase::thm1_ii);
                        }
                    }
                    REQUIRE(cases_of(r) == expected);
                    REQUIRE(r.alternatives.size() == expected.size());
                    for (const TopologyAlternative& a : r.alternatives) {
                        REQUIRE(a.homology.size() == static_cast<std::size_t>(n + 1));
                        for (int i = 0; i <= n; ++i) {
                            REQUIRE(a.homology[static_cast<std::size_t>(i)].degree == i);
                        }
                        REQUIRE(a.homology.front().group == "Z");
                        REQUIRE(a.homology.back().group == "Z");
                    }
                }
            }
        }
    }
}

TEST_CASE("vanishing ranges and Dupin window notes") {
    const TopologyReport strict = homology_conclusion(12, 3, verdict(12, 3, true), std::nullopt);
    REQUIRE(strict.alternatives.size() == 1);
    const auto& t = strict.alternatives.front().homology;
    for (int i : {1, 2, 3, 9, 10, 11}) {
        CHECK(t[static_cast<std::size_t>(i)].group == "0");
    }
    CHECK(t[8].group == "Z^β₄");

    DupinDetection d{VectorXd::Constant(1, std::sqrt(3.0)), std::sqrt(3.0), MatrixXd::Zero(12, 4), 4, false, false,
                     true};
    const TopologyReport eq = homology_conclusion(12, 3, verdict(12, 3, false), d);
    REQUIRE(eq.alternatives.size() == 2);
    const TopologyAlternative& ii = eq.alternatives[1];
    CHECK(ii.which == TopologyCase::thm1_ii);
    CHECK(ii.homology[3].group == "nonzero");
    CHECK(ii.homology[9].group == "Z^β₃");
    bool window = false;
    bool detected = false;
    for (const std::string& note : ii.notes) {
        window = window || note.find("3 ≤ ℓ ≤ 8") != std::string::npos;
        detected = detected || note.find("‖η‖ = √3, ℓ = 4") != std::string::npos;
    }
    CHECK(window);
    CHECK(detected);
}

TEST_CASE("hypothesis not satisfied") {
    const PinchVerdict fail{4, false, false, 9.0, 8.0, {}, 3};
    const TopologyReport r = homology_conclusion(12, 4, fail, std::nullopt);
    CHECK(r.alternatives.empty());
    REQUIRE_FALSE(r.notes.empty());
    CHECK(r.notes.front().find("hypothesis not satisfied") != std::string::npos);
    CHECK_THROWS_AS(homology_conclusion(12, 7, fail, std::nullopt), std::invalid_argument);
}

TEST_CASE("closed forms and scripts") {
    CHECK(closed_form(std::sqrt(3.0)) == "√3");
    CHECK(closed_form(2.0) == "2");
    CHECK(closed_form(-1.0) == "-1");
    CHECK(closed_form(16.0 / 3.0) == "16/3");
    CHECK(closed_form(std::sqrt(1.5)) == "√(3/2)");
    CHECK(closed_form(std::sqrt(4.0 / 3.0)) == "√(4/3)");
    CHECK(closed_form(std::numbers::pi) == "3.141592654");
    CHECK(superscript(13) == "¹³");
    CHECK(subscript(4) == "₄");
    CHECK(to_string(TopologyCase::thm3_bundle_b) == std::string("Thm3-bundle-b"));
}

TEST_CASE("configuration examples") {
    const Report cartan = run_config(json::parse(R"({"entry":"cartan-12","checks":["star","dupin","ls-max"],"k":3})"));
    CHECK(cartan.mismatches.empty());
    const json& v = cartan.body.at("verdicts").at(0);
    CHECK(v.at("holds").get<bool>());
    CHECK_FALSE(v.at("strict").get<bool>());
    CHECK(v.at("dupin").at("norm_eta").get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    CHECK(v.at("dupin").at("multiplicity").get<int>() == 4);
    CHECK(cartan.body.at("ls_max").at(0).at("classification") == "equality");

    const Report torus =
        run_config(json::parse(R"({"entry":"clifford-torus","n":4,"p":2,"r2":0.5,"checks":["star"],"k":2})"));
    const json& tv = torus.body.at("verdicts").at(0);
    CHECK(tv.at("holds").get<bool>());
    CHECK_FALSE(tv.at("strict").get<bool>());

    const Report tube = run_config(json::parse(
        R"({"patch":"great-circle-s3","tau":0.7853981633974483,"checks":["gauss-orthogonality","vertical-shape"]})"));
    CHECK(tube.mismatches.empty());
    CHECK(tube.body.at("tube").at("gauss-orthogonality").at("value").get<double>() < 1e-6);
    CHECK(tube.body.at("tube").at("vertical-shape").at("value").get<double>() < 1e-6);

    const Report torus_patch = run_config(json::parse(R"({"patch":"clifford-torus","n":4,"p":2,"r2":0.5})"));
    CHECK(torus_patch.mismatches.empty());
    CHECK(torus_patch.body.at("tube").at("focal-rank").at("expected_rank").get<int>() == 2);
}

TEST_CASE("expectations produce mismatches") {
    const Report ok = run_config(json::parse(
        R"({"entry":"cartan-12","checks":["star","dupin"],"k":3,"expect":{"max_k":3,"equality":true,"dupin_norm":1.7320508075688772,"multiplicity":4}})"));
    CHECK(ok.mismatches.empty());
    const Report bad = run_config(json::parse(R"({"entry":"cartan-12","checks":["star"],"k":3,"expect":{"max_k":4}})"));
    CHECK(bad.mismatches.size() == 1);
}

TEST_CASE("schema violations carry field paths") {
    auto path_of = [](const char* text) {
        try {
            run_config(json::parse(text));
        } catch (const ConfigError& e) {
            return e.path();
        }
        return std::string("no error");
    };
    CHECK(path_of(R"({"checks":["star"]})") == "$");
    CHECK(path_of(R"({"entry":"cartan-12","patch":"small-circle"})") == "$");
    CHECK(path_of(R"({"entry":"cartan-12","bogus":1})") == "$.bogus");
    CHECK(path_of(R"({"entry":"cartan-12","k":7})") == "$.k");
    CHECK(path_of(R"({"entry":"cartan-12","k":"3"})") == "$.k");
    CHECK(path_of(R"({"entry":"cartan-12","checks":["star","nope"]})") == "$.checks[1]");
    CHECK(path_of(R"({"entry":"nowhere"})") == "$.entry");
    CHECK(path_of(R"({"entry":"clifford-torus","n":4,"p":2})") == "$.r2");
    CHECK(path_of(R"({"entry":"focal-6-9","checks":["dupin"]})") == "$.checks");
    CHECK(path_of(R"({"entry":"cartan-12","expect":{"max_k":"x"}})") == "$.expect.max_k");
    CHECK(path_of(R"({"operators":{"n":2,"m":1,"operators":[[[1,0],[0,1]]]}})") == "$");
    CHECK(path_of(R"({"operators":{"n":4,"m":1,"operators":[[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0]]]}})") ==
          "$.operators.operators[0][3]");
    CHECK(path_of(R"({"operators":{"n":4,"m":2,"operators":[]}})") == "$.operators.operators");
    CHECK(path_of(R"({"patch":"small-circle","a":0.5,"tau":0.3,"ell":2})") == "$.ell");
    CHECK(path_of(R"({"patch":"great-circle-s3","tau":0.7,"checks":["regularity"]})") == "$.checks");
    CHECK(path_of(R"({"patch":"nowhere"})") == "$.patch");
    CHECK(path_of(R"({"patch":"great-circle-s3","tau":2.5})") == "$.patch");
}

TEST_CASE("inline operators") {
    const Report r = run_config(json::parse(
        R"({"operators":{"n":4,"m":1,"operators":[[[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,0,0,-1]]]},"checks":["star","dupin","bounds","topology"]})"));
    CHECK(r.mismatches.empty());
    CHECK(r.body.at("max_k") == 2);
    CHECK(r.body.at("bounds").at(0).at("ok").get<bool>());
    CHECK(r.body.at("topology").at("alternatives").size() == 3);
}

TEST_CASE("rendering") {
    CHECK_THROWS_AS(parse_format("yaml"), std::invalid_argument);

    const std::string empty = render(Report{}, Format::json);
    CHECK(empty.find("\"report\": {}") != std::string::npos);
    CHECK(empty.find("\"tool\": \"ricci-pinch\"") != std::string::npos);

    const Report cartan = catalog_report(*find_entry("cartan-12"));
    const std::string md = render(cartan, Format::markdown);
    CHECK(md.find("| k=3 | equality | ‖η‖=√3 | ℓ=4 |") != std::string::npos);
    CHECK(md == read_golden("cartan-12.md"));

    const std::string focal = render(catalog_report(*find_entry("focal-6-9")), Format::markdown);
    CHECK(focal.find("Z at 0, 9, 15, 24") != std::string::npos);
}

TEST_CASE("identical configuration and seed give identical bytes") {
    const json config = json::parse(R"({"entry":"cartan-24","checks":["star","dupin","ls-max","topology"],"seed":7,"restarts":15})");
    const std::string a = render(run_config(config), Format::json);
    const std::string b = render(run_config(config), Format::json);
    CHECK(a == b);
    const json reparsed = json::parse(a);
    CHECK(reparsed.at("metadata").at("seed") == 7);
    CHECK(render_canonical(reparsed) == a);

    const json tube = json::parse(R"({"patch":"sphere-base","ell":2,"tau":0.6,"slope":0.1,"samples":50,"seed":3})");
    CHECK(render(run_config(tube), Format::json) == render(run_config(tube), Format::json));
}
