// ricci-pinch: command line front end.
//
// Exit status: 0 on success, 2 when a run disagrees with its recorded
// expectations, 1 on any input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ricci_pinch/report.hpp"

using namespace rpinch;

namespace {

constexpr int kExitMismatch = 2;
constexpr int kExitInput = 1;

struct Common {
    std::string format = "markdown";
    std::optional<std::uint64_t> seed;
    std::optional<int> restarts;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "markdown"}));
    cmd->add_option("--seed", c.seed, "Seed for random restarts and samples");
    cmd->add_option("--restarts", c.restarts, "Random restarts of the Lawson-Simons ascent")
        ->check(CLI::PositiveNumber);
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

/// A bare operator set is wrapped as {"operators": doc}; a config is passed through.
json as_config(const json& doc) {
    if (doc.is_object() && doc.contains("operators") && doc.contains("n") && doc.contains("m")) {
        return json{{"operators", doc}};
    }
    return doc;
}

RunOptions run_options(const Common& c) { return RunOptions{c.seed, c.restarts}; }

LSOptions ls_options(const Common& c) {
    LSOptions o;
    if (c.seed) {
        o.seed = *c.seed;
    }
    if (c.restarts) {
        o.restarts = *c.restarts;
    }
    return o;
}

int emit(const Report& r, const Common& c) {
    std::cout << render(r, parse_format(c.format));
    for (const std::string& m : r.mismatches) {
        std::cerr << "mismatch: " << m << "\n";
    }
    return r.mismatches.empty() ? 0 : kExitMismatch;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ricci pinching verdicts, Dupin normals and tube checks for spherical submanifolds"};
    app.require_subcommand(1);

    Common verdict_opts;
    std::string verdict_path;
    std::optional<int> verdict_k;
    bool verdict_h = false;
    auto* verdict = app.add_subcommand("verdict", "Pinching verdict, Dupin normal and topology for an operator set");
    verdict->add_option("operators", verdict_path, "JSON file with {n, m, operators} or a full config")->required();
    verdict->add_option("-k,--k", verdict_k, "Pinching level (default: every k in [2, n/2])");
    verdict->add_flag("--h-nonzero", verdict_h, "The mean curvature vanishes nowhere on M");
    add_common(verdict, verdict_opts);

    Common catalog_opts;
    auto* catalog_cmd = app.add_subcommand("catalog", "Built-in examples");
    catalog_cmd->require_subcommand(1);
    auto* list = catalog_cmd->add_subcommand("list", "List catalog labels");
    std::string list_format = "markdown";
    list->add_option("--format", list_format, "Output format")->check(CLI::IsMember({"json", "markdown"}));
    auto* run = catalog_cmd->add_subcommand("run", "Sweep entries against their recorded expectations");
    std::string run_label;
    bool run_h = false;
    run->add_option("label", run_label, "Entry label or \"all\"")->required();
    run->add_flag("--h-nonzero", run_h, "The mean curvature vanishes nowhere on M");
    add_common(run, catalog_opts);

    Common ls_opts;
    std::string ls_path;
    int ls_p = 2;
    auto* ls = app.add_subcommand("ls-max", "Maximize the Lawson-Simons functional over p-planes");
    ls->add_option("operators", ls_path, "JSON file with {n, m, operators}")->required();
    ls->add_option("-p,--p", ls_p, "Plane dimension")->check(CLI::PositiveNumber);
    add_common(ls, ls_opts);

    Common tube_opts;
    std::string tube_patch;
    std::vector<std::string> tube_params;
    std::string tube_checks;
    std::optional<int> tube_samples;
    auto* tube = app.add_subcommand("tube-check", "Finite-difference checks on a tube patch");
    tube->add_option("patch", tube_patch, "great-circle-s3, small-circle or sphere-base")->required();
    tube->add_option("params", tube_params, "Patch parameters as key=value");
    tube->add_option("--checks", tube_checks, "Comma-separated check names");
    tube->add_option("--samples", tube_samples, "Random samples per check")->check(CLI::PositiveNumber);
    add_common(tube, tube_opts);

    Common report_opts;
    std::string report_path;
    auto* report = app.add_subcommand("report", "Run a configuration document");
    report->add_option("--config", report_path, "Configuration JSON")->required();
    add_common(report, report_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*verdict) {
            json config = as_config(read_json(verdict_path));
            if (!config.contains("checks")) {
                config["checks"] = {"star", "dupin", "topology"};
            }
            if (verdict_k) {
                config["k"] = *verdict_k;
            }
            if (verdict_h) {
                config["h_nonzero_everywhere"] = true;
            }
            return emit(run_config(config, run_options(verdict_opts)), verdict_opts);
        }
        if (*list) {
            const std::vector<CatalogEntry> entries = rpinch::catalog();
            if (list_format == "json") {
                json rows = json::array();
                for (const CatalogEntry& e : entries) {
                    rows.push_back(json{{"label", e.label},
                                        {"description", e.description},
                                        {"n", e.dim},
                                        {"ambient", e.ambient},
                                        {"data", e.matrix_backed() ? "operators" : "analytic"}});
                }
                std::cout << render_canonical(rows);
            } else {
                std::cout << "| label | n | sphere | description |\n|---|---|---|---|\n";
                for (const CatalogEntry& e : entries) {
                    std::cout << "| " << e.label << " | " << e.dim << " | S" << superscript(e.ambient) << " | "
                              << e.description << " |\n";
                }
            }
            return 0;
        }
        if (*run) {
            const LSOptions options = ls_options(catalog_opts);
            const ConclusionOptions conclusion{run_h};
            const Format format = parse_format(catalog_opts.format);
            std::vector<CatalogEntry> entries;
            if (run_label == "all") {
                entries = rpinch::catalog();
            } else if (auto e = find_entry(run_label)) {
                entries.push_back(*e);
            } else {
                std::cerr << "error: unknown catalog entry \"" << run_label << "\" (see `ricci-pinch catalog list`)\n";
                return kExitInput;
            }
            if (entries.size() == 1) {
                return emit(catalog_report(entries.front(), options, conclusion), catalog_opts);
            }
            Report combined;
            combined.seed = options.seed;
            combined.body["entries"] = json::array();
            for (const CatalogEntry& e : entries) {
                Report r = catalog_report(e, options, conclusion);
                if (format == Format::markdown) {
                    std::cout << render(r, format) << "\n";
                }
                combined.body["entries"].push_back(r.body);
                for (const std::string& m : r.mismatches) {
                    combined.mismatches.push_back(e.label + ": " + m);
                }
            }
            if (format == Format::json) {
                std::cout << render(combined, format);
            }
            for (const std::string& m : combined.mismatches) {
                std::cerr << "mismatch: " << m << "\n";
            }
            return combined.mismatches.empty() ? 0 : kExitMismatch;
        }
        if (*ls) {
            json config = as_config(read_json(ls_path));
            config["checks"] = {"ls-max"};
            config["ls_p"] = ls_p;
            return emit(run_config(config, run_options(ls_opts)), ls_opts);
        }
        if (*tube) {
            json config{{"patch", tube_patch}};
            for (const std::string& kv : tube_params) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos || eq == 0) {
                    std::cerr << "error: expected key=value, got \"" << kv << "\"\n";
                    return kExitInput;
                }
                try {
                    config[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
                } catch (const std::exception&) {
                    std::cerr << "error: \"" << kv << "\" does not have a numeric value\n";
                    return kExitInput;
                }
            }
            if (!tube_checks.empty()) {
                config["checks"] = split_commas(tube_checks);
            }
            if (tube_samples) {
                config["samples"] = *tube_samples;
            }
            return emit(run_config(config, run_options(tube_opts)), tube_opts);
        }
        if (*report) {
            return emit(run_config(read_json(report_path), run_options(report_opts)), report_opts);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error at " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
