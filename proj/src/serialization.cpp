#include "ricci_pinch/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rpinch {

namespace {

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void render(const json& j, std::ostringstream& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            // nlohmann::json stores objects in a std::map, so iteration is sorted.
            out << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out << ",\n";
                }
                first = false;
                out << inner << json(it.key()).dump() << ": ";
                render(it.value(), out, indent + 1);
            }
            out << "\n" << pad << "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
            if (flat) {
                out << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i > 0) {
                        out << ", ";
                    }
                    render(j[i], out, indent + 1);
                }
                out << "]";
                return;
            }
            out << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) {
                    out << ",\n";
                }
                out << inner;
                render(j[i], out, indent + 1);
            }
            out << "\n" << pad << "]";
            return;
        }
        case json::value_t::number_float: {
            double x = j.get<double>();
            if (x == 0.0) {
                x = 0.0;
            }
            if (!std::isfinite(x)) {
                out << "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            out << buf;
            return;
        }
        default:
            out << j.dump();
            return;
    }
}

}  // namespace

json matrix_to_json(const MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            row.push_back(M(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

json to_json(const ShapeOperatorSet& S) {
    json ops = json::array();
    for (const MatrixXd& A : S.operators()) {
        ops.push_back(matrix_to_json(A));
    }
    return json{{"n", S.n()}, {"m", S.m()}, {"operators", ops}, {"aligned", S.aligned()}, {"label", S.label()}};
}

ShapeOperatorSet shape_operators_from_json(const json& doc, const std::string& path) {
    if (!doc.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        if (key != "n" && key != "m" && key != "operators" && key != "aligned" && key != "label") {
            throw ConfigError(path + "." + key, "unknown field");
        }
    }
    auto require_int = [&](const char* key) {
        if (!doc.contains(key)) {
            throw ConfigError(path + "." + key, "missing required field");
        }
        const json& v = doc.at(key);
        if (!v.is_number_integer()) {
            throw ConfigError(path + "." + key, "expected an integer");
        }
        return v.get<long long>();
    };
    const long long n = require_int("n");
    const long long m = require_int("m");
    if (n < 1) {
        throw ConfigError(path + ".n", "must be >= 1");
    }
    if (m < 1) {
        throw ConfigError(path + ".m", "must be >= 1");
    }
    if (!doc.contains("operators")) {
        throw ConfigError(path + ".operators", "missing required field");
    }
    const json& ops = doc.at("operators");
    const std::string ops_path = path + ".operators";
    if (!ops.is_array()) {
        throw ConfigError(ops_path, "expected an array of matrices");
    }
    if (static_cast<long long>(ops.size()) != m) {
        throw ConfigError(ops_path, "expected " + std::to_string(m) + " operators, got " + std::to_string(ops.size()));
    }
    std::vector<MatrixXd> mats;
    for (std::size_t a = 0; a < ops.size(); ++a) {
        const std::string ap = index_path(ops_path, a);
        const json& A = ops[a];
        if (!A.is_array() || static_cast<long long>(A.size()) != n) {
            throw ConfigError(ap, "expected " + std::to_string(n) + " rows");
        }
        MatrixXd M(n, n);
        for (std::size_t i = 0; i < A.size(); ++i) {
            const std::string rp = index_path(ap, i);
            const json& row = A[i];
            if (!row.is_array() || static_cast<long long>(row.size()) != n) {
                throw ConfigError(rp, "expected " + std::to_string(n) + " entries");
            }
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (!row[j].is_number()) {
                    throw ConfigError(index_path(rp, j), "expected a number");
                }
                M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
            }
        }
        mats.push_back(std::move(M));
    }
    bool aligned = false;
    if (doc.contains("aligned")) {
        if (!doc.at("aligned").is_boolean()) {
            throw ConfigError(path + ".aligned", "expected a boolean");
        }
        aligned = doc.at("aligned").get<bool>();
    }
    std::string label;
    if (doc.contains("label")) {
        if (!doc.at("label").is_string()) {
            throw ConfigError(path + ".label", "expected a string");
        }
        label = doc.at("label").get<std::string>();
    }
    try {
        return ShapeOperatorSet(std::move(mats), aligned, label);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ops_path, e.what());
    }
}

json to_json(const DupinDetection& d) {
    return json{
        {"eta", vector_to_json(d.eta)},
        {"norm_eta", d.norm_eta},
        {"multiplicity", d.multiplicity},
        {"collinear_with_H", d.collinear_with_H},
        {"weak", d.weak},
        {"full_relation", d.full_relation},
        {"subspace", matrix_to_json(d.subspace)},
    };
}

json verdict_to_json(const PinchVerdict& v, const std::optional<DupinDetection>& dupin) {
    return json{
        {"k", v.k},
        {"holds", v.holds},
        {"strict", v.strict},
        {"b", v.b},
        {"ricci_min", v.ricci_min},
        {"dupin", dupin ? to_json(*dupin) : json(nullptr)},
    };
}

json to_json(const LSResult& r, int p) {
    return json{
        {"p", p},
        {"value", r.value},
        {"bound", r.bound},
        {"classification", to_string(r.classification)},
        {"not_converged", r.not_converged_warning},
        {"maximizer", matrix_to_json(r.maximizer.basis())},
    };
}

std::string render_canonical(const json& j) {
    std::ostringstream out;
    render(j, out, 0);
    out << "\n";
    return out.str();
}

}  // namespace rpinch
