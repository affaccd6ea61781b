#pragma once

// JSON exchange formats and a canonical renderer (sorted keys, reals printed
// with 17 significant digits) so that identical inputs give identical bytes.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ricci_pinch/curvature.hpp"
#include "ricci_pinch/lawson_simons.hpp"
#include "ricci_pinch/pinch_verdict.hpp"

namespace rpinch {

using json = nlohmann::json;

/// Input rejected by a schema check; the message starts with a field path such
/// as "$.operators[1][0][2]".
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& path, const std::string& what)
        : std::invalid_argument(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// {"n", "m", "operators" (row-major), "aligned", "label"}.
json to_json(const ShapeOperatorSet& S);

/// Parses the schema above. "aligned" and "label" are optional. Every problem
/// is reported as a ConfigError rooted at `path`.
ShapeOperatorSet shape_operators_from_json(const json& doc, const std::string& path = "$");

json to_json(const DupinDetection& d);

/// {"k", "holds", "strict", "b", "ricci_min", "dupin"}; dupin is null when absent.
json verdict_to_json(const PinchVerdict& v, const std::optional<DupinDetection>& dupin);

json to_json(const LSResult& r, int p);

json matrix_to_json(const MatrixXd& M);
json vector_to_json(const VectorXd& v);

/// Canonical text: object keys sorted, integers as integers, other numbers
/// with printf("%.17g"), two-space indentation.
std::string render_canonical(const json& j);

}  // namespace rpinch
