#pragma once

#include "fluxcheck/errors.hpp"
#include "fluxcheck/sugra.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fluxcheck::cli {

class ManifestError : public Error {
public:
    using Error::Error;
};

struct ChartSpec {
    std::string name;
    std::vector<std::string> coordinates;
    friend bool operator==(const ChartSpec&, const ChartSpec&) = default;
};

/// Exactly one construction is set.
struct MetricSpec {
    std::string name;
    std::string chart;
    std::vector<Rational> diagonal;
    std::vector<std::vector<Polynomial>> matrix;
    std::optional<Signature> signature;
    std::optional<std::vector<std::vector<Polynomial>>> inverse;
    std::optional<Polynomial> sqrt_det;
    struct Walker {
        std::string transversal;
        Polynomial H;
        std::string v = "v";
        std::string u = "u";
        friend bool operator==(const Walker&, const Walker&) = default;
    };
    std::optional<Walker> walker;
    std::vector<std::string> sum;
    friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

struct FormSpec {
    std::string name;
    std::string chart;
    unsigned degree = 0;
    std::vector<std::pair<std::vector<std::string>, Polynomial>> components;
    std::vector<std::string> wedge;
    /// hodge: star of `of` with respect to `metric`; d: exterior derivative of `of`.
    std::string op;
    std::string metric;
    std::string of;
    Rational scale = Rational(1);
    friend bool operator==(const FormSpec&, const FormSpec&) = default;
};

struct ProductSpec {
    std::string name;
    std::string base;
    std::string fiber;
    Polynomial warp = Polynomial(1);
    friend bool operator==(const ProductSpec&, const ProductSpec&) = default;
};

/// A scalar reported with the background, optionally required to equal a value.
struct ScalarSpec {
    std::string name;
    std::string kind;  // laplacian | norm
    std::string metric;
    Polynomial function;
    std::string form;
    std::optional<Polynomial> equals;
    friend bool operator==(const ScalarSpec&, const ScalarSpec&) = default;
};

using Point = fluxcheck::Point;

struct BackgroundSpec {
    std::string name;
    std::string product;
    std::map<std::string, std::string> ansatz;  // slot -> form name
    std::optional<Rational> c;
    std::vector<std::string> checks;
    std::vector<ScalarSpec> scalars;
    std::vector<Point> points;
    friend bool operator==(const BackgroundSpec&, const BackgroundSpec&) = default;
};

struct Settings {
    std::optional<Rational> c;
    std::string format = "text";
    friend bool operator==(const Settings&, const Settings&) = default;
};

struct Manifest {
    std::vector<ChartSpec> charts;
    std::vector<MetricSpec> metrics;
    std::vector<FormSpec> forms;
    std::vector<ProductSpec> products;
    std::vector<BackgroundSpec> backgrounds;
    Settings settings;
    friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Parses and validates; errors carry the line and column or the offending entry.
Manifest parse_manifest_text(const std::string& text);
Manifest parse_manifest(const std::string& path);
std::string manifest_to_json(const Manifest& m);

/// "x1=1,x2=-1/2"
Point parse_point(const std::string& spec);

struct Evaluation {
    Point point;
    std::optional<Rational> value;
    std::string error;
};

struct BackgroundResult {
    VerificationReport report;
    /// Keyed by section index, condition index, entry index.
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<Evaluation>> evaluations;
};

struct RunOptions {
    std::optional<std::string> only;
    std::optional<Rational> c;
    std::vector<Point> points;
    unsigned threads = 0;
};

struct ReportDocument {
    std::vector<BackgroundResult> results;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t errors = 0;
};

/// Builds the background named `name` from the manifest.
Background build_background(const Manifest& m, const BackgroundSpec& spec, const std::optional<Rational>& c);

ReportDocument run(const Manifest& m, const RunOptions& opts = {});
std::string render_text(const ReportDocument& doc);
std::string render_json(const ReportDocument& doc);
/// 0 when every verdict passes, 2 on any engine error, 1 otherwise.
int exit_code(const ReportDocument& doc);

/// Sign conventions echoed in every report.
const std::vector<std::string>& convention_notes();

}  // namespace fluxcheck::cli
