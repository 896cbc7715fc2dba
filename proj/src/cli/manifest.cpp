#include "fluxcheck/cli.hpp"

#include "fluxcheck/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace fluxcheck::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kSlots{"alpha_t", "beta_t", "gamma_t", "varpi_t", "nu", "delta", "epsilon", "theta"};

bool known_check(const std::string& c) {
    static const std::set<std::string> plain{"closedness", "maxwell", "einstein", "split_einstein",
                                             "flux_norm", "ricci_isotropic", "case_general"};
    if (plain.count(c)) return true;
    if (c.size() == 5 && c.rfind("case", 0) == 0 && c[4] >= '1' && c[4] <= '9') return true;
    if (c.rfind("theorem:", 0) == 0) {
        try {
            parse_theorem(c.substr(8));
            return true;
        } catch (const Error&) {
            return false;
        }
    }
    return false;
}

class Reader {
public:
    [[noreturn]] static void fail(const std::string& where, const std::string& what) {
        throw ManifestError(where + ": " + what);
    }

    static const json& field(const json& j, const std::string& key, const std::string& where) {
        if (!j.is_object() || !j.contains(key)) fail(where, "missing field '" + key + "'");
        return j.at(key);
    }

    static std::string str(const json& j, const std::string& where) {
        if (!j.is_string()) fail(where, "expected a string");
        return j.get<std::string>();
    }

    static std::string str_field(const json& j, const std::string& key, const std::string& where) {
        return str(field(j, key, where), where + "." + key);
    }

    static Polynomial poly(const json& j, const std::string& where) {
        if (j.is_number_integer()) return Polynomial(Rational(j.get<long>()));
        const std::string s = str(j, where);
        try {
            return Polynomial::parse(s);
        } catch (const ParseError& e) {
            fail(where, std::string(e.what()) + " in '" + s + "'");
        }
    }

    static Rational rational(const json& j, const std::string& where) {
        if (j.is_number_integer()) return Rational(j.get<long>());
        const std::string s = str(j, where);
        try {
            return Rational::parse(s);
        } catch (const ParseError& e) {
            fail(where, std::string(e.what()) + " in '" + s + "'");
        }
    }

    static std::vector<std::string> strings(const json& j, const std::string& where) {
        if (!j.is_array()) fail(where, "expected an array");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(str(j[i], where + "[" + std::to_string(i) + "]"));
        return out;
    }

    static const json& array(const json& j, const std::string& key, const std::string& where) {
        static const json empty = json::array();
        if (!j.contains(key)) return empty;
        const json& a = j.at(key);
        if (!a.is_array()) fail(where + "." + key, "expected an array");
        return a;
    }
};

struct Catalog {
    std::map<std::string, std::vector<std::string>> charts;
    std::map<std::string, std::string> metric_chart;
    std::map<std::string, std::pair<std::string, unsigned>> forms;  // chart, degree
};

void require_unique(std::set<std::string>& seen, const std::string& name, const std::string& where) {
    if (name.empty()) Reader::fail(where, "empty name");
    if (!seen.insert(name).second) Reader::fail(where, "duplicate name '" + name + "'");
}

Point read_point(const json& j, const std::string& where) {
    if (!j.is_object()) Reader::fail(where, "expected an object of coordinate values");
    Point p;
    for (const auto& [k, v] : j.items()) p[k] = Reader::rational(v, where + "." + k);
    return p;
}

}  // namespace

Point parse_point(const std::string& spec) {
    Point p;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ManifestError("point: expected name=value in '" + item + "'");
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t") + 1);
            return s;
        };
        const std::string name = trim(item.substr(0, eq));
        try {
            p[name] = Rational::parse(trim(item.substr(eq + 1)));
        } catch (const ParseError& e) {
            throw ManifestError("point: " + std::string(e.what()) + " in '" + item + "'");
        }
    }
    if (p.empty()) throw ManifestError("point: empty specification");
    return p;
}

Manifest parse_manifest_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // The library message carries the line and column.
        throw ParseError(std::string("manifest syntax: ") + e.what());
    }
    if (!root.is_object()) throw ManifestError("manifest: top level must be an object");

    Manifest m;
    Catalog cat;
    std::set<std::string> chart_names, metric_names, form_names, product_names, bg_names;
    using R = Reader;

    const json& charts = R::array(root, "charts", "manifest");
    for (std::size_t i = 0; i < charts.size(); ++i) {
        const std::string w = "charts[" + std::to_string(i) + "]";
        ChartSpec c{R::str_field(charts[i], "name", w), R::strings(R::field(charts[i], "coordinates", w), w + ".coordinates")};
        require_unique(chart_names, c.name, w);
        std::set<std::string> coords(c.coordinates.begin(), c.coordinates.end());
        if (c.coordinates.empty() || coords.size() != c.coordinates.size())
            R::fail(w, "coordinates must be nonempty and distinct");
        cat.charts[c.name] = c.coordinates;
        m.charts.push_back(std::move(c));
    }

    const json& metrics = R::array(root, "metrics", "manifest");
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        const json& j = metrics[i];
        const std::string w = "metrics[" + std::to_string(i) + "]";
        MetricSpec s;
        s.name = R::str_field(j, "name", w);
        require_unique(metric_names, s.name, w);
        const int kinds = j.contains("diagonal") + j.contains("matrix") + j.contains("walker") + j.contains("sum");
        if (kinds != 1) R::fail(w, "exactly one of diagonal, matrix, walker, sum is required");
        if (j.contains("diagonal") || j.contains("matrix")) {
            s.chart = R::str_field(j, "chart", w);
            if (!cat.charts.count(s.chart)) R::fail(w + ".chart", "undefined chart '" + s.chart + "'");
            const std::size_t n = cat.charts[s.chart].size();
            if (j.contains("diagonal")) {
                const json& d = j.at("diagonal");
                if (!d.is_array() || d.size() != n) R::fail(w + ".diagonal", "expected " + std::to_string(n) + " entries");
                for (std::size_t k = 0; k < n; ++k) s.diagonal.push_back(R::rational(d[k], w + ".diagonal"));
            } else {
                auto read_matrix = [&](const json& mj, const std::string& ww) {
                    std::vector<std::vector<Polynomial>> out;
                    if (!mj.is_array() || mj.size() != n) R::fail(ww, "expected " + std::to_string(n) + " rows");
                    for (std::size_t r = 0; r < n; ++r) {
                        if (!mj[r].is_array() || mj[r].size() != n) R::fail(ww, "row " + std::to_string(r) + " has wrong length");
                        std::vector<Polynomial> row;
                        for (std::size_t c = 0; c < n; ++c) row.push_back(R::poly(mj[r][c], ww + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
                        out.push_back(std::move(row));
                    }
                    return out;
                };
                s.matrix = read_matrix(j.at("matrix"), w + ".matrix");
                const json& sig = R::field(j, "signature", w);
                if (!sig.is_array() || sig.size() != 2 || !sig[0].is_number_unsigned() || !sig[1].is_number_unsigned())
                    R::fail(w + ".signature", "expected [plus, minus]");
                s.signature = Signature{sig[0].get<unsigned>(), sig[1].get<unsigned>()};
                if (j.contains("inverse")) s.inverse = read_matrix(j.at("inverse"), w + ".inverse");
                if (j.contains("sqrt_det")) s.sqrt_det = R::poly(j.at("sqrt_det"), w + ".sqrt_det");
            }
        } else if (j.contains("walker")) {
            const json& wk = j.at("walker");
            MetricSpec::Walker spec;
            spec.transversal = R::str_field(wk, "transversal", w + ".walker");
            if (!cat.metric_chart.count(spec.transversal))
                R::fail(w + ".walker.transversal", "undefined metric '" + spec.transversal + "'");
            spec.H = R::poly(R::field(wk, "H", w + ".walker"), w + ".walker.H");
            if (wk.contains("v")) spec.v = R::str(wk.at("v"), w + ".walker.v");
            if (wk.contains("u")) spec.u = R::str(wk.at("u"), w + ".walker.u");
            s.chart = j.contains("chart") ? R::str_field(j, "chart", w) : s.name;
            std::vector<std::string> coords{spec.v};
            for (const auto& x : cat.charts[cat.metric_chart[spec.transversal]]) coords.push_back(x);
            coords.push_back(spec.u);
            require_unique(chart_names, s.chart, w + ".chart");
            cat.charts[s.chart] = coords;
            s.walker = std::move(spec);
        } else {
            s.sum = R::strings(j.at("sum"), w + ".sum");
            if (s.sum.size() != 2) R::fail(w + ".sum", "expected two metrics");
            std::vector<std::string> coords;
            for (const auto& part : s.sum) {
                if (!cat.metric_chart.count(part)) R::fail(w + ".sum", "undefined metric '" + part + "'");
                for (const auto& x : cat.charts[cat.metric_chart[part]]) coords.push_back(x);
            }
            s.chart = j.contains("chart") ? R::str_field(j, "chart", w) : s.name;
            require_unique(chart_names, s.chart, w + ".chart");
            cat.charts[s.chart] = coords;
        }
        cat.metric_chart[s.name] = s.chart;
        m.metrics.push_back(std::move(s));
    }

    const json& forms = R::array(root, "forms", "manifest");
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const json& j = forms[i];
        const std::string w = "forms[" + std::to_string(i) + "]";
        FormSpec f;
        f.name = R::str_field(j, "name", w);
        require_unique(form_names, f.name, w);
        if (j.contains("scale")) f.scale = R::rational(j.at("scale"), w + ".scale");
        auto form_ref = [&](const std::string& name, const std::string& ww) {
            if (!cat.forms.count(name)) R::fail(ww, "undefined form '" + name + "'");
            return cat.forms[name];
        };
        const int kinds = j.contains("components") + j.contains("wedge") + j.contains("hodge") + j.contains("d");
        if (kinds != 1) R::fail(w, "exactly one of components, wedge, hodge, d is required");
        if (j.contains("components") || j.contains("wedge")) {
            f.chart = R::str_field(j, "chart", w);
            if (!cat.charts.count(f.chart)) R::fail(w + ".chart", "undefined chart '" + f.chart + "'");
        }
        const auto& coords = cat.charts[f.chart];
        if (j.contains("components")) {
            const json& deg = R::field(j, "degree", w);
            if (!deg.is_number_unsigned()) R::fail(w + ".degree", "expected a nonnegative integer");
            f.degree = deg.get<unsigned>();
            const json& comps = j.at("components");
            if (!comps.is_array()) R::fail(w + ".components", "expected an array");
            for (std::size_t k = 0; k < comps.size(); ++k) {
                const std::string ww = w + ".components[" + std::to_string(k) + "]";
                auto idx = R::strings(R::field(comps[k], "indices", ww), ww + ".indices");
                if (idx.size() != f.degree) R::fail(ww, "expected " + std::to_string(f.degree) + " indices");
                for (const auto& x : idx)
                    if (std::find(coords.begin(), coords.end(), x) == coords.end())
                        R::fail(ww, "'" + x + "' is not a coordinate of chart " + f.chart);
                f.components.emplace_back(std::move(idx), R::poly(R::field(comps[k], "coefficient", ww), ww + ".coefficient"));
            }
        } else if (j.contains("wedge")) {
            f.wedge = R::strings(j.at("wedge"), w + ".wedge");
            if (f.wedge.empty()) R::fail(w + ".wedge", "expected at least one factor");
            for (const auto& part : f.wedge) {
                const auto [chart, deg] = form_ref(part, w + ".wedge");
                for (const auto& x : cat.charts[chart])
                    if (std::find(coords.begin(), coords.end(), x) == coords.end())
                        R::fail(w + ".wedge", "form '" + part + "' does not lift to chart " + f.chart);
                f.degree += deg;
            }
        } else if (j.contains("hodge")) {
            const json& h = j.at("hodge");
            f.op = "hodge";
            f.metric = R::str_field(h, "metric", w + ".hodge");
            f.of = R::str_field(h, "form", w + ".hodge");
            if (!cat.metric_chart.count(f.metric)) R::fail(w + ".hodge.metric", "undefined metric '" + f.metric + "'");
            const auto [chart, deg] = form_ref(f.of, w + ".hodge.form");
            if (chart != cat.metric_chart[f.metric]) R::fail(w + ".hodge", "form and metric live on different charts");
            f.chart = chart;
            f.degree = static_cast<unsigned>(cat.charts[chart].size()) - deg;
        } else {
            f.op = "d";
            f.of = R::str(j.at("d"), w + ".d");
            const auto [chart, deg] = form_ref(f.of, w + ".d");
            f.chart = chart;
            f.degree = deg + 1;
        }
        cat.forms[f.name] = {f.chart, f.degree};
        m.forms.push_back(std::move(f));
    }

    const json& products = R::array(root, "products", "manifest");
    for (std::size_t i = 0; i < products.size(); ++i) {
        const json& j = products[i];
        const std::string w = "products[" + std::to_string(i) + "]";
        ProductSpec p{R::str_field(j, "name", w), R::str_field(j, "base", w), R::str_field(j, "fiber", w)};
        require_unique(product_names, p.name, w);
        for (const auto& ref : {p.base, p.fiber})
            if (!cat.metric_chart.count(ref)) R::fail(w, "undefined metric '" + ref + "'");
        if (j.contains("warp")) p.warp = R::poly(j.at("warp"), w + ".warp");
        m.products.push_back(std::move(p));
    }

    const json& bgs = R::array(root, "backgrounds", "manifest");
    if (bgs.empty()) throw ManifestError("manifest: no backgrounds");
    for (std::size_t i = 0; i < bgs.size(); ++i) {
        const json& j = bgs[i];
        const std::string w = "backgrounds[" + std::to_string(i) + "]";
        BackgroundSpec b;
        b.name = R::str_field(j, "name", w);
        require_unique(bg_names, b.name, w);
        b.product = R::str_field(j, "product", w);
        if (!product_names.count(b.product)) R::fail(w + ".product", "undefined product '" + b.product + "'");
        const json& an = R::field(j, "ansatz", w);
        if (!an.is_object()) R::fail(w + ".ansatz", "expected an object");
        for (const auto& [slot, ref] : an.items()) {
            if (!kSlots.count(slot)) R::fail(w + ".ansatz", "unknown slot '" + slot + "'");
            const std::string name = R::str(ref, w + ".ansatz." + slot);
            if (!cat.forms.count(name)) R::fail(w + ".ansatz." + slot, "undefined form '" + name + "'");
            b.ansatz[slot] = name;
        }
        if (j.contains("c")) b.c = R::rational(j.at("c"), w + ".c");
        b.checks = R::strings(R::field(j, "checks", w), w + ".checks");
        if (b.checks.empty()) R::fail(w + ".checks", "at least one check is required");
        for (const auto& c : b.checks)
            if (!known_check(c)) R::fail(w + ".checks", "unknown check '" + c + "'");
        const json& scalars = R::array(j, "scalars", w);
        for (std::size_t k = 0; k < scalars.size(); ++k) {
            const std::string ww = w + ".scalars[" + std::to_string(k) + "]";
            ScalarSpec s;
            s.name = R::str_field(scalars[k], "name", ww);
            s.kind = R::str_field(scalars[k], "kind", ww);
            s.metric = R::str_field(scalars[k], "metric", ww);
            if (!cat.metric_chart.count(s.metric)) R::fail(ww + ".metric", "undefined metric '" + s.metric + "'");
            if (s.kind == "laplacian") {
                s.function = R::poly(R::field(scalars[k], "function", ww), ww + ".function");
            } else if (s.kind == "norm") {
                s.form = R::str_field(scalars[k], "form", ww);
                if (!cat.forms.count(s.form)) R::fail(ww + ".form", "undefined form '" + s.form + "'");
                if (cat.forms[s.form].first != cat.metric_chart[s.metric])
                    R::fail(ww, "form and metric live on different charts");
            } else {
                R::fail(ww + ".kind", "expected laplacian or norm");
            }
            if (scalars[k].contains("equals")) s.equals = R::poly(scalars[k].at("equals"), ww + ".equals");
            b.scalars.push_back(std::move(s));
        }
        const json& points = R::array(j, "points", w);
        for (std::size_t k = 0; k < points.size(); ++k)
            b.points.push_back(read_point(points[k], w + ".points[" + std::to_string(k) + "]"));
        m.backgrounds.push_back(std::move(b));
    }

    if (root.contains("settings")) {
        const json& s = root.at("settings");
        if (s.contains("c")) m.settings.c = R::rational(s.at("c"), "settings.c");
        if (s.contains("format")) {
            m.settings.format = R::str(s.at("format"), "settings.format");
            if (m.settings.format != "text" && m.settings.format != "json")
                R::fail("settings.format", "expected text or json");
        }
    }
    return m;
}

Manifest parse_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError("cannot open manifest '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifest_text(ss.str());
}

std::string manifest_to_json(const Manifest& m) {
    json root = json::object();
    root["charts"] = json::array();
    for (const auto& c : m.charts) root["charts"].push_back({{"name", c.name}, {"coordinates", c.coordinates}});
    root["metrics"] = json::array();
    for (const auto& s : m.metrics) {
        json j{{"name", s.name}};
        auto matrix = [](const std::vector<std::vector<Polynomial>>& mm) {
            json a = json::array();
            for (const auto& row : mm) {
                json r = json::array();
                for (const auto& e : row) r.push_back(e.str());
                a.push_back(r);
            }
            return a;
        };
        if (!s.diagonal.empty()) {
            j["chart"] = s.chart;
            j["diagonal"] = json::array();
            for (const auto& d : s.diagonal) j["diagonal"].push_back(d.str());
        } else if (!s.matrix.empty()) {
            j["chart"] = s.chart;
            j["matrix"] = matrix(s.matrix);
            j["signature"] = {s.signature->plus, s.signature->minus};
            if (s.inverse) j["inverse"] = matrix(*s.inverse);
            if (s.sqrt_det) j["sqrt_det"] = s.sqrt_det->str();
        } else if (s.walker) {
            j["chart"] = s.chart;
            j["walker"] = {{"transversal", s.walker->transversal}, {"H", s.walker->H.str()}, {"v", s.walker->v}, {"u", s.walker->u}};
        } else {
            j["chart"] = s.chart;
            j["sum"] = s.sum;
        }
        root["metrics"].push_back(j);
    }
    root["forms"] = json::array();
    for (const auto& f : m.forms) {
        json j{{"name", f.name}};
        if (f.scale != Rational(1)) j["scale"] = f.scale.str();
        if (!f.wedge.empty()) {
            j["chart"] = f.chart;
            j["wedge"] = f.wedge;
        } else if (f.op == "hodge") {
            j["hodge"] = {{"metric", f.metric}, {"form", f.of}};
        } else if (f.op == "d") {
            j["d"] = f.of;
        } else {
            j["chart"] = f.chart;
            j["degree"] = f.degree;
            j["components"] = json::array();
            for (const auto& [idx, c] : f.components) j["components"].push_back({{"indices", idx}, {"coefficient", c.str()}});
        }
        root["forms"].push_back(j);
    }
    root["products"] = json::array();
    for (const auto& p : m.products)
        root["products"].push_back({{"name", p.name}, {"base", p.base}, {"fiber", p.fiber}, {"warp", p.warp.str()}});
    root["backgrounds"] = json::array();
    for (const auto& b : m.backgrounds) {
        json j{{"name", b.name}, {"product", b.product}, {"ansatz", b.ansatz}, {"checks", b.checks}};
        if (b.c) j["c"] = b.c->str();
        if (!b.scalars.empty()) {
            j["scalars"] = json::array();
            for (const auto& s : b.scalars) {
                json sj{{"name", s.name}, {"kind", s.kind}, {"metric", s.metric}};
                if (s.kind == "laplacian") sj["function"] = s.function.str();
                else sj["form"] = s.form;
                if (s.equals) sj["equals"] = s.equals->str();
                j["scalars"].push_back(sj);
            }
        }
        if (!b.points.empty()) {
            j["points"] = json::array();
            for (const auto& p : b.points) {
                json pj = json::object();
                for (const auto& [k, v] : p) pj[k] = v.str();
                j["points"].push_back(pj);
            }
        }
        root["backgrounds"].push_back(j);
    }
    json settings{{"format", m.settings.format}};
    if (m.settings.c) settings["c"] = m.settings.c->str();
    root["settings"] = settings;
    return root.dump(2);
}

}  // namespace fluxcheck::cli
