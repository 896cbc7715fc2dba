#include "fluxcheck/cli.hpp"

#include "fluxcheck/errors.hpp"

#include <algorithm>
#include <future>
#include <thread>

namespace fluxcheck::cli {

namespace {

template <class T>
const T& lookup(const std::vector<T>& items, const std::string& name, const char* kind) {
    auto it = std::find_if(items.begin(), items.end(), [&](const T& t) { return t.name == name; });
    if (it == items.end()) throw ManifestError(std::string("undefined ") + kind + " '" + name + "'");
    return *it;
}

/// Builds charts, metrics and forms on demand.
class Resolver {
public:
    explicit Resolver(const Manifest& m) : m_(m) {}

    ChartPtr chart(const std::string& name) {
        if (auto it = charts_.find(name); it != charts_.end()) return it->second;
        for (const auto& ms : m_.metrics)
            if (ms.chart == name && (ms.walker || !ms.sum.empty())) return charts_[name] = metric(ms.name).chart();
        const ChartSpec& c = lookup(m_.charts, name, "chart");
        return charts_[name] = make_chart(c.name, c.coordinates);
    }

    ChartMetric metric(const std::string& name) {
        if (auto it = metrics_.find(name); it != metrics_.end()) return it->second;
        const MetricSpec& s = lookup(m_.metrics, name, "metric");
        std::optional<ChartMetric> out;
        if (!s.diagonal.empty()) {
            out = diagonal_metric(chart(s.chart), s.diagonal);
        } else if (!s.matrix.empty()) {
            out = make_metric(chart(s.chart), s.matrix, *s.signature, s.inverse, s.sqrt_det);
        } else if (s.walker) {
            out = walker_metric(metric(s.walker->transversal), s.walker->H, s.walker->v, s.walker->u, s.chart);
        } else {
            out = build_product(metric(s.sum[0]), metric(s.sum[1]), Polynomial(1), s.chart).assembled;
        }
        charts_.emplace(out->chart()->name(), out->chart());
        return metrics_.emplace(name, *out).first->second;
    }

    DifferentialForm form(const std::string& name) {
        if (auto it = forms_.find(name); it != forms_.end()) return it->second;
        const FormSpec& s = lookup(m_.forms, name, "form");
        std::optional<DifferentialForm> out;
        if (!s.wedge.empty()) {
            const ChartPtr target = chart(s.chart);
            for (const auto& part : s.wedge) {
                DifferentialForm f = lift_to_product(form(part), target);
                out = out ? wedge(*out, f) : f;
            }
        } else if (s.op == "hodge") {
            out = hodge_star(metric(s.metric), form(s.of));
        } else if (s.op == "d") {
            out = exterior_derivative(form(s.of));
        } else {
            const ChartPtr c = chart(s.chart);
            DifferentialForm f(c, s.degree);
            for (const auto& [idx, coeff] : s.components)
                f += s.degree == 0 ? DifferentialForm::scalar(c, coeff) : DifferentialForm::basis(c, idx, coeff);
            out = f;
        }
        if (s.scale != Rational(1)) out = Polynomial(s.scale) * *out;
        return forms_.emplace(name, *out).first->second;
    }

private:
    const Manifest& m_;
    std::map<std::string, ChartPtr> charts_;
    std::map<std::string, ChartMetric> metrics_;
    std::map<std::string, DifferentialForm> forms_;
};

Section scalar_section(Resolver& r, const BackgroundSpec& spec) {
    Section s;
    s.check = "scalars";
    for (const auto& sc : spec.scalars) {
        const ChartMetric m = r.metric(sc.metric);
        const Polynomial value = sc.kind == "laplacian" ? laplace_beltrami(m, sc.function) : norm_squared(m, r.form(sc.form));
        s.notes.push_back(sc.name + " = " + value.str());
        Condition shown = scalar_condition(sc.name, value);
        shown.informational = true;
        s.conditions.push_back(std::move(shown));
        if (sc.equals) s.conditions.push_back(scalar_condition(sc.name + " - (" + sc.equals->str() + ")", value - *sc.equals));
    }
    return s;
}

BackgroundResult run_one(const Manifest& m, const BackgroundSpec& spec, const RunOptions& opts) {
    BackgroundResult out;
    out.report.background = spec.name;
    try {
        const std::optional<Rational> c = opts.c ? opts.c : spec.c ? spec.c : m.settings.c;
        Resolver r(m);
        const Background bg = build_background(m, spec, c);
        out.report = verify(bg, spec.checks);
        if (!spec.scalars.empty()) out.report.sections.push_back(scalar_section(r, spec));
        if (c) out.report.notes.push_back("c = " + c->str() + " (explicit)");
    } catch (const Error& e) {
        out.report.error = e.what();
        return out;
    }

    std::vector<Point> points = spec.points;
    points.insert(points.end(), opts.points.begin(), opts.points.end());
    for (std::size_t si = 0; si < out.report.sections.size(); ++si) {
        const auto& conds = out.report.sections[si].conditions;
        for (std::size_t ci = 0; ci < conds.size(); ++ci)
            for (std::size_t ei = 0; ei < conds[ci].entries.size(); ++ei)
                for (const Point& p : points) {
                    Evaluation ev{p, std::nullopt, {}};
                    try {
                        ev.value = conds[ci].entries[ei].second.evaluate(p);
                    } catch (const MissingVariable& e) {
                        ev.error = e.what();
                    }
                    out.evaluations[{si, ci, ei}].push_back(std::move(ev));
                }
    }
    return out;
}

}  // namespace

Background build_background(const Manifest& m, const BackgroundSpec& spec, const std::optional<Rational>& c) {
    Resolver r(m);
    const ProductSpec& ps = lookup(m.products, spec.product, "product");
    const ProductChart pc = build_product(r.metric(ps.base), r.metric(ps.fiber), ps.warp, ps.name);
    FluxAnsatz a;
    const std::map<std::string, std::optional<DifferentialForm> FluxAnsatz::*> slots{
        {"alpha_t", &FluxAnsatz::alpha_t}, {"beta_t", &FluxAnsatz::beta_t}, {"gamma_t", &FluxAnsatz::gamma_t},
        {"varpi_t", &FluxAnsatz::varpi_t}, {"nu", &FluxAnsatz::nu},         {"delta", &FluxAnsatz::delta},
        {"epsilon", &FluxAnsatz::epsilon}, {"theta", &FluxAnsatz::theta}};
    for (const auto& [slot, name] : spec.ansatz) {
        auto it = slots.find(slot);
        if (it == slots.end()) throw ManifestError("unknown ansatz slot '" + slot + "'");
        a.*(it->second) = r.form(name);
    }
    a.c = c;
    return assemble_flux(pc, std::move(a), spec.name);
}

ReportDocument run(const Manifest& m, const RunOptions& opts) {
    std::vector<const BackgroundSpec*> selected;
    for (const auto& b : m.backgrounds)
        if (!opts.only || b.name == *opts.only) selected.push_back(&b);
    if (selected.empty()) throw ManifestError("no background named '" + opts.only.value_or("") + "'");

    ReportDocument doc;
    doc.results.resize(selected.size());
    const unsigned limit = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < selected.size(); start += limit) {
        std::vector<std::future<BackgroundResult>> batch;
        const std::size_t end = std::min(selected.size(), start + limit);
        for (std::size_t i = start; i < end; ++i)
            batch.push_back(std::async(std::launch::async, run_one, std::cref(m), std::cref(*selected[i]), std::cref(opts)));
        for (std::size_t i = start; i < end; ++i) doc.results[i] = batch[i - start].get();
    }
    for (const auto& r : doc.results) {
        if (r.report.error) ++doc.errors;
        else if (r.report.passed()) ++doc.passed;
        else ++doc.failed;
    }
    return doc;
}

int exit_code(const ReportDocument& doc) {
    if (doc.errors) return 2;
    return doc.failed ? 1 : 0;
}

const std::vector<std::string>& convention_notes() {
    static const std::vector<std::string> notes{
        "h = g + f^2 g~ on M x M~, base coordinates first",
        "Riemannian blocks are negative definite",
        "<a,b> = (1/p!) a_I b^I",
        "**a = sgn(det h) (-1)^(p(n-p)) a",
        "Ric_ij = d_k G^k_ij - d_j G^k_ik + G^k_kl G^l_ij - G^k_jl G^l_ik",
        "Walker chart (v, x, u) with g_vu = 1, g_uu = H",
    };
    return notes;
}

}  // namespace fluxcheck::cli
