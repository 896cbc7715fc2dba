#include "fluxcheck/cli.hpp"

#include <json.hpp>

#include <sstream>

namespace fluxcheck::cli {

namespace {

std::string point_str(const Point& p) {
    std::string out;
    for (const auto& [k, v] : p) out += (out.empty() ? "" : ",") + k + "=" + v.str();
    return out;
}

const char* status(const BackgroundResult& r) {
    if (r.report.error) return "ERROR";
    return r.report.passed() ? "PASS" : "FAIL";
}

const std::vector<Evaluation>* evaluations(const BackgroundResult& r, std::size_t s, std::size_t c, std::size_t e) {
    auto it = r.evaluations.find({s, c, e});
    return it == r.evaluations.end() ? nullptr : &it->second;
}

}  // namespace

std::string render_text(const ReportDocument& doc) {
    std::ostringstream os;
    os << "conventions:\n";
    for (const auto& n : convention_notes()) os << "  " << n << "\n";
    for (const auto& r : doc.results) {
        os << "\nbackground " << r.report.background << ": " << status(r) << "\n";
        if (r.report.error) {
            os << "  error: " << *r.report.error << "\n";
            continue;
        }
        for (const auto& n : r.report.notes) os << "  note: " << n << "\n";
        for (std::size_t si = 0; si < r.report.sections.size(); ++si) {
            const Section& s = r.report.sections[si];
            os << "  [" << s.check << "] " << (s.skipped ? "SKIPPED" : s.passed() ? "PASS" : "FAIL") << "\n";
            for (std::size_t ci = 0; ci < s.conditions.size(); ++ci) {
                const Condition& c = s.conditions[ci];
                const char* tag = c.informational ? "info" : c.zero() ? "ok  " : "FAIL";
                os << "    " << tag << " " << c.name << "\n";
                for (std::size_t ei = 0; ei < c.entries.size(); ++ei) {
                    os << "         " << c.entries[ei].first << ": " << c.entries[ei].second.str() << "\n";
                    if (const auto* evs = evaluations(r, si, ci, ei))
                        for (const auto& ev : *evs)
                            os << "           at " << point_str(ev.point) << ": "
                               << (ev.value ? ev.value->str() : ev.error) << "\n";
                }
            }
            for (const auto& n : s.notes) os << "    note: " << n << "\n";
        }
    }
    os << "\nsummary: " << doc.passed << " passed, " << doc.failed << " failed, " << doc.errors << " errors\n";
    return os.str();
}

std::string render_json(const ReportDocument& doc) {
    using nlohmann::json;
    json root{{"schema", 1}, {"conventions", convention_notes()}};
    json bgs = json::array();
    for (const auto& r : doc.results) {
        json b{{"name", r.report.background}, {"status", status(r)}, {"notes", r.report.notes}};
        if (r.report.error) b["error"] = *r.report.error;
        json sections = json::array();
        for (std::size_t si = 0; si < r.report.sections.size(); ++si) {
            const Section& s = r.report.sections[si];
            json sj{{"check", s.check}, {"passed", s.passed()}, {"skipped", s.skipped}, {"notes", s.notes}};
            json conds = json::array();
            for (std::size_t ci = 0; ci < s.conditions.size(); ++ci) {
                const Condition& c = s.conditions[ci];
                json cj{{"name", c.name}, {"informational", c.informational}, {"zero", c.zero()}};
                json entries = json::array();
                for (std::size_t ei = 0; ei < c.entries.size(); ++ei) {
                    json ej{{"label", c.entries[ei].first}, {"value", c.entries[ei].second.str()}};
                    if (const auto* evs = evaluations(r, si, ci, ei)) {
                        json ev_list = json::array();
                        for (const auto& ev : *evs) {
                            json pj = json::object();
                            for (const auto& [k, v] : ev.point) pj[k] = v.str();
                            json e{{"point", pj}};
                            if (ev.value) e["value"] = ev.value->str();
                            else e["error"] = ev.error;
                            ev_list.push_back(e);
                        }
                        ej["evaluations"] = ev_list;
                    }
                    entries.push_back(ej);
                }
                cj["entries"] = entries;
                conds.push_back(cj);
            }
            sj["conditions"] = conds;
            sections.push_back(sj);
        }
        b["sections"] = sections;
        bgs.push_back(b);
    }
    root["backgrounds"] = bgs;
    root["summary"] = {{"passed", doc.passed}, {"failed", doc.failed}, {"errors", doc.errors}};
    return root.dump(2) + "\n";
}

}  // namespace fluxcheck::cli
