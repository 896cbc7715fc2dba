#include "fluxcheck/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

using namespace fluxcheck;
using namespace fluxcheck::cli;

namespace {

std::string manifest_path(const std::string& name) { return std::string(FLUXCHECK_MANIFESTS) + "/" + name; }

int run_binary(const std::string& args) {
    const std::string cmd = std::string(FLUXCHECK_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kSmall = R"({
  "charts": [{"name": "N", "coordinates": ["x1", "x2", "x3", "x4"]},
             {"name": "M", "coordinates": ["y1", "y2", "y3", "y4", "y5"]}],
  "metrics": [{"name": "rho", "chart": "N", "diagonal": ["-1", "-1", "-1", "-1"]},
              {"name": "g", "chart": "M", "diagonal": ["-1", "-1", "-1", "-1", "-1"]},
              {"name": "W", "walker": {"transversal": "rho", "H": "0"}}],
  "forms": [{"name": "theta", "chart": "M", "degree": 4,
             "components": [{"indices": ["y1", "y2", "y3", "y4"], "coefficient": "COEFF"}]}],
  "products": [{"name": "X", "base": "g", "fiber": "W", "warp": "WARP"}],
  "backgrounds": [{"name": "first", "product": "X", "ansatz": {"theta": "theta"}, "checks": ["closedness"]},
                  {"name": "second", "product": "X", "ansatz": {"theta": "theta"}, "checks": ["maxwell"]}]
})";

std::string small(const std::string& coeff = "1", const std::string& warp = "1") {
    std::string s = kSmall;
    s.replace(s.find("COEFF"), 5, coeff);
    s.replace(s.find("WARP"), 4, warp);
    return s;
}

const Condition* find_condition(const VerificationReport& r, const std::string& section, const std::string& name) {
    for (const auto& s : r.sections)
        if (s.check == section) return s.find(name);
    return nullptr;
}

}  // namespace

TEST(Manifest, BundledSol1) {
    const Manifest m = parse_manifest(manifest_path("sol1.json"));
    ASSERT_EQ(m.backgrounds.size(), 1u);
    EXPECT_EQ(m.backgrounds[0].checks, (std::vector<std::string>{"closedness", "maxwell", "einstein"}));
    EXPECT_EQ(m.metrics[2].walker->H, Polynomial::parse("1/8*x1^2 + 1/8*x2^2 + 1/8*x3^2 + 1/8*x4^2"));
}

TEST(Manifest, Errors) {
    EXPECT_NO_THROW(parse_manifest_text(small()));

    try {
        parse_manifest(manifest_path("broken.json"));
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }

    std::string undefined = small();
    undefined.replace(undefined.find("\"chart\": \"M\", \"degree\""), 13, "\"chart\": \"Q\",");
    try {
        parse_manifest_text(undefined);
        FAIL();
    } catch (const ManifestError& e) {
        EXPECT_NE(std::string(e.what()).find("undefined chart 'Q'"), std::string::npos);
    }

    try {
        parse_manifest_text(small("y1^^2"));
        FAIL();
    } catch (const ManifestError& e) {
        EXPECT_NE(std::string(e.what()).find("'y1^^2'"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("forms[0].components[0].coefficient"), std::string::npos);
    }

    nlohmann::json j = nlohmann::json::parse(small());
    j["backgrounds"] = nlohmann::json::array();
    EXPECT_THROW(parse_manifest_text(j.dump()), ManifestError);

    j = nlohmann::json::parse(small());
    j["backgrounds"][0]["checks"] = nlohmann::json::array();
    EXPECT_THROW(parse_manifest_text(j.dump()), ManifestError);
    j["backgrounds"][0]["checks"] = {"case10"};
    EXPECT_THROW(parse_manifest_text(j.dump()), ManifestError);
    j["backgrounds"][0]["checks"] = {"theorem:null_4form"};
    EXPECT_NO_THROW(parse_manifest_text(j.dump()));

    j = nlohmann::json::parse(small());
    j["forms"][0]["components"][0]["indices"] = {"y1", "y2", "y3", "x1"};
    EXPECT_THROW(parse_manifest_text(j.dump()), ManifestError);
    j = nlohmann::json::parse(small());
    j["backgrounds"][0]["ansatz"] = {{"kappa", "theta"}};
    EXPECT_THROW(parse_manifest_text(j.dump()), ManifestError);
}

TEST(Manifest, RoundTrip) {
    for (const char* name : {"sol1.json", "sol2.json", "sol3.json", "sol4-literal.json", "sol4-corrected.json"}) {
        const Manifest m = parse_manifest(manifest_path(name));
        const std::string once = manifest_to_json(m);
        const Manifest back = parse_manifest_text(once);
        EXPECT_EQ(back, m) << name;
        EXPECT_EQ(manifest_to_json(back), once) << name;
    }
    Manifest m = parse_manifest_text(small());
    m.settings.c = Rational(-3, 2);
    m.backgrounds[0].points.push_back(parse_point("x1=1/2, y1=-1"));
    EXPECT_EQ(parse_manifest_text(manifest_to_json(m)), m);
}

TEST(Manifest, Points) {
    const Point p = parse_point("x1=1,x2=-1/2");
    EXPECT_EQ(p.at("x1"), Rational(1));
    EXPECT_EQ(p.at("x2"), Rational(-1, 2));
    EXPECT_THROW(parse_point("x1"), ManifestError);
    EXPECT_THROW(parse_point("x1=1/0"), ManifestError);
}

TEST(Run, BundledVerdicts) {
    for (const char* name : {"sol1.json", "sol2.json", "sol3.json", "sol4-corrected.json"}) {
        const ReportDocument doc = run(parse_manifest(manifest_path(name)));
        EXPECT_EQ(exit_code(doc), 0) << name << "\n" << render_text(doc);
    }
    const ReportDocument lit = run(parse_manifest(manifest_path("sol4-literal.json")));
    EXPECT_EQ(exit_code(lit), 1);
    const Condition* e = find_condition(lit.results[0].report, "einstein", "Ric + 1/2 <iF,iF> - 1/6 h |F|^2");
    ASSERT_NE(e, nullptr);
    ASSERT_EQ(e->entries.size(), 1u);
    EXPECT_EQ(e->entries[0].first, "(u,u)");
    EXPECT_NE(render_text(lit).find("(u,u): 1/2*x1^2 - 1/2*y1^2"), std::string::npos);
}

TEST(Run, EngineErrorsStayPerBackground) {
    Manifest m = parse_manifest_text(small("y5"));
    m.backgrounds[1].product = "X";
    EXPECT_EQ(exit_code(run(m)), 1);

    const ReportDocument bad = run(parse_manifest_text(small("1", "y1")));
    ASSERT_EQ(bad.results.size(), 2u);
    EXPECT_TRUE(bad.results[0].report.error);
    EXPECT_EQ(bad.errors, 2u);
    EXPECT_EQ(exit_code(bad), 2);

    RunOptions only;
    only.only = "second";
    const ReportDocument one = run(parse_manifest_text(small()), only);
    ASSERT_EQ(one.results.size(), 1u);
    EXPECT_EQ(one.results[0].report.background, "second");
    only.only = "missing";
    EXPECT_THROW(run(parse_manifest_text(small()), only), ManifestError);
}

TEST(Run, DeterministicOrder) {
    nlohmann::json j = nlohmann::json::parse(small("y5"));
    for (int i = 0; i < 6; ++i) {
        nlohmann::json b = j["backgrounds"][i % 2];
        b["name"] = "extra" + std::to_string(i);
        j["backgrounds"].push_back(b);
    }
    const Manifest m = parse_manifest_text(j.dump());
    RunOptions serial;
    serial.threads = 1;
    RunOptions wide;
    wide.threads = 8;
    EXPECT_EQ(render_json(run(m, serial)), render_json(run(m, wide)));
    const ReportDocument doc = run(m, wide);
    for (std::size_t i = 0; i < m.backgrounds.size(); ++i)
        EXPECT_EQ(doc.results[i].report.background, m.backgrounds[i].name);
}

TEST(Run, OverrideC) {
    const Manifest m = parse_manifest(manifest_path("sol4-corrected.json"));
    RunOptions opts;
    opts.c = Rational(1);
    const ReportDocument doc = run(m, opts);
    EXPECT_EQ(exit_code(doc), 1);
    const Condition* c = find_condition(doc.results[0].report, "case6", "d*nu - (c/f^2) vol_M");
    ASSERT_NE(c, nullptr);
    EXPECT_FALSE(c->zero());
}

TEST(Evaluate, Points) {
    const Manifest m = parse_manifest(manifest_path("sol4-literal.json"));
    RunOptions opts;
    opts.points = {parse_point("x1=2,x2=5,y1=1"), parse_point("x1=1")};
    const ReportDocument doc = run(m, opts);
    const BackgroundResult& r = doc.results[0];
    std::size_t si = 0;
    while (r.report.sections[si].check != "einstein") ++si;
    const auto& evs = r.evaluations.at({si, 0, 0});
    ASSERT_EQ(evs.size(), 3u);
    ASSERT_TRUE(evs[0].value);
    EXPECT_EQ(*evs[0].value, Rational(1, 2));
    EXPECT_NE(*evs[0].value, Rational(0));
    EXPECT_EQ(*evs[1].value, Rational(3, 2));
    EXPECT_FALSE(evs[2].value);
    EXPECT_NE(evs[2].error.find("y1"), std::string::npos);

    const Manifest m3 = parse_manifest(manifest_path("sol3.json"));
    RunOptions o3;
    o3.points = {parse_point("x1=7,x2=-2,x3=1/3,x4=0,y1=1,y2=1,y3=1,y4=1,t=1,u=4,v=9")};
    const ReportDocument d3 = run(m3, o3);
    const auto& rep = d3.results[0].report;
    std::size_t sc = 0;
    while (rep.sections[sc].check != "scalars") ++sc;
    const auto& conds = rep.sections[sc].conditions;
    std::size_t ci = 0;
    while (conds[ci].name != "Delta H") ++ci;
    for (const auto& ev : d3.results[0].evaluations.at({sc, ci, 0})) EXPECT_EQ(*ev.value, Rational(-2));
    // Zero residuals carry no entries, hence nothing to evaluate.
    EXPECT_TRUE(find_condition(rep, "einstein", "Ric + 1/2 <iF,iF> - 1/6 h |F|^2")->zero());
}

TEST(Report, ResidualStringsReparse) {
    const ReportDocument doc = run(parse_manifest(manifest_path("sol4-literal.json")));
    const nlohmann::json j = nlohmann::json::parse(render_json(doc));
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["summary"]["failed"], 1);
    std::size_t seen = 0;
    for (std::size_t si = 0; si < doc.results[0].report.sections.size(); ++si) {
        const auto& s = doc.results[0].report.sections[si];
        for (std::size_t ci = 0; ci < s.conditions.size(); ++ci)
            for (std::size_t ei = 0; ei < s.conditions[ci].entries.size(); ++ei) {
                const std::string text = j["backgrounds"][0]["sections"][si]["conditions"][ci]["entries"][ei]["value"];
                EXPECT_EQ(Polynomial::parse(text), s.conditions[ci].entries[ei].second);
                ++seen;
            }
    }
    EXPECT_GT(seen, 0u);
}

TEST(Binary, ExitCodes) {
    EXPECT_EQ(run_binary("--manifest " + manifest_path("sol1.json")), 0);
    EXPECT_EQ(run_binary("--manifest " + manifest_path("sol2.json")), 0);
    EXPECT_EQ(run_binary("--manifest " + manifest_path("sol3.json") + " --format json"), 0);
    EXPECT_EQ(run_binary("--manifest " + manifest_path("sol4-literal.json")), 1);
    EXPECT_EQ(run_binary("--manifest " + manifest_path("broken.json")), 2);
    EXPECT_EQ(run_binary("--manifest " + manifest_path("sol1.json") + " --only nothing"), 2);
    EXPECT_EQ(run_binary("--manifest " + manifest_path("sol1.json") + " --set c=x"), 2);
    EXPECT_EQ(run_binary("--manifest /nonexistent.json"), 2);
}
