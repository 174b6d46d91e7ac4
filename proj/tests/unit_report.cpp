#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <string>

#include "towerlab/report.hpp"
#include "towerlab/tower_spec.hpp"

using namespace towerlab;

namespace {

const std::string kTowerDir = TOWERLAB_TOWER_DIR;

struct Loaded {
    TowerSpecFile spec;
    TowerInstance inst;
};

Loaded load(const std::string& name) {
    auto spec = load_tower_spec(kTowerDir + "/" + name);
    auto inst = instantiate(spec);
    return Loaded{std::move(spec), std::move(inst)};
}

TowerInstance from_text(const std::string& text) { return instantiate(parse_tower_spec(text)); }

}  // namespace

TEST_CASE("envelope shape and canonical serialization") {
    auto run = run_census(load("f5_tame.tower").inst, 1, "f5_tame.tower", false);
    const Json& rep = run.report;
    CHECK(rep["command"] == "census");
    CHECK(rep["tool"] == "towerlab");
    CHECK(rep["version"] == "1.0.0");
    CHECK(rep["inputs"]["spec"] == "f5_tame.tower");
    CHECK(rep["inputs"]["level"] == 1);
    CHECK(rep.contains("results"));

    auto text = render_report(rep);
    CHECK(text.back() == '\n');
    CHECK(text.substr(0, 2) == "{\n");
    CHECK(text == render_report(rep));
}

TEST_CASE("census reports are byte-identical across runs") {
    auto L = load("f5_tame.tower");
    auto a = render_report(run_census(L.inst, 2, "x", false).report);
    auto b = render_report(run_census(load("f5_tame.tower").inst, 2, "x", false).report);
    CHECK(a == b);
}

TEST_CASE("census report content at level 2") {
    auto L = load("f5_tame.tower");
    auto run = run_census(L.inst, 2, "f5_tame.tower", false);
    const Json& r = run.report["results"];
    CHECK(r["level"] == 2);
    CHECK(r["base_field"]["p"] == 5);
    CHECK(r["ambient_field"]["size"] == 25);
    CHECK(r["vertex_count"] == 26);
    CHECK(r["edge_count"] == 32);
    CHECK(r["d"] == 2);
    CHECK(r["bidegree"] == Json::array({2, 2}));
    CHECK(r["structural_verdict"] == "must_be_singular");
    CHECK(r["singular_vertices"] == Json::array({"0", "1", "2", "3", "4", "inf"}));
    CHECK(r["multiple_regular_cores"] == false);
    REQUIRE(r["regular_core"].is_object());
    CHECK(r["regular_core"]["size"] == 8);
    CHECK(r["regular_core"]["primitive"] == true);
    CHECK(r["regular_core"]["completeness"]["complete"] == true);
    CHECK(r["irreducibility"]["certified"] == true);
    CHECK(r["irreducibility"]["witness"] == "inf");
    CHECK(r["components"][0]["size"] == 8);
    CHECK_FALSE(r.contains("unequal_degrees"));
}

TEST_CASE("cycles report rows and enumeration") {
    auto L = load("f5_tame.tower");
    auto rep = run_cycles(L.inst, 2, 6, "f5_tame.tower", false);
    const Json& r = rep["results"];
    REQUIRE(r["rows"].size() == 6);
    CHECK(r["rows"][0]["n"] == 1);
    CHECK(r["rows"][0]["count"] == "4");
    CHECK(r["rows"][0]["bound"] == "4");  // 2 d^n at d = 2, n = 1
    CHECK(r["rows"][0]["within_bound"] == true);
    CHECK(r["rows"][5]["count"] == "66");
    CHECK(r["rows"][5]["bound"] == "128");

    REQUIRE(r["cycle_enumeration"].is_object());
    const Json& en = r["cycle_enumeration"];
    CHECK(en["max_length"] == 6);
    bool saw_singular_reason = false;
    for (const auto& c : en["cycles"]) {
        CHECK(c.contains("vertices"));
        CHECK(c.contains("multiplicity_ge2"));
        if (c["reason"] == "product identity fails") saw_singular_reason = true;
    }
    CHECK(saw_singular_reason);  // the one-sided loops at 1 and inf
}

TEST_CASE("genus report for the degree-3 tower") {
    auto L = load("bgs_q3.tower");
    auto rep = run_genus(L.spec, L.inst, 6, "bgs_q3.tower");
    const Json& r = rep["results"];
    CHECK(r["d"] == 3);
    CHECK(r["deltas_assumed_zero"] == true);
    REQUIRE(r["rows"].size() == 6);
    CHECK(r["rows"][0]["geometric_genus"] == "0");
    CHECK(r["rows"][2]["sharp_genus"] == "28");
    CHECK(r["rows"][2]["geometric_genus"] == "28");
    CHECK(r["rows"][2]["normalized_gap"] == "1");
    CHECK(r["rows"][5]["geometric_genus"] == "2188");
    CHECK(r["rows"][5]["normalized_gap"] == "3");
}

TEST_CASE("invariants report with the growth constant from the file") {
    auto L = load("bgs_q3.tower");
    auto rep = run_invariants(L.spec, L.inst, std::nullopt, 0, "bgs_q3.tower", false);
    const Json& r = rep["results"];
    CHECK(r["q"] == 3);
    REQUIRE(r["core"].is_object());
    CHECK(r["core"]["level"] == 3);
    CHECK(r["core"]["size"] == 12);
    CHECK(r["ell"] == "4/15");
    CHECK(r["lambda"]["3"] == "16/5");
    CHECK(r["lambda"]["6"] == "16/5");
    CHECK(r["lambda"]["1"] == "0");
    CHECK(r["beta"]["3"] == "16/15");
    CHECK(r["beta"]["6"] == "0");
    CHECK(r["lambda_beta_consistent"] == true);
    CHECK(r["zeta_factor"] == "(1-T)^(-16/15)");
    CHECK(r["deficiency"].get<double>() == doctest::Approx(0.3724283675578111).epsilon(1e-9));
    CHECK(r["notes"] == Json::array());

    // byte determinism
    CHECK(render_report(rep) ==
          render_report(run_invariants(L.spec, L.inst, std::nullopt, 0, "bgs_q3.tower", false)));
}

TEST_CASE("invariants report without a growth constant") {
    auto L = load("f5_tame.tower");
    auto rep = run_invariants(L.spec, L.inst, std::nullopt, 0, "f5_tame.tower", false);
    const Json& r = rep["results"];
    REQUIRE(r["core"].is_object());
    CHECK(r["core"]["level"] == 2);
    CHECK(r["core"]["size"] == 8);
    CHECK(r["ell"].is_null());
    CHECK(r["lambda"].is_null());
    CHECK(r["beta"].is_null());
    REQUIRE(r["notes"].size() == 1);
    CHECK(r["notes"][0] == "growth constant ell not supplied; lambda and beta omitted");
}

TEST_CASE("invariants report with an ell override") {
    auto L = load("bgs_q3.tower");
    auto rep = run_invariants(L.spec, L.inst, Rational(1, 5), 0, "bgs_q3.tower", false);
    const Json& r = rep["results"];
    CHECK(rep["inputs"]["ell"] == "1/5");
    CHECK(r["ell"] == "1/5");
    CHECK(r["lambda"]["3"] == "12/5");
    CHECK(r["beta"]["3"] == "4/5");

    // an override large enough to push the deficiency negative is rejected:
    // ell = 1/2 gives beta_3 = 2 and 1 - 6/sqrt(26) < 0
    CHECK_THROWS_AS(run_invariants(L.spec, L.inst, Rational(1, 2), 0, "bgs_q3.tower", false),
                    NegativeDeficiency);
}

TEST_CASE("unequal projection degrees degrade to zero growth") {
    auto inst = from_text(
        "[field]\np = 5\n[tower]\ntype = separated\nf_num = [0, 0, 1]\nf_den = [1]\n"
        "g_num = [0, 1]\ng_den = [1]\n");
    CHECK_THROWS_AS(run_census(inst, 1, "x", false), HypothesisViolation);

    auto run = run_census(inst, 1, "x", true);
    CHECK(run.report["results"]["unequal_degrees"] == true);

    auto spec = parse_tower_spec(
        "[field]\np = 5\n[tower]\ntype = separated\nf_num = [0, 0, 1]\nf_den = [1]\n"
        "g_num = [0, 1]\ng_den = [1]\n");
    auto rep = run_invariants(spec, inst, std::nullopt, 2, "x", true);
    const Json& r = rep["results"];
    CHECK(r["lambda"]["1"] == "0");
    CHECK(r["beta"]["2"] == "0");
    CHECK(r["deficiency"].get<double>() == doctest::Approx(1.0));
    CHECK(r["zeta_factor"] == "1");
    REQUIRE(r["notes"].size() == 1);
    CHECK(r["notes"][0] == "unequal projection degrees force zero growth in every level");
}

TEST_CASE("hypothesis enforcement") {
    FiniteField F(5, 1);
    std::vector<std::vector<FieldElement>> d(2, std::vector<FieldElement>(2, F.zero()));
    d[1][0] = F.one();
    d[0][1] = F.neg(F.one());
    auto diag = Correspondence::from_bihomogeneous(F, 1, 1, d);
    CHECK_THROWS_AS(enforce_tower_hypotheses(diag, false), HypothesisViolation);
    CHECK_THROWS_AS(enforce_tower_hypotheses(diag, true), HypothesisViolation);

    auto L = load("f5_tame.tower");
    enforce_tower_hypotheses(L.inst.corr, false);  // must not throw

    auto mixed = from_text(
        "[field]\np = 5\n[tower]\ntype = separated\nf_num = [0, 0, 1]\nf_den = [1]\n"
        "g_num = [0, 1]\ng_den = [1]\n");
    CHECK_THROWS_AS(enforce_tower_hypotheses(mixed.corr, false), HypothesisViolation);
    enforce_tower_hypotheses(mixed.corr, true);
    CHECK_THROWS_AS(enforce_tower_hypotheses(mixed.corr, true, true), HypothesisViolation);
}

TEST_CASE("genus command requires equal degrees even with the opt-in") {
    auto spec = parse_tower_spec(
        "[field]\np = 5\n[tower]\ntype = separated\nf_num = [0, 0, 1]\nf_den = [1]\n"
        "g_num = [0, 1]\ng_den = [1]\n");
    auto inst = instantiate(spec);
    CHECK_THROWS_AS(run_genus(spec, inst, 4, "x"), HypothesisViolation);
}

TEST_CASE("probe respects its budget") {
    ProbeParams p;
    p.budget = 0;
    auto out = run_probe(p);
    CHECK(out.budget_exhausted);
    CHECK(out.report["results"]["pairs_checked"] == 0);
    CHECK(out.report["results"]["pairs_total"] == 1728);
    CHECK(out.report["results"]["complete"] == false);
    CHECK(out.violations.empty());
    CHECK_THROWS_AS(ensure_probe_complete(out), BudgetExceeded);
}

TEST_CASE("probe results do not depend on the worker count") {
    ProbeParams one;
    one.rmax = 2;
    one.budget = 60;
    one.threads = 1;
    auto a = run_probe(one);

    ProbeParams two = one;
    two.threads = 2;
    auto b = run_probe(two);

    CHECK(render_report(a.report) == render_report(b.report));
    CHECK(a.violations.size() == b.violations.size());
    CHECK(a.budget_exhausted);
    CHECK_THROWS_AS(ensure_probe_complete(a), BudgetExceeded);
}

TEST_CASE("thread count floor") {
    CHECK(effective_thread_count(1) == 1);
    CHECK(effective_thread_count(-3) >= 1);
}
