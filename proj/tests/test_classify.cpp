#include "classify.hpp"
#include "zoo.hpp"

#include <doctest.h>

#include <json.hpp>

using namespace finsler;

namespace {

SamplePlan small_plan(std::uint64_t seed = 42) {
    SamplePlan p;
    p.z_count = 4;
    p.eta_count = 4;
    p.seed = seed;
    return p;
}

bool consistent(const ClassificationReport& r, const std::string& theorem) {
    for (const auto& c : r.crosschecks)
        if (c.theorem == theorem) return c.consistent;
    FAIL("missing crosscheck " << theorem);
    return false;
}

} // namespace

TEST_CASE("flat metric: every class holds, all crosschecks consistent") {
    ClassificationReport r = classify(zoo_make("flat"), small_plan());
    for (const auto& [cls, v] : r.lattice) {
        INFO(cls);
        CHECK(v == Verdict::Holds);
    }
    CHECK(!r.any_inconsistency());
    for (const auto& p : r.predicates) CHECK(p.aggregate < 1e-12);
}

TEST_CASE("hermitian non-Kaehler: Landsberg without Kaehler") {
    ClassificationReport r = classify(zoo_make("hermitian_nonkahler"), small_plan());
    CHECK(r.lattice_verdict("kahler") == Verdict::Fails);
    CHECK(r.find("kahler")->aggregate > 1e-3);
    CHECK(r.lattice_verdict("weakly_kahler") == Verdict::Fails);
    CHECK(r.lattice_verdict("landsberg") == Verdict::Holds);
    CHECK(r.lattice_verdict("generalized_berwald") == Verdict::Holds);
    CHECK(r.lattice_verdict("strong_landsberg") == Verdict::Holds);
    CHECK(r.lattice_verdict("complex_berwald") == Verdict::Fails);
    CHECK(!r.any_inconsistency());
}

TEST_CASE("Antonelli-Shimada: generalized Berwald but not complex Berwald") {
    ClassificationReport r = classify(zoo_make("antonelli_shimada"), small_plan());
    CHECK(r.lattice_verdict("generalized_berwald") == Verdict::Holds);
    CHECK(r.lattice_verdict("complex_berwald") == Verdict::Fails);
    CHECK(r.lattice_verdict("kahler") == Verdict::Fails);
    CHECK(!r.any_inconsistency());
}

TEST_CASE("constant-b Randers: Theorem 4.2 scalar vanishes, Theorem 4.3 consistent") {
    ClassificationReport r = classify(zoo_make("randers"), small_plan());
    CHECK(r.find("randers.thm4.2")->aggregate < 1e-10);
    CHECK(r.lattice_verdict("generalized_berwald") == Verdict::Holds);
    CHECK(r.lattice_verdict("complex_berwald") == Verdict::Holds);
    CHECK(consistent(r, "thm4.2"));
    CHECK(consistent(r, "thm4.3"));
    CHECK(consistent(r, "prop4.2"));
}

TEST_CASE("b = (z1^2, 0) Randers fails both sides of Theorem 4.2 together") {
    ZooParams params;
    params.b = std::vector<std::string>{"z1^2", "0"};
    params.base_point = std::vector<cplx>{cplx(1, 0), cplx(0, 0)};
    ClassificationReport r = classify(zoo_make("randers", params), small_plan());
    CHECK(r.find("randers.thm4.2")->verdict == Verdict::Fails);
    CHECK(r.find("gen_berwald")->verdict == Verdict::Fails);
    CHECK(consistent(r, "thm4.2"));
    CHECK(consistent(r, "thm4.3"));
    CHECK(!r.any_inconsistency());
}

TEST_CASE("constant-b Kropina: Proposition 4.3 and Theorems 4.4/4.5") {
    ClassificationReport r = classify(zoo_make("kropina"), small_plan());
    CHECK(r.find("kropina.prop4.3")->aggregate < 1e-10);
    CHECK(r.find("kropina.g_ag")->aggregate < 1e-9);
    CHECK(r.find("alpha.kahler")->verdict == Verdict::Holds);
    CHECK(r.lattice_verdict("complex_berwald") == Verdict::Holds);
    CHECK(consistent(r, "prop4.3"));
    CHECK(consistent(r, "prop4.4"));
    CHECK(consistent(r, "thm4.4"));
    CHECK(consistent(r, "thm4.5"));
}

TEST_CASE("perturbed non-(alpha,beta) metric fails generalized Berwald consistently") {
    MetricSpec spec = finalized([] {
        MetricSpec m;
        m.name = "flat_perturbed";
        m.n = 2;
        m.kind = MetricKind::Custom;
        m.custom_L = parse(
            "(abs2(eta1)+abs2(eta2))*exp(0.2*z1*conj(z1)*abs2(eta1)/(abs2(eta1)+abs2(eta2)))");
        return m;
    }());
    REQUIRE(validate_metric(spec).ok);
    ClassificationReport r = classify(spec, small_plan());
    CHECK(r.find("gen_berwald")->verdict == Verdict::Fails);
    CHECK(r.find("gb.bl_disp")->verdict == Verdict::Fails);
    CHECK(consistent(r, "thm3.6"));
    CHECK(!r.any_inconsistency());
}

TEST_CASE("reports are deterministic for a fixed plan") {
    SamplePlan plan = small_plan(1234);
    MetricSpec spec = zoo_make("antonelli_shimada");
    std::string a = report_to_json(classify(spec, plan));
    std::string b = report_to_json(classify(spec, plan));
    CHECK(a == b);
    std::string csv_a = report_to_csv(classify(spec, plan));
    std::string csv_b = report_to_csv(classify(spec, plan));
    CHECK(csv_a == csv_b);
}

TEST_CASE("report JSON follows the documented schema") {
    ClassificationReport rep = classify(zoo_make("randers"), small_plan());
    auto j = nlohmann::json::parse(report_to_json(rep));
    for (const char* key : {"metric", "plan", "tolerance", "predicates", "lattice", "crosschecks",
                            "warnings"})
        CHECK(j.contains(key));
    for (const char* key : {"seed", "z_count", "eta_count", "radius"}) CHECK(j["plan"].contains(key));
    REQUIRE(!j["predicates"].empty());
    for (const auto& p : j["predicates"]) {
        CHECK(p.contains("id"));
        CHECK(p.contains("aggregate"));
        CHECK(p.contains("verdict"));
        CHECK(p.size() == 3);
    }
    for (const char* cls : {"kahler", "weakly_kahler", "landsberg", "generalized_berwald",
                            "g_landsberg", "strong_landsberg", "complex_berwald"})
        CHECK(j["lattice"].contains(cls));
    for (const auto& c : j["crosschecks"]) {
        CHECK(c.contains("theorem"));
        CHECK(c.contains("consistent"));
    }
}

TEST_CASE("CSV rows are (predicate, sample, residual)") {
    std::string csv = report_to_csv(classify(zoo_make("flat"), small_plan()));
    CHECK(csv.rfind("predicate_id,sample_index,residual\n", 0) == 0);
    CHECK(csv.find("kahler.strong,0,") != std::string::npos);
    CHECK(csv.find("gb.bl_disp,3,") != std::string::npos); // one row per z-group
}

TEST_CASE("scaling the metric by a constant keeps every verdict") {
    MetricSpec base = zoo_make("antonelli_shimada");
    MetricSpec doubled = finalized([&] {
        MetricSpec m;
        m.name = "as_doubled";
        m.n = 2;
        m.kind = MetricKind::Custom;
        m.custom_L = make_binary(NodeKind::Mul, make_literal(cplx(2.0)), base.L);
        return m;
    }());
    SamplePlan plan = small_plan(5);
    ClassificationReport r0 = classify(base, plan);
    ClassificationReport r1 = classify(doubled, plan);
    for (const auto& [cls, v] : r0.lattice) CHECK(r1.lattice_verdict(cls) == v);
}

TEST_CASE("verdicts are invariant under a linear holomorphic coordinate change") {
    MetricSpec spec = zoo_make("hermitian_nonkahler");
    std::vector<std::vector<cplx>> A = {{cplx(1.0), cplx(0.25, 0.1)}, {cplx(0, -0.15), cplx(1.05)}};
    cplx det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    std::vector<std::vector<cplx>> Ai = {{A[1][1] / det, -A[0][1] / det},
                                         {-A[1][0] / det, A[0][0] / det}};
    MetricSpec prime = transform_metric(spec, A, Ai);

    SamplePlan plan = small_plan(7);
    std::vector<TangentSample> samples = draw_samples(spec, plan);
    std::vector<TangentSample> mapped;
    for (const TangentSample& s : samples) {
        TangentSample t;
        t.z.assign(2, cplx(0));
        t.eta.assign(2, cplx(0));
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) {
                t.z[i] += A[i][k] * s.z[k];
                t.eta[i] += A[i][k] * s.eta[k];
            }
        mapped.push_back(std::move(t));
    }
    ClassificationReport r0 = classify_on_samples(spec, plan, samples);
    ClassificationReport r1 = classify_on_samples(prime, plan, mapped);
    for (const auto& [cls, v] : r0.lattice) CHECK(r1.lattice_verdict(cls) == v);
    CHECK(!r1.any_inconsistency());
}

TEST_CASE("unknown check suite raises, known suites report rows") {
    MetricSpec spec = zoo_make("flat");
    SamplePlan plan;
    plan.z_count = 2;
    plan.eta_count = 2;
    CHECK_THROWS_AS(run_check_suite(spec, "nope", plan), Error);
    CheckReport rep = run_check_suite(spec, "lemma2.2", plan);
    CHECK(rep.pass);
    CHECK(!rep.rows.empty());
    CHECK(!rep.notes.empty()); // index-reading note
    std::string csv = check_to_csv(rep);
    CHECK(csv.find("lemma2.2.v,") != std::string::npos);
}

TEST_CASE("borderline verdicts land in the band") {
    CHECK(verdict_for(0.5e-7, 1e-7) == Verdict::Holds);
    CHECK(verdict_for(5e-7, 1e-7) == Verdict::Borderline);
    CHECK(verdict_for(2e-6, 1e-7) == Verdict::Fails);
}
