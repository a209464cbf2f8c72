// Exercises the shared-library surface only; links libfinsler, not the core.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <finsler/finsler.h>

#include <string>

namespace {

struct Str {
    char* p = nullptr;
    ~Str() { fin_string_free(p); }
    std::string view() const { return p ? std::string(p) : std::string(); }
};

struct Metric {
    fin_metric* m = nullptr;
    ~Metric() { fin_metric_free(m); }
};

} // namespace

TEST_CASE("zoo metrics load and classify through the C API") {
    Metric metric;
    Str err;
    REQUIRE(fin_metric_from_zoo("flat", nullptr, &metric.m, &err.p) == FIN_OK);
    CHECK(fin_metric_dimension(metric.m) == 2);

    fin_plan plan = fin_plan_default();
    plan.z_count = 2;
    plan.eta_count = 2;
    Str report;
    int inconsistent = -1;
    REQUIRE(fin_classify(metric.m, &plan, 1e-7, "json", &report.p, &inconsistent, &err.p) == FIN_OK);
    CHECK(inconsistent == 0);
    CHECK(report.view().find("\"lattice\"") != std::string::npos);
    CHECK(report.view().find("\"complex_berwald\": \"holds\"") != std::string::npos);

    Str csv;
    REQUIRE(fin_classify(metric.m, &plan, 1e-7, "csv", &csv.p, nullptr, &err.p) == FIN_OK);
    CHECK(csv.view().rfind("predicate_id,sample_index,residual\n", 0) == 0);
}

TEST_CASE("zoo params JSON reaches the factory") {
    Metric metric;
    Str err;
    const char* params = R"({"sigma": "(z1*conj(z1)+z2*conj(z2))/2"})";
    REQUIRE(fin_metric_from_zoo("antonelli_shimada", params, &metric.m, &err.p) == FIN_OK);

    fin_plan plan = fin_plan_default();
    plan.z_count = 2;
    plan.eta_count = 2;
    Str report;
    int inconsistent = -1;
    REQUIRE(fin_classify(metric.m, &plan, 1e-7, "json", &report.p, &inconsistent, &err.p) == FIN_OK);
    CHECK(inconsistent == 0);
    CHECK(report.view().find("\"generalized_berwald\": \"holds\"") != std::string::npos);
}

TEST_CASE("metric JSON round trip through the C API") {
    Metric metric;
    Str err;
    REQUIRE(fin_metric_from_zoo("randers", nullptr, &metric.m, &err.p) == FIN_OK);
    Str json;
    REQUIRE(fin_metric_to_json(metric.m, &json.p) == FIN_OK);
    Metric again;
    REQUIRE(fin_metric_load_json(json.p, &again.m, &err.p) == FIN_OK);
    CHECK(fin_metric_dimension(again.m) == 2);
}

TEST_CASE("check suites run and pass on zoo entries") {
    Metric metric;
    Str err;
    REQUIRE(fin_metric_from_zoo("kropina", nullptr, &metric.m, &err.p) == FIN_OK);
    fin_plan plan = fin_plan_default();
    plan.z_count = 2;
    plan.eta_count = 2;
    for (const char* suite : {"homogeneity", "eq1.3", "lemma2.1", "lemma2.2"}) {
        Str text;
        int pass = 0;
        REQUIRE(fin_check(metric.m, suite, &plan, 1e-7, "json", &text.p, &pass, &err.p) == FIN_OK);
        CHECK(pass == 1);
    }
    Str text;
    int pass = 0;
    CHECK(fin_check(metric.m, "nope", &plan, 1e-7, "json", &text.p, &pass, &err.p) ==
          FIN_ERR_BAD_ARGUMENT);
}

TEST_CASE("dump returns the bundle and propagates domain errors") {
    Metric metric;
    Str err;
    REQUIRE(fin_metric_from_zoo("flat", nullptr, &metric.m, &err.p) == FIN_OK);
    const double coords[8] = {0.1, 0.0, 0.2, 0.0, 1.0, 0.0, 0.5, 0.0};
    Str dump;
    REQUIRE(fin_dump(metric.m, coords, &dump.p, &err.p) == FIN_OK);
    CHECK(dump.view().find("\"conventions\"") != std::string::npos);

    Metric kropina;
    REQUIRE(fin_metric_from_zoo("kropina", nullptr, &kropina.m, &err.p) == FIN_OK);
    const double bad[8] = {0.1, 0.0, 0.2, 0.0, 0.0, 0.0, 1.0, 0.0}; // beta = eta1 = 0
    Str dump2;
    Str err2;
    CHECK(fin_dump(kropina.m, bad, &dump2.p, &err2.p) == FIN_ERR_DOMAIN);
    CHECK(!err2.view().empty());
}

TEST_CASE("error paths carry status codes and messages") {
    fin_metric* m = nullptr;
    Str err;
    CHECK(fin_metric_load_json("{broken", &m, &err.p) == FIN_ERR_SCHEMA);
    CHECK(!err.view().empty());

    Str err2;
    CHECK(fin_metric_from_zoo("no_such_metric", nullptr, &m, &err2.p) == FIN_ERR_UNKNOWN_ID);

    Str err3;
    const char* beta0 = R"({"name":"k0","dimension":2,"kind":"kropina",
        "a":[["1","0"],["0","1"]],"b":["0","0"]})";
    CHECK(fin_metric_load_json(beta0, &m, &err3.p) == FIN_ERR_VALIDATION);

    CHECK(fin_metric_load_json(nullptr, &m, nullptr) == FIN_ERR_BAD_ARGUMENT);
    CHECK(std::string(fin_version()).find("finsler") == 0);
}
