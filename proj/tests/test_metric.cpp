#include "metric.hpp"
#include "tensor.hpp"

#include <doctest.h>

using namespace finsler;

namespace {

const char* kFlatJson = R"({
  "name": "flat", "dimension": 2, "kind": "hermitian",
  "a": [["1", "0"], ["0", "1"]]
})";

const char* kRandersJson = R"({
  "name": "r", "dimension": 2, "kind": "randers",
  "a": [["1", "0"], ["0", "1"]], "b": ["0.3", "0"]
})";

} // namespace

TEST_CASE("flat metric file loads and evaluates") {
    MetricSpec spec = load_metric(kFlatJson);
    CHECK(spec.n == 2);
    CHECK(spec.kind == MetricKind::Hermitian);
    cplx L = eval_value(spec.L, {cplx(0.3, 0.1), cplx(0.2)}, {cplx(1), cplx(0)});
    CHECK(std::abs(L - cplx(1.0)) < 1e-15);
}

TEST_CASE("randers defaults: |b|^2 and L at eta = (1,0)") {
    MetricSpec spec = load_metric(kRandersJson);
    // ||b||^2 = a^{jbar i} b_i b_jbar = 0.09 for the identity a
    CMatrix a = CMatrix::identity(2);
    CMatrix ainv = invert_hermitian(a);
    cplx bn(0.0);
    std::vector<cplx> b = {cplx(0.3), cplx(0.0)};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) bn += ainv(j, i) * b[i] * std::conj(b[j]);
    CHECK(std::abs(bn - cplx(0.09)) < 1e-15);

    cplx L = eval_value(spec.L, {cplx(0.4), cplx(-0.2)}, {cplx(1), cplx(0)});
    CHECK(std::abs(L - cplx(1.69)) < 1e-12); // (alpha + |beta|)^2 = (1 + 0.3)^2
}

TEST_CASE("antonelli_shimada with sigma = 0 gives L = sqrt(2) at eta = theta = 1") {
    MetricSpec spec = load_metric(R"({
      "name": "as0", "dimension": 2, "kind": "antonelli_shimada", "sigma": "0"
    })");
    cplx L = eval_value(spec.L, {cplx(0.5), cplx(-0.3)}, {cplx(1), cplx(1)});
    CHECK(std::abs(L - cplx(std::sqrt(2.0))) < 1e-14);
}

TEST_CASE("kropina with b = 0 fails validation") {
    try {
        load_metric(R"({
          "name": "k0", "dimension": 2, "kind": "kropina",
          "a": [["1", "0"], ["0", "1"]], "b": ["0", "0"]
        })");
        FAIL("expected ValidationError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
    }
}

TEST_CASE("schema violations are rejected") {
    CHECK_THROWS_AS(load_metric("not json"), Error);
    CHECK_THROWS_AS(load_metric(R"({"name":"x","dimension":2,"kind":"hermitian",
        "a":[["1","0"],["0","1"]],"extra":1})"),
                    Error);
    CHECK_THROWS_AS(load_metric(R"({"name":"x","dimension":2,"kind":"nope"})"), Error);
    CHECK_THROWS_AS(load_metric(R"({"name":"x","dimension":2,"kind":"custom"})"), Error);
    CHECK_THROWS_AS(load_metric(R"({"name":"x","dimension":3,"kind":"antonelli_shimada",
        "sigma":"0"})"),
                    Error);
    // syntax error inside a field carries the field path
    try {
        load_metric(R"({"name":"x","dimension":2,"kind":"hermitian",
            "a":[["1","0"],["0","1+"]]})");
        FAIL("expected SyntaxError");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("a[1][1]") != std::string::npos);
    }
}

TEST_CASE("non-Hermitian a is rejected with a witness") {
    try {
        load_metric(R"({"name":"x","dimension":2,"kind":"hermitian",
            "a":[["1","z1"],["0","1"]]})");
        FAIL("expected ValidationError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
        CHECK(std::string(e.what()).find("Hermitian") != std::string::npos);
    }
}

TEST_CASE("base_point is parsed and used by sampling") {
    MetricSpec spec = load_metric(R"({
      "name": "shifted", "dimension": 2, "kind": "hermitian",
      "a": [["1", "0"], ["0", "1"]], "base_point": [3.0, 0.5, -1.0, 0.25]
    })");
    REQUIRE(spec.base_point.size() == 2);
    CHECK(spec.base_point[0] == cplx(3.0, 0.5));
    SamplePlan plan;
    plan.z_count = 4;
    plan.eta_count = 1;
    for (const TangentSample& s : draw_samples(spec, plan)) {
        CHECK(std::abs(s.z[0] - spec.base_point[0]) <= plan.radius + 1e-12);
        CHECK(std::abs(s.z[1] - spec.base_point[1]) <= plan.radius + 1e-12);
    }
}

TEST_CASE("sampling is deterministic and stays on the annulus") {
    MetricSpec spec = load_metric(kFlatJson);
    SamplePlan plan;
    plan.seed = 99;
    std::vector<TangentSample> a = draw_samples(spec, plan);
    std::vector<TangentSample> b = draw_samples(spec, plan);
    REQUIRE(a.size() == 64);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].z == b[i].z);
        CHECK(a[i].eta == b[i].eta);
        for (const cplx& e : a[i].eta) {
            CHECK(std::abs(e) >= 0.25 - 1e-12);
            CHECK(std::abs(e) <= 1.0 + 1e-12);
        }
    }
    // z-major grouping: samples within one group share z
    CHECK(a[0].z == a[plan.eta_count - 1].z);
    CHECK(a[0].z != a[static_cast<std::size_t>(plan.eta_count)].z);
}

TEST_CASE("kropina sampling rejects beta near zero") {
    MetricSpec spec = load_metric(R"({
      "name": "k", "dimension": 2, "kind": "kropina",
      "a": [["1", "0"], ["0", "1"]], "b": ["1", "0"]
    })");
    SamplePlan plan;
    plan.z_count = 4;
    plan.eta_count = 8;
    for (const TangentSample& s : draw_samples(spec, plan))
        CHECK(std::abs(s.eta[0]) > 1e-6);
}

TEST_CASE("homogeneity of assembled L across zoo-style kinds") {
    Rng rng(17);
    for (const char* json : {kFlatJson, kRandersJson}) {
        MetricSpec spec = load_metric(json);
        SamplePlan plan;
        plan.z_count = 2;
        plan.eta_count = 2;
        for (const TangentSample& s : draw_samples(spec, plan)) {
            cplx L = eval_value(spec.L, s.z, s.eta);
            cplx lambda(rng.uniform(0.2, 1.5), rng.uniform(-1.0, 1.0));
            std::vector<cplx> scaled = s.eta;
            for (cplx& e : scaled) e *= lambda;
            cplx Ls = eval_value(spec.L, s.z, scaled);
            CHECK(std::abs(Ls - std::norm(lambda) * L) <= 1e-10 * (1.0 + std::abs(Ls)));
            CHECK(std::abs(L.imag()) <= 1e-10 * (1.0 + std::abs(L)));
        }
    }
}

TEST_CASE("metric JSON round trip") {
    MetricSpec spec = load_metric(kRandersJson);
    MetricSpec back = load_metric(metric_to_json(spec));
    SamplePlan plan;
    plan.z_count = 2;
    plan.eta_count = 2;
    for (const TangentSample& s : draw_samples(spec, plan)) {
        cplx a = eval_value(spec.L, s.z, s.eta);
        cplx b = eval_value(back.L, s.z, s.eta);
        CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("linear coordinate change preserves L pointwise") {
    MetricSpec spec = load_metric(kRandersJson);
    std::vector<std::vector<cplx>> A = {{cplx(1.0), cplx(0.3, 0.1)}, {cplx(0.0, -0.2), cplx(1.1)}};
    // inverse of [[1, a],[c, d]]
    cplx det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    std::vector<std::vector<cplx>> Ainv = {{A[1][1] / det, -A[0][1] / det},
                                           {-A[1][0] / det, A[0][0] / det}};
    MetricSpec prime = transform_metric(spec, A, Ainv);
    SamplePlan plan;
    plan.z_count = 2;
    plan.eta_count = 2;
    for (const TangentSample& s : draw_samples(spec, plan)) {
        TangentSample t;
        t.z.resize(2);
        t.eta.resize(2);
        for (int i = 0; i < 2; ++i) {
            t.z[i] = A[i][0] * s.z[0] + A[i][1] * s.z[1];
            t.eta[i] = A[i][0] * s.eta[0] + A[i][1] * s.eta[1];
        }
        cplx a = eval_value(spec.L, s.z, s.eta);
        cplx b = eval_value(prime.L, t.z, t.eta);
        CHECK(std::abs(a - b) <= 1e-11 * (1.0 + std::abs(a)));
    }
}
