#include "ad.hpp"
#include "metric.hpp"
#include "zoo.hpp"

#include <doctest.h>

using namespace finsler;

namespace {

TangentSample sample2(cplx z1, cplx z2, cplx e1, cplx e2) {
    TangentSample s;
    s.z = {z1, z2};
    s.eta = {e1, e2};
    return s;
}

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(a)); }

} // namespace

TEST_CASE("d/deta of |eta1|^2 is conj(eta1)") {
    Expr e = parse("eta1*conj(eta1)");
    TangentSample s = sample2(cplx(0.3, 0.1), cplx(0), cplx(0.7, -0.2), cplx(1));
    cplx d = derive_one(e, s, MultiIndex().d_eta(0));
    CHECK(close(d, std::conj(s.eta[0]), 1e-14));
    cplx db = derive_one(e, s, MultiIndex().d_etabar(0));
    CHECK(close(db, s.eta[0], 1e-14));
}

TEST_CASE("flat metric second derivatives give the identity tensor") {
    Expr L = parse("eta1*conj(eta1)+eta2*conj(eta2)");
    TangentSample s = sample2(cplx(0.2, 0.4), cplx(-0.1, 0.3), cplx(0.9, 0.1), cplx(0.5, -0.6));
    CHECK(close(derive_one(L, s, MultiIndex().d_eta(0).d_etabar(0)), cplx(1.0), 1e-15));
    CHECK(std::abs(derive_one(L, s, MultiIndex().d_eta(0).d_etabar(1))) < 1e-15);
}

TEST_CASE("Antonelli-Shimada first derivative matches the FD oracle") {
    MetricSpec spec = zoo_make("antonelli_shimada");
    TangentSample s = sample2(cplx(1, 0), cplx(0, 0), cplx(1, 0), cplx(1, 0));
    FdResult r = fd_check(spec.L, s, MultiIndex().d_eta(0), 1e-5);
    CHECK(r.residual < 1e-6);
}

TEST_CASE("fd_check on the flat metric is tight at first order") {
    Expr L = parse("eta1*conj(eta1)+eta2*conj(eta2)");
    TangentSample s = sample2(cplx(0.1, 0), cplx(0, 0.2), cplx(0.8, 0.3), cplx(0.4, 0.9));
    CHECK(fd_check(L, s, MultiIndex().d_eta(0), 1e-5).residual < 1e-9);
    CHECK(fd_check(L, s, MultiIndex().d_etabar(1), 1e-5).residual < 1e-9);
}

TEST_CASE("fd_check across zoo metrics at orders 1 and 2") {
    for (const std::string& id : {"randers", "kropina", "antonelli_shimada"}) {
        MetricSpec spec = zoo_make(id);
        SamplePlan plan;
        plan.z_count = 2;
        plan.eta_count = 2;
        plan.seed = 11;
        for (const TangentSample& s : draw_samples(spec, plan)) {
            CHECK(fd_check(spec.L, s, MultiIndex().d_eta(0), 1e-5).residual < 1e-6);
            CHECK(fd_check(spec.L, s, MultiIndex().d_z(0), 1e-5).residual < 1e-6);
            // order 2: the roundoff floor scales as eps/h^2, so the step is wider
            CHECK(fd_check(spec.L, s, MultiIndex().d_eta(0).d_etabar(1), 1e-4).residual < 1e-6);
            CHECK(fd_check(spec.L, s, MultiIndex().d_z(1).d_etabar(0), 1e-4).residual < 1e-6);
        }
    }
}

TEST_CASE("Kropina derivatives at beta = 0 raise DomainError") {
    MetricSpec spec = zoo_make("kropina"); // b = (1, 0), so beta = eta1
    TangentSample s = sample2(cplx(0.1, 0), cplx(0.2, 0), cplx(0, 0), cplx(1, 0));
    CHECK_THROWS_AS(derive_one(spec.L, s, MultiIndex().d_eta(1)), Error);
    try {
        fd_check(spec.L, s, MultiIndex().d_eta(1), 1e-5);
        FAIL("expected DomainError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Domain);
    }
}

TEST_CASE("order cap is a hard error") {
    Expr L = parse("eta1*conj(eta1)+eta2*conj(eta2)");
    TangentSample s = sample2(cplx(0), cplx(0), cplx(1), cplx(1));
    MultiIndex mu;
    mu.d_eta(0, 3).d_etabar(0, 3);
    try {
        derive_one(L, s, mu);
        FAIL("expected OrderError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Order);
    }
}

TEST_CASE("linearity of derive over random expressions") {
    const std::vector<std::string> pool = {
        "eta1*conj(eta2)+z1^2",
        "exp(z1/2)*abs2(eta1)",
        "sqrt(2+abs2(eta2))*conj(z2)",
        "log(3+abs2(z1))*eta2",
    };
    Rng rng(23);
    for (std::size_t fi = 0; fi < pool.size(); ++fi)
        for (std::size_t gi = fi + 1; gi < pool.size(); ++gi) {
            Expr f = parse(pool[fi]), g = parse(pool[gi]);
            cplx a(rng.uniform(-2, 2), rng.uniform(-2, 2));
            cplx b(rng.uniform(-2, 2), rng.uniform(-2, 2));
            Expr combo = make_binary(NodeKind::Add, make_binary(NodeKind::Mul, make_literal(a), f),
                                     make_binary(NodeKind::Mul, make_literal(b), g));
            TangentSample s =
                sample2(rng.disc(0.6), rng.disc(0.6), rng.annulus(0.3, 1.0), rng.annulus(0.3, 1.0));
            for (MultiIndex mu : {MultiIndex().d_eta(0), MultiIndex().d_z(0).d_etabar(1),
                                  MultiIndex().d_eta(1).d_etabar(1).d_z(1)}) {
                cplx lhs = derive_one(combo, s, mu);
                cplx rhs = a * derive_one(f, s, mu) + b * derive_one(g, s, mu);
                CHECK(close(lhs, rhs, 1e-12));
            }
        }
}

TEST_CASE("conjugation symmetry on real-valued zoo metrics") {
    for (const std::string& id : zoo_ids()) {
        MetricSpec spec = zoo_make(id);
        SamplePlan plan;
        plan.z_count = 2;
        plan.eta_count = 2;
        plan.seed = 5;
        for (const TangentSample& s : draw_samples(spec, plan)) {
            for (MultiIndex mu :
                 {MultiIndex().d_eta(0).d_etabar(1), MultiIndex().d_z(0).d_eta(1),
                  MultiIndex().d_eta(0).d_eta(1).d_etabar(0), MultiIndex().d_zbar(1).d_eta(0)}) {
                cplx a = derive_one(spec.L, s, mu);
                cplx b = derive_one(spec.L, s, mu.conj_swapped());
                CHECK(std::abs(a - std::conj(b)) <= 1e-10 * (1.0 + std::abs(a)));
            }
        }
    }
}

TEST_CASE("mixed partials commute across application orders") {
    MetricSpec spec = zoo_make("antonelli_shimada");
    TangentSample s = sample2(cplx(0.4, 0.2), cplx(-0.3, 0.1), cplx(0.8, 0.5), cplx(0.6, -0.7));
    const int n = 2;
    std::vector<WOp> ops = {{0, false}, {n + 0, false}, {n + 1, true}, {n + 0, false}};
    std::vector<WOp> perm = {{n + 0, false}, {n + 1, true}, {0, false}, {n + 0, false}};
    cplx a = derive_ops(spec.L, s, ops);
    cplx b = derive_ops(spec.L, s, perm);
    CHECK(close(a, b, 1e-10));
}

TEST_CASE("derive returns all requested entries plus the value") {
    Expr L = parse("eta1*conj(eta1)+eta2*conj(eta2)");
    TangentSample s = sample2(cplx(0), cplx(0), cplx(1, 1), cplx(2));
    std::vector<MultiIndex> req = {MultiIndex().d_eta(0).d_etabar(0), MultiIndex().d_eta(1)};
    JetValue jv = derive(L, s, req);
    CHECK(jv.entries.size() == 3);
    CHECK(close(jv.value(), cplx(6.0), 1e-15));
    CHECK(close(jv.at(req[0]), cplx(1.0), 1e-15));
    CHECK(close(jv.at(req[1]), std::conj(s.eta[1]), 1e-15));
}
