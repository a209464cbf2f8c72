#include "metric.hpp"
#include "tensor.hpp"

#include <doctest.h>

using namespace finsler;

namespace {

CMatrix random_hpd(int n, Rng& rng) {
    CMatrix b(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    CMatrix g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx acc = (i == j) ? cplx(0.5) : cplx(0.0);
            for (int k = 0; k < n; ++k) acc += b(i, k) * std::conj(b(j, k));
            g(i, j) = acc;
        }
    return g;
}

double identity_defect(const CMatrix& a, const CMatrix& b) {
    double worst = 0.0;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) {
            cplx acc = (i == j) ? cplx(-1.0) : cplx(0.0);
            for (int k = 0; k < a.n; ++k) acc += a(i, k) * b(k, j);
            worst = std::max(worst, std::abs(acc));
        }
    return worst;
}

} // namespace

TEST_CASE("inverse of identity and of a diagonal") {
    CMatrix id = CMatrix::identity(2);
    CMatrix inv = invert_hermitian(id);
    CHECK(identity_defect(id, inv) < 1e-15);

    CMatrix d(2);
    d(0, 0) = cplx(2.0);
    d(1, 1) = cplx(1.0);
    CMatrix di = invert_hermitian(d);
    CHECK(std::abs(di(0, 0) - cplx(0.5)) < 1e-15);
    CHECK(std::abs(di(1, 1) - cplx(1.0)) < 1e-15);
}

TEST_CASE("multiply-back and double inversion on random HPD matrices") {
    Rng rng(3);
    for (int n : {2, 3, 4})
        for (int t = 0; t < 8; ++t) {
            CMatrix g = random_hpd(n, rng);
            CMatrix inv = invert_hermitian(g);
            CHECK(identity_defect(g, inv) < 1e-12);
            CHECK(hermitian_defect(inv) < 1e-12);
            CMatrix back = invert_hermitian(inv);
            double dev = 0.0;
            for (std::size_t k = 0; k < g.a.size(); ++k)
                dev = std::max(dev, std::abs(back.a[k] - g.a[k]));
            CHECK(dev < 1e-12 * (1.0 + max_abs(g)));
        }
}

TEST_CASE("non-positive and ill-conditioned matrices are rejected") {
    CMatrix neg(2);
    neg(0, 0) = cplx(1.0);
    neg(1, 1) = cplx(-1.0);
    CHECK_THROWS_AS(invert_hermitian(neg), Error);

    CMatrix tiny(2);
    tiny(0, 0) = cplx(1.0);
    tiny(1, 1) = cplx(1e-13);
    try {
        invert_hermitian(tiny);
        FAIL("expected SingularMatrix");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularMatrix);
    }
}

TEST_CASE("contractions against eta vectors") {
    CVector eta(2);
    eta[0] = cplx(2.0, 1.0);
    eta[1] = cplx(-1.0, 0.5);

    CMatrix delta = CMatrix::identity(2);
    CVector r = contract(delta, 1, eta);
    CHECK(std::abs(r[0] - eta[0]) < 1e-15);
    CHECK(std::abs(r[1] - eta[1]) < 1e-15);

    CTensor3 t(2);
    t(0, 1, 0) = cplx(3.0);
    CMatrix m = contract(t, 2, eta);
    CHECK(std::abs(m(0, 1) - cplx(6.0, 3.0)) < 1e-15);

    CVector wrong(3);
    CHECK_THROWS_AS(contract(delta, 1, wrong), Error);
    CHECK_THROWS_AS(contract(t, 5, eta), Error);
}
