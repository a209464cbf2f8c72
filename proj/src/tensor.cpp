#include "tensor.hpp"

namespace finsler {

CMatrix invert_hermitian(const CMatrix& g) {
    const int n = g.n;
    if (n <= 0) throw Error(ErrorKind::Shape, "empty matrix");

    double trace = 0.0;
    for (int i = 0; i < n; ++i) trace += g(i, i).real();
    const double pivot_floor = 1e-10 * (trace / n);

    // G = L D L^*, L unit lower triangular, D real.
    CMatrix L = CMatrix::identity(n);
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        double dj = g(j, j).real();
        for (int k = 0; k < j; ++k) dj -= std::norm(L(j, k)) * d[static_cast<std::size_t>(k)];
        if (!(dj > pivot_floor))
            throw Error(ErrorKind::SingularMatrix,
                        "matrix not positive definite (pivot " + std::to_string(dj) + " at " +
                            std::to_string(j) + ")");
        d[static_cast<std::size_t>(j)] = dj;
        for (int i = j + 1; i < n; ++i) {
            cplx s = g(i, j);
            for (int k = 0; k < j; ++k)
                s -= L(i, k) * std::conj(L(j, k)) * d[static_cast<std::size_t>(k)];
            L(i, j) = s / dj;
        }
    }

    double dmax = *std::max_element(d.begin(), d.end());
    double dmin = *std::min_element(d.begin(), d.end());
    if (dmax / dmin > 1e12)
        throw Error(ErrorKind::SingularMatrix, "condition estimate exceeds 1e12");

    // Solve L D L^* X = I column by column.
    CMatrix inv(n);
    std::vector<cplx> y(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        for (int i = 0; i < n; ++i) {
            cplx s = (i == c) ? cplx(1.0) : cplx(0.0);
            for (int k = 0; k < i; ++k) s -= L(i, k) * y[static_cast<std::size_t>(k)];
            y[static_cast<std::size_t>(i)] = s;
        }
        for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] /= d[static_cast<std::size_t>(i)];
        for (int i = n - 1; i >= 0; --i) {
            cplx s = y[static_cast<std::size_t>(i)];
            for (int k = i + 1; k < n; ++k) s -= std::conj(L(k, i)) * inv(k, c);
            inv(i, c) = s;
        }
    }

    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            cplx avg = 0.5 * (inv(i, j) + std::conj(inv(j, i)));
            inv(i, j) = avg;
            inv(j, i) = std::conj(avg);
        }
    return inv;
}

double hermitian_defect(const CMatrix& g) {
    double m = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) m = std::max(m, std::abs(g(i, j) - std::conj(g(j, i))));
    return m;
}

namespace {
void check_dims(int a, int b) {
    if (a != b) throw Error(ErrorKind::Shape, "contraction dimension mismatch");
}
} // namespace

CVector contract(const CMatrix& m, int slot, const CVector& v) {
    check_dims(m.n, v.n);
    if (slot < 0 || slot > 1) throw Error(ErrorKind::Shape, "matrix slot must be 0 or 1");
    CVector r(m.n);
    for (int i = 0; i < m.n; ++i)
        for (int s = 0; s < m.n; ++s) r[i] += (slot == 0 ? m(s, i) : m(i, s)) * v[s];
    return r;
}

CMatrix contract(const CTensor3& t, int slot, const CVector& v) {
    check_dims(t.n, v.n);
    if (slot < 0 || slot > 2) throw Error(ErrorKind::Shape, "tensor3 slot must be in 0..2");
    CMatrix r(t.n);
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.n; ++j)
            for (int s = 0; s < t.n; ++s) {
                cplx c = slot == 0 ? t(s, i, j) : slot == 1 ? t(i, s, j) : t(i, j, s);
                r(i, j) += c * v[s];
            }
    return r;
}

CTensor3 contract(const CTensor4& t, int slot, const CVector& v) {
    check_dims(t.n, v.n);
    if (slot < 0 || slot > 3) throw Error(ErrorKind::Shape, "tensor4 slot must be in 0..3");
    CTensor3 r(t.n);
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.n; ++j)
            for (int k = 0; k < t.n; ++k)
                for (int s = 0; s < t.n; ++s) {
                    cplx c = slot == 0   ? t(s, i, j, k)
                             : slot == 1 ? t(i, s, j, k)
                             : slot == 2 ? t(i, j, s, k)
                                         : t(i, j, k, s);
                    r(i, j, k) += c * v[s];
                }
    return r;
}

CVector conj(const CVector& v) {
    CVector r(v.n);
    for (int i = 0; i < v.n; ++i) r[i] = std::conj(v[i]);
    return r;
}

} // namespace finsler
