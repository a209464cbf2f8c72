#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace finsler {

// Dense complex containers sized for n <= ~8. Index convention throughout:
// the first index of a matrix is the unbarred (row) index, the second the
// barred (column) index; tensors document their slots at the use site.

struct CVector {
    int n = 0;
    std::vector<cplx> a;

    CVector() = default;
    explicit CVector(int n) : n(n), a(static_cast<std::size_t>(n)) {}

    cplx& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
    const cplx& operator[](int i) const { return a[static_cast<std::size_t>(i)]; }
};

struct CMatrix {
    int n = 0;
    std::vector<cplx> a;

    CMatrix() = default;
    explicit CMatrix(int n) : n(n), a(static_cast<std::size_t>(n) * n) {}

    cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static CMatrix identity(int n) {
        CMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = cplx(1.0);
        return m;
    }
};

struct CTensor3 {
    int n = 0;
    std::vector<cplx> a;

    CTensor3() = default;
    explicit CTensor3(int n) : n(n), a(static_cast<std::size_t>(n) * n * n) {}

    cplx& operator()(int i, int j, int k) {
        return a[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
    const cplx& operator()(int i, int j, int k) const {
        return a[(static_cast<std::size_t>(i) * n + j) * n + k];
    }
};

struct CTensor4 {
    int n = 0;
    std::vector<cplx> a;

    CTensor4() = default;
    explicit CTensor4(int n) : n(n), a(static_cast<std::size_t>(n) * n * n * n) {}

    cplx& operator()(int i, int j, int k, int l) {
        return a[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
    }
    const cplx& operator()(int i, int j, int k, int l) const {
        return a[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
    }
};

// The spec's domain aliases: HermitianMatrix rows are unbarred, columns
// barred; Tensor3 holds C_{i jbar k}, Tensor3Bar holds C_{i jbar kbar};
// MixedCoeffs hold one-upper-index coefficients X^i_{jk} as (i, j, k).
using HermitianMatrix = CMatrix;
using Tensor3 = CTensor3;
using Tensor3Bar = CTensor3;
using MixedCoeffs = CTensor3;

template <class T>
double max_abs(const T& t) {
    double m = 0.0;
    for (const cplx& v : t.a) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs(const cplx& v) { return std::abs(v); }

// Inverts a Hermitian positive-definite matrix by LDL^* factorization.
// Pivots double as the positivity check: any pivot below
// 1e-10 * (trace / n) or a condition estimate above 1e12 raises
// SingularMatrix. The inverse of a Hermitian positive matrix is Hermitian;
// the result is symmetrized to remove rounding skew.
CMatrix invert_hermitian(const CMatrix& g);

// Hermitian deviation |g - g^*|_max.
double hermitian_defect(const CMatrix& g);

// Contractions with eta-type vectors. `slot` names the tensor slot (0-based)
// summed against the vector; use conj(vector) at the call site for barred
// contractions.
CVector contract(const CMatrix& m, int slot, const CVector& v);
CMatrix contract(const CTensor3& t, int slot, const CVector& v);
CTensor3 contract(const CTensor4& t, int slot, const CVector& v);

CVector conj(const CVector& v);

} // namespace finsler
