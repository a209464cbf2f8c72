#pragma once

#include "errors.hpp"

#include <cmath>
#include <complex>

namespace finsler {

// Nested forward-mode jet over real coordinate directions. Level k of Jet<K>
// carries the first-order derivative slots (dx, dy) along the real and
// imaginary axis of the variable attached to that level; the ring below is
// Jet<K-1>. All arithmetic is exact to rounding; Wirtinger combinations
// 1/2(d/dx -+ i d/dy) happen only when a derivative is extracted.
template <int K>
struct Jet {
    Jet<K - 1> v{}, dx{}, dy{};

    Jet() = default;
    explicit Jet(const cplx& c) : v(c) {}

    static Jet constant(const cplx& c) { return Jet(c); }
};

template <>
struct Jet<0> {
    cplx v{};

    Jet() = default;
    explicit Jet(const cplx& c) : v(c) {}

    static Jet constant(const cplx& c) { return Jet(c); }
};

// ---- arithmetic ----------------------------------------------------------

inline Jet<0> operator+(const Jet<0>& a, const Jet<0>& b) { return Jet<0>(a.v + b.v); }
inline Jet<0> operator-(const Jet<0>& a, const Jet<0>& b) { return Jet<0>(a.v - b.v); }
inline Jet<0> operator-(const Jet<0>& a) { return Jet<0>(-a.v); }
inline Jet<0> operator*(const Jet<0>& a, const Jet<0>& b) { return Jet<0>(a.v * b.v); }

template <int K>
Jet<K> operator+(const Jet<K>& a, const Jet<K>& b) {
    Jet<K> r;
    r.v = a.v + b.v;
    r.dx = a.dx + b.dx;
    r.dy = a.dy + b.dy;
    return r;
}

template <int K>
Jet<K> operator-(const Jet<K>& a, const Jet<K>& b) {
    Jet<K> r;
    r.v = a.v - b.v;
    r.dx = a.dx - b.dx;
    r.dy = a.dy - b.dy;
    return r;
}

template <int K>
Jet<K> operator-(const Jet<K>& a) {
    Jet<K> r;
    r.v = -a.v;
    r.dx = -a.dx;
    r.dy = -a.dy;
    return r;
}

template <int K>
Jet<K> operator*(const Jet<K>& a, const Jet<K>& b) {
    Jet<K> r;
    r.v = a.v * b.v;
    r.dx = a.dx * b.v + a.v * b.dx;
    r.dy = a.dy * b.v + a.v * b.dy;
    return r;
}

inline Jet<0> operator/(const Jet<0>& a, const Jet<0>& b) {
    if (b.v == cplx(0.0, 0.0)) throw domain_error("division by zero");
    return Jet<0>(a.v / b.v);
}

template <int K>
Jet<K> operator/(const Jet<K>& a, const Jet<K>& b) {
    Jet<K> r;
    r.v = a.v / b.v;
    r.dx = (a.dx - r.v * b.dx) / b.v;
    r.dy = (a.dy - r.v * b.dy) / b.v;
    return r;
}

// ---- primitives ----------------------------------------------------------

inline Jet<0> conj(const Jet<0>& a) { return Jet<0>(std::conj(a.v)); }

template <int K>
Jet<K> conj(const Jet<K>& a) {
    Jet<K> r;
    r.v = conj(a.v);
    r.dx = conj(a.dx);
    r.dy = conj(a.dy);
    return r;
}

inline Jet<0> sqrt(const Jet<0>& a) { return Jet<0>(std::sqrt(a.v)); }

template <int K>
Jet<K> sqrt(const Jet<K>& a) {
    if (value_of(a) == cplx(0.0, 0.0)) throw domain_error("sqrt of zero in a differentiated position");
    Jet<K> r;
    r.v = sqrt(a.v);
    Jet<K - 1> two_s = r.v + r.v;
    r.dx = a.dx / two_s;
    r.dy = a.dy / two_s;
    return r;
}

inline Jet<0> exp(const Jet<0>& a) { return Jet<0>(std::exp(a.v)); }

template <int K>
Jet<K> exp(const Jet<K>& a) {
    Jet<K> r;
    r.v = exp(a.v);
    r.dx = a.dx * r.v;
    r.dy = a.dy * r.v;
    return r;
}

inline Jet<0> log(const Jet<0>& a) {
    if (a.v == cplx(0.0, 0.0)) throw domain_error("log of zero");
    return Jet<0>(std::log(a.v));
}

template <int K>
Jet<K> log(const Jet<K>& a) {
    Jet<K> r;
    r.v = log(a.v);
    r.dx = a.dx / a.v;
    r.dy = a.dy / a.v;
    return r;
}

inline const cplx& value_of(const Jet<0>& a) { return a.v; }

template <int K>
const cplx& value_of(const Jet<K>& a) {
    return value_of(a.v);
}

template <int K>
Jet<K> ipow(const Jet<K>& base, long e) {
    if (e < 0) return Jet<K>::constant(cplx(1.0)) / ipow(base, -e);
    Jet<K> acc = Jet<K>::constant(cplx(1.0));
    Jet<K> b = base;
    while (e > 0) {
        if (e & 1) acc = acc * b;
        b = b * b;
        e >>= 1;
    }
    return acc;
}

} // namespace finsler
