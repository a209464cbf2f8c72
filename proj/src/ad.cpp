#include "ad.hpp"

#include <algorithm>

namespace finsler {

int MultiIndex::total_order() const {
    int t = 0;
    for (const auto* g : {&z, &zbar, &eta, &etabar})
        for (const auto& [var, order] : *g) t += order;
    return t;
}

int MultiIndex::max_var() const {
    int m = -1;
    for (const auto* g : {&z, &zbar, &eta, &etabar})
        for (const auto& [var, order] : *g) m = std::max(m, var);
    return m;
}

MultiIndex MultiIndex::conj_swapped() const {
    MultiIndex s;
    s.z = zbar;
    s.zbar = z;
    s.eta = etabar;
    s.etabar = eta;
    return s;
}

bool MultiIndex::operator<(const MultiIndex& o) const {
    if (z != o.z) return z < o.z;
    if (zbar != o.zbar) return zbar < o.zbar;
    if (eta != o.eta) return eta < o.eta;
    return etabar < o.etabar;
}

MultiIndex& MultiIndex::bump(std::vector<Entry>& group, int var, int order) {
    if (var < 0 || order <= 0) throw Error(ErrorKind::BadArgument, "bad multi-index entry");
    auto it = std::lower_bound(group.begin(), group.end(), var,
                               [](const Entry& e, int v) { return e.first < v; });
    if (it != group.end() && it->first == var)
        it->second += order;
    else
        group.insert(it, Entry{var, order});
    return *this;
}

namespace {

template <int K>
Jet<K> seeded(const cplx& value, const WOp* ops, int slot) {
    if constexpr (K == 0) {
        (void)ops;
        (void)slot;
        return Jet<0>(value);
    } else {
        Jet<K> j;
        j.v = seeded<K - 1>(value, ops + 1, slot);
        if (ops[0].slot == slot) {
            j.dx = Jet<K - 1>::constant(cplx(1.0, 0.0));
            j.dy = Jet<K - 1>::constant(cplx(0.0, 1.0));
        }
        return j;
    }
}

template <int K>
cplx combine(const Jet<K>& j, const WOp* ops) {
    if constexpr (K == 0) {
        (void)ops;
        return j.v;
    } else {
        cplx a = combine<K - 1>(j.dx, ops + 1);
        cplx b = combine<K - 1>(j.dy, ops + 1);
        const cplx i(0.0, 1.0);
        return ops[0].antihol ? 0.5 * (a + i * b) : 0.5 * (a - i * b);
    }
}

template <int K>
cplx run(const Expr& expr, const TangentSample& point, const WOp* ops) {
    const int n = point.dim();
    std::vector<Jet<K>> zs(n), es(n);
    for (int k = 0; k < n; ++k) zs[k] = seeded<K>(point.z[k], ops, k);
    for (int k = 0; k < n; ++k) es[k] = seeded<K>(point.eta[k], ops, n + k);
    EvalEnv<Jet<K>> env{zs.data(), es.data(), n};
    return combine<K>(eval(expr, env), ops);
}

} // namespace

cplx derive_ops(const Expr& expr, const TangentSample& point, const std::vector<WOp>& ops) {
    const int k = static_cast<int>(ops.size());
    if (k > kMaxDerivativeOrder) throw order_error(k, kMaxDerivativeOrder);
    const int n = point.dim();
    for (const WOp& op : ops)
        if (op.slot < 0 || op.slot >= 2 * n)
            throw Error(ErrorKind::UnboundVariable, "derivative slot out of range");
    switch (k) {
        case 0: return run<0>(expr, point, ops.data());
        case 1: return run<1>(expr, point, ops.data());
        case 2: return run<2>(expr, point, ops.data());
        case 3: return run<3>(expr, point, ops.data());
        case 4: return run<4>(expr, point, ops.data());
        case 5: return run<5>(expr, point, ops.data());
        default: throw order_error(k, kMaxDerivativeOrder);
    }
}

namespace {

std::vector<WOp> flatten_ops(const MultiIndex& mu, int n) {
    std::vector<WOp> ops;
    for (const auto& [var, order] : mu.z)
        for (int r = 0; r < order; ++r) ops.push_back({var, false});
    for (const auto& [var, order] : mu.zbar)
        for (int r = 0; r < order; ++r) ops.push_back({var, true});
    for (const auto& [var, order] : mu.eta)
        for (int r = 0; r < order; ++r) ops.push_back({n + var, false});
    for (const auto& [var, order] : mu.etabar)
        for (int r = 0; r < order; ++r) ops.push_back({n + var, true});
    return ops;
}

} // namespace

cplx derive_one(const Expr& expr, const TangentSample& point, const MultiIndex& mu) {
    if (mu.total_order() > kMaxDerivativeOrder)
        throw order_error(mu.total_order(), kMaxDerivativeOrder);
    return derive_ops(expr, point, flatten_ops(mu, point.dim()));
}

JetValue derive(const Expr& expr, const TangentSample& point, const std::vector<MultiIndex>& requests) {
    JetValue jv;
    jv.point = point;
    jv.entries[MultiIndex::empty()] = derive_ops(expr, point, {});
    for (const MultiIndex& mu : requests) {
        if (jv.entries.count(mu)) continue;
        jv.entries[mu] = derive_one(expr, point, mu);
    }
    return jv;
}

namespace {

cplx fd_recursive(const Expr& expr, const TangentSample& point, const std::vector<WOp>& ops,
                  std::size_t at, double h) {
    if (at == ops.size()) return eval_value(expr, point.z, point.eta);
    const WOp& op = ops[at];
    const int n = point.dim();
    auto shifted = [&](double dre, double dim) {
        TangentSample p = point;
        cplx& target = op.slot < n ? p.z[op.slot] : p.eta[op.slot - n];
        target += cplx(dre, dim);
        return p;
    };
    cplx dxp = fd_recursive(expr, shifted(h, 0.0), ops, at + 1, h);
    cplx dxm = fd_recursive(expr, shifted(-h, 0.0), ops, at + 1, h);
    cplx dyp = fd_recursive(expr, shifted(0.0, h), ops, at + 1, h);
    cplx dym = fd_recursive(expr, shifted(0.0, -h), ops, at + 1, h);
    cplx dx = (dxp - dxm) / (2.0 * h);
    cplx dy = (dyp - dym) / (2.0 * h);
    const cplx i(0.0, 1.0);
    return op.antihol ? 0.5 * (dx + i * dy) : 0.5 * (dx - i * dy);
}

} // namespace

FdResult fd_check(const Expr& expr, const TangentSample& point, const MultiIndex& mu, double step) {
    if (step <= 0.0) throw Error(ErrorKind::BadArgument, "fd step must be positive");
    const int order = mu.total_order();
    if (order < 1 || order > 2)
        throw Error(ErrorKind::BadArgument, "fd_check supports orders 1 and 2 only");
    std::vector<WOp> ops = flatten_ops(mu, point.dim());
    cplx coarse = fd_recursive(expr, point, ops, 0, step);
    cplx fine = fd_recursive(expr, point, ops, 0, step / 2.0);
    cplx refined = (4.0 * fine - coarse) / 3.0;
    cplx ad = derive_one(expr, point, mu);
    FdResult r;
    r.ad = ad;
    r.fd = refined;
    r.fd_disagreement = std::abs(coarse - fine);
    r.residual = std::abs(ad - refined) / std::max(1.0, std::abs(ad));
    return r;
}

} // namespace finsler
