#pragma once

#include "expr.hpp"
#include "types.hpp"

#include <map>
#include <vector>

namespace finsler {

// Hard cap on mixed derivative order; the deepest chain the geometry engine
// requests is order 5.
inline constexpr int kMaxDerivativeOrder = 5;

// Mixed Wirtinger multi-index: per-variable orders in four groups. Variables
// are 0-based; orders are strictly positive; entries are kept sorted by
// variable, which makes the representation canonical (application order is
// immaterial by mixed-partial symmetry).
struct MultiIndex {
    using Entry = std::pair<int, int>; // (variable, order)
    std::vector<Entry> z, zbar, eta, etabar;

    static MultiIndex empty() { return {}; }

    MultiIndex& d_z(int var, int order = 1) { return bump(z, var, order); }
    MultiIndex& d_zbar(int var, int order = 1) { return bump(zbar, var, order); }
    MultiIndex& d_eta(int var, int order = 1) { return bump(eta, var, order); }
    MultiIndex& d_etabar(int var, int order = 1) { return bump(etabar, var, order); }

    int total_order() const;
    int max_var() const;

    // Swaps holomorphic and antiholomorphic groups pairwise; for real-valued
    // functions D^mu f = conj(D^{swap(mu)} f).
    MultiIndex conj_swapped() const;

    bool operator==(const MultiIndex& o) const = default;
    bool operator<(const MultiIndex& o) const;

private:
    static MultiIndex& self(MultiIndex& m) { return m; }
    MultiIndex& bump(std::vector<Entry>& group, int var, int order);
};

// A bundle of mixed Wirtinger derivatives of one scalar expression at one
// point. Entry at the zero multi-index is the plain value.
struct JetValue {
    TangentSample point;
    std::map<MultiIndex, cplx> entries;

    cplx value() const { return entries.at(MultiIndex::empty()); }
    cplx at(const MultiIndex& mu) const { return entries.at(mu); }
};

// One primitive Wirtinger operator: slot indexes [0, 2n) with z first, then
// eta; antihol selects d/dw-bar over d/dw.
struct WOp {
    int slot;
    bool antihol;
};

// Applies the operators in the given order (outermost first); exact forward
// mode over the real coordinates of each slot's variable, Wirtinger
// combination at the boundary.
cplx derive_ops(const Expr& expr, const TangentSample& point, const std::vector<WOp>& ops);

// Computes all requested derivatives of expr at point. Requests beyond order 5
// raise an Order error; the zero multi-index is always included.
JetValue derive(const Expr& expr, const TangentSample& point, const std::vector<MultiIndex>& requests);

cplx derive_one(const Expr& expr, const TangentSample& point, const MultiIndex& mu);

// Central-difference oracle for orders 1 and 2, with Richardson refinement at
// steps h and h/2; residual is |AD - FD| / max(1, |AD|).
struct FdResult {
    double residual;
    double fd_disagreement; // |FD(h) - FD(h/2)|, separates AD bugs from truncation
    cplx ad;
    cplx fd;
};

FdResult fd_check(const Expr& expr, const TangentSample& point, const MultiIndex& mu, double step);

} // namespace finsler
