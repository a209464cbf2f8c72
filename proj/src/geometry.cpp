#include "geometry.hpp"

#include <algorithm>

namespace finsler {

namespace {

using VIdx = SampleGeometry::VIdx;

MultiIndex make_mi(const VIdx& z, const VIdx& zbar, const VIdx& eta, const VIdx& etabar) {
    MultiIndex m;
    for (int v : z) m.d_z(v);
    for (int v : zbar) m.d_zbar(v);
    for (int v : eta) m.d_eta(v);
    for (int v : etabar) m.d_etabar(v);
    return m;
}

// Enumerates all ways to split a multiset into `parts` ordered groups.
template <class F>
void for_splits(const VIdx& items, int parts, F&& fn) {
    const int m = static_cast<int>(items.size());
    std::vector<int> assign(static_cast<std::size_t>(m), 0);
    for (;;) {
        std::vector<VIdx> groups(static_cast<std::size_t>(parts));
        for (int t = 0; t < m; ++t) groups[static_cast<std::size_t>(assign[t])].push_back(items[t]);
        fn(groups);
        int t = 0;
        while (t < m) {
            if (++assign[t] < parts) break;
            assign[t] = 0;
            ++t;
        }
        if (t == m) break;
    }
}

} // namespace

SampleGeometry::SampleGeometry(const MetricSpec& spec, TangentSample sample)
    : spec_(spec), sample_(std::move(sample)), n_(spec.n) {
    if (sample_.dim() != n_) throw Error(ErrorKind::Shape, "sample dimension mismatch");
    if (!sample_.eta_nonzero()) throw Error(ErrorKind::Domain, "eta must be nonzero (slit bundle)");
}

cplx SampleGeometry::jet(const MultiIndex& mu) {
    auto it = jets_.find(mu);
    if (it != jets_.end()) return it->second;
    cplx v = derive_one(spec_.L, sample_, mu);
    jets_.emplace(mu, v);
    return v;
}

cplx SampleGeometry::Lval() { return jet(MultiIndex::empty()); }
cplx SampleGeometry::g_at(int i, int j) { return jet(make_mi({}, {}, {i}, {j})); }
cplx SampleGeometry::C_at(int i, int j, int k) { return jet(make_mi({}, {}, {i, k}, {j})); }
cplx SampleGeometry::Cb_at(int i, int j, int k) { return jet(make_mi({}, {}, {i}, {j, k})); }
cplx SampleGeometry::W_at(int l, int m, int s) { return jet(make_mi({s}, {}, {l}, {m})); }
cplx SampleGeometry::Wp_at(int l, int j, int m, int s) { return jet(make_mi({s}, {}, {l, j}, {m})); }
cplx SampleGeometry::Wb_at(int l, int m, int b, int s) { return jet(make_mi({s}, {}, {l}, {m, b})); }
cplx SampleGeometry::Zb_at(int l, int m, int s) { return jet(make_mi({}, {s}, {l}, {m})); }
cplx SampleGeometry::Zbp_at(int l, int j, int m, int s) { return jet(make_mi({}, {s}, {l, j}, {m})); }

CMatrix SampleGeometry::vg_matrix(const VIdx& P, const VIdx& Q) {
    CMatrix m(n_);
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b) {
            VIdx eta = P, etabar = Q;
            eta.push_back(a);
            etabar.push_back(b);
            m(a, b) = jet(make_mi({}, {}, eta, etabar));
        }
    return m;
}

CMatrix SampleGeometry::ginv_deriv(VIdx P, VIdx Q) {
    std::sort(P.begin(), P.end());
    std::sort(Q.begin(), Q.end());
    auto key = std::make_pair(P, Q);
    auto it = ginv_memo_.find(key);
    if (it != ginv_memo_.end()) return it->second;

    CMatrix result(n_);
    if (P.empty() && Q.empty()) {
        CMatrix g(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) g(i, j) = g_at(i, j);
        result = invert_hermitian(g);
    } else {
        // Pull one operator d off: D A = D_rest(-A (d g) A), Leibniz over the
        // ordered triple. Rest operators live in (restP, restQ); the element
        // lists carry a bar flag so one split loop covers both groups.
        bool d_barred = P.empty();
        int d = d_barred ? Q.back() : P.back();
        if (d_barred)
            Q.pop_back();
        else
            P.pop_back();
        struct Op {
            int var;
            bool barred;
        };
        std::vector<Op> rest;
        for (int v : P) rest.push_back({v, false});
        for (int v : Q) rest.push_back({v, true});

        VIdx rest_tags(rest.size());
        for (std::size_t t = 0; t < rest.size(); ++t) rest_tags[t] = static_cast<int>(t);
        for_splits(rest_tags, 3, [&](const std::vector<VIdx>& groups) {
            VIdx p1, q1, p2, q2, p3, q3;
            auto fill = [&](const VIdx& tags, VIdx& p, VIdx& q) {
                for (int t : tags) (rest[static_cast<std::size_t>(t)].barred ? q : p)
                    .push_back(rest[static_cast<std::size_t>(t)].var);
            };
            fill(groups[0], p1, q1);
            fill(groups[1], p2, q2);
            fill(groups[2], p3, q3);
            if (d_barred)
                q2.push_back(d);
            else
                p2.push_back(d);
            CMatrix A1 = ginv_deriv(p1, q1);
            CMatrix M = vg_matrix(p2, q2);
            CMatrix A3 = ginv_deriv(p3, q3);
            for (int m = 0; m < n_; ++m)
                for (int i = 0; i < n_; ++i) {
                    cplx acc(0.0);
                    for (int a = 0; a < n_; ++a)
                        for (int b = 0; b < n_; ++b) acc += A1(m, a) * M(a, b) * A3(b, i);
                    result(m, i) -= acc;
                }
        });
    }
    ginv_memo_.emplace(std::move(key), result);
    return result;
}

// Vertical derivatives of V_mbar := (d g_{l mbar} / d z^s) eta^l eta^s. The
// eta^l contraction runs over an index that is itself a derivative slot of g,
// so the order-6 terms arising at three unbarred derivatives collapse through
// the homogeneity identity (Euler) to the order-5 families below.
CVector SampleGeometry::vV(const VIdx& P, const VIdx& Q) {
    const std::size_t p = P.size(), q = Q.size();
    const auto& eta = sample_.eta;
    CVector r(n_);
    auto jet_ws = [&](VIdx etaIdx, VIdx etabarIdx, int s) {
        return jet(make_mi({s}, {}, std::move(etaIdx), std::move(etabarIdx)));
    };
    for (int m = 0; m < n_; ++m) {
        cplx acc(0.0);
        if (p == 0 && q == 0) {
            for (int l = 0; l < n_; ++l)
                for (int s = 0; s < n_; ++s) acc += jet_ws({l}, {m}, s) * eta[l] * eta[s];
        } else if (p == 1 && q == 0) {
            const int j = P[0];
            for (int l = 0; l < n_; ++l)
                for (int s = 0; s < n_; ++s) acc += jet_ws({l, j}, {m}, s) * eta[l] * eta[s];
            for (int s = 0; s < n_; ++s) acc += jet_ws({j}, {m}, s) * eta[s];
            for (int l = 0; l < n_; ++l) acc += jet_ws({l}, {m}, j) * eta[l];
        } else if (p == 2 && q == 0) {
            const int j = P[0], k = P[1];
            for (int l = 0; l < n_; ++l)
                for (int s = 0; s < n_; ++s) acc += jet_ws({l, j, k}, {m}, s) * eta[l] * eta[s];
            for (int s = 0; s < n_; ++s) acc += 2.0 * jet_ws({j, k}, {m}, s) * eta[s];
            for (int l = 0; l < n_; ++l)
                acc += (jet_ws({l, j}, {m}, k) + jet_ws({l, k}, {m}, j)) * eta[l];
            acc += jet_ws({j}, {m}, k) + jet_ws({k}, {m}, j);
        } else if (p == 3 && q == 0) {
            const int j = P[0], k = P[1], h = P[2];
            for (int s = 0; s < n_; ++s) acc += jet_ws({j, k, h}, {m}, s) * eta[s];
            for (int l = 0; l < n_; ++l)
                acc += (jet_ws({l, j, k}, {m}, h) + jet_ws({l, j, h}, {m}, k) +
                        jet_ws({l, k, h}, {m}, j)) *
                       eta[l];
            acc += 2.0 * (jet_ws({j, k}, {m}, h) + jet_ws({j, h}, {m}, k) + jet_ws({k, h}, {m}, j));
        } else if (p == 0 && q == 1) {
            for (int l = 0; l < n_; ++l)
                for (int s = 0; s < n_; ++s) acc += jet_ws({l}, {m, Q[0]}, s) * eta[l] * eta[s];
        } else if (p == 1 && q == 1) {
            const int j = P[0], bq = Q[0];
            for (int l = 0; l < n_; ++l)
                for (int s = 0; s < n_; ++s)
                    acc += jet_ws({l, j}, {m, bq}, s) * eta[l] * eta[s];
            for (int s = 0; s < n_; ++s) acc += jet_ws({j}, {m, bq}, s) * eta[s];
            for (int l = 0; l < n_; ++l) acc += jet_ws({l}, {m, bq}, j) * eta[l];
        } else if (p == 2 && q == 1) {
            const int j = P[0], k = P[1], bq = Q[0];
            for (int s = 0; s < n_; ++s) acc += jet_ws({j, k}, {m, bq}, s) * eta[s];
            for (int l = 0; l < n_; ++l)
                acc += (jet_ws({l, j}, {m, bq}, k) + jet_ws({l, k}, {m, bq}, j)) * eta[l];
            acc += jet_ws({j}, {m, bq}, k) + jet_ws({k}, {m, bq}, j);
        } else if (p == 0 && q == 2) {
            for (int l = 0; l < n_; ++l)
                for (int s = 0; s < n_; ++s)
                    acc += jet_ws({l}, {m, Q[0], Q[1]}, s) * eta[l] * eta[s];
        } else if (p == 1 && q == 2) {
            const int j = P[0];
            for (int s = 0; s < n_; ++s) acc += jet_ws({j}, {m, Q[0], Q[1]}, s) * eta[s];
            for (int l = 0; l < n_; ++l) acc += jet_ws({l}, {m, Q[0], Q[1]}, j) * eta[l];
        } else {
            throw Error(ErrorKind::Order, "spray derivative depth beyond (3,0)/(2,1)/(1,2)");
        }
        r[m] = acc;
    }
    return r;
}

// Vertical derivatives of Vn_mbar(k) := (d g_{l mbar} / d z^k) eta^l (the
// nonlinear-coefficient core); no Euler reduction is needed here because the
// z-slot stays fixed.
CVector SampleGeometry::vVn(const VIdx& P, const VIdx& Q, int k) {
    const std::size_t p = P.size(), q = Q.size();
    const auto& eta = sample_.eta;
    CVector r(n_);
    auto jet_ws = [&](VIdx etaIdx, VIdx etabarIdx) {
        return jet(make_mi({k}, {}, std::move(etaIdx), std::move(etabarIdx)));
    };
    for (int m = 0; m < n_; ++m) {
        cplx acc(0.0);
        if (p == 0 && q == 0) {
            for (int l = 0; l < n_; ++l) acc += jet_ws({l}, {m}) * eta[l];
        } else if (p == 1 && q == 0) {
            for (int l = 0; l < n_; ++l) acc += jet_ws({l, P[0]}, {m}) * eta[l];
            acc += jet_ws({P[0]}, {m});
        } else if (p == 2 && q == 0) {
            for (int l = 0; l < n_; ++l) acc += jet_ws({l, P[0], P[1]}, {m}) * eta[l];
            acc += 2.0 * jet_ws({P[0], P[1]}, {m});
        } else if (p == 0 && q == 1) {
            for (int l = 0; l < n_; ++l) acc += jet_ws({l}, {m, Q[0]}) * eta[l];
        } else if (p == 1 && q == 1) {
            for (int l = 0; l < n_; ++l) acc += jet_ws({l, P[0]}, {m, Q[0]}) * eta[l];
            acc += jet_ws({P[0]}, {m, Q[0]});
        } else {
            throw Error(ErrorKind::Order, "nonlinear-coefficient derivative depth beyond (2,0)/(1,1)");
        }
        r[m] = acc;
    }
    return r;
}

namespace {

// Splits (P, Q) between two Leibniz factors by bitmask.
template <class F>
void for_two_way(const VIdx& P, const VIdx& Q, F&& fn) {
    const int p = static_cast<int>(P.size()), q = static_cast<int>(Q.size());
    for (int mp = 0; mp < (1 << p); ++mp)
        for (int mq = 0; mq < (1 << q); ++mq) {
            VIdx p1, p2, q1, q2;
            for (int t = 0; t < p; ++t) ((mp >> t) & 1 ? p1 : p2).push_back(P[t]);
            for (int t = 0; t < q; ++t) ((mq >> t) & 1 ? q1 : q2).push_back(Q[t]);
            fn(p1, q1, p2, q2);
        }
}

} // namespace

CVector SampleGeometry::spray_deriv(VIdx P, VIdx Q) {
    std::sort(P.begin(), P.end());
    std::sort(Q.begin(), Q.end());
    CVector r(n_);
    for_two_way(P, Q, [&](const VIdx& p1, const VIdx& q1, const VIdx& p2, const VIdx& q2) {
        CMatrix A = ginv_deriv(p1, q1);
        CVector V = vV(p2, q2);
        for (int i = 0; i < n_; ++i) {
            cplx acc(0.0);
            for (int m = 0; m < n_; ++m) acc += A(m, i) * V[m];
            r[i] += acc;
        }
    });
    for (int i = 0; i < n_; ++i) r[i] *= 0.5;
    return r;
}

CVector SampleGeometry::cf_nonlinear_deriv(VIdx P, VIdx Q, int k) {
    std::sort(P.begin(), P.end());
    std::sort(Q.begin(), Q.end());
    CVector r(n_);
    for_two_way(P, Q, [&](const VIdx& p1, const VIdx& q1, const VIdx& p2, const VIdx& q2) {
        CMatrix A = ginv_deriv(p1, q1);
        CVector V = vVn(p2, q2, k);
        for (int i = 0; i < n_; ++i) {
            cplx acc(0.0);
            for (int m = 0; m < n_; ++m) acc += A(m, i) * V[m];
            r[i] += acc;
        }
    });
    return r;
}

cplx SampleGeometry::cdel_g(int j, int m, int k) {
    const CMatrix& cN = bundle().cN;
    cplx acc = W_at(j, m, k);
    for (int a = 0; a < n_; ++a) acc -= cN(a, k) * C_at(j, m, a);
    return acc;
}

cplx SampleGeometry::cdelbar_g(int j, int m, int b) {
    const CMatrix& cN = bundle().cN;
    cplx acc = Zb_at(j, m, b);
    for (int a = 0; a < n_; ++a) acc -= std::conj(cN(a, b)) * Cb_at(j, m, a);
    return acc;
}

cplx SampleGeometry::del_g(int j, int m, int k) {
    const CMatrix& N = bundle().N;
    cplx acc = W_at(j, m, k);
    for (int a = 0; a < n_; ++a) acc -= N(a, k) * C_at(j, m, a);
    return acc;
}

void SampleGeometry::build_bundle() {
    auto b = std::make_unique<ConnectionBundle>();
    b->n = n_;
    b->sample = sample_;

    b->g = CMatrix(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) b->g(i, j) = g_at(i, j);
    b->g_inv = invert_hermitian(b->g);

    b->C = CTensor3(n_);
    b->Cbar = CTensor3(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k) {
                b->C(i, j, k) = C_at(i, j, k);
                b->Cbar(i, j, k) = Cb_at(i, j, k);
            }

    b->N = CMatrix(n_);
    for (int j = 0; j < n_; ++j) {
        CVector col = cf_nonlinear_deriv({}, {}, j);
        for (int i = 0; i < n_; ++i) b->N(i, j) = col[i];
    }

    CVector G = spray_deriv({}, {});
    b->G = G;

    b->cN = CMatrix(n_);
    b->dGbar = CMatrix(n_);
    for (int j = 0; j < n_; ++j) {
        CVector cn = spray_deriv({j}, {});
        CVector dg = spray_deriv({}, {j});
        for (int i = 0; i < n_; ++i) {
            b->cN(i, j) = cn[i];
            b->dGbar(i, j) = dg[i];
        }
    }

    bundle_ = std::move(b);
    ConnectionBundle& bb = *bundle_;

    bb.L_cf = CTensor3(n_);
    bb.L_cf_dot = CTensor3(n_);
    bb.C_cf = CTensor3(n_);
    bb.T = CTensor3(n_);
    for (int k = 0; k < n_; ++k)
        for (int j = 0; j < n_; ++j) {
            CVector dot = cf_nonlinear_deriv({j}, {}, k);
            for (int i = 0; i < n_; ++i) {
                cplx acc(0.0), accC(0.0);
                for (int l = 0; l < n_; ++l) {
                    acc += bb.g_inv(l, i) * del_g(j, l, k);
                    accC += bb.g_inv(l, i) * C_at(j, l, k);
                }
                bb.L_cf(i, j, k) = acc;
                bb.L_cf_dot(i, j, k) = dot[i];
                bb.C_cf(i, j, k) = accC;
            }
        }
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k) bb.T(i, j, k) = bb.L_cf(i, j, k) - bb.L_cf(i, k, j);

    bb.BL = CTensor3(n_);
    bb.BLbar = CTensor3(n_);
    bb.dNbar = CTensor3(n_);
    for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
            CVector bl = spray_deriv({j, k}, {});
            CVector blb = spray_deriv({j}, {k});
            for (int i = 0; i < n_; ++i) {
                bb.BL(i, j, k) = bl[i];
                bb.BLbar(i, j, k) = blb[i];
                bb.dNbar(i, j, k) = blb[i];
            }
        }

    bb.cL = CTensor3(n_);
    bb.cLbar = CTensor3(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k) {
                cplx acc(0.0), accb(0.0);
                for (int l = 0; l < n_; ++l) {
                    acc += bb.g_inv(l, i) * (cdel_g(j, l, k) + cdel_g(k, l, j));
                    accb += bb.g_inv(l, i) * (cdelbar_g(j, l, k) - cdelbar_g(j, k, l));
                }
                bb.cL(i, j, k) = 0.5 * acc;
                bb.cLbar(i, j, k) = 0.5 * accb;
            }
}

const ConnectionBundle& SampleGeometry::bundle() {
    if (!bundle_) build_bundle();
    return *bundle_;
}

void SampleGeometry::build_cov() {
    const ConnectionBundle& b = bundle();
    auto cd = std::make_unique<CovDerivs>();
    cd->n = n_;

    cd->g_B = CTensor3(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k) {
                cplx acc = cdel_g(i, j, k);
                for (int l = 0; l < n_; ++l) acc -= b.BL(l, i, k) * b.g(l, j);
                for (int m = 0; m < n_; ++m) acc -= std::conj(b.BLbar(m, j, k)) * b.g(i, m);
                cd->g_B(i, j, k) = acc;
            }

    cd->C_B_h = CTensor4(n_);
    cd->C_B_bar = CTensor4(n_);
    cd->C_B_hbar_arg = CTensor4(n_);
    cd->C_cf_h = CTensor4(n_);
    cd->C_cf_hbar = CTensor4(n_);

    const CTensor4& dL = dLcf_h();

    for (int l = 0; l < n_; ++l)
        for (int r = 0; r < n_; ++r)
            for (int h = 0; h < n_; ++h)
                for (int k = 0; k < n_; ++k) {
                    // C_{l rbar h B| k}
                    cplx acc = Wp_at(l, h, r, k);
                    for (int a = 0; a < n_; ++a)
                        acc -= b.cN(a, k) * jet(make_mi({}, {}, {l, h, a}, {r}));
                    for (int m = 0; m < n_; ++m) {
                        acc -= b.BL(m, l, k) * C_at(m, r, h);
                        acc -= b.BL(m, h, k) * C_at(l, r, m);
                        acc -= std::conj(b.BLbar(m, r, k)) * C_at(l, m, h);
                    }
                    cd->C_B_h(l, r, h, k) = acc;

                    // C_{l rbar h B| kbar}, conjugate-frame convention
                    acc = Zbp_at(l, h, r, k);
                    for (int a = 0; a < n_; ++a)
                        acc -= std::conj(b.cN(a, k)) * jet(make_mi({}, {}, {l, h}, {r, a}));
                    for (int m = 0; m < n_; ++m) {
                        acc -= b.BLbar(m, l, k) * C_at(m, r, h);
                        acc -= b.BLbar(m, h, k) * C_at(l, r, m);
                        acc -= std::conj(b.BL(m, r, k)) * C_at(l, m, h);
                    }
                    cd->C_B_bar(l, r, h, k) = acc;

                    // C_{l rbar hbar B| k}
                    acc = Wb_at(l, r, h, k);
                    for (int a = 0; a < n_; ++a)
                        acc -= b.cN(a, k) * jet(make_mi({}, {}, {l, a}, {r, h}));
                    for (int m = 0; m < n_; ++m) {
                        acc -= b.BL(m, l, k) * Cb_at(m, r, h);
                        acc -= std::conj(b.BLbar(m, r, k)) * Cb_at(l, m, h);
                        acc -= std::conj(b.BLbar(m, h, k)) * Cb_at(l, r, m);
                    }
                    cd->C_B_hbar_arg(l, r, h, k) = acc;

                    // C_{l rbar h | k} from the Lemma 2.1 i closed form
                    acc = cplx(0.0);
                    for (int i = 0; i < n_; ++i) acc += dL(i, l, k, h) * b.g(i, r);
                    cd->C_cf_h(l, r, h, k) = acc;

                    // C_{l rbar h | kbar}
                    acc = Zbp_at(l, h, r, k);
                    for (int a = 0; a < n_; ++a)
                        acc -= std::conj(b.N(a, k)) * jet(make_mi({}, {}, {l, h}, {r, a}));
                    for (int m = 0; m < n_; ++m)
                        acc -= std::conj(b.L_cf(m, r, k)) * C_at(l, m, h);
                    cd->C_cf_hbar(l, r, h, k) = acc;
                }
    cov_ = std::move(cd);
}

const CovDerivs& SampleGeometry::cov() {
    if (!cov_) build_cov();
    return *cov_;
}

const CTensor4& SampleGeometry::dBL() {
    if (!dbl_) {
        dbl_ = std::make_unique<CTensor4>(n_);
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                for (int h = 0; h < n_; ++h) {
                    CVector v = spray_deriv({j, k, h}, {});
                    for (int i = 0; i < n_; ++i) (*dbl_)(i, j, k, h) = v[i];
                }
    }
    return *dbl_;
}

const CTensor4& SampleGeometry::dBLbar_p() {
    if (!dblbar_p_) {
        dblbar_p_ = std::make_unique<CTensor4>(n_);
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                for (int h = 0; h < n_; ++h) {
                    CVector v = spray_deriv({j, h}, {k});
                    for (int i = 0; i < n_; ++i) (*dblbar_p_)(i, j, k, h) = v[i];
                }
    }
    return *dblbar_p_;
}

const CTensor4& SampleGeometry::dBLbar_b() {
    if (!dblbar_b_) {
        dblbar_b_ = std::make_unique<CTensor4>(n_);
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                for (int h = 0; h < n_; ++h) {
                    CVector v = spray_deriv({j}, {k, h});
                    for (int i = 0; i < n_; ++i) (*dblbar_b_)(i, j, k, h) = v[i];
                }
    }
    return *dblbar_b_;
}

const CTensor4& SampleGeometry::dLcf_h() {
    if (!dlcf_h_) {
        dlcf_h_ = std::make_unique<CTensor4>(n_);
        for (int l = 0; l < n_; ++l)
            for (int k = 0; k < n_; ++k)
                for (int h = 0; h < n_; ++h) {
                    CVector v = cf_nonlinear_deriv({l, h}, {}, k);
                    for (int i = 0; i < n_; ++i) (*dlcf_h_)(i, l, k, h) = v[i];
                }
    }
    return *dlcf_h_;
}

const CTensor4& SampleGeometry::dLcf_hbar() {
    if (!dlcf_hbar_) {
        dlcf_hbar_ = std::make_unique<CTensor4>(n_);
        for (int l = 0; l < n_; ++l)
            for (int k = 0; k < n_; ++k)
                for (int h = 0; h < n_; ++h) {
                    CVector v = cf_nonlinear_deriv({l}, {h}, k);
                    for (int i = 0; i < n_; ++i) (*dlcf_hbar_)(i, l, k, h) = v[i];
                }
    }
    return *dlcf_hbar_;
}

const CTensor3& SampleGeometry::dNbar_cf() {
    if (!dnbar_cf_) {
        dnbar_cf_ = std::make_unique<CTensor3>(n_);
        for (int k = 0; k < n_; ++k)
            for (int h = 0; h < n_; ++h) {
                CVector v = cf_nonlinear_deriv({}, {h}, k);
                for (int i = 0; i < n_; ++i) (*dnbar_cf_)(i, k, h) = v[i];
            }
    }
    return *dnbar_cf_;
}

std::pair<HermitianMatrix, HermitianMatrix> fundamental(const MetricSpec& spec,
                                                        const TangentSample& sample) {
    SampleGeometry geo(spec, sample);
    const ConnectionBundle& b = geo.bundle();
    return {b.g, b.g_inv};
}

ConnectionBundle compute_bundle(const MetricSpec& spec, const TangentSample& sample) {
    SampleGeometry geo(spec, sample);
    return geo.bundle();
}

} // namespace finsler
