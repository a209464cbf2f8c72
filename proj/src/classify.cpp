#include "classify.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <thread>

namespace finsler {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Borderline: return "borderline";
        case Verdict::Fails: return "fails";
    }
    return "?";
}

Verdict verdict_for(double aggregate, double tolerance) {
    if (aggregate < tolerance) return Verdict::Holds;
    if (aggregate > 10.0 * tolerance) return Verdict::Fails;
    return Verdict::Borderline;
}

Verdict ClassificationReport::lattice_verdict(const std::string& cls) const {
    for (const auto& [name, v] : lattice)
        if (name == cls) return v;
    throw Error(ErrorKind::BadArgument, "unknown lattice class " + cls);
}

const PredicateResidual* ClassificationReport::find(const std::string& id) const {
    for (const auto& p : predicates)
        if (p.id == id) return &p;
    return nullptr;
}

bool ClassificationReport::any_inconsistency() const {
    for (const auto& c : crosschecks)
        if (!c.consistent) return true;
    return false;
}

int worker_count(int jobs) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("FINSLER_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return std::min(hw, std::max(1, jobs));
}

namespace {

template <class F>
void parallel_for(int count, F&& fn) {
    int workers = worker_count(count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

double scaled(double dev, double scale) { return dev / (1.0 + scale); }

double zero_residual(const CTensor3& x) { return scaled(max_abs(x), max_abs(x)); }
double zero_residual(const CTensor4& x) { return scaled(max_abs(x), max_abs(x)); }

template <class T>
double equality_residual(const T& lhs, const T& rhs) {
    double dev = 0.0;
    for (std::size_t k = 0; k < lhs.a.size(); ++k) dev = std::max(dev, std::abs(lhs.a[k] - rhs.a[k]));
    return scaled(dev, std::max(max_abs(lhs), max_abs(rhs)));
}

// ---- (alpha,beta) auxiliary data -------------------------------------------

struct ABData {
    CMatrix a, a_inv;
    CTensor3 da;    // d a_{i jbar} / d z^l     (i, j, l)
    CTensor3 dabar; // d a_{i jbar} / d zbar^l  (i, j, l)
    CVector b;
    CMatrix db;    // d b_i / d z^j
    CMatrix dbbar; // d b_i / d zbar^j
    cplx beta;
    double alpha2 = 0.0, alpha = 0.0, babs = 0.0, bnorm2 = 0.0;
    CVector l_low; // l_i = a_{i jbar} etabar^j
    CVector b_up;  // b^i = a^{jbar i} b_jbar

    cplx db_conj(int r, int j) const { return std::conj(dbbar(r, j)); } // d b_rbar / d z^j

    // d bbar^r / d z^j = conj(d b^r / d zbar^j)
    cplx dbup_bar(int r, int j) const {
        cplx acc(0.0);
        const int n = a.n;
        for (int m = 0; m < n; ++m) {
            cplx dainv(0.0); // d a^{mbar r} / d zbar^j
            for (int s = 0; s < n; ++s)
                for (int t = 0; t < n; ++t) dainv -= a_inv(m, s) * dabar(s, t, j) * a_inv(t, r);
            acc += dainv * std::conj(b[m]);
            acc += a_inv(m, r) * std::conj(db(m, j));
        }
        return std::conj(acc);
    }
};

ABData build_ab(const MetricSpec& spec, const TangentSample& s) {
    const int n = spec.n;
    ABData d;
    d.a = CMatrix(n);
    d.da = CTensor3(n);
    d.dabar = CTensor3(n);
    d.b = CVector(n);
    d.db = CMatrix(n);
    d.dbbar = CMatrix(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            d.a(i, j) = eval_value(spec.a[i][j], s.z, s.eta);
            for (int l = 0; l < n; ++l) {
                d.da(i, j, l) = derive_one(spec.a[i][j], s, MultiIndex().d_z(l));
                d.dabar(i, j, l) = derive_one(spec.a[i][j], s, MultiIndex().d_zbar(l));
            }
        }
    d.a_inv = invert_hermitian(d.a);
    for (int i = 0; i < n; ++i) {
        d.b[i] = eval_value(spec.b[i], s.z, s.eta);
        for (int j = 0; j < n; ++j) {
            d.db(i, j) = derive_one(spec.b[i], s, MultiIndex().d_z(j));
            d.dbbar(i, j) = derive_one(spec.b[i], s, MultiIndex().d_zbar(j));
        }
    }
    cplx alpha2(0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) alpha2 += d.a(i, j) * s.eta[i] * std::conj(s.eta[j]);
    d.alpha2 = alpha2.real();
    d.alpha = std::sqrt(std::max(0.0, d.alpha2));
    d.beta = cplx(0.0);
    for (int i = 0; i < n; ++i) d.beta += d.b[i] * s.eta[i];
    d.babs = std::abs(d.beta);
    d.l_low = CVector(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d.l_low[i] += d.a(i, j) * std::conj(s.eta[j]);
    d.b_up = CVector(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d.b_up[i] += d.a_inv(j, i) * std::conj(d.b[j]);
    cplx bn(0.0);
    for (int i = 0; i < n; ++i) bn += d.b[i] * std::conj(d.b_up[i]);
    // ||b||^2 = a^{jbar i} b_i b_jbar = b_i conj(b^i)
    d.bnorm2 = bn.real();
    return d;
}

// Theorem 4.2 / Proposition 4.3 scalar:
// (betabar l_rbar d(bbar^r)/dz^j + beta d(b_rbar)/dz^j etabar^r) eta^j.
cplx gb_scalar(const ABData& ab, const TangentSample& s) {
    const int n = ab.a.n;
    cplx acc(0.0);
    for (int j = 0; j < n; ++j) {
        cplx inner(0.0);
        for (int r = 0; r < n; ++r) {
            inner += std::conj(ab.beta) * std::conj(ab.l_low[r]) * ab.dbup_bar(r, j);
            inner += ab.beta * ab.db_conj(r, j) * std::conj(s.eta[r]);
        }
        acc += inner * s.eta[j];
    }
    return acc;
}

// Proposition 4.4's uncontracted form, max over the free index j.
double gb_scalar_uncontracted(const ABData& ab, const TangentSample& s, double* scale_out) {
    const int n = ab.a.n;
    double dev = 0.0, scale = 0.0;
    for (int j = 0; j < n; ++j) {
        cplx inner(0.0);
        for (int r = 0; r < n; ++r) {
            cplx t1 = std::conj(ab.beta) * std::conj(ab.l_low[r]) * ab.dbup_bar(r, j);
            cplx t2 = ab.beta * ab.db_conj(r, j) * std::conj(s.eta[r]);
            inner += t1 + t2;
            scale = std::max({scale, std::abs(t1), std::abs(t2)});
        }
        dev = std::max(dev, std::abs(inner));
    }
    *scale_out = scale;
    return dev;
}

// Proposition 4.2's weakly-Kaehler scalar for Randers metrics (the (4.3)
// display); throws DegenerateDelta when |delta| < 1e-10.
double randers_wk_residual(const ABData& ab, const TangentSample& s, double L) {
    const int n = ab.a.n;
    if (ab.babs < 1e-12) throw domain_error("|beta| = 0 in Randers weak-Kaehler scalar");
    const double F = ab.alpha + ab.babs;
    const double gamma = L + ab.alpha2 * (ab.bnorm2 - 1.0);
    const double delta =
        (ab.alpha2 * ab.bnorm2 - ab.babs * ab.babs) / (2.0 * gamma) - n * ab.babs / (2.0 * F);
    if (std::abs(delta) < 1e-10)
        throw Error(ErrorKind::DegenerateDelta, "delta below 1e-10 in Proposition 4.2 scalar");

    // C_k = delta (l_k / alpha^2 - betabar b_k / |beta|^2)
    CVector Ck(n);
    for (int k = 0; k < n; ++k)
        Ck[k] = delta * (ab.l_low[k] / ab.alpha2 -
                         std::conj(ab.beta) * ab.b[k] / (ab.babs * ab.babs));

    // bracket contracted with eta^r
    cplx bracket(0.0);
    for (int r = 0; r < n; ++r) {
        cplx t(0.0);
        for (int m = 0; m < n; ++m)
            t += ab.beta * ((ab.alpha * ab.bnorm2 + ab.babs) / ab.babs) * ab.db_conj(m, r) *
                 std::conj(s.eta[m]);
        for (int l = 0; l < n; ++l) {
            cplx inner = ab.db(r, l);
            for (int m = 0; m < n; ++m) inner -= std::conj(ab.b_up[m]) * ab.da(l, m, r);
            t += std::conj(ab.beta) * inner * s.eta[l];
        }
        for (int m = 0; m < n; ++m)
            t -= ab.alpha * ab.babs * std::conj(ab.b_up[m]) * ab.db_conj(m, r);
        bracket += t * s.eta[r];
    }

    double dev = 0.0, scale = 0.0;
    for (int k = 0; k < n; ++k) {
        cplx term1 = (ab.alpha2 * ab.babs / (gamma * delta)) * bracket * Ck[k];

        cplx term2(0.0);
        for (int l = 0; l < n; ++l) {
            cplx Fkl = ab.db(l, k) - ab.db(k, l);
            cplx part = ab.alpha * std::conj(ab.beta) * Fkl;
            for (int r = 0; r < n; ++r)
                part += ab.alpha * ab.b[l] * ab.db_conj(r, k) * std::conj(s.eta[r]);
            for (int r = 0; r < n; ++r)
                for (int jj = 0; jj < n; ++jj) {
                    cplx gamma_rjk(0.0); // Gamma^{rbar}_{jbar k}
                    for (int kk = 0; kk < n; ++kk)
                        gamma_rjk +=
                            0.5 * ab.a_inv(r, kk) * (ab.da(kk, jj, k) - ab.da(k, jj, kk));
                    part += 2.0 * ab.babs * ab.a(l, r) * gamma_rjk * std::conj(s.eta[jj]);
                }
            term2 -= part * s.eta[l];
        }

        cplx term3(0.0);
        for (int m = 0; m < n; ++m)
            for (int r = 0; r < n; ++r)
                term3 += ab.alpha * ab.b[k] * ab.db_conj(m, r) * std::conj(s.eta[m]) * s.eta[r];

        cplx total = term1 + term2 + term3;
        dev = std::max(dev, std::abs(total));
        scale = std::max({scale, std::abs(term1), std::abs(term2), std::abs(term3)});
    }
    return scaled(dev, scale);
}

// ---- per-sample evaluation --------------------------------------------------

struct SampleData {
    bool ok = false;
    std::string error;
    std::vector<std::pair<std::string, double>> residuals;
    // feed for the z-only dispersion predicates
    CTensor3 BL, cL, L_cf, g_B, cLcg;
};

void push(SampleData& out, const std::string& id, double value) {
    out.residuals.emplace_back(id, value);
}

SampleData evaluate_sample(const MetricSpec& spec, const MetricSpec* alpha_spec,
                           const TangentSample& s) {
    SampleData out;
    const int n = spec.n;
    try {
        SampleGeometry geo(spec, s);
        const ConnectionBundle& b = geo.bundle();
        const CovDerivs& cd = geo.cov();
        const auto& eta = s.eta;

        // Kaehler family
        {
            CMatrix Teta(n);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    cplx acc(0.0);
                    for (int j = 0; j < n; ++j) acc += b.T(i, j, k) * eta[j];
                    Teta(i, k) = acc;
                }
            double scale = max_abs(b.L_cf);
            push(out, "kahler.strong", scaled(max_abs(b.T), scale));
            push(out, "kahler", scaled(max_abs(Teta), scale));
            double wk = 0.0;
            for (int k = 0; k < n; ++k) {
                cplx acc(0.0);
                for (int i = 0; i < n; ++i)
                    for (int l = 0; l < n; ++l) acc += b.g(i, l) * Teta(i, k) * std::conj(eta[l]);
                wk = std::max(wk, std::abs(acc));
            }
            push(out, "kahler.weak", scaled(wk, scale * max_abs(b.g)));
        }

        push(out, "landsberg", equality_residual(b.BL, b.cL));
        push(out, "gen_berwald", scaled(max_abs(b.dGbar), max_abs(b.cN)));
        push(out, "thm3.6.iii", scaled(max_abs(b.BLbar), max_abs(b.BL)));

        // Theorem 3.1 ii: C_{l rbar h B|0} = 0
        {
            CTensor3 c0(n);
            for (int l = 0; l < n; ++l)
                for (int r = 0; r < n; ++r)
                    for (int h = 0; h < n; ++h) {
                        cplx acc(0.0);
                        for (int k = 0; k < n; ++k) acc += cd.C_B_h(l, r, h, k) * eta[k];
                        c0(l, r, h) = acc;
                    }
            push(out, "thm3.1.ii", scaled(max_abs(c0), max_abs(cd.C_B_h)));
        }

        // Theorem 3.1 iii
        {
            const CTensor4& dbl = geo.dBL();
            CTensor4 lhs(n), rhs(n);
            for (int j = 0; j < n; ++j)
                for (int r = 0; r < n; ++r)
                    for (int h = 0; h < n; ++h)
                        for (int k = 0; k < n; ++k) {
                            cplx acc(0.0);
                            for (int i = 0; i < n; ++i) acc += 2.0 * dbl(i, j, k, h) * b.g(i, r);
                            for (int m = 0; m < n; ++m) {
                                acc -= std::conj(b.BLbar(m, r, k)) * b.C(j, m, h);
                                acc -= std::conj(b.BLbar(m, r, j)) * b.C(k, m, h);
                            }
                            lhs(j, r, h, k) = acc;
                            rhs(j, r, h, k) = cd.C_B_h(j, r, h, k) + cd.C_B_h(k, r, h, j);
                        }
            push(out, "thm3.1.iii", equality_residual(lhs, rhs));
        }

        // Theorem 3.1 iv and Theorem 3.2 iv
        {
            CTensor3 rhs31(n), rhs32(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        cplx acc31(0.0), acc32(0.0);
                        for (int m = 0; m < n; ++m) {
                            acc31 += (std::conj(b.cLbar(m, j, k)) - std::conj(b.BLbar(m, j, k))) *
                                     b.g(i, m);
                            acc32 += std::conj(b.cLbar(m, j, k)) * b.g(i, m);
                        }
                        rhs31(i, j, k) = acc31;
                        rhs32(i, j, k) = acc32;
                    }
            push(out, "thm3.1.iv", equality_residual(cd.g_B, rhs31));
            push(out, "thm3.2.iv.a", equality_residual(cd.g_B, rhs32));
        }

        // Theorem 3.2 iii second member and v
        {
            CMatrix c00(n);
            for (int j = 0; j < n; ++j)
                for (int h = 0; h < n; ++h) {
                    cplx acc(0.0);
                    for (int r = 0; r < n; ++r)
                        for (int k = 0; k < n; ++k)
                            acc += cd.C_B_bar(j, r, h, k) * std::conj(eta[r]) * std::conj(eta[k]);
                    c00(j, h) = acc;
                }
            push(out, "thm3.2.iii.b", scaled(max_abs(c00), max_abs(cd.C_B_bar)));

            CTensor4 sym_h(n), sym_bar(n);
            for (int a = 0; a < n; ++a)
                for (int r = 0; r < n; ++r)
                    for (int h = 0; h < n; ++h)
                        for (int k = 0; k < n; ++k) {
                            sym_h(a, r, h, k) = cd.C_B_h(a, r, h, k) + cd.C_B_h(k, r, h, a);
                            sym_bar(a, r, h, k) = cd.C_B_bar(r, a, h, k) + cd.C_B_bar(r, k, h, a);
                        }
            push(out, "thm3.2.v.a", scaled(max_abs(sym_h), max_abs(cd.C_B_h)));
            push(out, "thm3.2.v.b", scaled(max_abs(sym_bar), max_abs(cd.C_B_bar)));
        }

        // Strong Landsberg definition (second half) and Theorem 3.3 iii/iv
        {
            CTensor3 c0b(n);
            for (int j = 0; j < n; ++j)
                for (int r = 0; r < n; ++r)
                    for (int h = 0; h < n; ++h) {
                        cplx acc(0.0);
                        for (int k = 0; k < n; ++k)
                            acc += cd.C_B_bar(j, r, h, k) * std::conj(eta[k]);
                        c0b(j, r, h) = acc;
                    }
            push(out, "strong_landsberg.h0bar", scaled(max_abs(c0b), max_abs(cd.C_B_bar)));
            push(out, "thm3.3.iii.c", zero_residual(cd.C_B_h));
            push(out, "thm3.3.iv", zero_residual(cd.C_B_bar));
        }

        // Theorem 3.4 ii / iii / v
        push(out, "thm3.4.ii", equality_residual(b.BLbar, b.cLbar));
        push(out, "thm3.4.iii.eq", equality_residual(b.BL, b.L_cf));
        push(out, "thm3.4.v.gb", zero_residual(cd.g_B));

        // Lemma 3.1 members
        push(out, "lemma3.1.h", zero_residual(cd.C_cf_h));
        push(out, "lemma3.1.hbar", zero_residual(cd.C_cf_hbar));

        // Dispersion feeds
        out.BL = b.BL;
        out.cL = b.cL;
        out.L_cf = b.L_cf;
        out.g_B = cd.g_B;
        out.cLcg = CTensor3(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    cplx acc(0.0);
                    for (int m = 0; m < n; ++m)
                        acc += std::conj(b.cLbar(m, j, k)) * b.g(i, m);
                    out.cLcg(i, j, k) = acc;
                }

        // (alpha,beta) scalars
        if (spec.kind == MetricKind::Randers || spec.kind == MetricKind::Kropina) {
            ABData ab = build_ab(spec, s);
            cplx scalar = gb_scalar(ab, s);
            double scale;
            double unc = gb_scalar_uncontracted(ab, s, &scale);
            if (spec.kind == MetricKind::Randers) {
                push(out, "randers.thm4.2", scaled(std::abs(scalar), scale));
                try {
                    push(out, "randers.prop4.2",
                         randers_wk_residual(ab, s, geo.Lval().real()));
                } catch (const Error& e) {
                    out.error = e.what(); // surfaced as a warning, other residuals stand
                }
            } else {
                push(out, "kropina.prop4.3", scaled(std::abs(scalar), scale));
                push(out, "kropina.prop4.4", scaled(unc, scale));
                if (alpha_spec) {
                    SampleGeometry ageo(*alpha_spec, s);
                    const ConnectionBundle& abnd = ageo.bundle();
                    CVector dG(n);
                    CMatrix dN(n);
                    for (int i = 0; i < n; ++i) {
                        dG[i] = b.G[i] - abnd.G[i];
                        for (int j = 0; j < n; ++j) dN(i, j) = b.N(i, j) - abnd.N(i, j);
                    }
                    push(out, "kropina.g_ag",
                         scaled(max_abs(dG), std::max(max_abs(b.G), max_abs(abnd.G))));
                    push(out, "kropina.n_an",
                         scaled(max_abs(dN), std::max(max_abs(b.N), max_abs(abnd.N))));
                    CMatrix aTeta(n);
                    for (int i = 0; i < n; ++i)
                        for (int k = 0; k < n; ++k) {
                            cplx acc(0.0);
                            for (int j = 0; j < n; ++j) acc += abnd.T(i, j, k) * eta[j];
                            aTeta(i, k) = acc;
                        }
                    push(out, "alpha.kahler", scaled(max_abs(aTeta), max_abs(abnd.L_cf)));
                }
            }
        }

        out.ok = true;
    } catch (const Error& e) {
        out.ok = false;
        out.error = e.what();
    }
    return out;
}

// ---- dispersion -------------------------------------------------------------

double group_dispersion(const std::vector<const CTensor3*>& tensors) {
    if (tensors.size() < 2) return 0.0;
    double dev = 0.0, scale = 0.0;
    const std::size_t entries = tensors[0]->a.size();
    for (const CTensor3* t : tensors) scale = std::max(scale, max_abs(*t));
    for (std::size_t e = 0; e < entries; ++e)
        for (std::size_t p = 0; p < tensors.size(); ++p)
            for (std::size_t q = p + 1; q < tensors.size(); ++q)
                dev = std::max(dev, std::abs(tensors[p]->a[e] - tensors[q]->a[e]));
    return scaled(dev, scale);
}

// ---- theorem groups ----------------------------------------------------------

struct Group {
    std::string id;
    bool implication = false; // members[0] => members[1] instead of equivalence
    std::vector<std::vector<std::string>> members;
};

std::vector<Group> theorem_groups(MetricKind kind) {
    std::vector<Group> gs = {
        {"thm3.1", false, {{"landsberg"}, {"thm3.1.ii"}, {"thm3.1.iii"}, {"thm3.1.iv"}}},
        {"thm3.2",
         false,
         {{"landsberg", "gen_berwald"},
          {"landsberg", "rund.cl_disp"},
          {"thm3.1.ii", "thm3.2.iii.b"},
          {"thm3.2.iv.a", "gen_berwald"},
          {"thm3.2.v.a", "thm3.2.v.b"}}},
        {"thm3.3",
         false,
         {{"thm3.1.ii", "strong_landsberg.h0bar"},
          {"thm3.3.ii.disp", "gen_berwald"},
          {"thm3.3.iii.c", "gen_berwald"},
          {"thm3.3.iv"}}},
        {"thm3.4",
         false,
         {{"kahler", "gen_berwald"},
          {"thm3.4.ii"},
          {"thm3.4.iii.eq", "cf.lcf_disp"},
          {"kahler", "cf.lcf_disp"},
          {"thm3.4.v.gb", "gen_berwald"}}},
        {"thm3.6", false, {{"gb.bl_disp"}, {"gen_berwald"}, {"thm3.6.iii"}}},
        {"lemma3.1", false, {{"lemma3.1.h"}, {"lemma3.1.hbar"}}},
        {"thm3.5", false, {{"kahler", "cf.lcf_disp"}, {"kahler", "lemma3.1.h"}}},
        {"remark3.1",
         false,
         {{"thm3.1.ii", "strong_landsberg.h0bar"}, {"remark3.1.disp", "gen_berwald"}}},
    };
    if (kind == MetricKind::Randers) {
        gs.push_back({"thm4.2", false, {{"randers.thm4.2"}, {"gen_berwald"}}});
        gs.push_back({"thm4.3", false, {{"gen_berwald", "kahler.weak"}, {"kahler", "cf.lcf_disp"}}});
        gs.push_back({"prop4.2", false, {{"randers.prop4.2"}, {"kahler.weak"}}});
    }
    if (kind == MetricKind::Kropina) {
        gs.push_back({"prop4.3", false, {{"kropina.prop4.3"}, {"kropina.g_ag"}}});
        gs.push_back({"prop4.4", false, {{"kropina.prop4.4"}, {"kropina.n_an"}}});
        gs.push_back({"thm4.4", true, {{"kropina.prop4.3"}, {"gen_berwald"}}});
        gs.push_back({"thm4.5", true, {{"kropina.prop4.4", "alpha.kahler"}, {"kahler", "cf.lcf_disp"}}});
    }
    return gs;
}

} // namespace

ClassificationReport classify_on_samples(const MetricSpec& spec, const SamplePlan& plan,
                                         const std::vector<TangentSample>& samples,
                                         double tolerance) {
    if (tolerance <= 0.0) throw Error(ErrorKind::BadArgument, "tolerance must be positive");
    ClassificationReport report;
    report.metric = spec.name;
    report.plan = plan;
    report.tolerance = tolerance;

    std::optional<MetricSpec> alpha_spec;
    if (spec.kind == MetricKind::Kropina) {
        MetricSpec a;
        a.name = spec.name + "_alpha";
        a.n = spec.n;
        a.kind = MetricKind::Hermitian;
        a.a = spec.a;
        a.base_point = spec.base_point;
        alpha_spec = finalized(std::move(a));
    }

    const int count = static_cast<int>(samples.size());
    std::vector<SampleData> data(static_cast<std::size_t>(count));
    parallel_for(count, [&](int i) {
        data[static_cast<std::size_t>(i)] =
            evaluate_sample(spec, alpha_spec ? &*alpha_spec : nullptr, samples[static_cast<std::size_t>(i)]);
    });

    // Registration order fixes the report layout.
    std::vector<std::string> order = {"kahler.strong",
                                      "kahler",
                                      "kahler.weak",
                                      "landsberg",
                                      "gen_berwald",
                                      "thm3.6.iii",
                                      "thm3.1.ii",
                                      "thm3.1.iii",
                                      "thm3.1.iv",
                                      "thm3.2.iii.b",
                                      "thm3.2.iv.a",
                                      "thm3.2.v.a",
                                      "thm3.2.v.b",
                                      "strong_landsberg.h0bar",
                                      "thm3.3.iii.c",
                                      "thm3.3.iv",
                                      "thm3.4.ii",
                                      "thm3.4.iii.eq",
                                      "thm3.4.v.gb",
                                      "lemma3.1.h",
                                      "lemma3.1.hbar"};
    if (spec.kind == MetricKind::Randers) {
        order.push_back("randers.thm4.2");
        order.push_back("randers.prop4.2");
    }
    if (spec.kind == MetricKind::Kropina) {
        order.insert(order.end(),
                     {"kropina.prop4.3", "kropina.prop4.4", "kropina.g_ag", "kropina.n_an",
                      "alpha.kahler"});
    }

    for (const std::string& id : order) {
        PredicateResidual pr;
        pr.id = id;
        pr.tolerance = tolerance;
        for (const SampleData& sd : data) {
            if (!sd.ok) continue;
            for (const auto& [pid, val] : sd.residuals)
                if (pid == id) pr.per_sample.push_back(val);
        }
        for (double v : pr.per_sample) pr.aggregate = std::max(pr.aggregate, v);
        pr.verdict = verdict_for(pr.aggregate, tolerance);
        report.predicates.push_back(std::move(pr));
    }

    // z-only dispersion predicates, one value per z-group
    struct Disp {
        std::string id;
        CTensor3 SampleData::* member;
    };
    const std::vector<Disp> disps = {{"gb.bl_disp", &SampleData::BL},
                                     {"rund.cl_disp", &SampleData::cL},
                                     {"cf.lcf_disp", &SampleData::L_cf},
                                     {"thm3.3.ii.disp", &SampleData::g_B},
                                     {"remark3.1.disp", &SampleData::cLcg}};
    for (const Disp& dsp : disps) {
        PredicateResidual pr;
        pr.id = dsp.id;
        pr.tolerance = tolerance;
        for (int zi = 0; zi < plan.z_count; ++zi) {
            std::vector<const CTensor3*> group;
            for (int ei = 0; ei < plan.eta_count; ++ei) {
                int idx = zi * plan.eta_count + ei;
                if (idx < count && data[static_cast<std::size_t>(idx)].ok)
                    group.push_back(&(data[static_cast<std::size_t>(idx)].*(dsp.member)));
            }
            pr.per_sample.push_back(group_dispersion(group));
        }
        for (double v : pr.per_sample) pr.aggregate = std::max(pr.aggregate, v);
        pr.verdict = verdict_for(pr.aggregate, tolerance);
        report.predicates.push_back(std::move(pr));
    }

    // warnings: per-sample errors and standing conventions
    int failed = 0;
    for (int i = 0; i < count; ++i) {
        const SampleData& sd = data[static_cast<std::size_t>(i)];
        if (!sd.error.empty()) {
            ++failed;
            if (failed <= 4)
                report.warnings.push_back("sample " + std::to_string(i) + ": " + sd.error);
        }
    }
    if (failed > 4)
        report.warnings.push_back(std::to_string(failed - 4) + " further samples reported errors");
    report.warnings.push_back(
        "B|kbar derivatives use the conjugate-frame convention for the barred horizontal direction");
    report.warnings.push_back(
        "'depends only on z' predicates are evaluated by finite-sample dispersion over eta");

    bool any_borderline = false;
    auto member_verdict = [&](const std::vector<std::string>& ids) {
        Verdict worst = Verdict::Holds;
        for (const std::string& id : ids) {
            const PredicateResidual* p = report.find(id);
            if (!p) return Verdict::Borderline; // predicate unavailable: treat as undecided
            if (p->verdict == Verdict::Fails) worst = Verdict::Fails;
            else if (p->verdict == Verdict::Borderline && worst == Verdict::Holds)
                worst = Verdict::Borderline;
        }
        return worst;
    };

    for (const Group& g : theorem_groups(spec.kind)) {
        std::vector<Verdict> vs;
        for (const auto& m : g.members) vs.push_back(member_verdict(m));
        bool consistent = true;
        if (g.implication) {
            if (vs[0] == Verdict::Holds && vs[1] == Verdict::Fails) consistent = false;
        } else {
            bool holds = false, fails = false;
            for (Verdict v : vs) {
                holds = holds || v == Verdict::Holds;
                fails = fails || v == Verdict::Fails;
            }
            if (holds && fails) consistent = false;
        }
        for (Verdict v : vs) any_borderline = any_borderline || v == Verdict::Borderline;
        report.crosschecks.push_back({g.id, consistent});
    }

    // lattice verdicts
    auto worst2 = [](Verdict a, Verdict b) {
        if (a == Verdict::Fails || b == Verdict::Fails) return Verdict::Fails;
        if (a == Verdict::Borderline || b == Verdict::Borderline) return Verdict::Borderline;
        return Verdict::Holds;
    };
    Verdict kahler = member_verdict({"kahler"});
    Verdict weakly = member_verdict({"kahler.weak"});
    Verdict landsberg = member_verdict({"landsberg"});
    Verdict gen_b = member_verdict({"gen_berwald"});
    Verdict g_lands = worst2(landsberg, gen_b);
    Verdict strong = member_verdict({"thm3.1.ii", "strong_landsberg.h0bar"});
    Verdict complex_b = member_verdict({"kahler", "cf.lcf_disp"});
    report.lattice = {{"kahler", kahler},
                      {"weakly_kahler", weakly},
                      {"landsberg", landsberg},
                      {"generalized_berwald", gen_b},
                      {"g_landsberg", g_lands},
                      {"strong_landsberg", strong},
                      {"complex_berwald", complex_b}};

    // Figure 1 inclusions on the lattice verdicts
    struct Incl {
        const char* id;
        Verdict from, to;
    };
    const std::vector<Incl> inclusions = {
        {"figure1.complex_berwald_in_strong_landsberg", complex_b, strong},
        {"figure1.strong_landsberg_in_g_landsberg", strong, g_lands},
        {"figure1.g_landsberg_in_landsberg", g_lands, landsberg},
        {"figure1.g_landsberg_in_generalized_berwald", g_lands, gen_b},
        {"figure1.kahler_in_landsberg", kahler, landsberg},
        {"figure1.kahler_in_weakly_kahler", kahler, weakly},
    };
    for (const Incl& inc : inclusions) {
        bool violated = inc.from == Verdict::Holds && inc.to == Verdict::Fails;
        if (violated && any_borderline) {
            report.warnings.push_back(std::string(inc.id) +
                                      " violated but a borderline verdict is present; downgraded");
            report.crosschecks.push_back({inc.id, true});
        } else {
            report.crosschecks.push_back({inc.id, !violated});
        }
    }

    return report;
}

ClassificationReport classify(const MetricSpec& spec, const SamplePlan& plan, double tolerance) {
    return classify_on_samples(spec, plan, draw_samples(spec, plan), tolerance);
}

cplx alphabeta_gb_scalar(const MetricSpec& spec, const TangentSample& sample) {
    if (spec.kind != MetricKind::Randers && spec.kind != MetricKind::Kropina)
        throw Error(ErrorKind::Kind, "generalized-Berwald scalar requires a Randers or Kropina metric");
    return gb_scalar(build_ab(spec, sample), sample);
}

// ---- serialization ----------------------------------------------------------

std::string report_to_json(const ClassificationReport& r) {
    nlohmann::ordered_json j;
    j["metric"] = r.metric;
    j["plan"] = {{"seed", r.plan.seed},
                 {"z_count", r.plan.z_count},
                 {"eta_count", r.plan.eta_count},
                 {"radius", r.plan.radius}};
    j["tolerance"] = r.tolerance;
    nlohmann::ordered_json preds = nlohmann::ordered_json::array();
    for (const auto& p : r.predicates)
        preds.push_back({{"id", p.id}, {"aggregate", p.aggregate}, {"verdict", verdict_name(p.verdict)}});
    j["predicates"] = std::move(preds);
    nlohmann::ordered_json lat;
    for (const auto& [cls, v] : r.lattice) lat[cls] = verdict_name(v);
    j["lattice"] = std::move(lat);
    nlohmann::ordered_json cc = nlohmann::ordered_json::array();
    for (const auto& c : r.crosschecks)
        cc.push_back({{"theorem", c.theorem}, {"consistent", c.consistent}});
    j["crosschecks"] = std::move(cc);
    j["warnings"] = r.warnings;
    return j.dump(2) + "\n";
}

std::string report_to_csv(const ClassificationReport& r) {
    std::string out = "predicate_id,sample_index,residual\n";
    char buf[64];
    for (const auto& p : r.predicates)
        for (std::size_t i = 0; i < p.per_sample.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", p.per_sample[i]);
            out += p.id + "," + std::to_string(i) + "," + buf + "\n";
        }
    return out;
}

// ---- check suites -------------------------------------------------------------

std::vector<std::string> check_suite_ids() { return {"homogeneity", "eq1.3", "lemma2.1", "lemma2.2"}; }

namespace {

struct SuiteAccumulator {
    std::vector<CheckRow> rows;

    void feed(const std::string& id, double value) {
        for (auto& r : rows)
            if (r.id == id) {
                r.residual = std::max(r.residual, value);
                return;
            }
        rows.push_back({id, value});
    }
};

void suite_homogeneity(SampleGeometry& geo, Rng& rng, SuiteAccumulator& acc) {
    const int n = geo.dim();
    const ConnectionBundle& b = geo.bundle();
    const TangentSample& s = geo.sample();
    const double L = geo.Lval().real();

    cplx lambda(rng.uniform(0.3, 1.7), rng.uniform(-1.0, 1.0));
    TangentSample scaled_s = s;
    for (int k = 0; k < n; ++k) scaled_s.eta[k] *= lambda;
    double Ls = eval_value(geo.spec().L, scaled_s.z, scaled_s.eta).real();
    acc.feed("L_scaling", std::abs(Ls - std::norm(lambda) * L) / (1.0 + std::abs(Ls)));

    cplx gee(0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gee += b.g(i, j) * s.eta[i] * std::conj(s.eta[j]);
    acc.feed("g_eta_etabar_equals_L", std::abs(gee - geo.Lval()) / (1.0 + std::abs(L)));

    double cmax = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx c(0.0);
            for (int k = 0; k < n; ++k) c += b.C(i, j, k) * s.eta[k];
            cmax = std::max(cmax, std::abs(c));
        }
    acc.feed("C_eta_zero", scaled(cmax, max_abs(b.C)));

    cplx dle(0.0);
    for (int k = 0; k < n; ++k) dle += geo.jet(MultiIndex().d_eta(k)) * s.eta[k];
    acc.feed("dL_deta_eta_equals_L", std::abs(dle - geo.Lval()) / (1.0 + std::abs(L)));
}

void suite_eq13(SampleGeometry& geo, SuiteAccumulator& acc) {
    const int n = geo.dim();
    const ConnectionBundle& b = geo.bundle();
    const TangentSample& s = geo.sample();

    acc.feed("L_routes_agree", equality_residual(b.L_cf, b.L_cf_dot));

    double comp = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                cplx acc_v = geo.del_g(i, j, k);
                scale = std::max(scale, std::abs(acc_v));
                for (int l = 0; l < n; ++l) acc_v -= b.L_cf(l, i, k) * b.g(l, j);
                comp = std::max(comp, std::abs(acc_v));
            }
    acc.feed("metric_compat_h", scaled(comp, scale));

    // eta^i_{|k} = delta_k eta^i + L^i_{jk} eta^j = -N^i_k + L^i_{jk} eta^j
    double hmax = 0.0, vmax = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            cplx h = -b.N(i, k);
            for (int j = 0; j < n; ++j) h += b.L_cf(i, j, k) * s.eta[j];
            hmax = std::max(hmax, std::abs(h));
            cplx v = (i == k) ? cplx(1.0) : cplx(0.0);
            for (int j = 0; j < n; ++j) v += b.C_cf(i, j, k) * s.eta[j];
            v -= (i == k) ? cplx(1.0) : cplx(0.0);
            // v-covariant derivative of eta minus delta^i_k
            vmax = std::max(vmax, std::abs(v));
        }
    acc.feed("eta_h_cov_zero", scaled(hmax, max_abs(b.N)));
    acc.feed("eta_v_cov_delta", scaled(vmax, 1.0));

    double nmax = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx acc_v = -b.N(i, j);
            for (int l = 0; l < n; ++l) acc_v += b.L_cf(i, l, j) * s.eta[l];
            nmax = std::max(nmax, std::abs(acc_v));
        }
    acc.feed("N_equals_L_eta", scaled(nmax, max_abs(b.N)));

    // spray identities: 2G = N eta = cN eta = BL eta eta
    double smax = 0.0;
    for (int i = 0; i < n; ++i) {
        cplx twoG = 2.0 * b.G[i], ne(0.0), cne(0.0), blee(0.0);
        for (int j = 0; j < n; ++j) {
            ne += b.N(i, j) * s.eta[j];
            cne += b.cN(i, j) * s.eta[j];
            for (int k = 0; k < n; ++k) blee += b.BL(i, j, k) * s.eta[j] * s.eta[k];
        }
        smax = std::max({smax, std::abs(twoG - ne), std::abs(twoG - cne), std::abs(twoG - blee)});
    }
    acc.feed("spray_contractions", scaled(smax, 1.0 + 2.0 * max_abs(b.G)));

    double blb = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx acc_v(0.0);
            for (int k = 0; k < n; ++k) acc_v += b.BLbar(i, j, k) * std::conj(s.eta[k]);
            blb = std::max(blb, std::abs(acc_v));
        }
    acc.feed("BLbar_etabar_zero", scaled(blb, max_abs(b.BLbar)));
}

void suite_lemma21(SampleGeometry& geo, SuiteAccumulator& acc) {
    const int n = geo.dim();
    const ConnectionBundle& b = geo.bundle();
    const CovDerivs& cd = geo.cov();
    const CTensor4& dlh = geo.dLcf_hbar();
    const CTensor3& dnb = geo.dNbar_cf();

    // i) closed form (stored in cov().C_cf_h) against the direct covariant rule
    CTensor4 direct(n);
    for (int l = 0; l < n; ++l)
        for (int r = 0; r < n; ++r)
            for (int h = 0; h < n; ++h)
                for (int k = 0; k < n; ++k) {
                    cplx v = geo.Wp_at(l, h, r, k);
                    for (int a = 0; a < n; ++a)
                        v -= b.N(a, k) * geo.jet(MultiIndex().d_eta(l).d_eta(h).d_eta(a).d_etabar(r));
                    for (int m = 0; m < n; ++m) {
                        v -= b.L_cf(m, l, k) * b.C(m, r, h);
                        v -= b.L_cf(m, h, k) * b.C(l, r, m);
                    }
                    direct(l, r, h, k) = v;
                }
    acc.feed("lemma2.1.i", equality_residual(direct, cd.C_cf_h));

    // ii) direct rule for C_{l rbar hbar | k} against the closed form
    CTensor4 lhs(n), rhs(n);
    for (int l = 0; l < n; ++l)
        for (int r = 0; r < n; ++r)
            for (int h = 0; h < n; ++h)
                for (int k = 0; k < n; ++k) {
                    cplx v = geo.Wb_at(l, r, h, k);
                    for (int a = 0; a < n; ++a)
                        v -= b.N(a, k) *
                             geo.jet(MultiIndex().d_eta(l).d_eta(a).d_etabar(r).d_etabar(h));
                    for (int m = 0; m < n; ++m) v -= b.L_cf(m, l, k) * b.Cbar(m, r, h);
                    lhs(l, r, h, k) = v;
                    cplx w(0.0);
                    for (int i = 0; i < n; ++i) w += dlh(i, l, k, h) * b.g(i, r);
                    for (int i = 0; i < n; ++i) w += dnb(i, k, h) * b.C(i, r, l);
                    rhs(l, r, h, k) = w;
                }
    acc.feed("lemma2.1.ii", equality_residual(lhs, rhs));
}

void suite_lemma22(SampleGeometry& geo, SuiteAccumulator& acc) {
    const int n = geo.dim();
    const ConnectionBundle& b = geo.bundle();
    const CovDerivs& cd = geo.cov();
    const TangentSample& s = geo.sample();
    const auto& eta = s.eta;

    // i) BL^i_{j kbar} etabar^k = 0
    double blb = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx acc_v(0.0);
            for (int k = 0; k < n; ++k) acc_v += b.BLbar(i, j, k) * std::conj(eta[k]);
            blb = std::max(blb, std::abs(acc_v));
        }
    acc.feed("lemma2.2.i", scaled(blb, max_abs(b.BLbar)));

    // ii)
    {
        CTensor3 lhs(n), rhs(n);
        for (int l = 0; l < n; ++l)
            for (int r = 0; r < n; ++r)
                for (int h = 0; h < n; ++h) {
                    cplx v(0.0);
                    for (int k = 0; k < n; ++k) v -= cd.C_B_h(l, r, h, k) * eta[k];
                    lhs(l, r, h) = v;
                    cplx w = cd.g_B(l, r, h) + cd.g_B(h, r, l);
                    for (int m = 0; m < n; ++m) {
                        w += std::conj(b.BLbar(m, r, h)) * b.g(l, m);
                        w += std::conj(b.BLbar(m, r, l)) * b.g(h, m);
                    }
                    rhs(l, r, h) = w;
                }
        acc.feed("lemma2.2.ii", equality_residual(lhs, rhs));
    }

    // iii) 2 (d.etabar_h G^i) g_{i rbar} = C_{0 rbar hbar B|0} = C_{0 rbar hbar |0}
    {
        CMatrix lhs(n), mid(n), cf(n);
        for (int r = 0; r < n; ++r)
            for (int h = 0; h < n; ++h) {
                cplx v(0.0);
                for (int i = 0; i < n; ++i) v += 2.0 * b.dGbar(i, h) * b.g(i, r);
                lhs(r, h) = v;
                cplx m(0.0), c(0.0);
                for (int l = 0; l < n; ++l)
                    for (int k = 0; k < n; ++k) {
                        m += cd.C_B_hbar_arg(l, r, h, k) * eta[l] * eta[k];
                        // C-F covariant derivative of Cbar, direct rule
                        cplx v2 = geo.Wb_at(l, r, h, k);
                        for (int a = 0; a < n; ++a)
                            v2 -= b.N(a, k) *
                                  geo.jet(MultiIndex().d_eta(l).d_eta(a).d_etabar(r).d_etabar(h));
                        for (int mm = 0; mm < n; ++mm) v2 -= b.L_cf(mm, l, k) * b.Cbar(mm, r, h);
                        c += v2 * eta[l] * eta[k];
                    }
                mid(r, h) = m;
                cf(r, h) = c;
            }
        acc.feed("lemma2.2.iii.B", equality_residual(lhs, mid));
        acc.feed("lemma2.2.iii.CF", equality_residual(lhs, cf));
    }

    // iv) C_{i jbar h B|k} = d.eta_h(g_{i jbar B|k}) + (d.eta_h BL^l_{ik}) g_{l jbar}
    //     + (d.eta_h BL^{mbar}_{jbar k}) g_{i mbar}
    {
        const CTensor4& dbl = geo.dBL();
        const CTensor4& dblb_b = geo.dBLbar_b();
        CTensor4 lhs(n), rhs(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int h = 0; h < n; ++h) {
                        lhs(i, j, h, k) = cd.C_B_h(i, j, h, k);
                        // d.eta_h of g_B(i,j,k), expanded through the product rule
                        cplx dgB = geo.Wp_at(i, h, j, k);
                        for (int a = 0; a < n; ++a) {
                            dgB -= b.BL(a, k, h) * b.C(i, j, a);
                            dgB -= b.cN(a, k) *
                                   geo.jet(MultiIndex().d_eta(i).d_eta(a).d_eta(h).d_etabar(j));
                        }
                        for (int l = 0; l < n; ++l) {
                            dgB -= dbl(l, i, k, h) * b.g(l, j);
                            dgB -= b.BL(l, i, k) * b.C(l, j, h);
                        }
                        for (int m = 0; m < n; ++m) {
                            dgB -= std::conj(dblb_b(m, j, k, h)) * b.g(i, m);
                            dgB -= std::conj(b.BLbar(m, j, k)) * b.C(i, m, h);
                        }
                        cplx w = dgB;
                        for (int l = 0; l < n; ++l) w += dbl(l, i, k, h) * b.g(l, j);
                        for (int m = 0; m < n; ++m) w += std::conj(dblb_b(m, j, k, h)) * b.g(i, m);
                        rhs(i, j, h, k) = w;
                    }
        acc.feed("lemma2.2.iv", equality_residual(lhs, rhs));
    }

    // v) uniform-jbar reading: C_{i jbar hbar B|k} = d.etabar_h(g_{i jbar B|k})
    //    + (d.etabar_h BL^l_{ik}) g_{l jbar} + (d.etabar_h BL^{mbar}_{jbar k}) g_{i mbar}
    //    + BL^l_{k hbar} C_{i jbar l} - BL^{mbar}_{hbar k} C_{i jbar mbar}
    {
        const CTensor4& dblb_p = geo.dBLbar_p();
        CTensor4 lhs(n), rhs(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int h = 0; h < n; ++h) {
                        lhs(i, j, h, k) = cd.C_B_hbar_arg(i, j, h, k);
                        // d.etabar_h of g_B(i,j,k)
                        cplx dgB = geo.Wb_at(i, j, h, k);
                        for (int a = 0; a < n; ++a) {
                            dgB -= b.BLbar(a, k, h) * b.C(i, j, a);
                            dgB -= b.cN(a, k) *
                                   geo.jet(MultiIndex().d_eta(i).d_eta(a).d_etabar(j).d_etabar(h));
                        }
                        for (int l = 0; l < n; ++l) {
                            // d.etabar_h BL^l_{ik} = dBLbar_p(l, i, h, k)
                            dgB -= dblb_p(l, i, h, k) * b.g(l, j);
                            dgB -= b.BL(l, i, k) * b.Cbar(l, j, h);
                        }
                        for (int m = 0; m < n; ++m) {
                            dgB -= std::conj(dblb_p(m, j, k, h)) * b.g(i, m);
                            dgB -= std::conj(b.BLbar(m, j, k)) * b.Cbar(i, m, h);
                        }
                        cplx w = dgB;
                        for (int l = 0; l < n; ++l) w += dblb_p(l, i, h, k) * b.g(l, j);
                        for (int m = 0; m < n; ++m) w += std::conj(dblb_p(m, j, k, h)) * b.g(i, m);
                        for (int l = 0; l < n; ++l) w += b.BLbar(l, k, h) * b.C(i, j, l);
                        for (int m = 0; m < n; ++m) w -= std::conj(b.BLbar(m, h, k)) * b.Cbar(i, j, m);
                        rhs(i, j, h, k) = w;
                    }
        acc.feed("lemma2.2.v", equality_residual(lhs, rhs));
    }
}

} // namespace

CheckReport run_check_suite(const MetricSpec& spec, const std::string& suite, const SamplePlan& plan,
                            double tolerance) {
    CheckReport report;
    report.metric = spec.name;
    report.suite = suite;
    report.plan = plan;
    report.tolerance = tolerance;

    auto ids = check_suite_ids();
    if (std::find(ids.begin(), ids.end(), suite) == ids.end())
        throw Error(ErrorKind::BadArgument, "unknown check suite '" + suite + "'");

    std::vector<TangentSample> samples = draw_samples(spec, plan);
    SuiteAccumulator acc;
    Rng rng(plan.seed ^ 0x9e3779b97f4a7c15ull);
    for (const TangentSample& s : samples) {
        SampleGeometry geo(spec, s);
        if (suite == "homogeneity") suite_homogeneity(geo, rng, acc);
        else if (suite == "eq1.3") suite_eq13(geo, acc);
        else if (suite == "lemma2.1") suite_lemma21(geo, acc);
        else if (suite == "lemma2.2") suite_lemma22(geo, acc);
    }
    report.rows = acc.rows;
    if (suite == "lemma2.2")
        report.notes.push_back(
            "lemma2.2.v evaluated with all barred free indices read as the same index (jbar "
            "throughout); the residual above reports whether that reading holds");
    for (const CheckRow& row : report.rows) report.pass = report.pass && row.residual < tolerance;
    return report;
}

std::string check_to_json(const CheckReport& r) {
    nlohmann::ordered_json j;
    j["metric"] = r.metric;
    j["suite"] = r.suite;
    j["plan"] = {{"seed", r.plan.seed},
                 {"z_count", r.plan.z_count},
                 {"eta_count", r.plan.eta_count},
                 {"radius", r.plan.radius}};
    j["tolerance"] = r.tolerance;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"id", row.id}, {"max_residual", row.residual}, {"pass", row.residual < r.tolerance}});
    j["identities"] = std::move(rows);
    j["notes"] = r.notes;
    j["pass"] = r.pass;
    return j.dump(2) + "\n";
}

std::string check_to_csv(const CheckReport& r) {
    std::string out = "identity_id,max_residual,pass\n";
    char buf[64];
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%.17g", row.residual);
        out += row.id + "," + buf + "," + (row.residual < r.tolerance ? "true" : "false") + "\n";
    }
    return out;
}

// ---- bundle dump --------------------------------------------------------------

namespace {

nlohmann::ordered_json complex_json(const cplx& c) {
    return nlohmann::ordered_json::array({c.real(), c.imag()});
}

nlohmann::ordered_json tensor_json(const CVector& v) {
    auto a = nlohmann::ordered_json::array();
    for (int i = 0; i < v.n; ++i) a.push_back(complex_json(v[i]));
    return a;
}

nlohmann::ordered_json tensor_json(const CMatrix& m) {
    auto a = nlohmann::ordered_json::array();
    for (int i = 0; i < m.n; ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int j = 0; j < m.n; ++j) row.push_back(complex_json(m(i, j)));
        a.push_back(std::move(row));
    }
    return a;
}

nlohmann::ordered_json tensor_json(const CTensor3& t) {
    auto a = nlohmann::ordered_json::array();
    for (int i = 0; i < t.n; ++i) {
        auto mid = nlohmann::ordered_json::array();
        for (int j = 0; j < t.n; ++j) {
            auto row = nlohmann::ordered_json::array();
            for (int k = 0; k < t.n; ++k) row.push_back(complex_json(t(i, j, k)));
            mid.push_back(std::move(row));
        }
        a.push_back(std::move(mid));
    }
    return a;
}

nlohmann::ordered_json tensor_json(const CTensor4& t) {
    auto a = nlohmann::ordered_json::array();
    for (int i = 0; i < t.n; ++i) {
        auto l3 = nlohmann::ordered_json::array();
        for (int j = 0; j < t.n; ++j) {
            auto mid = nlohmann::ordered_json::array();
            for (int k = 0; k < t.n; ++k) {
                auto row = nlohmann::ordered_json::array();
                for (int l = 0; l < t.n; ++l) row.push_back(complex_json(t(i, j, k, l)));
                mid.push_back(std::move(row));
            }
            l3.push_back(std::move(mid));
        }
        a.push_back(std::move(l3));
    }
    return a;
}

} // namespace

std::string bundle_to_json(const MetricSpec& spec, const TangentSample& sample) {
    SampleGeometry geo(spec, sample);
    const ConnectionBundle& b = geo.bundle();
    const CovDerivs& cd = geo.cov();

    nlohmann::ordered_json j;
    j["metric"] = spec.name;
    nlohmann::ordered_json pt;
    auto coords = nlohmann::ordered_json::array();
    for (const cplx& c : sample.z) coords.push_back(complex_json(c));
    pt["z"] = std::move(coords);
    coords = nlohmann::ordered_json::array();
    for (const cplx& c : sample.eta) coords.push_back(complex_json(c));
    pt["eta"] = std::move(coords);
    j["sample"] = std::move(pt);
    j["conventions"] = {
        {"complex", "every scalar is [re, im]"},
        {"g", "g[i][j] = g_{i jbar}; first index unbarred, second barred"},
        {"coefficients", "X[i][j][k] = X^i_{jk}; upper index first; kbar variants keep the layout"},
        {"cartan", "C[i][j][k] = C_{i jbar k}; Cbar[i][j][k] = C_{i jbar kbar}"},
        {"cov_derivs", "D[l][r][h][k]: tensor indices l, rbar, h (or hbar), derivative direction last"},
        {"barred_direction",
         "B|kbar uses the conjugate adapted frame with the kbar-type Berwald coefficients"}};
    nlohmann::ordered_json t;
    t["L"] = complex_json(geo.Lval());
    t["g"] = tensor_json(b.g);
    t["g_inv"] = tensor_json(b.g_inv);
    t["C"] = tensor_json(b.C);
    t["Cbar"] = tensor_json(b.Cbar);
    t["N"] = tensor_json(b.N);
    t["G"] = tensor_json(b.G);
    t["cN"] = tensor_json(b.cN);
    t["dGbar"] = tensor_json(b.dGbar);
    t["L_cf"] = tensor_json(b.L_cf);
    t["C_cf"] = tensor_json(b.C_cf);
    t["T"] = tensor_json(b.T);
    t["BL"] = tensor_json(b.BL);
    t["BLbar"] = tensor_json(b.BLbar);
    t["dNbar"] = tensor_json(b.dNbar);
    t["cL"] = tensor_json(b.cL);
    t["cLbar"] = tensor_json(b.cLbar);
    t["g_B"] = tensor_json(cd.g_B);
    t["C_B_h"] = tensor_json(cd.C_B_h);
    t["C_B_hbar_arg"] = tensor_json(cd.C_B_hbar_arg);
    t["C_B_bar"] = tensor_json(cd.C_B_bar);
    t["C_cf_h"] = tensor_json(cd.C_cf_h);
    t["C_cf_hbar"] = tensor_json(cd.C_cf_hbar);
    j["tensors"] = std::move(t);
    return j.dump(2) + "\n";
}

} // namespace finsler
