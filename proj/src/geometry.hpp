#pragma once

#include "ad.hpp"
#include "metric.hpp"
#include "tensor.hpp"
#include "types.hpp"

#include <map>
#include <memory>
#include <utility>

namespace finsler {

// Every geometric object at one tangent sample. Index layout: coefficients
// X^i_{jk} are stored (i, j, k) with i the upper index; barred third slots
// (e.g. BLbar = BL^i_{j kbar}) keep the same layout with the bar implied.
struct ConnectionBundle {
    int n = 0;
    TangentSample sample;

    HermitianMatrix g, g_inv;
    Tensor3 C;       // C_{i jbar k}
    Tensor3Bar Cbar; // C_{i jbar kbar}

    CMatrix N;     // Chern-Finsler nonlinear coefficients N^i_j
    CVector G;     // spray G^i = 1/2 N^i_j eta^j
    CMatrix cN;    // canonical nonlinear coefficients cN^i_j = d.eta_j G^i
    CMatrix dGbar; // d.etabar_k G^i

    MixedCoeffs L_cf;     // L^i_{jk} = g^{lbar i} delta_k g_{j lbar}
    MixedCoeffs L_cf_dot; // the same coefficients as d.eta_j N^i_k (cross-route)
    MixedCoeffs C_cf;     // C^i_{jk} = g^{lbar i} d.eta_k g_{j lbar}
    MixedCoeffs T;        // torsion T^i_{jk} = L^i_{jk} - L^i_{kj}

    MixedCoeffs BL;    // BL^i_{jk} = d.eta_k cN^i_j
    MixedCoeffs BLbar; // BL^i_{j kbar} = d.etabar_k cN^i_j
    CTensor3 dNbar;    // d.etabar_k cN^i_j (same values as BLbar by definition)
    MixedCoeffs cL;    // Rund cL^i_{jk}
    MixedCoeffs cLbar; // Rund cL^i_{j kbar}
};

// Horizontal covariant derivatives of the Cartan tensors and of g, with
// respect to the Chern-Finsler and Berwald connections. Last slot is the
// derivative direction.
struct CovDerivs {
    int n = 0;
    CTensor4 C_cf_h;       // C_{l rbar h | k}      (Lemma 2.1 i closed form)
    CTensor4 C_cf_hbar;    // C_{l rbar h | kbar}
    CTensor4 C_B_h;        // C_{l rbar h B| k}
    CTensor4 C_B_hbar_arg; // C_{l rbar hbar B| k}
    CTensor4 C_B_bar;      // C_{l rbar h B| kbar}  (conjugate-frame convention)
    CTensor3 g_B;          // g_{i jbar B| k}
};

// Per-sample computation context. All derivatives bottom out in Wirtinger
// jets of the assembled L; derivatives of g^{-1} expand through
// d(g^{-1}) = -g^{-1} (dg) g^{-1} recursively, so no finite differencing
// enters the main path. Instances are independent; share nothing across
// threads except the immutable spec.
class SampleGeometry {
public:
    SampleGeometry(const MetricSpec& spec, TangentSample sample);

    const MetricSpec& spec() const { return spec_; }
    const TangentSample& sample() const { return sample_; }
    int dim() const { return n_; }

    const ConnectionBundle& bundle();
    const CovDerivs& cov();

    // Vertical multi-index: multiset of eta-variable indices, unbarred (P)
    // and barred (Q).
    using VIdx = std::vector<int>;

    // D_P D_Qbar G^i.
    CVector spray_deriv(VIdx P, VIdx Q);
    // D_P D_Qbar N^i_k for fixed lower index k.
    CVector cf_nonlinear_deriv(VIdx P, VIdx Q, int k);
    // D_P D_Qbar g^{mbar i}, indexed [m][i].
    CMatrix ginv_deriv(VIdx P, VIdx Q);

    // Mixed Wirtinger derivative of L at the sample (memoized).
    cplx jet(const MultiIndex& mu);

    // Third vertical derivatives of the spray, used by the Landsberg and
    // lemma identity checks.
    const CTensor4& dBL();      // d.eta_h BL^i_{jk}
    const CTensor4& dBLbar_p(); // d.eta_h BL^i_{j kbar}
    const CTensor4& dBLbar_b(); // d.etabar_h BL^i_{j kbar}

    // Chern-Finsler derivative blocks for the Lemma 2.1 / 3.1 checks.
    const CTensor4& dLcf_h();    // d.eta_h L^i_{lk}, indexed [i][l][k][h]
    const CTensor4& dLcf_hbar(); // d.etabar_h L^i_{lk}
    const CTensor3& dNbar_cf();  // d.etabar_h N^i_k, indexed [i][k][h]

    // Frame derivatives used by identity checks: the canonical adapted frame
    // applied to g and the Cartan tensors.
    cplx cdel_g(int j, int m, int k);     // cdelta_k g_{j mbar}
    cplx cdelbar_g(int j, int m, int b);  // cdelta_bbar g_{j mbar}
    cplx del_g(int j, int m, int k);      // C-F delta_k g_{j mbar}

    // Jet accessors (thin MultiIndex builders over the memoized cache).
    cplx Lval();
    cplx g_at(int i, int j);
    cplx C_at(int i, int j, int k);
    cplx Cb_at(int i, int j, int k);
    cplx W_at(int l, int m, int s);          // d g_{l mbar} / d z^s
    cplx Wp_at(int l, int j, int m, int s);  // + d.eta_j
    cplx Wb_at(int l, int m, int b, int s);  // + d.etabar_b
    cplx Zb_at(int l, int m, int s);         // d g_{l mbar} / d zbar^s
    cplx Zbp_at(int l, int j, int m, int s); // + d.eta_j

private:
    CVector vV(const VIdx& P, const VIdx& Q);
    CVector vVn(const VIdx& P, const VIdx& Q, int k);
    CMatrix vg_matrix(const VIdx& P, const VIdx& Q);
    void build_bundle();
    void build_cov();

    MetricSpec spec_;
    TangentSample sample_;
    int n_;

    std::map<MultiIndex, cplx> jets_;
    std::map<std::pair<VIdx, VIdx>, CMatrix> ginv_memo_;

    std::unique_ptr<ConnectionBundle> bundle_;
    std::unique_ptr<CovDerivs> cov_;
    std::unique_ptr<CTensor4> dbl_, dblbar_p_, dblbar_b_, dlcf_h_, dlcf_hbar_;
    std::unique_ptr<CTensor3> dnbar_cf_;
};

// Convenience wrappers mirroring the operation-level contracts.
std::pair<HermitianMatrix, HermitianMatrix> fundamental(const MetricSpec& spec,
                                                        const TangentSample& sample);
ConnectionBundle compute_bundle(const MetricSpec& spec, const TangentSample& sample);

} // namespace finsler
