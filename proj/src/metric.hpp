#pragma once

#include "ad.hpp"
#include "expr.hpp"
#include "types.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace finsler {

enum class MetricKind { Hermitian, Randers, Kropina, AntonelliShimada, Custom };

const char* kind_name(MetricKind k);
MetricKind kind_from_name(const std::string& s);

// Immutable description of a complex Finsler metric: expression payloads per
// kind plus the assembled L = F^2. `a` entries are functions of z only, as are
// `b` and `sigma`; a custom L may use z and eta freely.
struct MetricSpec {
    std::string name;
    int n = 2;
    MetricKind kind = MetricKind::Hermitian;
    std::vector<std::vector<Expr>> a; // hermitian / randers / kropina
    std::vector<Expr> b;              // randers / kropina
    Expr sigma;                       // antonelli_shimada (n == 2)
    Expr custom_L;                    // custom
    std::vector<cplx> base_point;     // length n, defaults to the origin
    Expr L;                           // assembled by finalize()

    bool has_ab() const { return kind != MetricKind::AntonelliShimada && kind != MetricKind::Custom; }
};

// Composes L = F^2 for the spec's kind; |beta| enters only as sqrt(abs2(beta))
// so all derivative formulas emerge from the chain rule.
Expr assemble_L(const MetricSpec& spec);

// Fills spec.L (and the default base point); checks structural invariants
// (payload shapes, variable indices within dimension).
MetricSpec finalized(MetricSpec spec);

// ---- sampling -------------------------------------------------------------

struct SamplePlan {
    std::uint64_t seed = 42;
    int z_count = 8;
    int eta_count = 8;
    double radius = 0.5;

    int total() const { return z_count * eta_count; }
};

// Deterministic, platform-independent uniform sampler (the standard
// distributions are implementation-defined, which would break byte-identical
// reports).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(); // [0, 1)
    double uniform(double lo, double hi);
    cplx disc(double radius);                 // uniform on |w| <= radius
    cplx annulus(double r_lo, double r_hi);   // uniform on r_lo <= |w| <= r_hi

private:
    std::mt19937_64 gen_;
};

// Draws z-major samples: sample (zi, ei) sits at index zi * eta_count + ei.
// z is uniform on the polydisc of the plan radius around the base point; each
// eta component is uniform on the annulus 0.25 <= |w| <= 1. For Kropina
// metrics, eta draws with |beta| <= 1e-6 are rejected and redrawn.
std::vector<TangentSample> draw_samples(const MetricSpec& spec, const SamplePlan& plan);

// ---- metric JSON ----------------------------------------------------------

inline constexpr std::uint64_t kValidationSeed = 2718281828u;

struct ValidationReport {
    bool ok = true;
    std::uint64_t seed = kValidationSeed;
    std::vector<std::string> failures;
};

// Evaluates the load-time invariants on a 16-point validation sample:
// Hermitian symmetry of `a` (1e-10), realness and positivity of L, positive
// definiteness of the fundamental tensor, and |beta| != 0 for Kropina.
ValidationReport validate_metric(const MetricSpec& spec);

// Parses the metric-JSON schema ({"name", "dimension", "kind", "a", "b",
// "sigma", "L", "base_point"}; unknown fields rejected), then validates.
// Throws Schema/Syntax/Validation errors; syntax errors carry the field path.
MetricSpec load_metric(const std::string& json_text);

std::string metric_to_json(const MetricSpec& spec);

// Applies the linear holomorphic change z' = A z, eta' = A eta to the spec
// (payload expressions are rewritten in the primed coordinates). `a_inv` must
// be the exact inverse used to map samples back.
MetricSpec transform_metric(const MetricSpec& spec, const std::vector<std::vector<cplx>>& a_fwd,
                            const std::vector<std::vector<cplx>>& a_inv);

} // namespace finsler
