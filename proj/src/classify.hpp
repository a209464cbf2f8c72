#pragma once

#include "geometry.hpp"
#include "metric.hpp"

#include <string>
#include <vector>

namespace finsler {

enum class Verdict { Holds, Borderline, Fails };

const char* verdict_name(Verdict v);

// Verdict thresholds: holds below tol, fails above 10*tol, borderline in the
// band between.
Verdict verdict_for(double aggregate, double tolerance);

struct PredicateResidual {
    std::string id;
    std::vector<double> per_sample; // scaled residuals; dispersion predicates carry one entry per z-group
    double aggregate = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Holds;
};

struct CrossCheck {
    std::string theorem;
    bool consistent = true;
};

struct ClassificationReport {
    std::string metric;
    SamplePlan plan;
    double tolerance = 1e-7;
    std::vector<PredicateResidual> predicates;
    std::vector<std::pair<std::string, Verdict>> lattice;
    std::vector<CrossCheck> crosschecks;
    std::vector<std::string> warnings;

    Verdict lattice_verdict(const std::string& cls) const;
    const PredicateResidual* find(const std::string& id) const;
    bool any_inconsistency() const;
};

inline constexpr double kDefaultTolerance = 1e-7;

// Runs every applicable predicate over the sample plan, fills the lattice,
// and checks the paper's equivalences and inclusions. Per-sample failures
// become warnings; only spec-level errors throw.
ClassificationReport classify(const MetricSpec& spec, const SamplePlan& plan,
                              double tolerance = kDefaultTolerance);

// Same, on an explicit sample list (used for coordinate-invariance checks;
// samples must be grouped z-major as draw_samples produces them).
ClassificationReport classify_on_samples(const MetricSpec& spec, const SamplePlan& plan,
                                         const std::vector<TangentSample>& samples,
                                         double tolerance = kDefaultTolerance);

std::string report_to_json(const ClassificationReport& report);
std::string report_to_csv(const ClassificationReport& report);

// ---- identity check suites (cmd check) ------------------------------------

struct CheckRow {
    std::string id;
    double residual = 0.0;
};

struct CheckReport {
    std::string metric;
    std::string suite;
    SamplePlan plan;
    double tolerance = 1e-7;
    std::vector<CheckRow> rows;
    std::vector<std::string> notes;
    bool pass = true;
};

// Suites: "homogeneity", "eq1.3", "lemma2.1", "lemma2.2".
CheckReport run_check_suite(const MetricSpec& spec, const std::string& suite, const SamplePlan& plan,
                            double tolerance = kDefaultTolerance);

std::vector<std::string> check_suite_ids();

std::string check_to_json(const CheckReport& report);
std::string check_to_csv(const CheckReport& report);

// Full connection bundle at one sample, serialized with documented index
// conventions (cmd dump).
std::string bundle_to_json(const MetricSpec& spec, const TangentSample& sample);

// Parallelism cap: FINSLER_THREADS when set, hardware concurrency otherwise.
int worker_count(int jobs);

// The Theorem 4.2 / Proposition 4.3 scalar
// (betabar l_rbar d(bbar^r)/dz^j + beta d(b_rbar)/dz^j etabar^r) eta^j
// for Randers and Kropina specs; exposed for oracle tests.
cplx alphabeta_gb_scalar(const MetricSpec& spec, const TangentSample& sample);

} // namespace finsler
