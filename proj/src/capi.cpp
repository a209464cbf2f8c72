#include "finsler/finsler.h"

#include "classify.hpp"
#include "metric.hpp"
#include "zoo.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <new>

struct fin_metric {
    finsler::MetricSpec spec;
};

namespace {

using finsler::Error;
using finsler::ErrorKind;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

fin_status status_of(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Syntax:
        case ErrorKind::UnknownIdentifier:
        case ErrorKind::Arity: return FIN_ERR_SYNTAX;
        case ErrorKind::Schema: return FIN_ERR_SCHEMA;
        case ErrorKind::Validation: return FIN_ERR_VALIDATION;
        case ErrorKind::Domain:
        case ErrorKind::DegenerateDelta:
        case ErrorKind::UnboundVariable: return FIN_ERR_DOMAIN;
        case ErrorKind::SingularMatrix: return FIN_ERR_SINGULAR;
        case ErrorKind::UnknownId: return FIN_ERR_UNKNOWN_ID;
        case ErrorKind::Order:
        case ErrorKind::Shape:
        case ErrorKind::Kind:
        case ErrorKind::BadArgument: return FIN_ERR_BAD_ARGUMENT;
    }
    return FIN_ERR_INTERNAL;
}

template <class F>
fin_status guarded(char** err_msg, F&& fn) {
    if (err_msg) *err_msg = nullptr;
    try {
        return fn();
    } catch (const Error& e) {
        if (err_msg) *err_msg = dup_string(e.what());
        return status_of(e.kind());
    } catch (const std::exception& e) {
        if (err_msg) *err_msg = dup_string(e.what());
        return FIN_ERR_INTERNAL;
    }
}

finsler::SamplePlan to_plan(const fin_plan* plan) {
    finsler::SamplePlan p;
    if (plan) {
        p.seed = plan->seed;
        p.z_count = plan->z_count;
        p.eta_count = plan->eta_count;
        p.radius = plan->radius;
    }
    return p;
}

} // namespace

extern "C" {

fin_plan fin_plan_default(void) { return fin_plan{42u, 8, 8, 0.5}; }

const char* fin_version(void) { return "finsler 1.0.0"; }

fin_status fin_metric_load_json(const char* json_text, fin_metric** out, char** err_msg) {
    if (!json_text || !out) return FIN_ERR_BAD_ARGUMENT;
    return guarded(err_msg, [&] {
        auto* handle = new fin_metric{finsler::load_metric(json_text)};
        *out = handle;
        return FIN_OK;
    });
}

fin_status fin_metric_from_zoo(const char* id, const char* params_json, fin_metric** out,
                               char** err_msg) {
    if (!id || !out) return FIN_ERR_BAD_ARGUMENT;
    return guarded(err_msg, [&] {
        finsler::ZooParams params;
        if (params_json && *params_json) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(params_json);
            } catch (const std::exception& e) {
                throw Error(ErrorKind::Schema, std::string("invalid params JSON: ") + e.what());
            }
            if (!j.is_object()) throw Error(ErrorKind::Schema, "params must be a JSON object");
            for (auto it = j.begin(); it != j.end(); ++it) {
                const std::string& key = it.key();
                if (key == "n") params.n = it.value().get<int>();
                else if (key == "sigma") params.sigma = it.value().get<std::string>();
                else if (key == "a") params.a = it.value().get<std::vector<std::vector<std::string>>>();
                else if (key == "b") params.b = it.value().get<std::vector<std::string>>();
                else if (key == "base_point") {
                    auto reals = it.value().get<std::vector<double>>();
                    if (reals.size() % 2 != 0)
                        throw Error(ErrorKind::Schema, "base_point must hold 2n reals");
                    std::vector<finsler::cplx> bp;
                    for (std::size_t k = 0; k + 1 < reals.size(); k += 2)
                        bp.emplace_back(reals[k], reals[k + 1]);
                    params.base_point = std::move(bp);
                } else {
                    throw Error(ErrorKind::Schema, "unknown zoo param '" + key + "'");
                }
            }
        }
        auto* handle = new fin_metric{finsler::zoo_make(id, params)};
        *out = handle;
        return FIN_OK;
    });
}

fin_status fin_metric_to_json(const fin_metric* metric, char** out_json) {
    if (!metric || !out_json) return FIN_ERR_BAD_ARGUMENT;
    return guarded(nullptr, [&] {
        *out_json = dup_string(finsler::metric_to_json(metric->spec));
        return FIN_OK;
    });
}

int fin_metric_dimension(const fin_metric* metric) { return metric ? metric->spec.n : 0; }

void fin_metric_free(fin_metric* metric) { delete metric; }

fin_status fin_classify(const fin_metric* metric, const fin_plan* plan, double tolerance,
                        const char* format, char** out_text, int* out_inconsistent,
                        char** err_msg) {
    if (!metric || !out_text) return FIN_ERR_BAD_ARGUMENT;
    return guarded(err_msg, [&] {
        std::string fmt = format ? format : "json";
        if (fmt != "json" && fmt != "csv")
            throw Error(ErrorKind::BadArgument, "format must be json or csv");
        finsler::ClassificationReport report =
            finsler::classify(metric->spec, to_plan(plan),
                              tolerance > 0.0 ? tolerance : finsler::kDefaultTolerance);
        *out_text = dup_string(fmt == "json" ? finsler::report_to_json(report)
                                             : finsler::report_to_csv(report));
        if (out_inconsistent) *out_inconsistent = report.any_inconsistency() ? 1 : 0;
        return FIN_OK;
    });
}

fin_status fin_check(const fin_metric* metric, const char* suite, const fin_plan* plan,
                     double tolerance, const char* format, char** out_text, int* out_pass,
                     char** err_msg) {
    if (!metric || !suite || !out_text) return FIN_ERR_BAD_ARGUMENT;
    return guarded(err_msg, [&] {
        std::string fmt = format ? format : "json";
        if (fmt != "json" && fmt != "csv")
            throw Error(ErrorKind::BadArgument, "format must be json or csv");
        finsler::CheckReport report =
            finsler::run_check_suite(metric->spec, suite, to_plan(plan),
                                     tolerance > 0.0 ? tolerance : finsler::kDefaultTolerance);
        *out_text =
            dup_string(fmt == "json" ? finsler::check_to_json(report) : finsler::check_to_csv(report));
        if (out_pass) *out_pass = report.pass ? 1 : 0;
        return FIN_OK;
    });
}

fin_status fin_dump(const fin_metric* metric, const double* coords, char** out_json,
                    char** err_msg) {
    if (!metric || !coords || !out_json) return FIN_ERR_BAD_ARGUMENT;
    return guarded(err_msg, [&] {
        const int n = metric->spec.n;
        finsler::TangentSample s;
        for (int k = 0; k < n; ++k) s.z.emplace_back(coords[2 * k], coords[2 * k + 1]);
        for (int k = 0; k < n; ++k)
            s.eta.emplace_back(coords[2 * n + 2 * k], coords[2 * n + 2 * k + 1]);
        *out_json = dup_string(finsler::bundle_to_json(metric->spec, s));
        return FIN_OK;
    });
}

void fin_string_free(char* text) { std::free(text); }

} // extern "C"
