#include "metric.hpp"

#include "tensor.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace finsler {

using nlohmann::json;

const char* kind_name(MetricKind k) {
    switch (k) {
        case MetricKind::Hermitian: return "hermitian";
        case MetricKind::Randers: return "randers";
        case MetricKind::Kropina: return "kropina";
        case MetricKind::AntonelliShimada: return "antonelli_shimada";
        case MetricKind::Custom: return "custom";
    }
    return "?";
}

MetricKind kind_from_name(const std::string& s) {
    if (s == "hermitian") return MetricKind::Hermitian;
    if (s == "randers") return MetricKind::Randers;
    if (s == "kropina") return MetricKind::Kropina;
    if (s == "antonelli_shimada") return MetricKind::AntonelliShimada;
    if (s == "custom") return MetricKind::Custom;
    throw Error(ErrorKind::Schema, "unknown metric kind '" + s + "'");
}

namespace {

Expr lit(double v) { return make_literal(cplx(v, 0.0)); }

Expr alpha2_expr(const MetricSpec& spec) {
    Expr sum;
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) {
            Expr term = make_binary(NodeKind::Mul,
                                    make_binary(NodeKind::Mul, spec.a[i][j], make_var_eta(i)),
                                    make_unary(NodeKind::Conj, make_var_eta(j)));
            sum = sum ? make_binary(NodeKind::Add, sum, term) : term;
        }
    return sum;
}

Expr beta_expr(const MetricSpec& spec) {
    Expr sum;
    for (int i = 0; i < spec.n; ++i) {
        Expr term = make_binary(NodeKind::Mul, spec.b[i], make_var_eta(i));
        sum = sum ? make_binary(NodeKind::Add, sum, term) : term;
    }
    return sum;
}

} // namespace

Expr assemble_L(const MetricSpec& spec) {
    switch (spec.kind) {
        case MetricKind::Hermitian: return alpha2_expr(spec);
        case MetricKind::Randers: {
            Expr alpha = make_unary(NodeKind::Sqrt, alpha2_expr(spec));
            Expr babs = make_unary(NodeKind::Sqrt, make_unary(NodeKind::Abs2, beta_expr(spec)));
            return make_pow(make_binary(NodeKind::Add, alpha, babs), 2);
        }
        case MetricKind::Kropina:
            return make_binary(NodeKind::Div, make_pow(alpha2_expr(spec), 2),
                               make_unary(NodeKind::Abs2, beta_expr(spec)));
        case MetricKind::AntonelliShimada: {
            Expr quartic = make_binary(
                NodeKind::Add, make_pow(make_unary(NodeKind::Abs2, make_var_eta(0)), 2),
                make_pow(make_unary(NodeKind::Abs2, make_var_eta(1)), 2));
            Expr weight = make_unary(NodeKind::Exp, make_binary(NodeKind::Mul, lit(2.0), spec.sigma));
            return make_binary(NodeKind::Mul, weight, make_unary(NodeKind::Sqrt, quartic));
        }
        case MetricKind::Custom: return spec.custom_L;
    }
    throw Error(ErrorKind::Schema, "corrupt metric kind");
}

namespace {

void require_z_only(const Expr& e, int n, const std::string& field) {
    if (max_eta_index(e) > 0)
        throw Error(ErrorKind::Validation, field + " must depend on z only");
    if (max_z_index(e) > n)
        throw Error(ErrorKind::Validation,
                    field + " references z" + std::to_string(max_z_index(e)) +
                        " beyond dimension " + std::to_string(n));
}

} // namespace

MetricSpec finalized(MetricSpec spec) {
    if (spec.n < 2) throw Error(ErrorKind::Schema, "dimension must be >= 2");
    switch (spec.kind) {
        case MetricKind::Hermitian:
        case MetricKind::Randers:
        case MetricKind::Kropina: {
            if (static_cast<int>(spec.a.size()) != spec.n)
                throw Error(ErrorKind::Schema, "a must be an n x n matrix of expressions");
            for (int i = 0; i < spec.n; ++i) {
                if (static_cast<int>(spec.a[i].size()) != spec.n)
                    throw Error(ErrorKind::Schema, "a must be an n x n matrix of expressions");
                for (int j = 0; j < spec.n; ++j)
                    require_z_only(spec.a[i][j],
                                   spec.n,
                                   "a[" + std::to_string(i) + "][" + std::to_string(j) + "]");
            }
            if (spec.kind == MetricKind::Hermitian) {
                if (!spec.b.empty()) throw Error(ErrorKind::Schema, "hermitian metric takes no b");
            } else {
                if (static_cast<int>(spec.b.size()) != spec.n)
                    throw Error(ErrorKind::Schema, "b must be an n-vector of expressions");
                for (int i = 0; i < spec.n; ++i)
                    require_z_only(spec.b[i], spec.n, "b[" + std::to_string(i) + "]");
            }
            break;
        }
        case MetricKind::AntonelliShimada:
            if (spec.n != 2)
                throw Error(ErrorKind::Schema, "antonelli_shimada requires dimension 2");
            if (!spec.sigma) throw Error(ErrorKind::Schema, "antonelli_shimada requires sigma");
            require_z_only(spec.sigma, spec.n, "sigma");
            break;
        case MetricKind::Custom:
            if (!spec.custom_L) throw Error(ErrorKind::Schema, "custom metric requires L");
            if (max_z_index(spec.custom_L) > spec.n || max_eta_index(spec.custom_L) > spec.n)
                throw Error(ErrorKind::Validation, "L references variables beyond the dimension");
            break;
    }
    if (spec.base_point.empty()) spec.base_point.assign(static_cast<std::size_t>(spec.n), cplx(0.0));
    if (static_cast<int>(spec.base_point.size()) != spec.n)
        throw Error(ErrorKind::Schema, "base_point must hold 2n reals");
    spec.L = assemble_L(spec);
    return spec;
}

// ---- sampling -------------------------------------------------------------

double Rng::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

cplx Rng::disc(double radius) {
    double r = radius * std::sqrt(uniform());
    double phi = 2.0 * M_PI * uniform();
    return cplx(r * std::cos(phi), r * std::sin(phi));
}

cplx Rng::annulus(double r_lo, double r_hi) {
    double r = std::sqrt(r_lo * r_lo + (r_hi * r_hi - r_lo * r_lo) * uniform());
    double phi = 2.0 * M_PI * uniform();
    return cplx(r * std::cos(phi), r * std::sin(phi));
}

std::vector<TangentSample> draw_samples(const MetricSpec& spec, const SamplePlan& plan) {
    if (plan.z_count < 1 || plan.eta_count < 1)
        throw Error(ErrorKind::BadArgument, "sample counts must be >= 1");
    Rng rng(plan.seed);
    const int n = spec.n;
    const bool reject_beta = spec.kind == MetricKind::Kropina;
    std::vector<TangentSample> out;
    out.reserve(static_cast<std::size_t>(plan.total()));
    for (int zi = 0; zi < plan.z_count; ++zi) {
        TangentSample base;
        base.z.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) base.z[k] = spec.base_point[k] + rng.disc(plan.radius);
        for (int ei = 0; ei < plan.eta_count; ++ei) {
            TangentSample s = base;
            s.eta.resize(static_cast<std::size_t>(n));
            int tries = 0;
            for (;;) {
                for (int k = 0; k < n; ++k) s.eta[k] = rng.annulus(0.25, 1.0);
                if (!reject_beta) break;
                cplx beta(0.0);
                for (int k = 0; k < n; ++k) beta += eval_value(spec.b[k], s.z, s.eta) * s.eta[k];
                if (std::abs(beta) > 1e-6) break;
                if (++tries > 200)
                    throw Error(ErrorKind::Validation,
                                "|beta| stays within 1e-6 of zero on the sampling annulus "
                                "(b may vanish identically)");
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

// ---- validation -----------------------------------------------------------

namespace {

std::string format_point(const TangentSample& s) {
    std::ostringstream os;
    os << "z=(";
    for (std::size_t k = 0; k < s.z.size(); ++k)
        os << (k ? "," : "") << s.z[k].real() << (s.z[k].imag() < 0 ? "" : "+") << s.z[k].imag() << "i";
    os << ") eta=(";
    for (std::size_t k = 0; k < s.eta.size(); ++k)
        os << (k ? "," : "") << s.eta[k].real() << (s.eta[k].imag() < 0 ? "" : "+") << s.eta[k].imag()
           << "i";
    os << ")";
    return os.str();
}

} // namespace

ValidationReport validate_metric(const MetricSpec& spec) {
    ValidationReport report;
    SamplePlan plan;
    plan.seed = kValidationSeed;
    plan.z_count = 4;
    plan.eta_count = 4;

    std::vector<TangentSample> samples;
    try {
        samples = draw_samples(spec, plan);
    } catch (const Error& e) {
        report.ok = false;
        report.failures.push_back(e.what());
        return report;
    }

    for (const TangentSample& s : samples) {
        try {
            if (spec.has_ab()) {
                CMatrix a(spec.n);
                for (int i = 0; i < spec.n; ++i)
                    for (int j = 0; j < spec.n; ++j) a(i, j) = eval_value(spec.a[i][j], s.z, s.eta);
                double defect = hermitian_defect(a);
                if (defect > 1e-10 * (1.0 + max_abs(a))) {
                    report.failures.push_back("a is not Hermitian (defect " + std::to_string(defect) +
                                              ") at " + format_point(s));
                    continue;
                }
            }
            cplx L = eval_value(spec.L, s.z, s.eta);
            if (std::abs(L.imag()) > 1e-10 * (1.0 + std::abs(L))) {
                report.failures.push_back("L is not real at " + format_point(s));
                continue;
            }
            if (!(L.real() > 0.0)) {
                report.failures.push_back("L is not positive at " + format_point(s));
                continue;
            }
            CMatrix g(spec.n);
            for (int i = 0; i < spec.n; ++i)
                for (int j = 0; j < spec.n; ++j)
                    g(i, j) = derive_one(spec.L, s, MultiIndex().d_eta(i).d_etabar(j));
            invert_hermitian(g); // positivity check
        } catch (const Error& e) {
            report.failures.push_back(std::string(e.what()) + " at " + format_point(s));
        }
    }
    report.ok = report.failures.empty();
    return report;
}

// ---- JSON -----------------------------------------------------------------

namespace {

Expr parse_field(const std::string& text, const std::string& path) {
    try {
        return parse(text);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

} // namespace

MetricSpec load_metric(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::Schema, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::Schema, "metric file must be a JSON object");

    static const std::vector<std::string> known = {"name",  "dimension", "kind",      "a",
                                                   "b",     "sigma",     "L",         "base_point"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw Error(ErrorKind::Schema, "unknown field '" + it.key() + "'");
    }
    for (const char* req : {"name", "dimension", "kind"}) {
        if (!j.contains(req)) throw Error(ErrorKind::Schema, std::string("missing field '") + req + "'");
    }
    if (!j["name"].is_string()) throw Error(ErrorKind::Schema, "name must be a string");
    if (!j["dimension"].is_number_integer()) throw Error(ErrorKind::Schema, "dimension must be an integer");
    if (!j["kind"].is_string()) throw Error(ErrorKind::Schema, "kind must be a string");

    MetricSpec spec;
    spec.name = j["name"].get<std::string>();
    spec.n = j["dimension"].get<int>();
    spec.kind = kind_from_name(j["kind"].get<std::string>());

    auto forbid = [&](const char* field) {
        if (j.contains(field))
            throw Error(ErrorKind::Schema, std::string("field '") + field + "' not allowed for kind " +
                                               kind_name(spec.kind));
    };

    if (spec.has_ab()) {
        if (!j.contains("a") || !j["a"].is_array())
            throw Error(ErrorKind::Schema, "field 'a' (array of arrays of strings) required");
        int i = 0;
        for (const auto& row : j["a"]) {
            if (!row.is_array()) throw Error(ErrorKind::Schema, "a must be an array of arrays");
            std::vector<Expr> r;
            int jj = 0;
            for (const auto& cell : row) {
                if (!cell.is_string()) throw Error(ErrorKind::Schema, "a entries must be strings");
                r.push_back(parse_field(cell.get<std::string>(),
                                        "a[" + std::to_string(i) + "][" + std::to_string(jj) + "]"));
                ++jj;
            }
            spec.a.push_back(std::move(r));
            ++i;
        }
        if (spec.kind == MetricKind::Hermitian) {
            forbid("b");
        } else {
            if (!j.contains("b") || !j["b"].is_array())
                throw Error(ErrorKind::Schema, "field 'b' (array of strings) required");
            int k = 0;
            for (const auto& cell : j["b"]) {
                if (!cell.is_string()) throw Error(ErrorKind::Schema, "b entries must be strings");
                spec.b.push_back(parse_field(cell.get<std::string>(), "b[" + std::to_string(k) + "]"));
                ++k;
            }
        }
        forbid("sigma");
        forbid("L");
    } else if (spec.kind == MetricKind::AntonelliShimada) {
        if (!j.contains("sigma") || !j["sigma"].is_string())
            throw Error(ErrorKind::Schema, "field 'sigma' (string) required");
        spec.sigma = parse_field(j["sigma"].get<std::string>(), "sigma");
        forbid("a");
        forbid("b");
        forbid("L");
    } else {
        if (!j.contains("L") || !j["L"].is_string())
            throw Error(ErrorKind::Schema, "field 'L' (string) required");
        spec.custom_L = parse_field(j["L"].get<std::string>(), "L");
        forbid("a");
        forbid("b");
        forbid("sigma");
    }

    if (j.contains("base_point")) {
        if (!j["base_point"].is_array() ||
            static_cast<int>(j["base_point"].size()) != 2 * spec.n)
            throw Error(ErrorKind::Schema, "base_point must hold 2n reals");
        for (int k = 0; k < spec.n; ++k)
            spec.base_point.emplace_back(j["base_point"][2 * k].get<double>(),
                                         j["base_point"][2 * k + 1].get<double>());
    }

    spec = finalized(std::move(spec));
    ValidationReport report = validate_metric(spec);
    if (!report.ok) {
        std::string msg = "metric validation failed (seed " + std::to_string(report.seed) + "): ";
        for (std::size_t k = 0; k < report.failures.size(); ++k)
            msg += (k ? "; " : "") + report.failures[k];
        throw Error(ErrorKind::Validation, msg);
    }
    return spec;
}

std::string metric_to_json(const MetricSpec& spec) {
    nlohmann::ordered_json j;
    j["name"] = spec.name;
    j["dimension"] = spec.n;
    j["kind"] = kind_name(spec.kind);
    if (spec.has_ab()) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : spec.a) {
            nlohmann::ordered_json r = nlohmann::ordered_json::array();
            for (const auto& e : row) r.push_back(print(e));
            rows.push_back(std::move(r));
        }
        j["a"] = std::move(rows);
        if (spec.kind != MetricKind::Hermitian) {
            nlohmann::ordered_json b = nlohmann::ordered_json::array();
            for (const auto& e : spec.b) b.push_back(print(e));
            j["b"] = std::move(b);
        }
    } else if (spec.kind == MetricKind::AntonelliShimada) {
        j["sigma"] = print(spec.sigma);
    } else {
        j["L"] = print(spec.custom_L);
    }
    bool nonzero_base = false;
    for (const cplx& c : spec.base_point)
        if (c != cplx(0.0)) nonzero_base = true;
    if (nonzero_base) {
        nlohmann::ordered_json bp = nlohmann::ordered_json::array();
        for (const cplx& c : spec.base_point) {
            bp.push_back(c.real());
            bp.push_back(c.imag());
        }
        j["base_point"] = std::move(bp);
    }
    return j.dump(2);
}

MetricSpec transform_metric(const MetricSpec& spec, const std::vector<std::vector<cplx>>& a_fwd,
                            const std::vector<std::vector<cplx>>& a_inv) {
    const int n = spec.n;
    auto linear_combo = [&](const std::vector<Expr>& vars, int k) {
        // z_k = sum_m a_inv[k][m] * z'_m
        Expr sum;
        for (int m = 0; m < n; ++m) {
            Expr term = make_binary(NodeKind::Mul, make_literal(a_inv[k][m]), vars[m]);
            sum = sum ? make_binary(NodeKind::Add, sum, term) : term;
        }
        return sum;
    };
    std::vector<Expr> zvars, evars;
    for (int k = 0; k < n; ++k) zvars.push_back(make_var_z(k));
    for (int k = 0; k < n; ++k) evars.push_back(make_var_eta(k));
    std::vector<Expr> z_repl, eta_repl;
    for (int k = 0; k < n; ++k) z_repl.push_back(linear_combo(zvars, k));
    for (int k = 0; k < n; ++k) eta_repl.push_back(linear_combo(evars, k));
    std::vector<Expr> no_eta;

    MetricSpec out;
    out.name = spec.name + "_transformed";
    out.n = n;
    out.base_point.assign(static_cast<std::size_t>(n), cplx(0.0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) out.base_point[i] += a_fwd[i][k] * spec.base_point[k];

    switch (spec.kind) {
        case MetricKind::Hermitian:
        case MetricKind::Randers:
        case MetricKind::Kropina: {
            out.kind = spec.kind;
            out.a.assign(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Expr sum;
                    for (int k = 0; k < n; ++k)
                        for (int l = 0; l < n; ++l) {
                            cplx coef = a_inv[k][i] * std::conj(a_inv[l][j]);
                            if (coef == cplx(0.0)) continue;
                            Expr term = make_binary(NodeKind::Mul, make_literal(coef),
                                                    substitute(spec.a[k][l], z_repl, no_eta));
                            sum = sum ? make_binary(NodeKind::Add, sum, term) : term;
                        }
                    out.a[i][j] = sum ? sum : make_literal(cplx(0.0));
                }
            if (spec.kind != MetricKind::Hermitian) {
                out.b.resize(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) {
                    Expr sum;
                    for (int k = 0; k < n; ++k) {
                        cplx coef = a_inv[k][i];
                        if (coef == cplx(0.0)) continue;
                        Expr term = make_binary(NodeKind::Mul, make_literal(coef),
                                                substitute(spec.b[k], z_repl, no_eta));
                        sum = sum ? make_binary(NodeKind::Add, sum, term) : term;
                    }
                    out.b[i] = sum ? sum : make_literal(cplx(0.0));
                }
            }
            break;
        }
        case MetricKind::AntonelliShimada:
        case MetricKind::Custom: {
            out.kind = MetricKind::Custom;
            Expr L = spec.kind == MetricKind::Custom ? spec.custom_L : assemble_L(spec);
            out.custom_L = substitute(L, z_repl, eta_repl);
            break;
        }
    }
    return finalized(std::move(out));
}

} // namespace finsler
