#include "zoo.hpp"

namespace finsler {

namespace {

std::vector<std::vector<std::string>> identity_strings(int n) {
    std::vector<std::vector<std::string>> a(static_cast<std::size_t>(n),
                                            std::vector<std::string>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = (i == j) ? "1" : "0";
    return a;
}

// a_{i jbar} = d^2 log(1 + z.zbar) / dz^i dzbar^j, the Fubini-Study potential.
std::vector<std::vector<std::string>> fubini_study_strings(int n) {
    std::string S = "(1";
    for (int k = 1; k <= n; ++k) S += "+z" + std::to_string(k) + "*conj(z" + std::to_string(k) + ")";
    S += ")";
    std::vector<std::vector<std::string>> a(static_cast<std::size_t>(n),
                                            std::vector<std::string>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::string zi = "z" + std::to_string(i + 1), zj = "z" + std::to_string(j + 1);
            std::string cross = "conj(" + zi + ")*" + zj + "/" + S + "^2";
            a[i][j] = (i == j) ? "1/" + S + "-" + cross : "-" + cross;
        }
    return a;
}

MetricSpec build(const std::string& id, const ZooParams& p) {
    MetricSpec spec;
    spec.name = id;
    spec.n = p.n.value_or(2);
    if (p.base_point) spec.base_point = *p.base_point;

    auto parse_matrix = [&](const std::vector<std::vector<std::string>>& rows) {
        std::vector<std::vector<Expr>> out;
        for (const auto& row : rows) {
            std::vector<Expr> r;
            for (const auto& cell : row) r.push_back(parse(cell));
            out.push_back(std::move(r));
        }
        return out;
    };
    auto parse_vec = [&](const std::vector<std::string>& cells) {
        std::vector<Expr> out;
        for (const auto& cell : cells) out.push_back(parse(cell));
        return out;
    };

    if (id == "flat") {
        spec.kind = MetricKind::Hermitian;
        spec.a = parse_matrix(p.a.value_or(identity_strings(spec.n)));
    } else if (id == "hermitian_kahler_potential") {
        spec.kind = MetricKind::Hermitian;
        spec.a = parse_matrix(p.a.value_or(fubini_study_strings(spec.n)));
    } else if (id == "hermitian_nonkahler") {
        std::vector<std::vector<std::string>> dflt = identity_strings(spec.n);
        dflt[0][0] = "exp(z2*conj(z2))";
        spec.kind = MetricKind::Hermitian;
        spec.a = parse_matrix(p.a.value_or(dflt));
    } else if (id == "antonelli_shimada") {
        spec.kind = MetricKind::AntonelliShimada;
        spec.n = 2;
        spec.sigma = parse(p.sigma.value_or("(z1*conj(z1)+z2*conj(z2))/2"));
    } else if (id == "randers") {
        spec.kind = MetricKind::Randers;
        spec.a = parse_matrix(p.a.value_or(identity_strings(spec.n)));
        spec.b = parse_vec(p.b.value_or(std::vector<std::string>{"0.3", "0"}));
    } else if (id == "kropina") {
        spec.kind = MetricKind::Kropina;
        spec.a = parse_matrix(p.a.value_or(identity_strings(spec.n)));
        spec.b = parse_vec(p.b.value_or(std::vector<std::string>{"1", "0"}));
    } else if (id == "local_minkowski") {
        spec.kind = MetricKind::Custom;
        spec.n = 2;
        spec.custom_L = parse("sqrt(abs2(eta1)^2+abs2(eta2)^2)");
    } else {
        throw Error(ErrorKind::UnknownId, "unknown zoo id '" + id + "'");
    }
    return finalized(std::move(spec));
}

} // namespace

std::vector<std::string> zoo_ids() {
    return {"flat",
            "hermitian_kahler_potential",
            "hermitian_nonkahler",
            "antonelli_shimada",
            "randers",
            "kropina",
            "local_minkowski"};
}

MetricSpec zoo_make(const std::string& id, const ZooParams& params) {
    MetricSpec spec = build(id, params);
    ValidationReport report = validate_metric(spec);
    if (!report.ok) {
        std::string msg = "zoo entry '" + id + "' failed validation: ";
        for (std::size_t k = 0; k < report.failures.size(); ++k)
            msg += (k ? "; " : "") + report.failures[k];
        throw Error(ErrorKind::Validation, msg);
    }
    return spec;
}

const std::map<std::string, bool>& zoo_expected(const std::string& id) {
    static const std::map<std::string, std::map<std::string, bool>> table = {
        {"flat",
         {{"kahler", true},
          {"weakly_kahler", true},
          {"landsberg", true},
          {"generalized_berwald", true},
          {"g_landsberg", true},
          {"strong_landsberg", true},
          {"complex_berwald", true}}},
        {"hermitian_kahler_potential",
         {{"kahler", true},
          {"weakly_kahler", true},
          {"landsberg", true},
          {"generalized_berwald", true},
          {"g_landsberg", true},
          {"strong_landsberg", true},
          {"complex_berwald", true}}},
        {"hermitian_nonkahler",
         {{"kahler", false},
          {"weakly_kahler", false},
          {"landsberg", true},
          {"generalized_berwald", true},
          {"g_landsberg", true},
          {"strong_landsberg", true},
          {"complex_berwald", false}}},
        {"antonelli_shimada",
         {{"kahler", false},
          {"weakly_kahler", false},
          {"landsberg", false},
          {"generalized_berwald", true},
          {"g_landsberg", false},
          {"strong_landsberg", false},
          {"complex_berwald", false}}},
        {"randers",
         {{"kahler", true},
          {"weakly_kahler", true},
          {"landsberg", true},
          {"generalized_berwald", true},
          {"g_landsberg", true},
          {"strong_landsberg", true},
          {"complex_berwald", true}}},
        {"kropina",
         {{"kahler", true},
          {"weakly_kahler", true},
          {"landsberg", true},
          {"generalized_berwald", true},
          {"g_landsberg", true},
          {"strong_landsberg", true},
          {"complex_berwald", true}}},
        {"local_minkowski",
         {{"kahler", true},
          {"weakly_kahler", true},
          {"landsberg", true},
          {"generalized_berwald", true},
          {"g_landsberg", true},
          {"strong_landsberg", true},
          {"complex_berwald", true}}},
    };
    auto it = table.find(id);
    if (it == table.end()) throw Error(ErrorKind::UnknownId, "unknown zoo id '" + id + "'");
    return it->second;
}

} // namespace finsler
