// Command-line front end: classify metrics, run identity suites, dump
// connection bundles. Talks to the library exclusively through the C API.

#include <finsler/finsler.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CommonOpts {
    std::string metric_path;
    std::string zoo_id;
    std::string sigma;
    std::string a_csv;
    std::string b_csv;
    int samples = 8;
    int eta_samples = 8;
    std::uint64_t seed = 42;
    double radius = 0.5;
    double tol = 1e-7;
    std::string out_path;
    std::string format = "json";
};

void add_metric_options(CLI::App* cmd, CommonOpts& o) {
    auto* metric = cmd->add_option("--metric", o.metric_path, "metric JSON file");
    auto* zoo = cmd->add_option("--zoo", o.zoo_id, "zoo metric id");
    metric->excludes(zoo);
    cmd->add_option("--sigma", o.sigma, "sigma expression (zoo antonelli_shimada)");
    cmd->add_option("--a", o.a_csv, "a-matrix entries, comma-separated row-major");
    cmd->add_option("--b", o.b_csv, "b-vector entries, comma-separated");
}

void add_plan_options(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--samples", o.samples, "z sample count")->check(CLI::PositiveNumber);
    cmd->add_option("--eta-samples", o.eta_samples, "eta samples per z point")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "sample plan seed");
    cmd->add_option("--radius", o.radius, "polydisc radius around the base point");
    cmd->add_option("--tol", o.tol, "verdict tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out_path, "output path (stdout when omitted)");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

int fail(const char* what, char* err) {
    std::cerr << "error: " << what;
    if (err) {
        std::cerr << ": " << err;
        fin_string_free(err);
    }
    std::cerr << "\n";
    return 1;
}

// Builds the metric handle from --metric or --zoo flags; returns nullptr after
// printing a diagnostic.
fin_metric* open_metric(const CommonOpts& o) {
    fin_metric* metric = nullptr;
    char* err = nullptr;
    if (!o.metric_path.empty()) {
        std::ifstream in(o.metric_path);
        if (!in) {
            std::cerr << "error: cannot read " << o.metric_path << "\n";
            return nullptr;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        if (fin_metric_load_json(buf.str().c_str(), &metric, &err) != FIN_OK) {
            fail("loading metric", err);
            return nullptr;
        }
        return metric;
    }
    if (o.zoo_id.empty()) {
        std::cerr << "error: one of --metric or --zoo is required\n";
        return nullptr;
    }
    nlohmann::json params = nlohmann::json::object();
    if (!o.sigma.empty()) params["sigma"] = o.sigma;
    if (!o.a_csv.empty()) {
        auto cells = split_csv(o.a_csv);
        int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(cells.size()))));
        if (n * n != static_cast<int>(cells.size())) {
            std::cerr << "error: --a expects n*n comma-separated entries\n";
            return nullptr;
        }
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < n; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int j = 0; j < n; ++j) row.push_back(cells[static_cast<std::size_t>(i * n + j)]);
            rows.push_back(std::move(row));
        }
        params["a"] = std::move(rows);
        params["n"] = n;
    }
    if (!o.b_csv.empty()) params["b"] = split_csv(o.b_csv);
    std::string params_text = params.empty() ? "" : params.dump();
    if (fin_metric_from_zoo(o.zoo_id.c_str(), params_text.empty() ? nullptr : params_text.c_str(),
                            &metric, &err) != FIN_OK) {
        fail("building zoo metric", err);
        return nullptr;
    }
    return metric;
}

int write_output(const std::string& path, const char* text) {
    if (path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return 1;
    }
    out << text;
    return 0;
}

fin_plan make_plan(const CommonOpts& o) {
    fin_plan plan = fin_plan_default();
    plan.seed = o.seed;
    plan.z_count = o.samples;
    plan.eta_count = o.eta_samples;
    plan.radius = o.radius;
    return plan;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finsler - complex Finsler connection computation and classification"};
    app.require_subcommand(1);

    CommonOpts copts;
    auto* classify = app.add_subcommand("classify", "classify a metric into the Landsberg/Berwald hierarchy");
    add_metric_options(classify, copts);
    add_plan_options(classify, copts);

    CommonOpts kopts;
    std::string suite;
    auto* check = app.add_subcommand("check", "run an identity suite (homogeneity, eq1.3, lemma2.1, lemma2.2)");
    check->add_option("suite", suite, "suite id")->required();
    add_metric_options(check, kopts);
    add_plan_options(check, kopts);

    CommonOpts dopts;
    std::string at_csv;
    auto* dump = app.add_subcommand("dump", "dump the connection bundle at one sample");
    dump->add_option("--at", at_csv, "sample coordinates, 4n comma-separated reals")->required();
    add_metric_options(dump, dopts);
    dump->add_option("--out", dopts.out_path, "output path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    if (classify->parsed()) {
        fin_metric* metric = open_metric(copts);
        if (!metric) return 1;
        char* text = nullptr;
        char* err = nullptr;
        int inconsistent = 0;
        fin_plan plan = make_plan(copts);
        fin_status st = fin_classify(metric, &plan, copts.tol, copts.format.c_str(), &text,
                                     &inconsistent, &err);
        fin_metric_free(metric);
        if (st != FIN_OK) return fail("classify", err);
        int rc = write_output(copts.out_path, text);
        fin_string_free(text);
        if (rc) return rc;
        return inconsistent ? 2 : 0;
    }

    if (check->parsed()) {
        fin_metric* metric = open_metric(kopts);
        if (!metric) return 1;
        char* text = nullptr;
        char* err = nullptr;
        int pass = 0;
        fin_plan plan = make_plan(kopts);
        fin_status st =
            fin_check(metric, suite.c_str(), &plan, kopts.tol, kopts.format.c_str(), &text, &pass, &err);
        fin_metric_free(metric);
        if (st != FIN_OK) return fail("check", err);
        int rc = write_output(kopts.out_path, text);
        fin_string_free(text);
        if (rc) return rc;
        return pass ? 0 : 1;
    }

    if (dump->parsed()) {
        fin_metric* metric = open_metric(dopts);
        if (!metric) return 1;
        auto cells = split_csv(at_csv);
        const int n = fin_metric_dimension(metric);
        if (static_cast<int>(cells.size()) != 4 * n) {
            std::cerr << "error: --at expects " << 4 * n << " reals for dimension " << n << "\n";
            fin_metric_free(metric);
            return 1;
        }
        std::vector<double> coords;
        coords.reserve(cells.size());
        try {
            for (const auto& c : cells) coords.push_back(std::stod(c));
        } catch (const std::exception&) {
            std::cerr << "error: --at entries must be real numbers\n";
            fin_metric_free(metric);
            return 1;
        }
        char* text = nullptr;
        char* err = nullptr;
        fin_status st = fin_dump(metric, coords.data(), &text, &err);
        fin_metric_free(metric);
        if (st != FIN_OK) return fail("dump", err);
        int rc = write_output(dopts.out_path, text);
        fin_string_free(text);
        return rc;
    }

    return 1;
}
