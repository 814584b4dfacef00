#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "tjeffreys/error.hpp"
#include "tjeffreys/experiment.hpp"
#include "tjeffreys/io.hpp"

using namespace tjeffreys;
using namespace tjeffreys::experiment;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("tjeffreys_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tjeffreys");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

const fs::path kData = fs::path(TJEFFREYS_DATA_DIR) / "synthetic_t4.csv";

}  // namespace

TEST_CASE("dataset csv round trip") {
    std::istringstream in("y,x\n1,0.5\n2,1.5\n\n4,-1\n");
    const Dataset d = io::parse_dataset_csv(in, true);
    CHECK(d.n() == 3);
    CHECK(d.p() == 2);
    CHECK(d.X()(2, 1) == -1.0);
    std::ostringstream out;
    io::write_dataset_csv(out, d);
    std::istringstream back(out.str());
    const Dataset e = io::parse_dataset_csv(back, false);
    CHECK(e.X() == d.X());
    CHECK(e.y() == d.y());

    std::istringstream bad("x,y\n1,2\n");
    CHECK_THROWS_AS(io::parse_dataset_csv(bad, false), ValidationError);
    std::istringstream ragged("y,x\n1,2\n3\n");
    CHECK_THROWS_AS(io::parse_dataset_csv(ragged, false), ValidationError);
}

TEST_CASE("custom prior files") {
    io::json doc = {{"schema_version", 1}, {"a", 2.0}, {"shape", "independence"}, {"support", {1.0, nullptr}}};
    const PriorSpec s = io::parse_custom_prior(doc, 2);
    CHECK(s.a() == 2.0);
    CHECK(s.nu_lower() == 1.0);
    CHECK(std::isinf(s.nu_upper()));
    CHECK(nu_prior_log_unnormalized(3.0, s) ==
          doctest::Approx(nu_prior_log_unnormalized(3.0, PriorKind::IndependenceJeffreys, 2)));

    io::json table = {{"schema_version", 1}, {"a", 1.0}, {"shape", "table"}, {"table", {{1.0, 1.0}, {100.0, 0.01}}}};
    const PriorSpec t = io::parse_custom_prior(table, 1);
    CHECK(std::exp(nu_prior_log_unnormalized(10.0, t)) == doctest::Approx(0.1));
    CHECK(std::isinf(nu_prior_log_unnormalized(200.0, t)));

    doc["colour"] = "red";
    CHECK_THROWS_AS(io::parse_custom_prior(doc, 2), ValidationError);
    CHECK_THROWS_AS(io::parse_prior("uniform", 1), ValidationError);
    CHECK(io::parse_prior("jeffreys-rule", 3).a() == 2.5);
}

TEST_CASE("report json round trips") {
    const AuditReport r = audit(30, 2, PriorSpec::jeffreys_rule(2));
    CHECK(io::audit_report_from_json(io::to_json(r)) == r);
    CHECK(io::to_json(r).at("schema_version") == io::kSchemaVersion);

    Summary s;
    s.parameters.push_back({"nu", 4.5, 1.25, 1.0, 20.0, 812.5});
    s.acceptance_rate_nu = 0.31;
    s.draws = 1000;
    s.seed = 99;
    CHECK(io::summary_from_json(io::to_json(s)) == s);

    Trace t;
    t.p = 1;
    t.draws.push_back({Eigen::VectorXd::Constant(1, 0.1), 1.0 / 3.0, 7.25});
    t.iterations = {5};
    std::ostringstream out;
    io::write_trace_csv(out, t);
    std::istringstream in(out.str());
    const Trace back = io::read_trace_csv(in);
    CHECK(back.iterations == t.iterations);
    CHECK(back.draws[0].sigma2 == t.draws[0].sigma2);
}

TEST_CASE("number lists") {
    CHECK(parse_number_list("0.05, 1/14,0.1") == std::vector<double>{0.05, 1.0 / 14.0, 0.1});
    CHECK_THROWS_AS(parse_number_list("1,,2"), ValidationError);
    CHECK_THROWS_AS(parse_number_list("abc"), ValidationError);
}

TEST_CASE("prior curve") {
    PriorCurveOptions o;
    o.nu_min = 1e-6;
    o.nu_max = 1e6;
    o.steps = 4000;
    for (const std::string prior : {"independence", "jeffreys-rule"}) {
        o.prior = prior;
        const auto rows = cmd_prior_curve(o);
        double area = 0.0;
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            area += 0.5 * (rows[i].density + rows[i + 1].density) * (rows[i + 1].nu - rows[i].nu);
        }
        CHECK(std::abs(area - 1.0) <= 0.02);
    }

    // The density itself is unbounded at the origin (~ν^{-1/2}); ν·π(ν) vanishes at both ends.
    o.prior = "independence";
    o.nu_min = 1e-3;
    o.nu_max = 1e4;
    o.steps = 200;
    const auto rows = cmd_prior_curve(o);
    double peak = 0.0;
    for (const auto& r : rows) peak = std::max(peak, r.nu * r.density);
    CHECK(rows.front().nu * rows.front().density < 0.2 * peak);
    CHECK(rows.back().nu * rows.back().density < 0.01 * peak);
    CHECK(rows.back().density < 1e-7);

    std::ostringstream out;
    io::write_prior_curve_csv(out, rows, "independence");
    std::istringstream in(out.str());
    CHECK(io::read_prior_curve_csv(in) == rows);

    o.nu_min = 0.0;
    CHECK_THROWS_AS(cmd_prior_curve(o), ValidationError);
}

TEST_CASE("coverage plumbing") {
    CoverageOptions o;
    o.replicates = 0;
    CHECK_THROWS_AS(cmd_coverage(o), ValidationError);

    o.n = 25;
    o.p = 2;
    o.replicates = 4;
    o.chain.iterations = 1500;
    o.chain.burn_in = 300;
    o.threads = 2;
    const CoverageTable a = cmd_coverage(o);
    o.threads = 1;
    const CoverageTable b = cmd_coverage(o);
    CHECK(a == b);
    CHECK(a.get("beta_1").total == 4);
    CHECK(a.get("nu").true_value == 5.0);
    CHECK(coverage_from_json(to_json(a)) == a);

    const Dataset d = simulate_dataset(50, 3, Eigen::Vector3d(1, 2, 3), 1.0, 4.0, 3);
    CHECK(d.p() == 3);
    CHECK(d.X().col(0).isOnes());
}

TEST_CASE("cli commands and exit codes") {
    const fs::path out = scratch("cli");
    CHECK(cli({"audit", "--n", "30", "--p", "2", "--prior", "jeffreys-rule", "--out", out.string()}) == 0);
    std::ifstream af(out / "audit.json");
    const io::json audit_doc = io::json::parse(af);
    CHECK(audit_doc.at("verdict") == "Improper");
    CHECK(audit_doc.at("critical_nu").get<double>() == 1.0 / 14.0);

    CHECK(cli({"divergence-demo", "--n", "30", "--p", "2", "--a", "2", "--nu", "0.05,1/14,0.1", "--rate", "0", "--out",
               out.string()}) == 0);
    CHECK(fs::exists(out / "divergence.csv"));
    std::ifstream df(out / "divergence.json");
    const io::json div = io::json::parse(df);
    CHECK(div.at("evidence").size() == 3);

    CHECK(cli({"prior-curve", "--prior", "jeffreys-rule", "--steps", "50", "--out", out.string()}) == 0);
    CHECK(fs::exists(out / "prior_curve.csv"));

    const fs::path custom = out / "prior.json";
    std::ofstream(custom) << R"({"schema_version": 1, "a": 2.0, "shape": "independence", "support": [1.0, null]})";
    CHECK(cli({"audit", "--n", "30", "--p", "2", "--prior", "custom:" + custom.string(), "--out", out.string()}) == 0);
    std::ifstream cf(out / "audit.json");
    CHECK(io::json::parse(cf).at("verdict") == "Inconclusive");

    CHECK(cli({"fit", "--data", kData.string(), "--prior", "jeffreys-rule", "--intercept", "--out", out.string()}) == 3);
    CHECK(cli({"audit", "--n", "2", "--p", "2", "--prior", "independence"}) == 2);
    CHECK(cli({"audit", "--n", "30", "--p", "2", "--bogus"}) == 2);
    CHECK(cli({}) == 2);

    const fs::path tiny = out / "tiny.csv";
    std::ofstream(tiny) << "y,x1,x2\n1,0,1\n2,1,0\n";
    CHECK(cli({"fit", "--data", tiny.string(), "--prior", "independence", "--intercept", "--out", out.string()}) == 2);

    CHECK(cli({"fit", "--data", kData.string(), "--prior", "independence", "--intercept", "--iters", "3000", "--burn",
               "500", "--out", out.string()}) == 0);
    std::ifstream sf(out / "summary.json");
    const Summary s = io::summary_from_json(io::json::parse(sf));
    CHECK(s.parameters.size() == 5);
    CHECK(s.get("beta_2").lower < 2.0);
    CHECK(s.get("beta_2").upper > 2.0);
    fs::remove_all(out);
}
