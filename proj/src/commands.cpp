#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <thread>

#include "tjeffreys/error.hpp"
#include "tjeffreys/experiment.hpp"

namespace tjeffreys::experiment {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    return out;
}

io::json chain_json(const ChainConfig& c) {
    io::json j = {{"iterations", c.iterations}, {"burn_in", c.burn_in},   {"thin", c.thin},
                  {"nu_proposal_sd", c.nu_proposal_sd}, {"seed", c.seed}, {"nu_floor", c.nu_floor}};
    return j;
}

}  // namespace

FitResult cmd_fit(const FitOptions& options) {
    if (options.out.empty()) throw ValidationError("fit: --out directory required");
    const Dataset data = io::load_dataset_csv(options.data, options.intercept);
    const PriorSpec spec = io::parse_prior(options.prior, data.p());
    ChainConfig chain = options.chain;
    if (options.nu_floor) chain.nu_floor = *options.nu_floor;
    chain.validate();

    FitResult result;
    const PriorSpec effective = chain.nu_floor > 0.0 ? spec.truncated(chain.nu_floor) : spec;
    result.audit = audit(data, effective);
    const Trace trace = run_chain(data, spec, chain);
    result.summary = summarize(trace);

    std::filesystem::create_directories(options.out);
    result.trace_path = options.out / "trace.csv";
    result.summary_path = options.out / "summary.json";
    {
        auto out = open_output(result.trace_path);
        io::write_trace_csv(out, trace);
    }
    io::json doc = io::to_json(result.summary);
    doc["prior"] = spec.label();
    doc["a"] = spec.a();
    doc["n"] = data.n();
    doc["p"] = data.p();
    doc["verdict"] = std::string(to_string(result.audit.verdict));
    doc["chain"] = chain_json(chain);
    auto out = open_output(result.summary_path);
    out << doc.dump(2) << '\n';
    return result;
}

AuditReport cmd_audit(const AuditOptions& options) {
    if (options.data) {
        const Dataset data = io::load_dataset_csv(*options.data, options.intercept);
        return audit(data, io::parse_prior(options.prior, data.p()), options.nu_probe);
    }
    if (!options.n || !options.p) throw ValidationError("audit: give --n and --p, or --data");
    if (*options.p < 1 || *options.n <= *options.p) throw ValidationError("audit: need n > p >= 1");
    return audit(*options.n, *options.p, io::parse_prior(options.prior, *options.p), options.nu_probe);
}

std::vector<io::PriorCurvePoint> cmd_prior_curve(const PriorCurveOptions& options) {
    if (!(options.nu_min > 0.0) || !(options.nu_max > options.nu_min) || !std::isfinite(options.nu_max)) {
        throw ValidationError("prior-curve: need 0 < nu-min < nu-max < inf");
    }
    if (options.steps < 2) throw ValidationError("prior-curve: steps must be >= 2");
    const PriorSpec spec = io::parse_prior(options.prior, options.p);
    const double z = nu_prior_normalizer(spec, options.quad_tol);

    std::vector<io::PriorCurvePoint> rows;
    rows.reserve(options.steps);
    for (int k = 0; k < options.steps; ++k) {
        const double t = static_cast<double>(k) / (options.steps - 1);
        const double nu = options.log_spacing
                              ? std::exp(std::log(options.nu_min) + t * (std::log(options.nu_max) - std::log(options.nu_min)))
                              : options.nu_min + t * (options.nu_max - options.nu_min);
        const double lp = nu_prior_log_unnormalized(nu, spec);
        rows.push_back({nu, lp, std::exp(lp) / z});
    }
    return rows;
}

const CoverageRow& CoverageTable::get(const std::string& parameter) const {
    for (const auto& r : rows) {
        if (r.parameter == parameter) return r;
    }
    throw DomainError("coverage table has no row '" + parameter + "'");
}

Dataset simulate_dataset(int n, int p, const Eigen::VectorXd& beta, double sigma2, double nu, std::uint64_t seed) {
    if (p < 1 || n <= p) throw ValidationError("simulation: need n > p >= 1");
    if (beta.size() != p) throw ValidationError("simulation: true beta must have p entries");
    if (!(sigma2 > 0.0) || !(nu > 0.0)) throw ValidationError("simulation: sigma2 and nu must be positive");
    Rng rng(seed);
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    const double sigma = std::sqrt(sigma2);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (int j = 1; j < p; ++j) X(i, j) = rng.normal();
        // t_ν error as a normal over the root of a Gamma(ν/2, ν/2) precision.
        const double precision = rng.gamma(0.5 * nu, 0.5 * nu);
        y[i] = X.row(i).dot(beta) + sigma * rng.normal() / std::sqrt(precision);
    }
    return Dataset(std::move(y), std::move(X));
}

CoverageTable cmd_coverage(const CoverageOptions& options) {
    if (options.replicates < 1) throw ValidationError("coverage: replicates must be >= 1 (empty table)");
    if (options.p < 1 || options.n <= options.p) throw ValidationError("coverage: need n > p >= 1");
    options.chain.validate();
    Eigen::VectorXd beta = Eigen::VectorXd::Ones(options.p);
    if (!options.true_beta.empty()) {
        if (static_cast<int>(options.true_beta.size()) != options.p) {
            throw ValidationError("coverage: true beta must have p entries");
        }
        beta = Eigen::Map<const Eigen::VectorXd>(options.true_beta.data(), options.p);
    }

    std::vector<std::string> names;
    std::vector<double> truth;
    for (int j = 0; j < options.p; ++j) {
        names.push_back("beta_" + std::to_string(j + 1));
        truth.push_back(beta[j]);
    }
    names.push_back("sigma2");
    truth.push_back(options.true_sigma2);
    names.push_back("nu");
    truth.push_back(options.true_nu);

    struct Outcome {
        bool ok = false;
        std::vector<bool> covered;
        std::string error;
    };
    std::vector<Outcome> outcomes(options.replicates);
    const PriorSpec spec = PriorSpec::independence_jeffreys(options.p);

    auto run_replicate = [&](int r) {
        Outcome& o = outcomes[r];
        try {
            const std::uint64_t data_seed = derive_seed(options.seed, 2 * static_cast<std::uint64_t>(r));
            const Dataset data =
                simulate_dataset(options.n, options.p, beta, options.true_sigma2, options.true_nu, data_seed);
            ChainConfig chain = options.chain;
            chain.seed = derive_seed(options.seed, 2 * static_cast<std::uint64_t>(r) + 1);
            const Summary s = summarize(run_chain(data, spec, chain));
            for (std::size_t k = 0; k < names.size(); ++k) {
                const auto& ps = s.get(names[k]);
                o.covered.push_back(ps.lower <= truth[k] && truth[k] <= ps.upper);
            }
            o.ok = true;
        } catch (const std::exception& e) {
            o.error = "replicate " + std::to_string(r) + ": " + e.what();
        }
    };

    int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, options.replicates);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int r = next++; r < options.replicates; r = next++) run_replicate(r);
        });
    }
    for (auto& th : pool) th.join();

    CoverageTable table;
    table.n = options.n;
    table.p = options.p;
    table.replicates = options.replicates;
    table.seed = options.seed;
    table.iterations = options.chain.iterations;
    table.burn_in = options.chain.burn_in;
    for (std::size_t k = 0; k < names.size(); ++k) {
        CoverageRow row;
        row.parameter = names[k];
        row.true_value = truth[k];
        for (const auto& o : outcomes) {
            if (!o.ok) continue;
            ++row.total;
            row.covered += o.covered[k] ? 1 : 0;
        }
        if (row.total > 0) {
            row.rate = static_cast<double>(row.covered) / row.total;
            row.se = std::sqrt(row.rate * (1.0 - row.rate) / row.total);
        }
        table.rows.push_back(row);
    }
    for (const auto& o : outcomes) {
        if (!o.ok) {
            ++table.failures;
            table.failure_messages.push_back(o.error);
        }
    }
    return table;
}

io::json to_json(const CoverageTable& table) {
    io::json rows = io::json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"parameter", r.parameter},
                        {"true_value", r.true_value},
                        {"covered", r.covered},
                        {"total", r.total},
                        {"rate", r.rate},
                        {"se", r.se}});
    }
    return {{"schema_version", io::kSchemaVersion},
            {"prior", "independence"},
            {"nominal", 0.95},
            {"n", table.n},
            {"p", table.p},
            {"replicates", table.replicates},
            {"failures", table.failures},
            {"failure_messages", table.failure_messages},
            {"seed", table.seed},
            {"iterations", table.iterations},
            {"burn_in", table.burn_in},
            {"coverage", rows}};
}

CoverageTable coverage_from_json(const io::json& doc) {
    CoverageTable t;
    t.n = doc.at("n").get<int>();
    t.p = doc.at("p").get<int>();
    t.replicates = doc.at("replicates").get<int>();
    t.failures = doc.at("failures").get<int>();
    t.failure_messages = doc.value("failure_messages", std::vector<std::string>{});
    t.seed = doc.at("seed").get<std::uint64_t>();
    t.iterations = doc.at("iterations").get<int>();
    t.burn_in = doc.at("burn_in").get<int>();
    for (const auto& r : doc.at("coverage")) {
        t.rows.push_back({r.at("parameter").get<std::string>(), r.at("true_value").get<double>(),
                          r.at("covered").get<int>(), r.at("total").get<int>(), r.at("rate").get<double>(),
                          r.at("se").get<double>()});
    }
    return t;
}

std::vector<Evidence> cmd_divergence_demo(const DivergenceOptions& options) {
    if (options.p < 1 || options.n <= options.p) throw ValidationError("divergence-demo: need n > p >= 1");
    if (options.nu.empty()) throw ValidationError("divergence-demo: --nu list is empty");
    return divergence_diagnostic(options.nu, options.n, options.p, options.a, options.rate);
}

io::json divergence_to_json(const DivergenceOptions& options, const std::vector<Evidence>& evidence) {
    AuditReport carrier;
    carrier.evidence = evidence;
    io::json doc = io::to_json(carrier);
    return {{"schema_version", io::kSchemaVersion},
            {"n", options.n},
            {"p", options.p},
            {"a", options.a},
            {"critical_nu", critical_nu(options.a, options.n, options.p)},
            {"evidence", doc.at("evidence")}};
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        const std::string token = text.substr(start, end - start);
        if (token.empty()) throw ValidationError("empty entry in number list '" + text + "'");
        std::size_t used = 0;
        double value = 0.0;
        try {
            const auto slash = token.find('/');
            if (slash == std::string::npos) {
                value = std::stod(token, &used);
                if (used != token.size()) throw ValidationError("bad number");
            } else {
                std::size_t used_den = 0;
                const double num = std::stod(token.substr(0, slash), &used);
                const double den = std::stod(token.substr(slash + 1), &used_den);
                if (used != slash || used_den != token.size() - slash - 1 || den == 0.0) {
                    throw ValidationError("bad fraction");
                }
                value = num / den;
            }
        } catch (const std::exception&) {
            throw ValidationError("cannot parse '" + token + "' as a number");
        }
        values.push_back(value);
        start = end + 1;
    }
    return values;
}

}  // namespace tjeffreys::experiment
