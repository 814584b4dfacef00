#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tjeffreys/error.hpp"
#include "tjeffreys/experiment.hpp"
#include "tjeffreys/kernels.hpp"

namespace tjeffreys::experiment {

namespace {

void add_chain_options(CLI::App& cmd, ChainConfig& chain) {
    cmd.add_option("--iters", chain.iterations, "Total iterations")->check(CLI::PositiveNumber);
    cmd.add_option("--burn", chain.burn_in, "Burn-in iterations")->check(CLI::NonNegativeNumber);
    cmd.add_option("--thin", chain.thin, "Keep every T-th draw")->check(CLI::PositiveNumber);
    cmd.add_option("--nu-proposal-sd", chain.nu_proposal_sd, "Random-walk scale on log nu")
        ->check(CLI::PositiveNumber);
}

// Writes `text` to dir/name, or stdout when dir is empty.
void emit(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
    if (dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw ValidationError("cannot write " + (dir / name).string());
    out << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Student-t linear regression under Jeffreys-type priors: propriety audits and posterior sampling"};
    app.require_subcommand(1);
    std::string simd;
    app.add_option("--simd", simd, "Kernel level (scalar|avx2); defaults to CPU detection");

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "Sample the posterior and write trace.csv + summary.json");
    fit_cmd->add_option("--data", fit.data, "Dataset CSV (header, y first)")->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("--prior", fit.prior, "independence | jeffreys-rule | custom:<file>")->required();
    fit_cmd->add_option("--nu-floor", fit.nu_floor, "Truncate nu to (floor, inf)")->check(CLI::NonNegativeNumber);
    fit_cmd->add_option("--seed", fit.chain.seed, "RNG seed");
    fit_cmd->add_option("--out", fit.out, "Output directory")->required();
    fit_cmd->add_flag("--intercept", fit.intercept, "Prepend a column of ones");
    add_chain_options(*fit_cmd, fit.chain);

    AuditOptions aud;
    std::string aud_nu;
    std::filesystem::path aud_out;
    std::filesystem::path aud_data;
    int aud_n = 0;
    int aud_p = 0;
    auto* audit_cmd = app.add_subcommand("audit", "Check the necessary condition for posterior propriety");
    auto* n_opt = audit_cmd->add_option("--n", aud_n, "Sample size");
    auto* p_opt = audit_cmd->add_option("--p", aud_p, "Number of covariates");
    auto* data_opt = audit_cmd->add_option("--data", aud_data, "Dataset CSV")->check(CLI::ExistingFile);
    data_opt->excludes(n_opt)->excludes(p_opt);
    n_opt->needs(p_opt);
    p_opt->needs(n_opt);
    audit_cmd->add_option("--prior", aud.prior, "independence | jeffreys-rule | custom:<file>")->required();
    audit_cmd->add_option("--nu", aud_nu, "Probe grid, comma separated (fractions allowed)");
    audit_cmd->add_flag("--intercept", aud.intercept, "Prepend a column of ones");
    audit_cmd->add_option("--out", aud_out, "Output directory (audit.json); stdout if omitted");

    PriorCurveOptions curve;
    std::filesystem::path curve_out;
    bool linear = false;
    auto* curve_cmd = app.add_subcommand("prior-curve", "Tabulate the normalized nu prior");
    curve_cmd->add_option("--prior", curve.prior, "independence | jeffreys-rule | custom:<file>")->required();
    curve_cmd->add_option("--p", curve.p, "Number of covariates")->check(CLI::PositiveNumber);
    curve_cmd->add_option("--nu-min", curve.nu_min, "Smallest nu")->check(CLI::PositiveNumber);
    curve_cmd->add_option("--nu-max", curve.nu_max, "Largest nu")->check(CLI::PositiveNumber);
    curve_cmd->add_option("--steps", curve.steps, "Number of grid points")->check(CLI::Range(2, 10000000));
    curve_cmd->add_flag("--linear", linear, "Linear instead of logarithmic spacing");
    curve_cmd->add_option("--out", curve_out, "Output directory (prior_curve.csv); stdout if omitted");

    CoverageOptions cov;
    std::string cov_beta;
    std::filesystem::path cov_out;
    auto* cov_cmd = app.add_subcommand("coverage", "Frequentist coverage of 95% intervals under the independence prior");
    cov_cmd->add_option("--n", cov.n, "Sample size");
    cov_cmd->add_option("--p", cov.p, "Number of covariates (intercept included)");
    cov_cmd->add_option("--true-nu", cov.true_nu, "True degrees of freedom")->check(CLI::PositiveNumber);
    cov_cmd->add_option("--true-sigma2", cov.true_sigma2, "True scale")->check(CLI::PositiveNumber);
    cov_cmd->add_option("--true-beta", cov_beta, "True coefficients, comma separated (default all ones)");
    cov_cmd->add_option("--replicates", cov.replicates, "Number of simulated datasets");
    cov_cmd->add_option("--seed", cov.seed, "Master seed");
    cov_cmd->add_option("--threads", cov.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    cov_cmd->add_option("--out", cov_out, "Output directory (coverage.json); stdout if omitted");
    add_chain_options(*cov_cmd, cov.chain);

    DivergenceOptions div;
    std::string div_nu;
    std::filesystem::path div_out;
    auto* div_cmd = app.add_subcommand("divergence-demo", "Growth of the reduced lower-bound integral as eps -> 0");
    div_cmd->add_option("--n", div.n, "Sample size")->required();
    div_cmd->add_option("--p", div.p, "Number of covariates")->required();
    div_cmd->add_option("--a", div.a, "Exponent of sigma^2 in the prior")->required();
    div_cmd->add_option("--nu", div_nu, "nu values, comma separated (fractions allowed)")->required();
    div_cmd->add_option("--rate", div.rate, "Fixed rate r (default (n-p)nu/2)")->check(CLI::NonNegativeNumber);
    div_cmd->add_option("--out", div_out, "Output directory (divergence.json, divergence.csv); stdout if omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ExitCode::Validation);
    }

    try {
        // Surface a bad TJEFFREYS_SIMD here rather than at the first kernel call.
        if (const char* env = std::getenv("TJEFFREYS_SIMD")) kernels::set_level(kernels::parse_level(env));
        if (!simd.empty()) kernels::set_level(kernels::parse_level(simd));

        if (*fit_cmd) {
            const FitResult r = cmd_fit(fit);
            std::cout << "verdict: " << to_string(r.audit.verdict) << "\n"
                      << "trace: " << r.trace_path.string() << "\n"
                      << "summary: " << r.summary_path.string() << "\n";
        } else if (*audit_cmd) {
            if (!aud_data.empty()) aud.data = aud_data;
            if (*n_opt) aud.n = aud_n;
            if (*p_opt) aud.p = aud_p;
            if (!aud_nu.empty()) aud.nu_probe = parse_number_list(aud_nu);
            emit(aud_out, "audit.json", io::to_json(cmd_audit(aud)).dump(2) + "\n");
        } else if (*curve_cmd) {
            curve.log_spacing = !linear;
            std::ostringstream csv;
            io::write_prior_curve_csv(csv, cmd_prior_curve(curve), curve.prior);
            emit(curve_out, "prior_curve.csv", csv.str());
        } else if (*cov_cmd) {
            if (!cov_beta.empty()) cov.true_beta = parse_number_list(cov_beta);
            const CoverageTable table = cmd_coverage(cov);
            emit(cov_out, "coverage.json", to_json(table).dump(2) + "\n");
        } else if (*div_cmd) {
            div.nu = parse_number_list(div_nu);
            const auto evidence = cmd_divergence_demo(div);
            emit(div_out, "divergence.json", divergence_to_json(div, evidence).dump(2) + "\n");
            if (!div_out.empty()) {
                std::ostringstream csv;
                io::write_divergence_csv(csv, evidence);
                emit(div_out, "divergence.csv", csv.str());
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::NumericalFailure);
    }
    return static_cast<int>(ExitCode::Success);
}

}  // namespace tjeffreys::experiment
