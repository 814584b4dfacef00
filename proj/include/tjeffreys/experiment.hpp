#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tjeffreys/io.hpp"

namespace tjeffreys::experiment {

struct FitOptions {
    std::filesystem::path data;
    std::string prior = "independence";
    bool intercept = false;
    std::optional<double> nu_floor;
    ChainConfig chain;
    std::filesystem::path out;
};

struct FitResult {
    Summary summary;
    AuditReport audit;
    std::filesystem::path trace_path;
    std::filesystem::path summary_path;
};

/// Writes trace.csv and summary.json into options.out.
FitResult cmd_fit(const FitOptions& options);

struct AuditOptions {
    std::optional<int> n;
    std::optional<int> p;
    std::optional<std::filesystem::path> data;
    bool intercept = false;
    std::string prior = "jeffreys-rule";
    std::vector<double> nu_probe;
};

AuditReport cmd_audit(const AuditOptions& options);

struct PriorCurveOptions {
    std::string prior = "independence";
    int p = 1;
    double nu_min = 1e-3;
    double nu_max = 1e4;
    int steps = 400;
    bool log_spacing = true;
    double quad_tol = 1e-9;
};

/// ν grid with unnormalized log density and the density normalized by the quadrature normalizer.
std::vector<io::PriorCurvePoint> cmd_prior_curve(const PriorCurveOptions& options);

struct CoverageOptions {
    int n = 30;
    int p = 2;
    std::vector<double> true_beta;  // defaults to all ones
    double true_sigma2 = 1.0;
    double true_nu = 5.0;
    int replicates = 100;
    std::uint64_t seed = 1;
    ChainConfig chain;
    int threads = 0;  // 0 = hardware concurrency
};

struct CoverageRow {
    std::string parameter;
    double true_value = 0.0;
    int covered = 0;
    int total = 0;
    double rate = 0.0;
    double se = 0.0;
    bool operator==(const CoverageRow&) const = default;
};

struct CoverageTable {
    int n = 0;
    int p = 0;
    int replicates = 0;
    int failures = 0;
    std::uint64_t seed = 0;
    int iterations = 0;
    int burn_in = 0;
    std::vector<CoverageRow> rows;
    std::vector<std::string> failure_messages;
    bool operator==(const CoverageTable&) const = default;

    const CoverageRow& get(const std::string& parameter) const;
};

/// Design: intercept plus p-1 standard-normal covariates, errors σ·t_ν.
Dataset simulate_dataset(int n, int p, const Eigen::VectorXd& beta, double sigma2, double nu, std::uint64_t seed);

/// Independence Jeffreys fits of simulated replicates; fit errors are counted, not fatal.
CoverageTable cmd_coverage(const CoverageOptions& options);

io::json to_json(const CoverageTable& table);
CoverageTable coverage_from_json(const io::json& doc);

struct DivergenceOptions {
    int n = 30;
    int p = 2;
    double a = 2.0;
    std::vector<double> nu;
    std::optional<double> rate;
};

std::vector<Evidence> cmd_divergence_demo(const DivergenceOptions& options);
io::json divergence_to_json(const DivergenceOptions& options, const std::vector<Evidence>& evidence);

/// Parses "0.05", "1/14" style tokens from a comma-separated list.
std::vector<double> parse_number_list(const std::string& text);

/// CLI entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace tjeffreys::experiment
