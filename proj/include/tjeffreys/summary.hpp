#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tjeffreys/sampler.hpp"

namespace tjeffreys {

struct ParameterSummary {
    std::string name;
    double mean = 0.0;
    double sd = 0.0;
    /// Equal-tailed 95% interval: the ⌈0.025m⌉-th and ⌈0.975m⌉-th order statistics.
    double lower = 0.0;
    double upper = 0.0;
    double ess = 0.0;
    bool operator==(const ParameterSummary&) const = default;
};

struct Summary {
    std::vector<ParameterSummary> parameters;  // beta_1..beta_p, sigma2, nu
    double acceptance_rate_nu = 0.0;
    int draws = 0;
    std::uint64_t seed = 0;
    bool operator==(const Summary&) const = default;

    const ParameterSummary& get(const std::string& name) const;
};

/// Geyer's initial positive sequence estimator; m for a constant series.
double effective_sample_size(std::span<const double> series);

ParameterSummary summarize_series(std::string name, std::span<const double> series);

Summary summarize(const Trace& trace);

/// Column of a trace by parameter name (beta_j, sigma2, nu).
std::vector<double> trace_column(const Trace& trace, const std::string& name);

}  // namespace tjeffreys
