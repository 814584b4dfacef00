#include "tjeffreys/summary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tjeffreys/error.hpp"

namespace tjeffreys {

const ParameterSummary& Summary::get(const std::string& name) const {
    for (const auto& p : parameters) {
        if (p.name == name) return p;
    }
    throw DomainError("summary has no parameter '" + name + "'");
}

double effective_sample_size(std::span<const double> series) {
    const std::size_t m = series.size();
    if (m < 2) return static_cast<double>(m);
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / m;
    auto autocov = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t t = 0; t + lag < m; ++t) s += (series[t] - mean) * (series[t + lag] - mean);
        return s / m;
    };
    const double gamma0 = autocov(0);
    if (!(gamma0 > 0.0)) return static_cast<double>(m);

    // Sum adjacent-pair autocovariances while they stay positive, enforcing
    // a monotone sequence.
    double pair_sum = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; 2 * k + 1 < m; ++k) {
        double pair = autocov(2 * k) + autocov(2 * k + 1);
        if (!(pair > 0.0)) break;
        pair = std::min(pair, previous);
        previous = pair;
        pair_sum += pair;
    }
    const double tau = (-gamma0 + 2.0 * pair_sum) / gamma0;
    return tau > 0.0 ? m / tau : static_cast<double>(m);
}

ParameterSummary summarize_series(std::string name, std::span<const double> series) {
    if (series.empty()) throw DomainError("cannot summarize an empty trace");
    const std::size_t m = series.size();
    ParameterSummary out;
    out.name = std::move(name);
    out.mean = std::accumulate(series.begin(), series.end(), 0.0) / m;
    double ss = 0.0;
    for (double v : series) ss += (v - out.mean) * (v - out.mean);
    out.sd = m > 1 ? std::sqrt(ss / (m - 1)) : 0.0;

    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    auto order_stat = [&](double q) {
        const auto rank = static_cast<std::size_t>(std::ceil(q * m));
        return sorted[std::clamp<std::size_t>(rank, 1, m) - 1];
    };
    out.lower = order_stat(0.025);
    out.upper = order_stat(0.975);
    out.ess = effective_sample_size(series);
    return out;
}

std::vector<double> trace_column(const Trace& trace, const std::string& name) {
    std::vector<double> column;
    column.reserve(trace.draws.size());
    if (name == "sigma2") {
        for (const auto& d : trace.draws) column.push_back(d.sigma2);
    } else if (name == "nu") {
        for (const auto& d : trace.draws) column.push_back(d.nu);
    } else if (name.rfind("beta_", 0) == 0) {
        const int j = std::stoi(name.substr(5)) - 1;
        if (j < 0 || j >= trace.p) throw DomainError("no parameter " + name);
        for (const auto& d : trace.draws) column.push_back(d.beta[j]);
    } else {
        throw DomainError("no parameter " + name);
    }
    return column;
}

Summary summarize(const Trace& trace) {
    if (trace.draws.empty()) throw DomainError("cannot summarize an empty trace");
    Summary s;
    s.draws = static_cast<int>(trace.draws.size());
    s.acceptance_rate_nu = trace.acceptance_rate_nu;
    s.seed = trace.seed;
    for (int j = 1; j <= trace.p; ++j) {
        const std::string name = "beta_" + std::to_string(j);
        s.parameters.push_back(summarize_series(name, trace_column(trace, name)));
    }
    s.parameters.push_back(summarize_series("sigma2", trace_column(trace, "sigma2")));
    s.parameters.push_back(summarize_series("nu", trace_column(trace, "nu")));
    return s;
}

}  // namespace tjeffreys
