#include "tjeffreys/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <string>

#include "tjeffreys/error.hpp"
#include "tjeffreys/kernels.hpp"
#include "tjeffreys/propriety.hpp"
#include "tjeffreys/specfun.hpp"

namespace tjeffreys {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::span<const double> as_span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// Σ log λ and Σ λ, the sufficient statistics of ν | λ.
struct LambdaStats {
    double sum_log = 0.0;
    double sum = 0.0;
    int n = 0;
};

LambdaStats lambda_stats(const MixingVector& lambda) {
    LambdaStats s;
    s.n = lambda.size();
    s.sum = kernels::sum(as_span(lambda.values()));
    for (int i = 0; i < lambda.size(); ++i) s.sum_log += std::log(lambda[i]);
    return s;
}

double nu_conditional_from_stats(double nu, const LambdaStats& stats, const PriorSpec& spec, double nu_floor) {
    if (!(nu > nu_floor) || !std::isfinite(nu)) return kNegInf;
    const double prior = nu_prior_log_unnormalized(nu, spec);
    if (!std::isfinite(prior)) return kNegInf;
    const double k = 0.5 * nu;
    return prior + stats.n * (k * std::log(k) - specfun::log_gamma(k)) + (k - 1.0) * stats.sum_log - k * stats.sum;
}

std::vector<double> trapezoid_weights(std::span<const double> grid) {
    const std::size_t m = grid.size();
    std::vector<double> w(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double h = grid[i + 1] - grid[i];
        if (!(h > 0.0)) throw DomainError("grid must be strictly increasing");
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

}  // namespace

void ChainConfig::validate() const {
    if (burn_in < 0) throw ValidationError("burn-in must be >= 0");
    if (!(iterations > burn_in)) throw ValidationError("iterations must exceed burn-in");
    if (thin < 1) throw ValidationError("thin must be >= 1");
    if (!(nu_proposal_sd > 0.0) || !std::isfinite(nu_proposal_sd)) {
        throw ValidationError("nu proposal sd must be positive");
    }
    if (!(nu_floor >= 0.0) || !std::isfinite(nu_floor)) throw ValidationError("nu floor must be >= 0");
    if (fixed_nu && !(*fixed_nu > nu_floor)) throw ValidationError("fixed nu must exceed the nu floor");
}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

double Rng::gamma(double shape, double rate) {
    return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

ShapeRate sigma2_conditional(const ChainState& state, const Dataset& data, const PriorSpec& spec) {
    const double shape = 0.5 * data.n() + spec.a() - 1.0;
    if (!(shape > 0.0)) throw DomainError("sigma2 conditional has nonpositive shape n/2 + a - 1");
    return {shape, 0.5 * weighted_residual_sum_squares(state.beta, state.lambda, data)};
}

ShapeRate lambda_conditional(const ChainState& state, const Dataset& data, int i) {
    const double r = data.y()[i] - data.X().row(i).dot(state.beta);
    return {0.5 * (state.nu + 1.0), 0.5 * (state.nu + r * r / state.sigma2)};
}

double nu_conditional_log_density(double nu, const MixingVector& lambda, const PriorSpec& spec, double nu_floor) {
    return nu_conditional_from_stats(nu, lambda_stats(lambda), spec, nu_floor);
}

Eigen::VectorXd update_beta(const ChainState& state, const Dataset& data, Rng& rng) {
    const WlsDecomposition wls = weighted_regression(data, state.lambda);
    Eigen::VectorXd z(data.p());
    for (int j = 0; j < data.p(); ++j) z[j] = rng.normal();
    // R'R = A, so b + σ R⁻¹z ~ N(b, σ² A⁻¹).
    const Eigen::VectorXd step = wls.R.triangularView<Eigen::Upper>().solve(z);
    return wls.b + std::sqrt(state.sigma2) * step;
}

double update_sigma2(const ChainState& state, const Dataset& data, const PriorSpec& spec, Rng& rng) {
    const ShapeRate ig = sigma2_conditional(state, data, spec);
    return 1.0 / rng.gamma(ig.shape, ig.rate);
}

MixingVector update_lambda(const ChainState& state, const Dataset& data, Rng& rng) {
    const Eigen::VectorXd r = residuals(state.beta, data);
    Eigen::VectorXd rates(data.n());
    kernels::gamma_rates(as_span(r), state.nu, 1.0 / state.sigma2,
                         {rates.data(), static_cast<std::size_t>(rates.size())});
    const double shape = 0.5 * (state.nu + 1.0);
    Eigen::VectorXd draws(data.n());
    for (int i = 0; i < data.n(); ++i) {
        // Guard against an exact zero from the gamma generator at tiny shapes.
        draws[i] = std::max(rng.gamma(shape, rates[i]), std::numeric_limits<double>::min());
    }
    return MixingVector(std::move(draws));
}

NuUpdate nu_metropolis_step(const ChainState& state, const PriorSpec& spec, const ChainConfig& config,
                            double proposed_nu, double uniform) {
    if (!(proposed_nu > config.nu_floor)) return {state.nu, false};
    const LambdaStats stats = lambda_stats(state.lambda);
    const double current = nu_conditional_from_stats(state.nu, stats, spec, config.nu_floor) + std::log(state.nu);
    const double proposed = nu_conditional_from_stats(proposed_nu, stats, spec, config.nu_floor) + std::log(proposed_nu);
    if (proposed_nu == state.nu) return {state.nu, true};
    if (!std::isfinite(proposed)) return {state.nu, false};
    const double log_ratio = proposed - current;
    if (log_ratio >= 0.0 || std::log(uniform) < log_ratio) return {proposed_nu, true};
    return {state.nu, false};
}

NuUpdate update_nu(const ChainState& state, const Dataset& /*data*/, const PriorSpec& spec, const ChainConfig& config,
                   Rng& rng) {
    const double proposal = state.nu * std::exp(config.nu_proposal_sd * rng.normal());
    const double u = rng.uniform();
    return nu_metropolis_step(state, spec, config, proposal, u);
}

ChainState initial_state(const Dataset& data, const ChainConfig& config) {
    ChainState state;
    state.lambda = MixingVector::ones(data.n());
    const WlsDecomposition ols = weighted_regression(data, state.lambda);
    state.beta = ols.b;
    state.sigma2 = std::max(ols.s2 / (data.n() - data.p()), 1e-12);
    state.nu = config.fixed_nu ? *config.fixed_nu : std::max(5.0, 2.0 * config.nu_floor);
    return state;
}

Trace run_chain(const Dataset& data, const PriorSpec& spec, const ChainConfig& config) {
    config.validate();
    if (spec.p() != data.p()) throw ValidationError("prior p does not match the dataset");

    const double threshold = critical_nu(spec.a(), data.n(), data.p());
    const PriorSpec effective = config.nu_floor > 0.0 ? spec.truncated(config.nu_floor) : spec;
    if (!config.fixed_nu) {
        const AuditReport report = audit(data, effective, std::span<const double>{});
        if (report.verdict == Verdict::Improper) {
            throw ImproperPosteriorError(
                "refusing to sample: with sigma^2 exponent a=" + std::to_string(spec.a()) +
                " the posterior is improper unless pi(nu)=0 on (0, " + std::to_string(threshold) +
                "] (necessary condition for propriety, n=" + std::to_string(data.n()) + ", p=" +
                std::to_string(data.p()) + "). Set a nu floor above " + std::to_string(threshold) +
                " to sample a truncated-support variant.");
        }
    }

    Rng rng(config.seed);
    ChainState state = initial_state(data, config);
    Trace trace;
    trace.config = config;
    trace.seed = config.seed;
    trace.p = data.p();
    trace.draws.reserve(config.retained_draws());
    trace.iterations.reserve(config.retained_draws());
    int accepted = 0;

    for (int iter = 0; iter < config.iterations; ++iter) {
        state.beta = update_beta(state, data, rng);
        state.sigma2 = update_sigma2(state, data, effective, rng);
        state.lambda = update_lambda(state, data, rng);
        if (!config.fixed_nu) {
            const NuUpdate step = update_nu(state, data, effective, config, rng);
            state.nu = step.nu;
            accepted += step.accepted ? 1 : 0;
        }
        if (iter >= config.burn_in && (iter - config.burn_in + 1) % config.thin == 0) {
            trace.draws.push_back({state.beta, state.sigma2, state.nu});
            trace.iterations.push_back(iter);
        }
    }
    trace.acceptance_rate_nu = config.fixed_nu ? 0.0 : static_cast<double>(accepted) / config.iterations;
    return trace;
}

std::vector<Trace> run_chains(const Dataset& data, const PriorSpec& spec, const ChainConfig& config, int chains) {
    if (chains < 1) throw ValidationError("need at least one chain");
    std::vector<std::future<Trace>> pending;
    pending.reserve(chains);
    for (int c = 0; c < chains; ++c) {
        ChainConfig cfg = config;
        cfg.seed = derive_seed(config.seed, static_cast<std::uint64_t>(c));
        pending.push_back(std::async(std::launch::async, [&data, &spec, cfg] { return run_chain(data, spec, cfg); }));
    }
    std::vector<Trace> traces;
    traces.reserve(chains);
    for (auto& f : pending) traces.push_back(f.get());
    return traces;
}

GridPosterior grid_posterior_oracle(const Dataset& data, const PriorSpec& spec, std::span<const double> beta_grid,
                                    std::span<const double> sigma2_grid, std::span<const double> nu_grid) {
    if (data.p() != 1) throw DomainError("grid oracle supports p = 1 only");
    const std::size_t nb = beta_grid.size();
    const std::size_t ns = sigma2_grid.size();
    const std::size_t nv = nu_grid.size();
    if (nb < 2 || ns < 2 || nv < 2) throw DomainError("grid oracle needs at least two points per axis");
    if (nb > 200 || ns > 200 || nv > 200) throw DomainError("grid oracle is limited to 200 points per axis");
    if (!(sigma2_grid.front() > 0.0) || !(nu_grid.front() > 0.0)) throw DomainError("sigma2 and nu grids must be > 0");

    const std::vector<double> wb = trapezoid_weights(beta_grid);
    const std::vector<double> ws = trapezoid_weights(sigma2_grid);
    const std::vector<double> wv = trapezoid_weights(nu_grid);
    const Eigen::VectorXd& y = data.y();
    const Eigen::VectorXd x = data.X().col(0);
    const int n = data.n();

    // Log posterior on the grid: Student-t likelihood + prior.
    std::vector<double> logpost(nb * ns * nv);
    auto at = [ns, nv](std::size_t i, std::size_t j, std::size_t k) { return (i * ns + j) * nv + k; };
    double max_log = kNegInf;
    for (std::size_t k = 0; k < nv; ++k) {
        const double nu = nu_grid[k];
        const double log_norm = specfun::log_gamma(0.5 * (nu + 1.0)) - specfun::log_gamma(0.5 * nu) -
                                0.5 * std::log(nu * std::numbers::pi);
        const double log_prior_nu = nu_prior_log_unnormalized(nu, spec);
        for (std::size_t j = 0; j < ns; ++j) {
            const double s2 = sigma2_grid[j];
            const double base = n * log_norm - 0.5 * n * std::log(s2) - spec.a() * std::log(s2) + log_prior_nu;
            for (std::size_t i = 0; i < nb; ++i) {
                double kernel = 0.0;
                for (int obs = 0; obs < n; ++obs) {
                    const double r = y[obs] - x[obs] * beta_grid[i];
                    kernel += std::log1p(r * r / (s2 * nu));
                }
                const double v = base - 0.5 * (nu + 1.0) * kernel;
                logpost[at(i, j, k)] = v;
                max_log = std::max(max_log, v);
            }
        }
    }
    if (!std::isfinite(max_log)) throw Error("grid oracle: posterior vanishes on the whole grid");

    GridPosterior out;
    out.beta_grid.assign(beta_grid.begin(), beta_grid.end());
    out.sigma2_grid.assign(sigma2_grid.begin(), sigma2_grid.end());
    out.nu_grid.assign(nu_grid.begin(), nu_grid.end());
    out.beta_marginal.assign(nb, 0.0);
    out.sigma2_marginal.assign(ns, 0.0);
    out.nu_marginal.assign(nv, 0.0);

    double mass = 0.0;
    double boundary = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
        for (std::size_t j = 0; j < ns; ++j) {
            for (std::size_t k = 0; k < nv; ++k) {
                const double f = std::exp(logpost[at(i, j, k)] - max_log);
                const double cell = wb[i] * ws[j] * wv[k] * f;
                mass += cell;
                out.beta_marginal[i] += ws[j] * wv[k] * f;
                out.sigma2_marginal[j] += wb[i] * wv[k] * f;
                out.nu_marginal[k] += wb[i] * ws[j] * f;
                if (i == 0 || j == 0 || k == 0 || i + 1 == nb || j + 1 == ns || k + 1 == nv) boundary += cell;
            }
        }
    }
    for (auto& v : out.beta_marginal) v /= mass;
    for (auto& v : out.sigma2_marginal) v /= mass;
    for (auto& v : out.nu_marginal) v /= mass;

    auto moment = [](std::span<const double> grid, const std::vector<double>& w, const std::vector<double>& density,
                     auto&& transform) {
        double s = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) s += w[i] * density[i] * transform(grid[i]);
        return s;
    };
    const auto identity = [](double v) { return v; };
    const auto logarithm = [](double v) { return std::log(v); };
    out.total_mass = moment(beta_grid, wb, out.beta_marginal, [](double) { return 1.0; });
    out.mean_beta = moment(beta_grid, wb, out.beta_marginal, identity);
    out.mean_sigma2 = moment(sigma2_grid, ws, out.sigma2_marginal, identity);
    out.mean_nu = moment(nu_grid, wv, out.nu_marginal, identity);
    out.mean_log_sigma2 = moment(sigma2_grid, ws, out.sigma2_marginal, logarithm);
    out.mean_log_nu = moment(nu_grid, wv, out.nu_marginal, logarithm);
    out.boundary_mass = boundary / mass;
    out.mass_escape_warning = out.boundary_mass > 0.01;
    return out;
}

}  // namespace tjeffreys
