#pragma once

// Metropolis-within-Gibbs for the scale-mixture representation of the
// Student-t regression: β, σ² and each λ_i have exact conditionals, ν is
// moved by a random walk on log ν.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "tjeffreys/priors.hpp"
#include "tjeffreys/regression.hpp"

namespace tjeffreys {

struct ChainConfig {
    int iterations = 20000;
    int burn_in = 5000;
    int thin = 1;
    /// Random-walk scale on log ν.
    double nu_proposal_sd = 0.5;
    std::uint64_t seed = 1;
    /// ν proposals at or below the floor are rejected; 0 keeps the full support.
    double nu_floor = 0.0;
    /// Hold ν at this value and skip its update (e.g. ν = 1e6 for a normal fit).
    std::optional<double> fixed_nu;

    void validate() const;
    int retained_draws() const { return (iterations - burn_in) / thin; }
};

struct ChainState {
    Eigen::VectorXd beta;
    double sigma2 = 1.0;
    double nu = 5.0;
    MixingVector lambda = MixingVector::ones(1);
};

struct Draw {
    Eigen::VectorXd beta;
    double sigma2 = 0.0;
    double nu = 0.0;
};

struct Trace {
    std::vector<Draw> draws;
    /// Retained draws correspond to these iteration indices.
    std::vector<int> iterations;
    double acceptance_rate_nu = 0.0;
    ChainConfig config;
    std::uint64_t seed = 0;
    int p = 0;
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform();
    double normal();
    /// Gamma with the given shape and rate (mean shape/rate).
    double gamma(double shape, double rate);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 step; derives independent stream seeds from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

struct ShapeRate {
    double shape = 0.0;
    double rate = 0.0;
};

/// σ² | rest ~ InvGamma(n/2 + a - 1, Σλ_i r_i² / 2).
ShapeRate sigma2_conditional(const ChainState& state, const Dataset& data, const PriorSpec& spec);
/// λ_i | rest ~ Gamma((ν+1)/2, (ν + r_i²/σ²)/2).
ShapeRate lambda_conditional(const ChainState& state, const Dataset& data, int i);
/// Unnormalized log density of ν | λ: log π(ν) + Σ log f_G(λ_i | ν); -inf at or below the floor.
double nu_conditional_log_density(double nu, const MixingVector& lambda, const PriorSpec& spec, double nu_floor = 0.0);

Eigen::VectorXd update_beta(const ChainState& state, const Dataset& data, Rng& rng);
double update_sigma2(const ChainState& state, const Dataset& data, const PriorSpec& spec, Rng& rng);
MixingVector update_lambda(const ChainState& state, const Dataset& data, Rng& rng);

struct NuUpdate {
    double nu = 0.0;
    bool accepted = false;
};

NuUpdate update_nu(const ChainState& state, const Dataset& data, const PriorSpec& spec, const ChainConfig& config,
                   Rng& rng);

/// Accept/reject a given proposal with a given uniform variate; the target
/// includes the log ν Jacobian of the random walk.
NuUpdate nu_metropolis_step(const ChainState& state, const PriorSpec& spec, const ChainConfig& config,
                            double proposed_nu, double uniform);

/// β at OLS, σ² at the OLS residual variance, ν = 5 (above the floor), λ = 1.
ChainState initial_state(const Dataset& data, const ChainConfig& config);

/// Systematic scan β → σ² → λ → ν. Throws ImproperPosteriorError when the
/// audit finds the posterior improper and ν is not truncated above the threshold.
Trace run_chain(const Dataset& data, const PriorSpec& spec, const ChainConfig& config);

/// Independent chains on threads, seeds derived from config.seed.
std::vector<Trace> run_chains(const Dataset& data, const PriorSpec& spec, const ChainConfig& config, int chains);

struct GridPosterior {
    std::vector<double> beta_grid, sigma2_grid, nu_grid;
    std::vector<double> beta_marginal, sigma2_marginal, nu_marginal;
    double total_mass = 0.0;
    double mean_beta = 0.0;
    double mean_sigma2 = 0.0;
    double mean_nu = 0.0;
    double mean_log_sigma2 = 0.0;
    double mean_log_nu = 0.0;
    /// Share of the trapezoid mass on the faces of the grid box.
    double boundary_mass = 0.0;
    bool mass_escape_warning = false;
};

/// Brute-force posterior on a (β, σ², ν) grid for p = 1, with λ integrated
/// out analytically through the Student-t likelihood. Trapezoid-normalized.
GridPosterior grid_posterior_oracle(const Dataset& data, const PriorSpec& spec, std::span<const double> beta_grid,
                                    std::span<const double> sigma2_grid, std::span<const double> nu_grid);

}  // namespace tjeffreys
