#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cybersir/firmmodel.hpp"
#include "cybersir/rng.hpp"
#include "cybersir/sir.hpp"
#include "cybersir/stochproc.hpp"

namespace cybersir::episode {

// Everything one cyber-episode needs besides the firm portfolio: the
// three environmental parameter processes (recovery and out-firm rates as
// raw CIR values, the in-firm rate as the logistic of a CIR value), the
// firm populations per size with the initially infected firms, the daily
// grid, and the severity law.
struct EpisodeParams {
    stochproc::CirSpec gamma1;   // recovery rate of size-1 firms
    stochproc::CirSpec beta1;    // out-firm infection rate of size-1 firms
    stochproc::CirSpec a_tilde;  // in-firm attack rate before the logistic

    std::vector<double> populations;     // h_k firms per size, k = 1..K
    std::vector<long> initial_infected;  // infected firms per size at t0

    stochproc::TimeGrid grid{0.0, 1.0, 1.0};
    int substeps = 1;

    double severity_alpha = 0.0;
    double severity_beta = 0.0;

    double pi_star() const { return severity_alpha / (severity_alpha + severity_beta); }
    void validate() const;
};

// One Monte Carlo path of a full episode.
struct ScenarioOutcome {
    sir::SirTrajectory trajectory;
    std::vector<firmmodel::InfectionRecord> records;  // per firm
    std::vector<double> daily_loss;                   // per day, EUR millions
    double total_loss = 0.0;
};

// Daily parameter sets from one draw of the three environmental paths:
// harmonic scaling spreads (gamma_1, beta_1) across sizes, the attack
// probability is the logistic transform.
std::vector<sir::SirParamsAt> parameter_paths(const stochproc::CirSpec& gamma1,
                                              const stochproc::CirSpec& beta1,
                                              const stochproc::CirSpec& a_tilde, std::size_t groups,
                                              const stochproc::TimeGrid& grid, RngStream& rng);

std::vector<sir::SirParamsAt> draw_parameter_paths(const EpisodeParams& params, RngStream& rng);

class EpisodeSimulator {
public:
    EpisodeSimulator(EpisodeParams params, std::vector<firmmodel::Firm> firms);

    const EpisodeParams& params() const { return params_; }
    const std::vector<firmmodel::Firm>& firms() const { return firms_; }
    const sir::SirState& initial_state() const { return initial_state_; }

    // Full scenario: systemic paths, per-firm infections, severities,
    // GBM revenues on infected firms, daily and total claims.
    ScenarioOutcome simulate(const RngStream& scenario_rng, bool keep_trajectory = true) const;

    // Episode total loss only (the resimulation callback of the exact AEP).
    double exact_loss(RngStream& rng) const;

    // Idiosyncratic-risk-free episode total: per-firm conditional expected
    // claims integrated against the marginal infection-time CDF, given one
    // draw of the systemic paths.
    double approx_loss(RngStream& rng) const;

private:
    EpisodeParams params_;
    std::vector<firmmodel::Firm> firms_;
    sir::SirState initial_state_;
};

// Idiosyncratic-risk-free episode total for given systemic paths: per
// subunit, mean severity times z0/mu times the growth of the expected
// no-attack revenue over the active window, integrated against daily
// increments of the marginal infection-time CDF. Drifts below 1e-10 in
// magnitude use the analytic zero-drift limit.
double approx_episode_loss(std::span<const firmmodel::Firm> firms,
                           const sir::SirTrajectory& trajectory, double pi_star,
                           const stochproc::TimeGrid& grid);

// Expected portfolio output at day t: undisturbed revenue scaled down by
// the across-scenario mean severity of active infections per subunit.
double expected_output(std::span<const firmmodel::Firm> firms,
                       std::span<const ScenarioOutcome> outcomes, std::size_t t,
                       const stochproc::TimeGrid& grid);

// Marginal infection-time CDF at every grid point (same quantity as
// firmmodel::marginal_cdf_tau, computed in one sweep).
std::vector<double> marginal_cdf_path(int size, std::span<const double> force,
                                      std::span<const double> a_path,
                                      const stochproc::TimeGrid& grid);

} // namespace cybersir::episode
