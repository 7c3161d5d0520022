#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cybersir/firmmodel.hpp"
#include "cybersir/rng.hpp"
#include "cybersir/stochproc.hpp"

namespace cybersir::calibration {

using firmmodel::Firm;
using firmmodel::ZipfSpec;

// The six hyper-coefficients of the contagion model: shared CIR speed and
// volatility, initial values of the in-firm (tilde space), recovery, and
// out-firm processes, and the total firm population. Long-run means equal
// the initial values.
struct ThetaSpec {
    double kappa_a = 0.0;
    double sigma_a = 0.0;
    double a0 = 0.0;        // tilde space; in-firm probability is logistic(a0)
    double gamma1_0 = 0.0;
    double beta1_0 = 0.0;
    double h_star = 0.0;

    void validate() const;

    stochproc::CirSpec gamma_spec() const;
    stochproc::CirSpec beta_spec() const;
    stochproc::CirSpec attack_spec() const;
};

// Observed infected-firm counts per day and size group.
struct InfectionPanel {
    std::vector<std::vector<long>> counts;  // [day][size], day 0..T

    std::size_t days() const { return counts.size(); }
    std::size_t sizes() const { return counts.empty() ? 0 : counts.front().size(); }
    void validate() const;
};

// How to read the panel: counts of currently infected firms (the model's
// I compartment), or daily new infections to be accumulated over the
// recovery window first.
enum class PanelSemantics { current_infected, new_infections };

enum class ZipfFitMethod { least_squares, max_likelihood };

// Fit the firm-size law from an observed histogram (real-valued counts
// allowed) or from raw sizes. Least squares regresses log frequency on
// log size; the alternative maximizes the truncated power-law likelihood.
ZipfSpec fit_zipf_histogram(std::span<const double> counts, int max_size,
                            ZipfFitMethod method = ZipfFitMethod::least_squares);
ZipfSpec fit_zipf(std::span<const int> sizes, int max_size,
                  ZipfFitMethod method = ZipfFitMethod::least_squares);

// Annual revenue history of one firm.
struct RevenueSeries {
    std::string firm_id;
    std::string sector;
    std::vector<double> by_year;  // EUR millions per year
};

struct BsEstimate {
    double mu_daily = 0.0;
    double sigma_daily = 0.0;
    bool sigma_floored = false;  // constant series hit the volatility floor
};

// Black-Scholes coefficients from an annual series: volatility from log
// returns, drift from the mean log return plus the variance correction,
// converted to daily units assuming 365 days.
BsEstimate estimate_bs(std::span<const double> series);

// Subunit proxies from annual firm revenues: size = ceil(first-year
// revenue over its sample mean), revenue split equally across subunits.
// Subunit z0 is the last observed year's daily revenue; rho is the
// within-firm correlation assigned to every firm.
std::vector<Firm> build_firm_proxy(std::span<const RevenueSeries> panel, double rho = 1.0);

// Integer firm counts per size: floor of h_star times the (normalized)
// size pmf. allocate_populations_real keeps the unfloored quotas for use
// inside the calibration objective.
std::vector<long> allocate_populations(double h_star, const ZipfSpec& zipf);
std::vector<double> allocate_populations_real(double h_star, const ZipfSpec& zipf);

struct RateVectors {
    std::vector<double> gamma;
    std::vector<double> beta;
};

// Harmonic scaling across sizes: rate_k = rate_1 / (1 + 1/2 + ... + 1/k).
RateVectors scale_rates(double gamma1, double beta1, std::size_t groups);

// Forward-simulation mean-square objective between observed and simulated
// infected-firm counts per size and day, averaged over n_scenarios
// trajectories. Scenario noise derives from `base` only, so the value is
// deterministic in (theta, base) and common random numbers hold across
// theta evaluations.
double objective_j2(const ThetaSpec& theta, const InfectionPanel& panel, const ZipfSpec& zipf,
                    std::size_t n_scenarios, const RngStream& base,
                    PanelSemantics semantics = PanelSemantics::current_infected);

struct CalibrationConfig {
    std::size_t n_scenarios = 100;
    int n_starts = 8;
    int max_iterations = 400;  // Nelder-Mead iterations per start
    double tolerance = 1e-6;   // relative simplex spread on J2
    PanelSemantics semantics = PanelSemantics::current_infected;
    // box constraints: kappa, sigma, a0, gamma1, beta1, h_star
    double lower[6] = {1e-3, 1e-4, 1e-3, 1e-3, 1e-3, 1.0};
    double upper[6] = {5.0, 0.5, 5.0, 5.0, 5.0, 1e6};
};

struct CalibrationResult {
    ThetaSpec theta;
    double j2 = 0.0;
    bool converged = false;
    long evaluations = 0;
    std::vector<double> trace;  // best J2 after each accepted improvement
};

CalibrationResult calibrate(const InfectionPanel& panel, const ZipfSpec& zipf,
                            const CalibrationConfig& cfg, RngStream& rng);

// Allocation of a total infection count to sectors (by attack share) and
// within sectors to sizes (by the sector's size distribution), integers by
// largest remainder.
struct SectorRate {
    std::string sector;
    double share = 0.0;
};

struct InfectionProxy {
    std::vector<std::string> sectors;
    std::vector<std::vector<long>> by_sector_size;  // [sector][size]
    std::vector<long> by_size;                      // column sums
};

InfectionProxy infection_proxy(std::span<const SectorRate> rates, long total_infections,
                               std::span<const std::vector<long>> sector_size_table);

} // namespace cybersir::calibration
