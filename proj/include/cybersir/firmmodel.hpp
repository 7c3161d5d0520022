#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cybersir/rng.hpp"
#include "cybersir/stochproc.hpp"

namespace cybersir::firmmodel {

using stochproc::TimeGrid;

struct Subunit {
    double z0 = 0.0;     // initial daily revenue (EUR millions)
    double drift = 0.0;  // per day
    double vol = 0.0;    // per sqrt(day)
};

struct Firm {
    std::string id;
    std::string sector;
    std::vector<Subunit> subunits;
    double rho = 0.0;  // within-firm Brownian correlation

    std::size_t size() const { return subunits.size(); }
    void validate() const;
};

enum class InfectionSource { none, primary, secondary };

// Outcome of the attack-arrival simulation for one firm in one scenario.
// tau uses the convention horizon+1 = never infected.
struct InfectionRecord {
    std::vector<double> tau;
    std::vector<double> delta;     // recovery duration, 0 where never infected
    std::vector<double> severity;  // loss fraction, 0 until drawn
    std::vector<InfectionSource> source;
    double firm_tau = 0.0;  // first arrival across subunits, horizon+1 if none

    bool infected(std::size_t j, double horizon) const { return tau[j] <= horizon; }
};

// Truncated discrete Pareto (Zipf) law for firm sizes on 1..max_size with
// pmf proportional to q * exponent * k^-(1+exponent) / (1 - max_size^-exponent).
struct ZipfSpec {
    double exponent;  // in (1,2)
    double scale;     // q in (0,1]
    int max_size;

    ZipfSpec(double exponent, double scale, int max_size);

    double pmf(int k) const;                      // unnormalized fitted form
    std::vector<double> normalized_pmf() const;   // sums to 1 over 1..max_size
};

// Attack arrivals for one firm: an independent Cox first jump per subunit
// with intensity `force`, then one Bernoulli(in-firm probability at the
// firm's first arrival) draw for each still-uninfected subunit. A failed
// Bernoulli leaves the subunit exposed to its own later Cox jump.
// Recovery duration is 1/gamma evaluated at the infection day, where
// gamma_path carries the recovery rate of the firm's size group.
InfectionRecord simulate_infection_times(const Firm& firm, std::span<const double> force,
                                         std::span<const double> a_path,
                                         std::span<const double> gamma_path, const TimeGrid& grid,
                                         RngStream& rng);

// Conditional marginal CDF of a subunit's infection time at day index u,
// for a firm of the given size under piecewise-constant force and in-firm
// probability. Exact for the piecewise model simulated above.
double marginal_cdf_tau(int size, std::span<const double> force, std::span<const double> a_path,
                        const TimeGrid& grid, std::size_t u);

// Revenue of subunit j per grid point: the no-attack path outside
// [tau, tau+delta), scaled by (1-severity) inside.
std::vector<double> subunit_revenue(std::span<const double> path, const InfectionRecord& record,
                                    std::size_t j, const TimeGrid& grid);

// Instantaneous claim sum_j severity_j * 1{active at t} * path_j[t], with
// paths holding the no-attack revenue of each subunit per grid point.
double instantaneous_claim(const Firm& firm, std::span<const std::vector<double>> paths,
                           const InfectionRecord& record, std::size_t t);

// Time integral of the instantaneous claim over [t_from, t_to] (grid day
// units), trapezoidal on each subunit's active window.
double period_claim(const Firm& firm, std::span<const std::vector<double>> paths,
                    const InfectionRecord& record, double t_from, double t_to);

// E[c_t | systemic paths]: mean severity times the expected no-attack
// revenue, integrated against daily increments of the marginal CDF on the
// set where the infection is still active at t.
double conditional_expected_claim(const Firm& firm, std::span<const double> force,
                                  std::span<const double> a_path,
                                  std::span<const double> gamma_path, double pi_star,
                                  const TimeGrid& grid, std::size_t t);

std::vector<int> sample_firm_sizes(const ZipfSpec& spec, std::size_t count, RngStream& rng);

} // namespace cybersir::firmmodel
