#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cybersir/rng.hpp"

namespace cybersir::stochproc {

// Coefficients of one mean-reverting square-root (CIR) parameter process,
// in per-day units. Construction enforces the Feller condition
// 2*speed*long_mean >= vol^2, which keeps the process strictly away from
// an absorbing zero.
struct CirSpec {
    double speed;      // mean-reversion rate, > 0
    double long_mean;  // long-run level
    double vol;        // volatility factor, > 0
    double x0;         // initial value, >= 0

    CirSpec(double speed, double long_mean, double vol, double x0);

    double mean_at(double t) const;
    double variance_at(double t) const;
};

// Uniform daily grid: points t0, t0+step, ..., t0+horizon.
struct TimeGrid {
    double t0 = 0.0;
    double horizon = 0.0;  // total length in days, > 0
    double step = 1.0;     // day fraction, > 0, must divide horizon

    TimeGrid(double t0, double horizon, double step = 1.0);

    std::size_t steps() const { return n_steps_; }
    std::size_t points() const { return n_steps_ + 1; }
    double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * step; }

private:
    std::size_t n_steps_ = 0;
};

// Exact CIR path on the grid: each transition is sampled from the
// noncentral chi-square law, so there is no discretization bias.
std::vector<double> simulate_cir(const CirSpec& spec, const TimeGrid& grid, RngStream& rng);

double logistic(double x);

// First jump of an inhomogeneous Poisson process whose intensity is
// piecewise-constant on grid cells (value at the left endpoint).
// Returns the jump time in [t0, t0+horizon], or nullopt if none occurs.
std::optional<double> cox_first_jump(std::span<const double> intensity, const TimeGrid& grid,
                                     RngStream& rng);

// Cumulative hazard of the same piecewise-constant intensity at each grid
// point: Lambda[0] = 0, Lambda[i] = sum of intensity*step over cells < i.
std::vector<double> cumulative_hazard(std::span<const double> intensity, const TimeGrid& grid);

// Geometric Brownian motion evaluated with its exact lognormal solution at
// the grid points. shocks holds one standard normal draw per step; vol = 0
// degenerates to deterministic exponential growth.
std::vector<double> gbm_path(double z0, double drift, double vol, const TimeGrid& grid,
                             std::span<const double> shocks);

// Beta-distributed loss fraction in [0,1].
double sample_severity(double alpha, double beta, RngStream& rng);

// n standard normals with pairwise correlation rho, built from one common
// factor plus idiosyncratic noise; valid for rho in (-1/(n-1), 1].
std::vector<double> equicorrelated_normals(std::size_t n, double rho, RngStream& rng);

} // namespace cybersir::stochproc
