#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cybersir/stochproc.hpp"

namespace cybersir::sir {

using stochproc::TimeGrid;

// Fractions of susceptible/infected/removed firms per size group, all
// relative to the same total firm count. The size-weighted mass
// sum_k k (S_k + I_k + R_k) is conserved by the dynamics.
struct SirState {
    std::vector<double> s;
    std::vector<double> i;
    std::vector<double> r;

    std::size_t groups() const { return s.size(); }
};

// Contagion parameters at one instant: out-firm infection rates beta_k and
// recovery rates gamma_k per size group (per day), and the in-firm attack
// probability in [0,1].
struct SirParamsAt {
    std::vector<double> beta;
    std::vector<double> gamma;
    double attack = 0.0;
};

struct SirTrajectory {
    std::vector<SirState> states;     // one per grid point
    std::vector<double> force;        // Y_t per grid point
    std::vector<SirParamsAt> params;  // parameters per grid point
};

// Size-weighted average N = sum_k k (S_k + I_k + R_k).
double average_size(const SirState& state);

// Splitting kernel b_jk: probability that a primary infection in a size-j
// firm produces k total internal infections (k-1 successes among the j-1
// remaining members, each with probability `attack`). Row-major K x K,
// lower triangular, rows sum to 1.
std::vector<double> splitting_matrix(double attack, std::size_t groups);

// Total force of infection Y = (1/N) sum_k beta_k k I_k.
double force_of_infection(const SirState& state, const SirParamsAt& params, double avg_size);

// One explicit Euler step of the multi-group splitting SIR system.
// Round-off negatives are clipped to zero without renormalizing.
SirState euler_step(const SirState& state, const SirParamsAt& params, double avg_size, double dt);

// Iterated Euler stepping over the grid with parameters given per grid
// point; substeps > 1 refines the integration inside each cell while
// holding that cell's parameters constant.
SirTrajectory simulate_sir(const SirState& initial, std::span<const SirParamsAt> params_by_point,
                           const TimeGrid& grid, int substeps = 1);

// Size-heterogeneous reproduction-number bound
// R_max = [max_k beta_k/gamma_k] sum_i i sum_{m>=i} (m S_m / N) b_mi.
// Below 1 the total infected subunit count strictly decreases.
double r_max(const SirState& state, const SirParamsAt& params, double avg_size);

struct PeakSummary {
    double subunits = 0.0;  // max total infected subunits
    std::size_t day = 0;    // first argmax
};

// Peak of the total infected subunit count h * sum_k k I_k, where h is the
// total firm count behind the state's fractions (sum of `populations`).
PeakSummary peak(const SirTrajectory& traj, std::span<const double> populations);

// Fraction of recovered subunits (1/N) sum_k k R_k per grid point.
std::vector<double> prevalence(const SirTrajectory& traj, double avg_size);

// Integer firm counts per size holding `subunits` infected subunits, with
// subunit mass allocated across sizes proportionally to k*h_k.
std::vector<long> allocate_initial_infected(long subunits, std::span<const double> populations);

// State with infected[k] firms of each size (counts) taken out of the
// per-size populations; fractions of the total firm count, removed zero.
SirState initial_state(std::span<const double> populations, std::span<const long> infected);

} // namespace cybersir::sir
