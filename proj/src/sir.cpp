#include "cybersir/sir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cybersir::sir {

namespace {

// Pascal triangle C(j-1, k-1) for 1 <= k <= j <= n, row-major.
std::vector<double> binomial_table(std::size_t n)
{
    std::vector<double> c(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        c[j * n + 0] = 1.0;
        for (std::size_t k = 1; k <= j; ++k)
            c[j * n + k] = c[(j - 1) * n + k - 1] + ((k <= j - 1) ? c[(j - 1) * n + k] : 0.0);
    }
    return c;
}

void check_state(const SirState& state)
{
    const std::size_t k = state.s.size();
    if (k == 0 || state.i.size() != k || state.r.size() != k)
        throw std::invalid_argument("SirState: s, i, r must have equal nonzero length");
}

void check_params(const SirParamsAt& params, std::size_t groups)
{
    if (params.beta.size() != groups || params.gamma.size() != groups)
        throw std::invalid_argument("SirParamsAt: beta/gamma length mismatch");
    if (params.attack < 0.0 || params.attack > 1.0)
        throw std::invalid_argument("SirParamsAt: attack outside [0,1]");
    for (std::size_t k = 0; k < groups; ++k)
        if (params.beta[k] < 0.0 || params.gamma[k] < 0.0)
            throw std::invalid_argument("SirParamsAt: negative rate");
}

} // namespace

double average_size(const SirState& state)
{
    check_state(state);
    double n = 0.0;
    for (std::size_t k = 0; k < state.groups(); ++k)
        n += static_cast<double>(k + 1) * (state.s[k] + state.i[k] + state.r[k]);
    return n;
}

std::vector<double> splitting_matrix(double attack, std::size_t groups)
{
    if (attack < 0.0 || attack > 1.0)
        throw std::invalid_argument("splitting_matrix: attack outside [0,1]");
    if (groups == 0)
        throw std::invalid_argument("splitting_matrix: need at least one group");

    static thread_local std::vector<double> pascal;
    static thread_local std::size_t pascal_n = 0;
    if (pascal_n < groups) {
        pascal = binomial_table(groups);
        pascal_n = groups;
    }

    std::vector<double> b(groups * groups, 0.0);
    std::vector<double> pow_a(groups), pow_q(groups);
    pow_a[0] = 1.0;
    pow_q[0] = 1.0;
    for (std::size_t m = 1; m < groups; ++m) {
        pow_a[m] = pow_a[m - 1] * attack;
        pow_q[m] = pow_q[m - 1] * (1.0 - attack);
    }
    for (std::size_t j = 1; j <= groups; ++j)
        for (std::size_t k = 1; k <= j; ++k)
            b[(j - 1) * groups + (k - 1)] =
                pascal[(j - 1) * pascal_n + (k - 1)] * pow_a[k - 1] * pow_q[j - k];
    return b;
}

double force_of_infection(const SirState& state, const SirParamsAt& params, double avg_size)
{
    check_state(state);
    check_params(params, state.groups());
    if (!(avg_size > 0.0))
        throw std::invalid_argument("force_of_infection: avg_size must be > 0");
    double y = 0.0;
    for (std::size_t k = 0; k < state.groups(); ++k)
        y += params.beta[k] * static_cast<double>(k + 1) * state.i[k];
    return y / avg_size;
}

SirState euler_step(const SirState& state, const SirParamsAt& params, double avg_size, double dt)
{
    check_state(state);
    check_params(params, state.groups());
    if (!(dt > 0.0))
        throw std::invalid_argument("euler_step: dt must be > 0");

    const std::size_t kk = state.groups();
    const double y = force_of_infection(state, params, avg_size);
    const std::vector<double> b = splitting_matrix(params.attack, kk);

    SirState next = state;
    for (std::size_t k = 1; k <= kk; ++k) {
        double s_in = 0.0;  // splits of larger firms leaving a size-k susceptible rest
        for (std::size_t j = k + 1; j <= kk; ++j)
            s_in += static_cast<double>(j) * state.s[j - 1] * b[(j - 1) * kk + (j - k - 1)];
        double i_in = 0.0;  // fully infected size-k splinters of size-j firms
        for (std::size_t j = k; j <= kk; ++j)
            i_in += static_cast<double>(j) * state.s[j - 1] * b[(j - 1) * kk + (k - 1)];

        const double ds = y * (-static_cast<double>(k) * state.s[k - 1] + s_in);
        const double di = -params.gamma[k - 1] * state.i[k - 1] + y * i_in;
        const double dr = params.gamma[k - 1] * state.i[k - 1];

        next.s[k - 1] = std::max(0.0, state.s[k - 1] + dt * ds);
        next.i[k - 1] = std::max(0.0, state.i[k - 1] + dt * di);
        next.r[k - 1] = std::max(0.0, state.r[k - 1] + dt * dr);
    }
    return next;
}

SirTrajectory simulate_sir(const SirState& initial, std::span<const SirParamsAt> params_by_point,
                           const TimeGrid& grid, int substeps)
{
    check_state(initial);
    if (params_by_point.size() != grid.points())
        throw std::invalid_argument("simulate_sir: need one SirParamsAt per grid point");
    if (substeps < 1)
        throw std::invalid_argument("simulate_sir: substeps must be >= 1");

    const double n0 = average_size(initial);
    const double dt = grid.step / static_cast<double>(substeps);

    SirTrajectory traj;
    traj.states.reserve(grid.points());
    traj.force.reserve(grid.points());
    traj.params.assign(params_by_point.begin(), params_by_point.end());

    SirState state = initial;
    traj.states.push_back(state);
    traj.force.push_back(force_of_infection(state, params_by_point[0], n0));
    for (std::size_t u = 0; u < grid.steps(); ++u) {
        for (int s = 0; s < substeps; ++s)
            state = euler_step(state, params_by_point[u], n0, dt);
        traj.states.push_back(state);
        traj.force.push_back(force_of_infection(state, params_by_point[u + 1], n0));
    }
    return traj;
}

double r_max(const SirState& state, const SirParamsAt& params, double avg_size)
{
    check_state(state);
    check_params(params, state.groups());
    if (!(avg_size > 0.0))
        throw std::invalid_argument("r_max: avg_size must be > 0");

    const std::size_t kk = state.groups();
    double ratio = 0.0;
    for (std::size_t k = 0; k < kk; ++k) {
        if (params.gamma[k] <= 0.0)
            throw std::invalid_argument("r_max: gamma must be > 0 in every group");
        ratio = std::max(ratio, params.beta[k] / params.gamma[k]);
    }
    const std::vector<double> b = splitting_matrix(params.attack, kk);
    double total = 0.0;
    for (std::size_t i = 1; i <= kk; ++i) {
        double inner = 0.0;
        for (std::size_t m = i; m <= kk; ++m)
            inner += static_cast<double>(m) * state.s[m - 1] / avg_size * b[(m - 1) * kk + (i - 1)];
        total += static_cast<double>(i) * inner;
    }
    return ratio * total;
}

PeakSummary peak(const SirTrajectory& traj, std::span<const double> populations)
{
    if (traj.states.empty())
        throw std::invalid_argument("peak: empty trajectory");
    double total_firms = 0.0;
    for (double h : populations)
        total_firms += h;
    if (!(total_firms > 0.0))
        throw std::invalid_argument("peak: populations must sum to > 0");

    PeakSummary best;
    for (std::size_t u = 0; u < traj.states.size(); ++u) {
        const SirState& st = traj.states[u];
        double subunits = 0.0;
        for (std::size_t k = 0; k < st.groups(); ++k)
            subunits += static_cast<double>(k + 1) * st.i[k];
        subunits *= total_firms;
        if (subunits > best.subunits) {
            best.subunits = subunits;
            best.day = u;
        }
    }
    return best;
}

std::vector<double> prevalence(const SirTrajectory& traj, double avg_size)
{
    if (traj.states.empty())
        throw std::invalid_argument("prevalence: empty trajectory");
    if (!(avg_size > 0.0))
        throw std::invalid_argument("prevalence: avg_size must be > 0");
    std::vector<double> p;
    p.reserve(traj.states.size());
    for (const SirState& st : traj.states) {
        double mass = 0.0;
        for (std::size_t k = 0; k < st.groups(); ++k)
            mass += static_cast<double>(k + 1) * st.r[k];
        p.push_back(mass / avg_size);
    }
    return p;
}

std::vector<long> allocate_initial_infected(long subunits, std::span<const double> populations)
{
    if (subunits < 0)
        throw std::invalid_argument("allocate_initial_infected: negative subunit count");
    const std::size_t kk = populations.size();
    if (kk == 0)
        throw std::invalid_argument("allocate_initial_infected: empty populations");

    double mass_total = 0.0;
    for (std::size_t k = 0; k < kk; ++k)
        mass_total += static_cast<double>(k + 1) * populations[k];
    if (!(mass_total > 0.0))
        throw std::invalid_argument("allocate_initial_infected: zero population mass");

    // Target subunit mass per size is proportional to k*h_k; fill by whole
    // firms, then close the gap greedily by largest mass deficit.
    std::vector<double> target(kk);
    std::vector<long> firms(kk, 0);
    long allocated = 0;
    for (std::size_t k = 0; k < kk; ++k) {
        target[k] = static_cast<double>(subunits) * (static_cast<double>(k + 1) * populations[k]) /
                    mass_total;
        firms[k] = static_cast<long>(std::floor(target[k] / static_cast<double>(k + 1)));
        firms[k] = std::min(firms[k], static_cast<long>(populations[k]));
        allocated += firms[k] * static_cast<long>(k + 1);
    }
    long remaining = subunits - allocated;
    while (remaining > 0) {
        std::size_t pick = kk;
        double best_deficit = -1.0;
        for (std::size_t k = 0; k < kk; ++k) {
            if (static_cast<long>(k + 1) > remaining)
                continue;
            if (firms[k] + 1 > static_cast<long>(populations[k]))
                continue;
            const double deficit = target[k] - static_cast<double>(firms[k]) * static_cast<double>(k + 1);
            if (deficit > best_deficit) {
                best_deficit = deficit;
                pick = k;
            }
        }
        if (pick == kk)
            throw std::runtime_error("allocate_initial_infected: cannot place remaining subunits");
        firms[pick] += 1;
        remaining -= static_cast<long>(pick + 1);
    }
    return firms;
}

SirState initial_state(std::span<const double> populations, std::span<const long> infected)
{
    const std::size_t kk = populations.size();
    if (kk == 0 || infected.size() != kk)
        throw std::invalid_argument("initial_state: size mismatch");
    double h = 0.0;
    for (double v : populations)
        h += v;
    if (!(h > 0.0))
        throw std::invalid_argument("initial_state: total population must be > 0");

    SirState st;
    st.s.resize(kk);
    st.i.resize(kk);
    st.r.assign(kk, 0.0);
    for (std::size_t k = 0; k < kk; ++k) {
        if (infected[k] < 0 || static_cast<double>(infected[k]) > populations[k])
            throw std::invalid_argument("initial_state: infected count outside [0, population]");
        st.i[k] = static_cast<double>(infected[k]) / h;
        st.s[k] = (populations[k] - static_cast<double>(infected[k])) / h;
    }
    return st;
}

} // namespace cybersir::sir
