#include "cybersir/episode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cybersir::episode {

using firmmodel::Firm;
using firmmodel::InfectionRecord;
using sir::SirParamsAt;
using sir::SirTrajectory;
using stochproc::TimeGrid;

namespace {

constexpr std::uint64_t kGammaKey = 1;
constexpr std::uint64_t kBetaKey = 2;
constexpr std::uint64_t kAttackKey = 3;
constexpr std::uint64_t kFirmKeyBase = 16;

std::vector<double> harmonic_numbers(std::size_t n)
{
    std::vector<double> h(n);
    double run = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        run += 1.0 / static_cast<double>(k + 1);
        h[k] = run;
    }
    return h;
}

} // namespace

void EpisodeParams::validate() const
{
    if (populations.empty())
        throw std::invalid_argument("EpisodeParams: empty populations");
    if (initial_infected.size() != populations.size())
        throw std::invalid_argument("EpisodeParams: initial_infected size mismatch");
    if (!(severity_alpha > 0.0) || !(severity_beta > 0.0))
        throw std::invalid_argument("EpisodeParams: severity shapes must be positive");
    if (substeps < 1)
        throw std::invalid_argument("EpisodeParams: substeps must be >= 1");
}

std::vector<SirParamsAt> parameter_paths(const stochproc::CirSpec& gamma1,
                                         const stochproc::CirSpec& beta1,
                                         const stochproc::CirSpec& a_tilde, std::size_t groups,
                                         const stochproc::TimeGrid& grid, RngStream& rng)
{
    const std::vector<double> h = harmonic_numbers(groups);

    RngStream rng_gamma = rng.substream(kGammaKey);
    RngStream rng_beta = rng.substream(kBetaKey);
    RngStream rng_attack = rng.substream(kAttackKey);
    const std::vector<double> g1 = stochproc::simulate_cir(gamma1, grid, rng_gamma);
    const std::vector<double> b1 = stochproc::simulate_cir(beta1, grid, rng_beta);
    const std::vector<double> at = stochproc::simulate_cir(a_tilde, grid, rng_attack);

    std::vector<SirParamsAt> out(grid.points());
    for (std::size_t u = 0; u < out.size(); ++u) {
        SirParamsAt& p = out[u];
        p.beta.resize(groups);
        p.gamma.resize(groups);
        for (std::size_t k = 0; k < groups; ++k) {
            p.gamma[k] = g1[u] / h[k];
            p.beta[k] = b1[u] / h[k];
        }
        p.attack = stochproc::logistic(at[u]);
    }
    return out;
}

std::vector<SirParamsAt> draw_parameter_paths(const EpisodeParams& params, RngStream& rng)
{
    return parameter_paths(params.gamma1, params.beta1, params.a_tilde, params.populations.size(),
                           params.grid, rng);
}

EpisodeSimulator::EpisodeSimulator(EpisodeParams params, std::vector<Firm> firms)
    : params_(std::move(params)), firms_(std::move(firms))
{
    params_.validate();
    for (const Firm& f : firms_) {
        f.validate();
        if (f.size() > params_.populations.size())
            throw std::invalid_argument("EpisodeSimulator: firm larger than the largest size group");
    }
    initial_state_ = sir::initial_state(params_.populations, params_.initial_infected);
}

ScenarioOutcome EpisodeSimulator::simulate(const RngStream& scenario_rng, bool keep_trajectory) const
{
    RngStream rng = scenario_rng;
    const TimeGrid& grid = params_.grid;
    const std::size_t days = grid.steps();

    const std::vector<SirParamsAt> daily = draw_parameter_paths(params_, rng);
    SirTrajectory traj = sir::simulate_sir(initial_state_, daily, grid, params_.substeps);

    std::vector<double> a_path(grid.points());
    for (std::size_t u = 0; u < a_path.size(); ++u)
        a_path[u] = traj.params[u].attack;

    ScenarioOutcome out;
    out.daily_loss.assign(days, 0.0);
    out.records.reserve(firms_.size());

    const double horizon_end = grid.time_at(days);
    std::vector<double> gamma_path(grid.points());
    for (std::size_t i = 0; i < firms_.size(); ++i) {
        const Firm& firm = firms_[i];
        RngStream firm_rng = rng.substream(kFirmKeyBase + i);

        for (std::size_t u = 0; u < gamma_path.size(); ++u)
            gamma_path[u] = traj.params[u].gamma[firm.size() - 1];

        InfectionRecord rec = firmmodel::simulate_infection_times(firm, traj.force, a_path,
                                                                  gamma_path, grid, firm_rng);
        bool any = false;
        for (std::size_t j = 0; j < firm.size(); ++j) {
            if (rec.tau[j] <= horizon_end) {
                rec.severity[j] =
                    stochproc::sample_severity(params_.severity_alpha, params_.severity_beta, firm_rng);
                any = true;
            }
        }

        if (any) {
            // No-attack revenue paths, correlated within the firm.
            std::vector<std::vector<double>> shocks(firm.size(), std::vector<double>(days));
            for (std::size_t u = 0; u < days; ++u) {
                const std::vector<double> eps =
                    stochproc::equicorrelated_normals(firm.size(), firm.rho, firm_rng);
                for (std::size_t j = 0; j < firm.size(); ++j)
                    shocks[j][u] = eps[j];
            }
            std::vector<std::vector<double>> paths(firm.size());
            for (std::size_t j = 0; j < firm.size(); ++j)
                paths[j] = stochproc::gbm_path(firm.subunits[j].z0, firm.subunits[j].drift,
                                               firm.subunits[j].vol, grid, shocks[j]);

            double first = horizon_end;
            double last = 0.0;
            for (std::size_t j = 0; j < firm.size(); ++j) {
                if (rec.tau[j] > horizon_end)
                    continue;
                first = std::min(first, rec.tau[j]);
                last = std::max(last, std::min(horizon_end, rec.tau[j] + rec.delta[j]));
            }
            const auto u_lo = static_cast<std::size_t>(std::max(0.0, std::floor(first - grid.t0)));
            const auto u_hi = static_cast<std::size_t>(
                std::min(static_cast<double>(days), std::ceil(last - grid.t0)));
            for (std::size_t u = u_lo; u < u_hi; ++u)
                out.daily_loss[u] += firmmodel::period_claim(
                    firm, paths, rec, static_cast<double>(u), static_cast<double>(u) + 1.0);
        }
        out.records.push_back(std::move(rec));
    }

    out.total_loss = 0.0;
    for (double l : out.daily_loss)
        out.total_loss += l;
    if (keep_trajectory)
        out.trajectory = std::move(traj);
    return out;
}

double EpisodeSimulator::exact_loss(RngStream& rng) const
{
    return simulate(rng, false).total_loss;
}

double EpisodeSimulator::approx_loss(RngStream& rng) const
{
    const std::vector<SirParamsAt> daily = draw_parameter_paths(params_, rng);
    const SirTrajectory traj =
        sir::simulate_sir(initial_state_, daily, params_.grid, params_.substeps);
    return approx_episode_loss(firms_, traj, params_.pi_star(), params_.grid);
}

double approx_episode_loss(std::span<const Firm> firms, const SirTrajectory& trajectory,
                           double pi_star, const TimeGrid& grid)
{
    const std::size_t days = grid.steps();
    const double horizon = static_cast<double>(days) * grid.step;
    if (trajectory.force.size() < grid.points() || trajectory.params.size() < grid.points())
        throw std::invalid_argument("approx_episode_loss: trajectory shorter than grid");

    std::vector<double> a_path(grid.points());
    for (std::size_t u = 0; u < a_path.size(); ++u)
        a_path[u] = trajectory.params[u].attack;

    // Marginal infection-time CDF per firm size present in the portfolio.
    std::size_t max_size = 0;
    for (const Firm& f : firms)
        max_size = std::max(max_size, f.size());
    std::vector<std::vector<double>> cdf_by_size(max_size);
    std::vector<bool> present(max_size, false);
    for (const Firm& f : firms)
        present[f.size() - 1] = true;
    for (std::size_t k = 0; k < max_size; ++k)
        if (present[k])
            cdf_by_size[k] =
                marginal_cdf_path(static_cast<int>(k + 1), trajectory.force, a_path, grid);

    double total = 0.0;
    for (const Firm& firm : firms) {
        if (firm.size() > trajectory.params[0].gamma.size())
            throw std::invalid_argument("approx_episode_loss: firm larger than parameter vectors");
        const std::vector<double>& cdf = cdf_by_size[firm.size() - 1];
        for (std::size_t u = 0; u < days; ++u) {
            const double mass = cdf[u + 1] - cdf[u];
            if (mass <= 0.0)
                continue;
            const double t_u = static_cast<double>(u) * grid.step;
            const double gamma_u = trajectory.params[u].gamma[firm.size() - 1];
            const double window_end = std::min(horizon, t_u + 1.0 / gamma_u);
            for (const firmmodel::Subunit& su : firm.subunits) {
                const double mu = su.drift;
                double integral;
                if (std::abs(mu) < 1e-10)
                    integral = window_end - t_u;
                else
                    integral = (std::exp(mu * window_end) - std::exp(mu * t_u)) / mu;
                total += pi_star * su.z0 * integral * mass;
            }
        }
    }
    return total;
}

double expected_output(std::span<const Firm> firms, std::span<const ScenarioOutcome> outcomes,
                       std::size_t t, const TimeGrid& grid)
{
    if (outcomes.empty())
        throw std::invalid_argument("expected_output: no scenarios");
    if (t >= grid.points())
        throw std::invalid_argument("expected_output: day beyond grid");

    const double tt = grid.time_at(t) - grid.t0;
    double total = 0.0;
    for (std::size_t i = 0; i < firms.size(); ++i) {
        const Firm& firm = firms[i];
        for (std::size_t j = 0; j < firm.size(); ++j) {
            double hit = 0.0;
            for (const ScenarioOutcome& sc : outcomes) {
                const InfectionRecord& rec = sc.records[i];
                const double tau = rec.tau[j];
                if (tt >= tau && tt < tau + rec.delta[j])
                    hit += rec.severity[j];
            }
            hit /= static_cast<double>(outcomes.size());
            total += firm.subunits[j].z0 * std::exp(firm.subunits[j].drift * tt) * (1.0 - hit);
        }
    }
    return total;
}

std::vector<double> marginal_cdf_path(int size, std::span<const double> force,
                                      std::span<const double> a_path, const TimeGrid& grid)
{
    const std::size_t steps = grid.steps();
    if (size < 1)
        throw std::invalid_argument("marginal_cdf_path: size must be >= 1");
    if (force.size() < steps || a_path.size() < steps)
        throw std::invalid_argument("marginal_cdf_path: path shorter than grid");

    std::vector<double> cdf(grid.points());
    cdf[0] = 0.0;
    const double k = static_cast<double>(size);
    double lam = 0.0;
    double integral = 0.0;
    for (std::size_t c = 0; c < steps; ++c) {
        const double y = force[c];
        if (y < 0.0)
            throw std::invalid_argument("marginal_cdf_path: negative intensity");
        const double cell = y * grid.step;
        if (size > 1 && y > 0.0) {
            const double km1 = k - 1.0;
            integral +=
                (1.0 - a_path[c]) * (std::exp(-km1 * lam) - std::exp(-km1 * (lam + cell))) / km1;
        }
        lam += cell;
        if (size == 1)
            cdf[c + 1] = 1.0 - std::exp(-lam);
        else
            cdf[c + 1] = 1.0 - std::exp(-k * lam) - (k - 1.0) * std::exp(-lam) * integral;
    }
    return cdf;
}

} // namespace cybersir::episode
