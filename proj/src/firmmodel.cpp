#include "cybersir/firmmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cybersir/stochproc.hpp"

namespace cybersir::firmmodel {

using stochproc::cox_first_jump;
using stochproc::logistic;

void Firm::validate() const
{
    if (subunits.empty())
        throw std::invalid_argument("Firm " + id + ": needs at least one subunit");
    for (const Subunit& su : subunits) {
        if (!(su.z0 > 0.0))
            throw std::invalid_argument("Firm " + id + ": subunit z0 must be > 0");
        if (!(su.vol > 0.0))
            throw std::invalid_argument("Firm " + id + ": subunit vol must be > 0");
    }
    if (subunits.size() > 1) {
        const double lo = -1.0 / (static_cast<double>(subunits.size()) - 1.0);
        if (rho <= lo || rho > 1.0)
            throw std::invalid_argument("Firm " + id + ": rho outside (-1/(K-1), 1]");
    }
}

ZipfSpec::ZipfSpec(double exponent_, double scale_, int max_size_)
    : exponent(exponent_), scale(scale_), max_size(max_size_)
{
    if (!(exponent > 1.0) || !(exponent < 2.0))
        throw std::invalid_argument("ZipfSpec: exponent must lie in (1,2)");
    if (!(scale > 0.0) || scale > 1.0)
        throw std::invalid_argument("ZipfSpec: scale must lie in (0,1]");
    if (max_size < 1)
        throw std::invalid_argument("ZipfSpec: max_size must be >= 1");
}

double ZipfSpec::pmf(int k) const
{
    if (k < 1 || k > max_size)
        return 0.0;
    const double denom = 1.0 - std::pow(static_cast<double>(max_size), -exponent);
    return scale * exponent * std::pow(static_cast<double>(k), -(1.0 + exponent)) / denom;
}

std::vector<double> ZipfSpec::normalized_pmf() const
{
    std::vector<double> p(static_cast<std::size_t>(max_size));
    double total = 0.0;
    for (int k = 1; k <= max_size; ++k) {
        p[static_cast<std::size_t>(k - 1)] = pmf(k);
        total += p[static_cast<std::size_t>(k - 1)];
    }
    for (double& v : p)
        v /= total;
    return p;
}

InfectionRecord simulate_infection_times(const Firm& firm, std::span<const double> force,
                                         std::span<const double> a_path,
                                         std::span<const double> gamma_path, const TimeGrid& grid,
                                         RngStream& rng)
{
    const std::size_t n = firm.size();
    const std::size_t steps = grid.steps();
    if (force.size() < steps || a_path.size() < steps || gamma_path.size() < steps)
        throw std::invalid_argument("simulate_infection_times: path shorter than grid");

    const double horizon_end = grid.time_at(steps);
    const double sentinel = horizon_end + 1.0;

    InfectionRecord rec;
    rec.tau.assign(n, sentinel);
    rec.delta.assign(n, 0.0);
    rec.severity.assign(n, 0.0);
    rec.source.assign(n, InfectionSource::none);

    // Primary arrivals: independent Cox first jumps with common intensity.
    rec.firm_tau = sentinel;
    for (std::size_t j = 0; j < n; ++j) {
        if (auto t = cox_first_jump(force, grid, rng)) {
            rec.tau[j] = *t;
            rec.source[j] = InfectionSource::primary;
            rec.firm_tau = std::min(rec.firm_tau, *t);
        }
    }

    // Secondary arrivals: one Bernoulli draw per subunit not yet infected
    // at the firm's first arrival. On failure the subunit keeps its own
    // later primary jump, if any.
    if (n >= 2 && rec.firm_tau <= horizon_end) {
        const auto day = static_cast<std::size_t>(
            std::min(std::floor((rec.firm_tau - grid.t0) / grid.step), static_cast<double>(steps - 1)));
        const double p = a_path[day];
        for (std::size_t j = 0; j < n; ++j) {
            if (rec.tau[j] <= rec.firm_tau)
                continue;
            if (rng.bernoulli(p)) {
                rec.tau[j] = rec.firm_tau;
                rec.source[j] = InfectionSource::secondary;
            }
        }
    }

    for (std::size_t j = 0; j < n; ++j) {
        if (rec.tau[j] > horizon_end)
            continue;
        const auto day = static_cast<std::size_t>(
            std::min(std::floor((rec.tau[j] - grid.t0) / grid.step), static_cast<double>(steps - 1)));
        const double g = gamma_path[day];
        if (!(g > 0.0))
            throw std::invalid_argument("simulate_infection_times: recovery rate must be > 0");
        rec.delta[j] = 1.0 / g;
    }
    return rec;
}

double marginal_cdf_tau(int size, std::span<const double> force, std::span<const double> a_path,
                        const TimeGrid& grid, std::size_t u)
{
    if (size < 1)
        throw std::invalid_argument("marginal_cdf_tau: size must be >= 1");
    if (u > grid.steps())
        throw std::invalid_argument("marginal_cdf_tau: day index beyond grid");
    if (force.size() < grid.steps() || a_path.size() < grid.steps())
        throw std::invalid_argument("marginal_cdf_tau: path shorter than grid");
    if (u == 0)
        return 0.0;

    const double k = static_cast<double>(size);
    double lam = 0.0;      // Lambda at the running grid point
    double integral = 0.0; // int_0^u Y_s e^{-(k-1) Lambda_s} (1-a_s) ds
    for (std::size_t c = 0; c < u; ++c) {
        const double y = force[c];
        if (y < 0.0)
            throw std::invalid_argument("marginal_cdf_tau: negative intensity");
        const double cell = y * grid.step;
        if (size > 1 && y > 0.0) {
            // exact integral over the cell with Lambda linear inside it
            const double km1 = k - 1.0;
            integral += (1.0 - a_path[c]) * (std::exp(-km1 * lam) - std::exp(-km1 * (lam + cell))) / km1;
        }
        lam += cell;
    }
    if (size == 1)
        return 1.0 - std::exp(-lam);
    return 1.0 - std::exp(-k * lam) - (k - 1.0) * std::exp(-lam) * integral;
}

std::vector<double> subunit_revenue(std::span<const double> path, const InfectionRecord& record,
                                    std::size_t j, const TimeGrid& grid)
{
    if (j >= record.tau.size())
        throw std::invalid_argument("subunit_revenue: subunit index out of range");
    if (path.size() < grid.points())
        throw std::invalid_argument("subunit_revenue: path shorter than grid");
    std::vector<double> out(grid.points());
    const double tau = record.tau[j];
    const double end = tau + record.delta[j];
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double t = grid.time_at(i);
        const bool active = t >= tau && t < end;
        out[i] = active ? (1.0 - record.severity[j]) * path[i] : path[i];
    }
    return out;
}

double instantaneous_claim(const Firm& firm, std::span<const std::vector<double>> paths,
                           const InfectionRecord& record, std::size_t t)
{
    if (paths.size() != firm.size())
        throw std::invalid_argument("instantaneous_claim: one path per subunit required");
    double claim = 0.0;
    for (std::size_t j = 0; j < firm.size(); ++j) {
        const double tau = record.tau[j];
        const double tt = static_cast<double>(t);
        if (tt >= tau && tt < tau + record.delta[j])
            claim += record.severity[j] * paths[j][t];
    }
    return claim;
}

namespace {

// Integral of the piecewise-linear interpolant of `path` over [lo, hi],
// in grid day units.
double integrate_linear(std::span<const double> path, const stochproc::TimeGrid& grid, double lo,
                        double hi)
{
    if (hi <= lo)
        return 0.0;
    const double step = grid.step;
    auto value_at = [&](double t) {
        const double x = (t - grid.t0) / step;
        const auto i = static_cast<std::size_t>(std::min(std::floor(x), static_cast<double>(grid.steps() - 1)));
        const double frac = x - static_cast<double>(i);
        return path[i] + frac * (path[i + 1] - path[i]);
    };
    double total = 0.0;
    double t = lo;
    while (t < hi) {
        const double cell_idx = std::floor((t - grid.t0) / step + 1e-12);
        const double cell_end = grid.t0 + (cell_idx + 1.0) * step;
        const double seg_end = std::min(hi, cell_end);
        total += 0.5 * (value_at(t) + value_at(seg_end)) * (seg_end - t);
        t = seg_end;
    }
    return total;
}

} // namespace

double period_claim(const Firm& firm, std::span<const std::vector<double>> paths,
                    const InfectionRecord& record, double t_from, double t_to)
{
    if (paths.size() != firm.size())
        throw std::invalid_argument("period_claim: one path per subunit required");
    if (!(t_from < t_to))
        throw std::invalid_argument("period_claim: reversed or empty interval");

    // Grid implied by the paths: daily points starting at day 0.
    const std::size_t points = paths.empty() ? 0 : paths[0].size();
    if (points < 2)
        throw std::invalid_argument("period_claim: paths need at least two points");
    const TimeGrid grid(0.0, static_cast<double>(points - 1), 1.0);

    double total = 0.0;
    for (std::size_t j = 0; j < firm.size(); ++j) {
        const double lo = std::max(t_from, record.tau[j]);
        const double hi = std::min(t_to, record.tau[j] + record.delta[j]);
        if (lo < hi)
            total += record.severity[j] * integrate_linear(paths[j], grid, lo, hi);
    }
    return total;
}

double conditional_expected_claim(const Firm& firm, std::span<const double> force,
                                  std::span<const double> a_path,
                                  std::span<const double> gamma_path, double pi_star,
                                  const TimeGrid& grid, std::size_t t)
{
    if (t > grid.steps())
        throw std::invalid_argument("conditional_expected_claim: day index beyond grid");
    if (gamma_path.size() < std::max<std::size_t>(t, 1))
        throw std::invalid_argument("conditional_expected_claim: gamma path shorter than t");
    if (pi_star < 0.0 || pi_star > 1.0)
        throw std::invalid_argument("conditional_expected_claim: pi_star outside [0,1]");
    if (t == 0)
        return 0.0;

    double revenue = 0.0;
    for (const Subunit& su : firm.subunits)
        revenue += su.z0 * std::exp(su.drift * static_cast<double>(t) * grid.step);

    // Stieltjes integral against daily CDF increments, indicator at the
    // left endpoint: the infection from day u is still active at t when
    // gamma_u < 1/(t-u).
    const int size = static_cast<int>(firm.size());
    double prob_active = 0.0;
    double f_prev = marginal_cdf_tau(size, force, a_path, grid, 0);
    for (std::size_t u = 0; u < t; ++u) {
        const double f_next = marginal_cdf_tau(size, force, a_path, grid, u + 1);
        const double dt_left = (static_cast<double>(t) - static_cast<double>(u)) * grid.step;
        if (gamma_path[u] < 1.0 / dt_left)
            prob_active += f_next - f_prev;
        f_prev = f_next;
    }
    return pi_star * revenue * prob_active;
}

std::vector<int> sample_firm_sizes(const ZipfSpec& spec, std::size_t count, RngStream& rng)
{
    const std::vector<double> pmf = spec.normalized_pmf();
    std::vector<double> cdf(pmf.size());
    double run = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        run += pmf[k];
        cdf[k] = run;
    }
    cdf.back() = 1.0;

    std::vector<int> sizes(count);
    for (auto& s : sizes) {
        const double u = rng.uniform();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        s = static_cast<int>(it - cdf.begin()) + 1;
    }
    return sizes;
}

} // namespace cybersir::firmmodel
