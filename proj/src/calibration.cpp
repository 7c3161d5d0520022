#include "cybersir/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cybersir/episode.hpp"
#include "cybersir/sir.hpp"

namespace cybersir::calibration {

namespace {

constexpr double kBadObjective = 1e300;
constexpr double kSigmaFloor = 1e-8;
constexpr std::uint64_t kCrnKey = 0x43524E00;  // common-random-numbers base

std::vector<double> pmf_weights(const ZipfSpec& zipf)
{
    // Population shares follow the size pmf ~ k^-(1+exponent).
    std::vector<double> w(static_cast<std::size_t>(zipf.max_size));
    double total = 0.0;
    for (int k = 1; k <= zipf.max_size; ++k) {
        w[static_cast<std::size_t>(k - 1)] =
            std::pow(static_cast<double>(k), -(1.0 + zipf.exponent));
        total += w[static_cast<std::size_t>(k - 1)];
    }
    for (double& v : w)
        v /= total;
    return w;
}

std::vector<long> largest_remainder(long total, std::span<const double> weights)
{
    double wsum = 0.0;
    for (double w : weights)
        wsum += w;
    if (!(wsum > 0.0))
        throw std::invalid_argument("largest_remainder: weights must sum to > 0");

    std::vector<long> out(weights.size(), 0);
    std::vector<std::pair<double, std::size_t>> rem;
    rem.reserve(weights.size());
    long used = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double quota = static_cast<double>(total) * weights[i] / wsum;
        out[i] = static_cast<long>(std::floor(quota));
        used += out[i];
        rem.emplace_back(quota - std::floor(quota), i);
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first)
            return a.first > b.first;
        return a.second < b.second;
    });
    for (long i = 0; i < total - used; ++i)
        out[rem[static_cast<std::size_t>(i)].second] += 1;
    return out;
}

} // namespace

void ThetaSpec::validate() const
{
    if (!(kappa_a > 0.0) || !(sigma_a > 0.0) || !(a0 > 0.0) || !(gamma1_0 > 0.0) ||
        !(beta1_0 > 0.0) || !(h_star > 0.0))
        throw std::invalid_argument("ThetaSpec: all components must be positive");
    // Feller for each induced process with long mean equal to the start value
    const double s2 = sigma_a * sigma_a;
    if (2.0 * kappa_a * a0 < s2 || 2.0 * kappa_a * gamma1_0 < s2 || 2.0 * kappa_a * beta1_0 < s2)
        throw std::invalid_argument("ThetaSpec: Feller condition violated");
}

stochproc::CirSpec ThetaSpec::gamma_spec() const
{
    return {kappa_a, gamma1_0, sigma_a, gamma1_0};
}

stochproc::CirSpec ThetaSpec::beta_spec() const
{
    return {kappa_a, beta1_0, sigma_a, beta1_0};
}

stochproc::CirSpec ThetaSpec::attack_spec() const
{
    return {kappa_a, a0, sigma_a, a0};
}

void InfectionPanel::validate() const
{
    if (counts.empty() || counts.front().empty())
        throw std::invalid_argument("InfectionPanel: empty panel");
    const std::size_t k = counts.front().size();
    for (const auto& row : counts) {
        if (row.size() != k)
            throw std::invalid_argument("InfectionPanel: ragged rows");
        for (long v : row)
            if (v < 0)
                throw std::invalid_argument("InfectionPanel: negative count");
    }
}

ZipfSpec fit_zipf_histogram(std::span<const double> counts, int max_size, ZipfFitMethod method)
{
    if (max_size < 2 || counts.size() != static_cast<std::size_t>(max_size))
        throw std::invalid_argument("fit_zipf_histogram: need counts for sizes 1..max_size, K >= 2");
    double total = 0.0;
    int nonzero = 0;
    for (double c : counts) {
        if (c < 0.0)
            throw std::invalid_argument("fit_zipf_histogram: negative count");
        total += c;
        if (c > 0.0)
            ++nonzero;
    }
    if (!(total > 0.0) || nonzero < 2)
        throw std::invalid_argument("fit_zipf_histogram: degenerate histogram");

    double exponent;
    if (method == ZipfFitMethod::least_squares) {
        // log f_k = intercept - (1+a) log k, zero bins dropped
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        int n = 0;
        for (int k = 1; k <= max_size; ++k) {
            const double c = counts[static_cast<std::size_t>(k - 1)];
            if (c <= 0.0)
                continue;
            const double x = std::log(static_cast<double>(k));
            const double y = std::log(c / total);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++n;
        }
        const double denom = static_cast<double>(n) * sxx - sx * sx;
        if (std::abs(denom) < 1e-30)
            throw std::invalid_argument("fit_zipf_histogram: degenerate fit");
        const double slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
        const double intercept = (sy - slope * sx) / static_cast<double>(n);
        exponent = -slope - 1.0;
        exponent = std::clamp(exponent, 1.0 + 1e-9, 2.0 - 1e-9);
        const double denom_k = 1.0 - std::pow(static_cast<double>(max_size), -exponent);
        double q = std::exp(intercept) * denom_k / exponent;
        q = std::clamp(q, 1e-12, 1.0);
        return {exponent, q, max_size};
    }

    // truncated power-law likelihood in the exponent, golden-section search
    auto negll = [&](double a) {
        double z = 0.0;
        for (int k = 1; k <= max_size; ++k)
            z += std::pow(static_cast<double>(k), -(1.0 + a));
        double ll = 0.0;
        for (int k = 1; k <= max_size; ++k) {
            const double c = counts[static_cast<std::size_t>(k - 1)];
            if (c > 0.0)
                ll += c * (-(1.0 + a) * std::log(static_cast<double>(k)) - std::log(z));
        }
        return -ll;
    };
    double lo = 1.0 + 1e-9, hi = 2.0 - 1e-9;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = negll(x1), f2 = negll(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = negll(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = negll(x2);
        }
    }
    exponent = 0.5 * (lo + hi);
    // scale consistent with a normalized pmf
    double z = 0.0;
    for (int k = 1; k <= max_size; ++k)
        z += std::pow(static_cast<double>(k), -(1.0 + exponent));
    const double q = std::clamp(
        (1.0 - std::pow(static_cast<double>(max_size), -exponent)) / (exponent * z), 1e-12, 1.0);
    return {exponent, q, max_size};
}

ZipfSpec fit_zipf(std::span<const int> sizes, int max_size, ZipfFitMethod method)
{
    if (sizes.empty())
        throw std::invalid_argument("fit_zipf: empty sample");
    std::vector<double> counts(static_cast<std::size_t>(max_size), 0.0);
    for (int s : sizes) {
        if (s < 1 || s > max_size)
            throw std::invalid_argument("fit_zipf: size outside 1..max_size");
        counts[static_cast<std::size_t>(s - 1)] += 1.0;
    }
    return fit_zipf_histogram(counts, max_size, method);
}

BsEstimate estimate_bs(std::span<const double> series)
{
    if (series.size() < 3)
        throw std::invalid_argument("estimate_bs: need at least 3 observations");
    for (double z : series)
        if (!(z > 0.0))
            throw std::invalid_argument("estimate_bs: revenues must be positive");

    const std::size_t n = series.size() - 1;  // number of log returns
    std::vector<double> r(n);
    for (std::size_t t = 0; t < n; ++t)
        r[t] = std::log(series[t + 1] / series[t]);
    const double rbar = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : r)
        ss += (x - rbar) * (x - rbar);
    double sigma_year = std::sqrt(ss / static_cast<double>(n));

    BsEstimate out;
    if (sigma_year < kSigmaFloor) {
        sigma_year = kSigmaFloor;
        out.sigma_floored = true;
    }
    const double mu_year = rbar + 0.5 * sigma_year * sigma_year;
    out.mu_daily = mu_year / 365.0;
    out.sigma_daily = sigma_year / std::sqrt(365.0);
    return out;
}

std::vector<Firm> build_firm_proxy(std::span<const RevenueSeries> panel, double rho)
{
    if (panel.empty())
        throw std::invalid_argument("build_firm_proxy: empty panel");
    const std::size_t years = panel.front().by_year.size();
    if (years < 3)
        throw std::invalid_argument("build_firm_proxy: need at least 3 years");

    double zbar1 = 0.0;
    for (const RevenueSeries& row : panel) {
        if (row.by_year.size() != years)
            throw std::invalid_argument("build_firm_proxy: ragged panel");
        if (!(row.by_year.front() > 0.0))
            throw std::invalid_argument("build_firm_proxy: nonpositive first-year revenue for firm " +
                                        row.firm_id);
        zbar1 += row.by_year.front();
    }
    zbar1 /= static_cast<double>(panel.size());

    std::vector<Firm> firms;
    firms.reserve(panel.size());
    for (const RevenueSeries& row : panel) {
        const auto size = static_cast<std::size_t>(std::ceil(row.by_year.front() / zbar1));
        std::vector<double> subunit_series(years);
        for (std::size_t t = 0; t < years; ++t) {
            if (!(row.by_year[t] > 0.0))
                throw std::invalid_argument("build_firm_proxy: nonpositive revenue for firm " +
                                            row.firm_id);
            subunit_series[t] = row.by_year[t] / static_cast<double>(size);
        }
        const BsEstimate bs = estimate_bs(subunit_series);

        Firm firm;
        firm.id = row.firm_id;
        firm.sector = row.sector;
        firm.rho = size > 1 ? rho : 0.0;
        firm.subunits.assign(size, firmmodel::Subunit{subunit_series.back() / 365.0, bs.mu_daily,
                                                      bs.sigma_daily});
        firm.validate();
        firms.push_back(std::move(firm));
    }
    return firms;
}

std::vector<double> allocate_populations_real(double h_star, const ZipfSpec& zipf)
{
    if (!(h_star > 0.0))
        throw std::invalid_argument("allocate_populations: h_star must be > 0");
    std::vector<double> w = pmf_weights(zipf);
    for (double& v : w)
        v *= h_star;
    return w;
}

std::vector<long> allocate_populations(double h_star, const ZipfSpec& zipf)
{
    if (!(h_star >= 1.0))
        throw std::invalid_argument("allocate_populations: h_star must be >= 1");
    const std::vector<double> quota = allocate_populations_real(h_star, zipf);
    std::vector<long> out(quota.size());
    for (std::size_t k = 0; k < quota.size(); ++k)
        out[k] = static_cast<long>(std::floor(quota[k]));
    return out;
}

RateVectors scale_rates(double gamma1, double beta1, std::size_t groups)
{
    if (!(gamma1 > 0.0) || !(beta1 > 0.0))
        throw std::invalid_argument("scale_rates: rates must be positive");
    if (groups == 0)
        throw std::invalid_argument("scale_rates: need at least one group");
    RateVectors out;
    out.gamma.resize(groups);
    out.beta.resize(groups);
    double h = 0.0;
    for (std::size_t k = 0; k < groups; ++k) {
        h += 1.0 / static_cast<double>(k + 1);
        out.gamma[k] = gamma1 / h;
        out.beta[k] = beta1 / h;
    }
    return out;
}

namespace {

// Panel preprocessing for the new-infections reading: a firm infected on
// day v stays infected while v <= u < v + 1/gamma_k, with the duration
// taken from the initial recovery rates.
std::vector<std::vector<long>> accumulate_new_infections(const InfectionPanel& panel,
                                                         const ThetaSpec& theta)
{
    const std::size_t days = panel.days();
    const std::size_t kk = panel.sizes();
    const RateVectors rates = scale_rates(theta.gamma1_0, theta.beta1_0, kk);
    std::vector<std::vector<long>> current(days, std::vector<long>(kk, 0));
    for (std::size_t k = 0; k < kk; ++k) {
        const auto window = static_cast<std::size_t>(std::max(1.0, std::ceil(1.0 / rates.gamma[k])));
        long running = 0;
        for (std::size_t u = 0; u < days; ++u) {
            running += panel.counts[u][k];
            if (u >= window)
                running -= panel.counts[u - window][k];
            current[u][k] = running;
        }
    }
    return current;
}

double objective_on_counts(const ThetaSpec& theta, const std::vector<std::vector<long>>& counts,
                           const ZipfSpec& zipf, std::size_t n_scenarios, const RngStream& base)
{
    const std::size_t days = counts.size();
    const std::size_t kk = counts.front().size();
    const stochproc::TimeGrid grid(0.0, static_cast<double>(days - 1), 1.0);

    const std::vector<double> h_k = allocate_populations_real(theta.h_star, zipf);
    if (h_k.size() < kk)
        return kBadObjective;
    double h_total = 0.0;
    for (double v : h_k)
        h_total += v;

    // initial state from the day-0 row
    sir::SirState init;
    init.s.resize(kk);
    init.i.resize(kk);
    init.r.assign(kk, 0.0);
    for (std::size_t k = 0; k < kk; ++k) {
        const double infected = static_cast<double>(counts[0][k]);
        if (infected > h_k[k])
            return kBadObjective;  // population cannot hold the observed infections
        init.i[k] = infected / h_total;
        init.s[k] = (h_k[k] - infected) / h_total;
    }

    const stochproc::CirSpec gspec = theta.gamma_spec();
    const stochproc::CirSpec bspec = theta.beta_spec();
    const stochproc::CirSpec aspec = theta.attack_spec();

    double total = 0.0;
    for (std::size_t m = 0; m < n_scenarios; ++m) {
        RngStream rng = base.substream(m);
        const std::vector<sir::SirParamsAt> daily =
            episode::parameter_paths(gspec, bspec, aspec, kk, grid, rng);
        const sir::SirTrajectory traj = sir::simulate_sir(init, daily, grid);
        // Compared in count space: a fraction-space error i/h_k - I h/h_k
        // shrinks like 1/h_star on both sides, which would let the
        // optimizer drive h_star to the box bound instead of fitting.
        double j2m = 0.0;
        for (std::size_t u = 0; u < days; ++u) {
            for (std::size_t k = 0; k < kk; ++k) {
                const double obs = static_cast<double>(counts[u][k]);
                const double sim = traj.states[u].i[k] * h_total;
                const double diff = obs - sim;
                j2m += diff * diff;
            }
        }
        total += j2m;
    }
    return total / static_cast<double>(n_scenarios);
}

} // namespace

double objective_j2(const ThetaSpec& theta, const InfectionPanel& panel, const ZipfSpec& zipf,
                    std::size_t n_scenarios, const RngStream& base, PanelSemantics semantics)
{
    if (n_scenarios < 1)
        throw std::invalid_argument("objective_j2: need at least one scenario");
    panel.validate();
    theta.validate();
    if (semantics == PanelSemantics::new_infections)
        return objective_on_counts(theta, accumulate_new_infections(panel, theta), zipf,
                                   n_scenarios, base);
    return objective_on_counts(theta, panel.counts, zipf, n_scenarios, base);
}

namespace {

using Point = std::array<double, 6>;

ThetaSpec to_theta(const Point& p)
{
    return ThetaSpec{p[0], p[1], p[2], p[3], p[4], p[5]};
}

double safe_objective(const Point& p, const InfectionPanel& panel, const ZipfSpec& zipf,
                      const CalibrationConfig& cfg, const RngStream& crn, long& evaluations)
{
    ++evaluations;
    ThetaSpec theta = to_theta(p);
    try {
        theta.validate();
    } catch (const std::invalid_argument&) {
        return kBadObjective;
    }
    return objective_j2(theta, panel, zipf, cfg.n_scenarios, crn, cfg.semantics);
}

Point clamp_to_box(Point p, const CalibrationConfig& cfg)
{
    for (std::size_t i = 0; i < 6; ++i)
        p[i] = std::clamp(p[i], cfg.lower[i], cfg.upper[i]);
    return p;
}

struct NmOutcome {
    Point best;
    double value = kBadObjective;
    bool converged = false;
};

// Nelder-Mead with reflection/expansion/contraction/shrink, proposals
// projected onto the box.
NmOutcome nelder_mead(const Point& start, const InfectionPanel& panel, const ZipfSpec& zipf,
                      const CalibrationConfig& cfg, const RngStream& crn, long& evaluations,
                      std::vector<double>& trace)
{
    constexpr double alpha = 1.0, gamma = 2.0, beta = 0.5, delta = 0.5;
    const std::size_t n = 6;

    std::vector<Point> simplex(n + 1);
    std::vector<double> value(n + 1);
    simplex[0] = clamp_to_box(start, cfg);
    for (std::size_t i = 0; i < n; ++i) {
        Point p = simplex[0];
        const double step = 0.1 * std::max(std::abs(p[i]), 0.05 * (cfg.upper[i] - cfg.lower[i]));
        p[i] += step;
        p = clamp_to_box(p, cfg);
        if (p[i] == simplex[0][i]) {
            // at the upper bound: step down instead so the simplex spans i
            p[i] = std::max(cfg.lower[i], simplex[0][i] - step);
        }
        simplex[i + 1] = p;
    }
    for (std::size_t i = 0; i <= n; ++i)
        value[i] = safe_objective(simplex[i], panel, zipf, cfg, crn, evaluations);

    NmOutcome out;
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
        const std::size_t lo = order[0], hi = order[n], second_hi = order[n - 1];

        if (value[lo] < out.value) {
            out.value = value[lo];
            out.best = simplex[lo];
            trace.push_back(out.value);
        }
        if (value[hi] - value[lo] < cfg.tolerance * (1.0 + std::abs(value[lo]))) {
            out.converged = true;
            break;
        }

        Point centroid{};
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == hi)
                continue;
            for (std::size_t d = 0; d < 6; ++d)
                centroid[d] += simplex[i][d] / static_cast<double>(n);
        }

        auto blend = [&](double coeff) {
            Point p;
            for (std::size_t d = 0; d < 6; ++d)
                p[d] = centroid[d] + coeff * (centroid[d] - simplex[hi][d]);
            return clamp_to_box(p, cfg);
        };

        const Point reflected = blend(alpha);
        const double f_ref = safe_objective(reflected, panel, zipf, cfg, crn, evaluations);
        if (f_ref < value[lo]) {
            const Point expanded = blend(gamma);
            const double f_exp = safe_objective(expanded, panel, zipf, cfg, crn, evaluations);
            if (f_exp < f_ref) {
                simplex[hi] = expanded;
                value[hi] = f_exp;
            } else {
                simplex[hi] = reflected;
                value[hi] = f_ref;
            }
            continue;
        }
        if (f_ref < value[second_hi]) {
            simplex[hi] = reflected;
            value[hi] = f_ref;
            continue;
        }
        const Point contracted = blend(-beta);
        const double f_con = safe_objective(contracted, panel, zipf, cfg, crn, evaluations);
        if (f_con < value[hi]) {
            simplex[hi] = contracted;
            value[hi] = f_con;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == lo)
                continue;
            for (std::size_t d = 0; d < 6; ++d)
                simplex[i][d] = simplex[lo][d] + delta * (simplex[i][d] - simplex[lo][d]);
            simplex[i] = clamp_to_box(simplex[i], cfg);
            value[i] = safe_objective(simplex[i], panel, zipf, cfg, crn, evaluations);
        }
    }
    // pick up the final best in case the loop ended on a shrink
    for (std::size_t i = 0; i <= n; ++i) {
        if (value[i] < out.value) {
            out.value = value[i];
            out.best = simplex[i];
            trace.push_back(out.value);
        }
    }
    return out;
}

} // namespace

CalibrationResult calibrate(const InfectionPanel& panel, const ZipfSpec& zipf,
                            const CalibrationConfig& cfg, RngStream& rng)
{
    panel.validate();
    if (cfg.n_starts < 1)
        throw std::invalid_argument("calibrate: need at least one start");

    const RngStream crn = rng.substream(kCrnKey);

    // total infected subunits at day 0 gives a floor for the population
    long initial_subunits = 0;
    for (std::size_t k = 0; k < panel.sizes(); ++k)
        initial_subunits += panel.counts[0][k] * static_cast<long>(k + 1);

    CalibrationResult result;
    result.j2 = kBadObjective;

    RngStream starts = rng.substream(0x5354u);
    for (int s = 0; s < cfg.n_starts; ++s) {
        Point p;
        if (s == 0) {
            // data-free center: mid box on a log scale
            for (std::size_t d = 0; d < 6; ++d)
                p[d] = std::sqrt(cfg.lower[d] * cfg.upper[d]);
        } else {
            for (std::size_t d = 0; d < 6; ++d) {
                const double u = starts.uniform();
                p[d] = cfg.lower[d] * std::pow(cfg.upper[d] / cfg.lower[d], u);
            }
        }
        p[5] = std::max(p[5], static_cast<double>(initial_subunits + 1));

        const NmOutcome nm =
            nelder_mead(p, panel, zipf, cfg, crn, result.evaluations, result.trace);
        if (nm.value < result.j2) {
            result.j2 = nm.value;
            result.theta = to_theta(nm.best);
            result.converged = nm.converged;
        }
    }
    if (result.j2 >= kBadObjective)
        throw std::runtime_error("calibrate: no feasible point found");

    // polish: restart a fresh simplex from the winner until it stops paying
    for (int polish = 0; polish < 3; ++polish) {
        Point p{result.theta.kappa_a,   result.theta.sigma_a, result.theta.a0,
                result.theta.gamma1_0, result.theta.beta1_0, result.theta.h_star};
        const NmOutcome nm =
            nelder_mead(p, panel, zipf, cfg, crn, result.evaluations, result.trace);
        const bool improved = nm.value < result.j2 * (1.0 - 1e-6);
        if (nm.value < result.j2) {
            result.j2 = nm.value;
            result.theta = to_theta(nm.best);
            result.converged = nm.converged;
        }
        if (!improved) {
            result.converged = result.converged || nm.converged;
            break;
        }
    }
    return result;
}

InfectionProxy infection_proxy(std::span<const SectorRate> rates, long total_infections,
                               std::span<const std::vector<long>> sector_size_table)
{
    if (rates.empty() || sector_size_table.empty())
        throw std::invalid_argument("infection_proxy: empty inputs");
    if (rates.size() != sector_size_table.size())
        throw std::invalid_argument("infection_proxy: one size row per sector required");
    if (total_infections < 0)
        throw std::invalid_argument("infection_proxy: negative total");

    double share_sum = 0.0;
    for (const SectorRate& r : rates) {
        if (r.share < 0.0)
            throw std::invalid_argument("infection_proxy: negative share");
        share_sum += r.share;
    }
    if (share_sum > 1.0 + 1e-9)
        throw std::invalid_argument("infection_proxy: shares sum above 1");

    const std::size_t sizes = sector_size_table.front().size();
    for (const auto& row : sector_size_table)
        if (row.size() != sizes || row.empty())
            throw std::invalid_argument("infection_proxy: ragged size table");

    // sector totals by largest remainder on the shares
    std::vector<double> w(rates.size());
    for (std::size_t s = 0; s < rates.size(); ++s)
        w[s] = rates[s].share;
    const long allocated_total =
        static_cast<long>(std::llround(static_cast<double>(total_infections) * share_sum));
    const std::vector<long> per_sector = largest_remainder(allocated_total, w);

    InfectionProxy out;
    out.by_sector_size.resize(rates.size());
    out.by_size.assign(sizes, 0);
    for (std::size_t s = 0; s < rates.size(); ++s) {
        out.sectors.push_back(rates[s].sector);
        std::vector<double> size_w(sizes);
        double row_sum = 0.0;
        for (std::size_t k = 0; k < sizes; ++k) {
            size_w[k] = static_cast<double>(sector_size_table[s][k]);
            row_sum += size_w[k];
        }
        if (row_sum <= 0.0) {
            // sector with no firms in the table: place everything in size 1
            size_w.assign(sizes, 0.0);
            size_w[0] = 1.0;
        }
        out.by_sector_size[s] = largest_remainder(per_sector[s], size_w);
        for (std::size_t k = 0; k < sizes; ++k)
            out.by_size[k] += out.by_sector_size[s][k];
    }
    return out;
}

} // namespace cybersir::calibration
