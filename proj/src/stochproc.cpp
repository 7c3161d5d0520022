#include "cybersir/stochproc.hpp"

#include <cmath>
#include <stdexcept>

namespace cybersir::stochproc {

CirSpec::CirSpec(double speed_, double long_mean_, double vol_, double x0_)
    : speed(speed_), long_mean(long_mean_), vol(vol_), x0(x0_)
{
    if (!(speed > 0.0))
        throw std::invalid_argument("CirSpec: speed must be > 0");
    if (!(vol > 0.0))
        throw std::invalid_argument("CirSpec: vol must be > 0");
    if (!(x0 >= 0.0))
        throw std::invalid_argument("CirSpec: x0 must be >= 0");
    if (2.0 * speed * long_mean < vol * vol)
        throw std::invalid_argument("CirSpec: Feller condition 2*speed*long_mean >= vol^2 violated");
}

double CirSpec::mean_at(double t) const
{
    const double e = std::exp(-speed * t);
    return x0 * e + long_mean * (1.0 - e);
}

double CirSpec::variance_at(double t) const
{
    const double e = std::exp(-speed * t);
    const double v2 = vol * vol;
    return x0 * (v2 / speed) * (e - e * e) + long_mean * v2 / (2.0 * speed) * (1.0 - e) * (1.0 - e);
}

TimeGrid::TimeGrid(double t0_, double horizon_, double step_)
{
    t0 = t0_;
    horizon = horizon_;
    step = step_;
    if (!(horizon > 0.0))
        throw std::invalid_argument("TimeGrid: horizon must be > 0");
    if (!(step > 0.0))
        throw std::invalid_argument("TimeGrid: step must be > 0");
    const double ratio = horizon / step;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("TimeGrid: step must divide horizon");
    n_steps_ = static_cast<std::size_t>(rounded);
}

std::vector<double> simulate_cir(const CirSpec& spec, const TimeGrid& grid, RngStream& rng)
{
    // Transition over one step: x' = c * chi2'(d, x*e/c) with
    // e = exp(-speed*dt), c = vol^2 (1-e)/(4 speed), d = 4 speed long_mean / vol^2.
    const double dt = grid.step;
    const double e = std::exp(-spec.speed * dt);
    const double c = spec.vol * spec.vol * (1.0 - e) / (4.0 * spec.speed);
    const double d = 4.0 * spec.speed * spec.long_mean / (spec.vol * spec.vol);

    std::vector<double> path(grid.points());
    path[0] = spec.x0;
    double x = spec.x0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const double ncp = x * e / c;
        x = c * rng.noncentral_chi_square(d, ncp);
        path[i] = x;
    }
    return path;
}

double logistic(double x)
{
    if (x >= 0.0)
        return 1.0 / (1.0 + std::exp(-x));
    const double ex = std::exp(x);
    return ex / (1.0 + ex);
}

std::vector<double> cumulative_hazard(std::span<const double> intensity, const TimeGrid& grid)
{
    const std::size_t n = grid.steps();
    if (intensity.size() < n)
        throw std::invalid_argument("cumulative_hazard: intensity shorter than grid");
    std::vector<double> lam(n + 1);
    lam[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (intensity[i] < 0.0)
            throw std::invalid_argument("cumulative_hazard: negative intensity");
        lam[i + 1] = lam[i] + intensity[i] * grid.step;
    }
    return lam;
}

std::optional<double> cox_first_jump(std::span<const double> intensity, const TimeGrid& grid,
                                     RngStream& rng)
{
    const std::size_t n = grid.steps();
    if (intensity.size() < n)
        throw std::invalid_argument("cox_first_jump: intensity shorter than grid");
    for (std::size_t i = 0; i < n; ++i)
        if (intensity[i] < 0.0)
            throw std::invalid_argument("cox_first_jump: negative intensity");

    const double target = rng.exponential();
    double cum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cell = intensity[i] * grid.step;
        if (cum + cell >= target) {
            // invert the linear hazard inside this cell
            return grid.time_at(i) + (target - cum) / intensity[i];
        }
        cum += cell;
    }
    return std::nullopt;
}

std::vector<double> gbm_path(double z0, double drift, double vol, const TimeGrid& grid,
                             std::span<const double> shocks)
{
    if (!(z0 > 0.0))
        throw std::invalid_argument("gbm_path: z0 must be > 0");
    if (vol < 0.0)
        throw std::invalid_argument("gbm_path: vol must be >= 0");
    if (shocks.size() < grid.steps())
        throw std::invalid_argument("gbm_path: need one shock per step");

    std::vector<double> path(grid.points());
    path[0] = z0;
    const double sqrt_dt = std::sqrt(grid.step);
    double log_z = std::log(z0);
    const double drift_term = (drift - 0.5 * vol * vol) * grid.step;
    for (std::size_t i = 1; i < path.size(); ++i) {
        log_z += drift_term + vol * sqrt_dt * shocks[i - 1];
        path[i] = std::exp(log_z);
    }
    return path;
}

double sample_severity(double alpha, double beta, RngStream& rng)
{
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("sample_severity: shapes must be positive");
    return rng.beta(alpha, beta);
}

std::vector<double> equicorrelated_normals(std::size_t n, double rho, RngStream& rng)
{
    if (n == 0)
        return {};
    std::vector<double> z(n);
    for (auto& v : z)
        v = rng.normal();
    if (n == 1)
        return z;
    if (rho == 0.0)
        return z;
    if (rho > 1.0 || rho <= -1.0 / (static_cast<double>(n) - 1.0))
        throw std::invalid_argument("equicorrelated_normals: rho outside (-1/(n-1), 1]");

    // Square root of rho*J + (1-rho)*I: alpha on the mean direction,
    // beta orthogonal to it.
    const double alpha = std::sqrt(1.0 + (static_cast<double>(n) - 1.0) * rho);
    const double beta = std::sqrt(1.0 - rho);
    double mean = 0.0;
    for (double v : z)
        mean += v;
    mean /= static_cast<double>(n);
    for (auto& v : z)
        v = beta * v + (alpha - beta) * mean;
    return z;
}

} // namespace cybersir::stochproc
