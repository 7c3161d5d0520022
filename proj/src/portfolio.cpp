#include "cybersir/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cybersir::portfolio {

LossDistribution::LossDistribution(std::vector<double> samples) : samples_(std::move(samples))
{
    if (samples_.empty())
        throw std::invalid_argument("LossDistribution: no samples");
    for (double v : samples_)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("LossDistribution: samples must be finite and >= 0");
    std::sort(samples_.begin(), samples_.end());
}

double LossDistribution::cdf(double x) const
{
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double LossDistribution::quantile(double p) const
{
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("quantile: p outside [0,1]");
    if (p == 0.0)
        return samples_.front();
    const auto idx = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(samples_.size())) - 1.0);
    return samples_[std::min(idx, samples_.size() - 1)];
}

double LossDistribution::mean() const
{
    double total = 0.0;
    for (double v : samples_)
        total += v;
    return total / static_cast<double>(samples_.size());
}

DistributionSummary distribution_summary(const LossDistribution& dist)
{
    const std::vector<double>& xs = dist.samples();
    DistributionSummary out;
    out.mean = dist.mean();
    out.lower = xs.front();
    out.upper = xs.back();

    const std::size_t n = xs.size();
    const double span = xs.back() - xs.front();
    if (span <= 0.0) {
        out.mode = xs.front();
        return out;
    }
    const double q1 = dist.quantile(0.25);
    const double q3 = dist.quantile(0.75);
    double width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(n));
    if (!(width > 0.0))
        width = span / std::ceil(std::sqrt(static_cast<double>(n)));
    const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil(span / width)));

    std::vector<std::size_t> hist(bins, 0);
    for (double v : xs) {
        auto b = static_cast<std::size_t>((v - xs.front()) / span * static_cast<double>(bins));
        if (b >= bins)
            b = bins - 1;
        ++hist[b];
    }
    const auto it = std::max_element(hist.begin(), hist.end());
    const auto b = static_cast<std::size_t>(it - hist.begin());
    out.mode = xs.front() + (static_cast<double>(b) + 0.5) / static_cast<double>(bins) * span;
    return out;
}

double episode_loss(std::span<const double> firm_claims)
{
    double total = 0.0;
    for (double c : firm_claims) {
        if (c < 0.0)
            throw std::invalid_argument("episode_loss: negative firm claim");
        total += c;
    }
    return total;
}

std::vector<double> aep_curve(const std::function<double(RngStream&)>& sample_loss,
                              const AepConfig& cfg, const RngStream& base)
{
    if (cfg.upsilon < 0.0)
        throw std::invalid_argument("aep_curve: upsilon must be >= 0");
    if (cfg.n_outer < 1)
        throw std::invalid_argument("aep_curve: n_outer must be >= 1");
    if (!sample_loss)
        throw std::invalid_argument("aep_curve: missing loss sampler");

    std::vector<std::size_t> exceed(cfg.thresholds.size(), 0);
    for (std::size_t m = 0; m < cfg.n_outer; ++m) {
        RngStream outer = base.substream(m);
        const long episodes = outer.poisson(cfg.upsilon);
        double total = 0.0;
        for (long l = 0; l < episodes; ++l) {
            RngStream inner = outer.substream(static_cast<std::uint64_t>(l) + 1);
            total += sample_loss(inner);
        }
        for (std::size_t i = 0; i < cfg.thresholds.size(); ++i)
            if (total > cfg.thresholds[i])
                ++exceed[i];
    }

    std::vector<double> aep(cfg.thresholds.size());
    for (std::size_t i = 0; i < aep.size(); ++i)
        aep[i] = static_cast<double>(exceed[i]) / static_cast<double>(cfg.n_outer);
    return aep;
}

std::function<double(RngStream&)> pool_sampler(const LossDistribution& pool)
{
    const std::vector<double>& xs = pool.samples();
    return [xs](RngStream& rng) {
        const auto idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(xs.size()));
        return xs[std::min(idx, xs.size() - 1)];
    };
}

std::vector<double> exceedance(std::span<const double> totals, std::span<const double> thresholds)
{
    if (totals.empty())
        throw std::invalid_argument("exceedance: no totals");
    std::vector<double> out(thresholds.size());
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        std::size_t n = 0;
        for (double t : totals)
            if (t > thresholds[i])
                ++n;
        out[i] = static_cast<double>(n) / static_cast<double>(totals.size());
    }
    return out;
}

} // namespace cybersir::portfolio
