#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cybersir/rng.hpp"

namespace cybersir::portfolio {

// Empirical distribution of aggregate losses, uniform weights.
class LossDistribution {
public:
    explicit LossDistribution(std::vector<double> samples);

    const std::vector<double>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }

    // Right-continuous empirical CDF.
    double cdf(double x) const;
    double quantile(double p) const;
    double min() const { return samples_.front(); }
    double max() const { return samples_.back(); }
    double mean() const;

private:
    std::vector<double> samples_;  // sorted ascending
};

struct DistributionSummary {
    double mean = 0.0;
    double mode = 0.0;   // histogram argmax, Freedman-Diaconis bin width
    double lower = 0.0;
    double upper = 0.0;
};

DistributionSummary distribution_summary(const LossDistribution& dist);

struct AepConfig {
    double upsilon = 0.0;        // Poisson mean number of episodes per horizon
    std::size_t n_outer = 1;     // Monte Carlo replications
    std::vector<double> thresholds;
    bool bootstrap = false;      // resample a fixed pool instead of resimulating
};

// Total portfolio loss of one episode: sum of per-firm period claims.
double episode_loss(std::span<const double> firm_claims);

// Compound-Poisson AEP per threshold. Episode losses come from
// `sample_loss`, which is handed an independent stream per (replication,
// episode) pair; in resimulation mode it runs a full episode, in bootstrap
// mode it resamples a pool.
std::vector<double> aep_curve(const std::function<double(RngStream&)>& sample_loss,
                              const AepConfig& cfg, const RngStream& base);

// Bootstrap helper: draws uniformly from the pool.
std::function<double(RngStream&)> pool_sampler(const LossDistribution& pool);

// Fraction of totals strictly above each threshold.
std::vector<double> exceedance(std::span<const double> totals, std::span<const double> thresholds);

} // namespace cybersir::portfolio
