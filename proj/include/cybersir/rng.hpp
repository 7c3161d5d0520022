#pragma once

#include <cstdint>

namespace cybersir {

// Reproducible random stream addressed by (seed, stream_id).
//
// Streams are derived by counter-based splitting from the master seed:
// the pair (seed, stream_id) is hashed into the generator state, so the
// path of stream k does not depend on how many other streams were drawn
// from, or in which order. substream(key) derives a further independent
// stream, which lets a scenario hand private streams to each firm or
// episode without coordination.
//
// Engine: xoshiro256++ seeded through splitmix64.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Independent stream deterministic in (seed, stream_id, key).
    RngStream substream(std::uint64_t key) const;

    std::uint64_t next_u64();

    double uniform();      // strictly inside (0,1)
    double normal();       // standard normal
    double exponential();  // mean 1
    bool bernoulli(double p);

    double gamma(double shape);  // unit scale, shape > 0
    double chi_square(double dof);
    double noncentral_chi_square(double dof, double noncentrality);
    double beta(double alpha, double beta);
    long poisson(double mean);

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::uint64_t state_[4] = {0, 0, 0, 0};
};

} // namespace cybersir
