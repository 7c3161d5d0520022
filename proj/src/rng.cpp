#include "cybersir/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace cybersir {

namespace {

std::uint64_t splitmix64(std::uint64_t& x)
{
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t x = a;
    std::uint64_t h = splitmix64(x);
    x = h ^ (b + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
    return splitmix64(x);
}

std::uint64_t rotl(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id)
{
    std::uint64_t x = mix(seed, stream_id);
    state_[0] = splitmix64(x);
    state_[1] = splitmix64(x);
    state_[2] = splitmix64(x);
    state_[3] = splitmix64(x);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
        state_[0] = 0x9E3779B97F4A7C15ULL;
}

RngStream RngStream::substream(std::uint64_t key) const
{
    return RngStream(seed_, mix(stream_id_, key));
}

std::uint64_t RngStream::next_u64()
{
    // xoshiro256++
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform()
{
    // 53-bit mantissa, offset by half an ulp so 0 and 1 are excluded
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal()
{
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

double RngStream::exponential()
{
    return -std::log(uniform());
}

bool RngStream::bernoulli(double p)
{
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("bernoulli: probability outside [0,1]");
    return uniform() < p;
}

double RngStream::gamma(double shape)
{
    if (!(shape > 0.0))
        throw std::invalid_argument("gamma: shape must be positive");
    if (shape < 1.0) {
        // Boost from shape+1 (Marsaglia-Tsang remark)
        const double u = uniform();
        return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang squeeze
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

double RngStream::chi_square(double dof)
{
    if (dof < 0.0)
        throw std::invalid_argument("chi_square: negative degrees of freedom");
    if (dof == 0.0)
        return 0.0;
    return 2.0 * gamma(0.5 * dof);
}

double RngStream::noncentral_chi_square(double dof, double noncentrality)
{
    if (dof < 0.0 || noncentrality < 0.0)
        throw std::invalid_argument("noncentral_chi_square: negative parameter");
    if (noncentrality == 0.0)
        return chi_square(dof);
    if (dof >= 1.0) {
        const double z = normal() + std::sqrt(noncentrality);
        return z * z + chi_square(dof - 1.0);
    }
    const long j = poisson(0.5 * noncentrality);
    return chi_square(dof + 2.0 * static_cast<double>(j));
}

double RngStream::beta(double alpha, double beta)
{
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("beta: shape parameters must be positive");
    const double x = gamma(alpha);
    const double y = gamma(beta);
    return x / (x + y);
}

long RngStream::poisson(double mean)
{
    if (mean < 0.0)
        throw std::invalid_argument("poisson: negative mean");
    if (mean == 0.0)
        return 0;
    // Split large means by infinite divisibility; product method below 64
    long total = 0;
    while (mean > 64.0) {
        mean *= 0.5;
        total += poisson(mean);
    }
    const double limit = std::exp(-mean);
    double prod = 1.0;
    long n = -1;
    do {
        prod *= uniform();
        ++n;
    } while (prod > limit);
    return total + n;
}

} // namespace cybersir
