#include "quantdyn/random.hpp"

#include <cmath>
#include <numbers>

namespace quantdyn {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

GaussianSampler::GaussianSampler(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), state_(mix64(seed ^ (kGolden * (stream + 1)))) {}

std::uint64_t GaussianSampler::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double GaussianSampler::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double GaussianSampler::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
}

void GaussianSampler::fill(RealVector& out) {
    for (double& x : out) x = next();
}

void GaussianSampler::fill(Matrix& out) {
    for (double& x : out.data()) x = next();
}

}  // namespace quantdyn
