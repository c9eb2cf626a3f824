#pragma once

#include <cstdint>

#include "quantdyn/types.hpp"

namespace quantdyn {

/// Stream ids reserved by the experiment pipeline, so one user seed yields
/// independent streams for each role.
namespace streams {
constexpr std::uint64_t kY0 = 1;
constexpr std::uint64_t kTeacher = 2;
constexpr std::uint64_t kSecondLayer = 3;
constexpr std::uint64_t kGradientBase = 16;  // + t for the step-t batch
}  // namespace streams

/**
 * Deterministic standard-normal stream.
 *
 * The generator is a splitmix64 counter sequence mapped through the
 * Box-Muller transform. The full algorithm (documented here because every
 * experiment seed ultimately flows through it):
 *
 *   state_0   = seed xor (0x9E3779B97F4A7C15 * (stream + 1)), mixed once
 *   u64_k     = splitmix64(state_{k-1})                (Steele et al. finalizer)
 *   u1        = (u64 >> 11) * 2^-53 mapped into (0, 1]
 *   u2        = (u64 >> 11) * 2^-53 in [0, 1)
 *   z0, z1    = sqrt(-2 ln u1) * (cos, sin)(2 pi u2)
 *
 * Identical (seed, stream) pairs always produce identical sequences; distinct
 * stream ids give independent streams for the same seed, which is how
 * sharded Monte-Carlo estimation and per-step gradient batches stay
 * independent of scheduling.
 */
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed, std::uint64_t stream = 0);

    /// Next standard-normal variate.
    double next();

    /// Next uniform variate in [0, 1).
    double next_uniform();

    /// Fill a vector with i.i.d. standard normals (index order).
    void fill(RealVector& out);

    /// Fill a matrix with i.i.d. standard normals (row-major order).
    void fill(Matrix& out);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t next_u64();

    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace quantdyn
