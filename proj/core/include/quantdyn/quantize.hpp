#pragma once

#include "quantdyn/quantized_weight.hpp"
#include "quantdyn/types.hpp"

namespace quantdyn {

/**
 * Euclidean projection of a nonzero y onto the binary set R+ x {-1,+1}^n:
 * scale |y|_1 / n times bsign(y), where bsign maps 0 to +1.
 */
QuantizedWeight project_binary(const RealVector& y);

/**
 * Euclidean projection of a nonzero y onto the ternary set R+ x {-1,0,+1}^n.
 *
 * Keeps the j* largest-magnitude coordinates, where j* maximizes
 * |y_[j]|_1^2 / j (ties broken to the smallest j), with scale
 * |y_[j*]|_1 / j* and the signs of the kept coordinates. Sorting uses
 * descending magnitude with ascending-index tie-break.
 */
QuantizedWeight project_ternary(const RealVector& y);

/// Projection rescaled to unit norm: same sign pattern and support,
/// delta = 1/sqrt(support size).
QuantizedWeight normalized_project(const RealVector& y, QuantizationMode mode);

struct BruteForceResult {
    QuantizedWeight weight;
    double distance_sq = 0.0;
    /// Number of patterns achieving the optimal distance (exact float ties).
    int optimal_patterns = 0;
};

/**
 * Independent projection oracle: enumerates every sign pattern (2^n binary,
 * 3^n - 1 ternary), uses the least-squares scale max(0, <y,s>/|s|^2) per
 * pattern, and returns a minimizer of the squared distance. Among ties the
 * smallest support and then the lexicographically smallest pattern wins.
 * Guarded to n <= 12.
 */
BruteForceResult brute_force_project(const RealVector& y, QuantizationMode mode);

}  // namespace quantdyn
