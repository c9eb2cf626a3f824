#pragma once

#include <cstdint>
#include <vector>

#include "quantdyn/types.hpp"

namespace quantdyn {

/// Selects the quantized set Q: a positive scale times a sign pattern,
/// with patterns in {-1,+1}^n (binary) or {-1,0,+1}^n (ternary).
enum class QuantizationMode : std::uint8_t { Binary, Ternary };

const char* to_string(QuantizationMode mode);

/**
 * Coordinate-wise sign pattern in {-1, 0, +1}^n.
 *
 * A pattern identifies an orthant and, together with a scale, a quantized
 * weight. It is regular when no entry is zero.
 */
class SignPattern {
public:
    SignPattern() = default;
    explicit SignPattern(std::vector<std::int8_t> signs);

    /// Coordinate-wise sign of a real vector (sign of 0 is 0).
    static SignPattern of(const RealVector& x);

    std::size_t size() const { return signs_.size(); }
    std::int8_t operator[](std::size_t i) const { return signs_[i]; }
    const std::vector<std::int8_t>& signs() const { return signs_; }

    /// True when the pattern contains no zero entry.
    bool regular() const;

    /// Number of nonzero entries.
    std::size_t support_size() const;

    bool operator==(const SignPattern& other) const { return signs_ == other.signs_; }
    bool operator!=(const SignPattern& other) const { return !(*this == other); }

private:
    std::vector<std::int8_t> signs_;
};

/**
 * An element of the quantized set Q: the vector delta * signs.
 *
 * In normalized form delta equals 1/sqrt(support size), giving a unit-norm
 * vector; trajectory states and cone vertices are always normalized, so two
 * states are equal exactly when their modes and sign patterns are equal.
 */
struct QuantizedWeight {
    double delta = 0.0;
    SignPattern signs;
    QuantizationMode mode = QuantizationMode::Binary;

    QuantizedWeight() = default;
    QuantizedWeight(double delta, SignPattern signs, QuantizationMode mode);

    std::size_t dimension() const { return signs.size(); }
    std::size_t support_size() const { return signs.support_size(); }

    /// The represented real vector delta * signs.
    RealVector vector() const;

    /// Euclidean norm, delta * sqrt(support size).
    double norm() const;

    /// True when delta equals 1/sqrt(support size) up to 1e-12.
    bool unit_normalized() const;

    /// Discrete state equality: same mode and same sign pattern.
    bool same_state(const QuantizedWeight& other) const {
        return mode == other.mode && signs == other.signs;
    }
};

}  // namespace quantdyn
