#pragma once

#include <cstdint>
#include <vector>

#include "quantdyn/types.hpp"

namespace quantdyn {

/**
 * Learning-rate schedule. Every emitted rate is positive and bounded by
 * eta_max. Constant and harmonic (a/(t+1)) schedules have divergent sums by
 * construction; a table repeats its final value past the end and is flagged
 * non-divergent when told not to repeat.
 */
class LearningRateSchedule {
public:
    enum class Kind : std::uint8_t { Constant, Harmonic, Table };

    LearningRateSchedule() : LearningRateSchedule(constant(1.0)) {}

    static LearningRateSchedule constant(double eta);
    static LearningRateSchedule harmonic(double a);
    static LearningRateSchedule table(std::vector<double> values, bool repeat_last = true);

    double eta(std::int64_t t) const;
    double eta_max() const { return eta_max_; }
    Kind kind() const { return kind_; }

    /// True when the emitted series sums to infinity.
    bool sum_diverges() const;

    /// Largest t with a defined rate, or unbounded when the tail repeats.
    bool defined_at(std::int64_t t) const;

    double parameter() const { return parameter_; }
    const std::vector<double>& values() const { return values_; }
    bool repeat_last() const { return repeat_last_; }

private:
    LearningRateSchedule(Kind kind, double parameter, std::vector<double> values,
                         bool repeat_last);

    Kind kind_ = Kind::Constant;
    double parameter_ = 1.0;
    std::vector<double> values_;
    bool repeat_last_ = true;
    double eta_max_ = 1.0;
};

}  // namespace quantdyn
