#include "quantdyn/schedule.hpp"

#include <algorithm>

namespace quantdyn {

LearningRateSchedule::LearningRateSchedule(Kind kind, double parameter,
                                           std::vector<double> values, bool repeat_last)
    : kind_(kind), parameter_(parameter), values_(std::move(values)), repeat_last_(repeat_last) {
    switch (kind_) {
        case Kind::Constant:
        case Kind::Harmonic:
            require(parameter_ > 0.0, "LearningRateSchedule: rate must be positive");
            eta_max_ = parameter_;
            break;
        case Kind::Table:
            require(!values_.empty(), "LearningRateSchedule: table must not be empty");
            for (double v : values_) {
                require(v > 0.0, "LearningRateSchedule: every table rate must be positive");
            }
            eta_max_ = *std::max_element(values_.begin(), values_.end());
            break;
    }
}

LearningRateSchedule LearningRateSchedule::constant(double eta) {
    return {Kind::Constant, eta, {}, true};
}

LearningRateSchedule LearningRateSchedule::harmonic(double a) {
    return {Kind::Harmonic, a, {}, true};
}

LearningRateSchedule LearningRateSchedule::table(std::vector<double> values, bool repeat_last) {
    return {Kind::Table, 0.0, std::move(values), repeat_last};
}

double LearningRateSchedule::eta(std::int64_t t) const {
    require(t >= 0, "LearningRateSchedule: t must be nonnegative");
    switch (kind_) {
        case Kind::Constant:
            return parameter_;
        case Kind::Harmonic:
            return parameter_ / static_cast<double>(t + 1);
        case Kind::Table: {
            const auto size = static_cast<std::int64_t>(values_.size());
            if (t < size) return values_[static_cast<std::size_t>(t)];
            require(repeat_last_, "LearningRateSchedule: table exhausted at t = " +
                                      std::to_string(t));
            return values_.back();
        }
    }
    throw Error("LearningRateSchedule: unknown kind");
}

bool LearningRateSchedule::sum_diverges() const {
    // Constant and harmonic sums diverge by construction; a table does too
    // when its (positive) final value repeats forever.
    if (kind_ == Kind::Table) return repeat_last_;
    return true;
}

bool LearningRateSchedule::defined_at(std::int64_t t) const {
    if (t < 0) return false;
    if (kind_ == Kind::Table && !repeat_last_) {
        return t < static_cast<std::int64_t>(values_.size());
    }
    return true;
}

}  // namespace quantdyn
