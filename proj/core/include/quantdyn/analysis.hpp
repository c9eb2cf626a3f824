#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "quantdyn/dynamics.hpp"
#include "quantdyn/geometry.hpp"

namespace quantdyn {

// ----------------------------------------------------------------------------
// Recurrence and cycles
// ----------------------------------------------------------------------------

struct RecurrenceReport {
    QuantizedWeight target;
    std::vector<std::int64_t> visit_times;
    std::size_t visit_count = 0;
    std::optional<std::int64_t> first_visit;
    std::vector<std::int64_t> gaps;
};

/// Visits of the trajectory to a unit-norm quantized target. A visit is
/// discrete state equality (mode + sign pattern); no float tolerance is
/// involved because normalized states are determined by their pattern.
RecurrenceReport detect_recurrence(const Trajectory& traj, const QuantizedWeight& target);

/// Smallest period p <= window/2 with w^{t+p} = w^t across the final window
/// of the discrete w-sequence; nullopt when no such p exists.
std::optional<std::int64_t> detect_cycle(const Trajectory& traj, std::size_t window);

// ----------------------------------------------------------------------------
// Sign evolution
// ----------------------------------------------------------------------------

struct CoordinateOscillation {
    std::size_t coordinate = 0;
    std::size_t sign_change_count = 0;
    std::optional<std::int64_t> last_change_t;
    std::set<int> attained_signs;
};

/// Per-coordinate sign transitions of w_j^t over the whole trajectory.
std::vector<CoordinateOscillation> sign_oscillation_report(const Trajectory& traj);

/// Sign matrix of the trajectory, n rows by T columns with entries in
/// {-1, 0, +1}; optionally restricted to the last tail_columns iterations.
std::vector<std::vector<std::int8_t>> sign_matrix(const Trajectory& traj,
                                                  std::optional<std::size_t> tail_columns = {});

// ----------------------------------------------------------------------------
// Limit sets and regions
// ----------------------------------------------------------------------------

/// Distinct quantized states over the final tail_fraction of the trajectory,
/// ordered by first appearance. 0 < tail_fraction <= 1.
std::vector<QuantizedWeight> tail_limit_set(const Trajectory& traj, double tail_fraction);

struct RegionEntryTimes {
    /// Smallest T with y^t in the teacher's orthant for all recorded t >= T;
    /// nullopt when the final record still violates it. Coordinates where the
    /// teacher is zero use closure semantics: w_j^t = 0 is required instead
    /// of a sign match (the float coordinate stays bounded, not zero).
    std::optional<std::int64_t> orthant_entry;
    /// Same for the teacher's cone: orthant membership plus magnitude-order
    /// compatibility. For regular teachers this coincides with strict cone
    /// membership for tie-free iterates.
    std::optional<std::int64_t> cone_entry;
};

RegionEntryTimes region_entry_times(const Trajectory& traj, const Teacher& teacher);

// ----------------------------------------------------------------------------
// Recurrence conditions
// ----------------------------------------------------------------------------

struct BinaryConditionDetails {
    /// S = sum over |w_j*| < 1/sqrt(n) of |w_j* - what_j|.
    double sum_below = 0.0;
    /// The bound 2/sqrt(n).
    double bound = 0.0;
    std::vector<std::size_t> below_threshold_coordinates;
    std::vector<double> contributions;
    /// True when S = 0, i.e. the teacher is already a quantized state.
    bool teacher_quantized = false;
};

struct TernaryConditionDetails {
    /// Vertices of the teacher's cone with the optimum first.
    VertexSet vertices;
    /// Coefficients of w* in that basis, aligned with `vertices`.
    std::vector<double> lambdas;
    /// Sum of lambda_2..lambda_k.
    double lambda_tail_sum = 0.0;
};

struct ConditionReport {
    QuantizationMode mode = QuantizationMode::Binary;
    bool satisfied = false;
    /// Distance to the nearer edge of the admissible interval; positive
    /// exactly when satisfied.
    double margin = 0.0;
    std::optional<BinaryConditionDetails> binary;
    std::optional<TernaryConditionDetails> ternary;
};

/// Recurrence condition for binary weights: 0 < S < 2/sqrt(n) where S sums
/// |w_j* - what_j| over the coordinates with |w_j*| < 1/sqrt(n) and
/// what = (1/sqrt(n)) bsign(w*).
ConditionReport check_binary_condition(const Teacher& teacher);

/// Recurrence condition for ternary weights: decompose w* = sum lambda_j z_j
/// over its vertex set with z_1 the normalized projection of w*; satisfied
/// when 0 < sum_{j>=2} lambda_j < 1.
ConditionReport check_ternary_condition(const Teacher& teacher);

// ----------------------------------------------------------------------------
// Visit frequencies
// ----------------------------------------------------------------------------

struct VertexVisitStats {
    QuantizedWeight vertex;
    double lambda = 0.0;
    double empirical_freq = 0.0;
    std::int64_t visits = 0;
};

/// Tail visit frequency of each vertex of the teacher's cone alongside the
/// lambda coefficients. Informational: the proportional-time reading of the
/// lambdas is a heuristic without a guaranteed rate, so nothing here passes
/// or fails.
std::vector<VertexVisitStats> visit_frequency_vs_lambda(const Trajectory& traj,
                                                        const Teacher& teacher,
                                                        double tail_fraction = 0.5);

}  // namespace quantdyn
