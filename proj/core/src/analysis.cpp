#include "quantdyn/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "quantdyn/quantize.hpp"

namespace quantdyn {

RecurrenceReport detect_recurrence(const Trajectory& traj, const QuantizedWeight& target) {
    require(target.unit_normalized(), "detect_recurrence: target must be unit-norm");
    require(target.mode == traj.mode, "detect_recurrence: mode mismatch");
    require_same_dimension(target.dimension(), traj.n, "detect_recurrence");

    RecurrenceReport report;
    report.target = target;
    for (const auto& record : traj.records) {
        if (record.w.same_state(target)) {
            report.visit_times.push_back(record.t);
        }
    }
    report.visit_count = report.visit_times.size();
    if (!report.visit_times.empty()) {
        report.first_visit = report.visit_times.front();
        report.gaps.reserve(report.visit_times.size() - 1);
        for (std::size_t i = 1; i < report.visit_times.size(); ++i) {
            report.gaps.push_back(report.visit_times[i] - report.visit_times[i - 1]);
        }
    }
    return report;
}

std::optional<std::int64_t> detect_cycle(const Trajectory& traj, std::size_t window) {
    require(window >= 1 && window <= traj.size(),
            "detect_cycle: window must be in [1, trajectory length]");
    const std::size_t start = traj.size() - window;
    for (std::size_t p = 1; p <= window / 2; ++p) {
        bool periodic = true;
        for (std::size_t k = start; k + p < traj.size(); ++k) {
            if (!traj.records[k].w.same_state(traj.records[k + p].w)) {
                periodic = false;
                break;
            }
        }
        if (periodic) return static_cast<std::int64_t>(p);
    }
    return std::nullopt;
}

std::vector<CoordinateOscillation> sign_oscillation_report(const Trajectory& traj) {
    std::vector<CoordinateOscillation> report(traj.n);
    for (std::size_t j = 0; j < traj.n; ++j) {
        report[j].coordinate = j;
    }
    if (traj.records.empty()) return report;
    for (std::size_t j = 0; j < traj.n; ++j) {
        int previous = traj.records.front().w.signs[j];
        report[j].attained_signs.insert(previous);
        for (std::size_t k = 1; k < traj.records.size(); ++k) {
            const int current = traj.records[k].w.signs[j];
            report[j].attained_signs.insert(current);
            if (current != previous) {
                ++report[j].sign_change_count;
                report[j].last_change_t = traj.records[k].t;
                previous = current;
            }
        }
    }
    return report;
}

std::vector<std::vector<std::int8_t>> sign_matrix(const Trajectory& traj,
                                                  std::optional<std::size_t> tail_columns) {
    std::size_t columns = traj.size();
    if (tail_columns) columns = std::min(columns, *tail_columns);
    const std::size_t start = traj.size() - columns;
    std::vector<std::vector<std::int8_t>> matrix(traj.n, std::vector<std::int8_t>(columns));
    for (std::size_t k = 0; k < columns; ++k) {
        const auto& w = traj.records[start + k].w;
        for (std::size_t j = 0; j < traj.n; ++j) {
            matrix[j][k] = w.signs[j];
        }
    }
    return matrix;
}

std::vector<QuantizedWeight> tail_limit_set(const Trajectory& traj, double tail_fraction) {
    require(tail_fraction > 0.0 && tail_fraction <= 1.0,
            "tail_limit_set: tail_fraction must be in (0, 1]");
    require(!traj.records.empty(), "tail_limit_set: empty trajectory");
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::ceil(tail_fraction * static_cast<double>(traj.size()))));
    const std::size_t start = traj.size() - count;

    std::vector<QuantizedWeight> distinct;
    for (std::size_t k = start; k < traj.size(); ++k) {
        const auto& w = traj.records[k].w;
        const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                      [&w](const QuantizedWeight& z) { return z.same_state(w); });
        if (!seen) distinct.push_back(w);
    }
    return distinct;
}

namespace {

bool orthant_compatible(const TrajectoryRecord& record, const Teacher& teacher) {
    for (std::size_t j = 0; j < teacher.n(); ++j) {
        const double target = teacher.w_star[j];
        if (target > 0.0) {
            if (record.y[j] <= 0.0) return false;
        } else if (target < 0.0) {
            if (record.y[j] >= 0.0) return false;
        } else {
            // Closure semantics at a zero teacher coordinate: the float
            // coordinate stays bounded, the quantized one must vanish.
            if (record.w.signs[j] != 0) return false;
        }
    }
    return true;
}

bool cone_compatible(const TrajectoryRecord& record, const Teacher& teacher,
                     const MagnitudeOrdering& teacher_order) {
    if (!orthant_compatible(record, teacher)) return false;
    // Strictly descending across the teacher's tie groups; within a group
    // (and against the zero group's interior order) anything goes.
    std::size_t pos = 0;
    double previous_group_min = 0.0;
    for (std::size_t g = 0; g < teacher_order.tie_group_sizes.size(); ++g) {
        const std::size_t size = teacher_order.tie_group_sizes[g];
        double group_min = 0.0, group_max = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            const double mag = std::abs(record.y[teacher_order.order[pos + i]]);
            if (i == 0) {
                group_min = group_max = mag;
            } else {
                group_min = std::min(group_min, mag);
                group_max = std::max(group_max, mag);
            }
        }
        if (g > 0 && group_max >= previous_group_min) return false;
        previous_group_min = group_min;
        pos += size;
    }
    return true;
}

}  // namespace

RegionEntryTimes region_entry_times(const Trajectory& traj, const Teacher& teacher) {
    require_same_dimension(teacher.n(), traj.n, "region_entry_times");
    require(!traj.records.empty(), "region_entry_times: empty trajectory");
    const MagnitudeOrdering teacher_order = magnitude_ordering(teacher.w_star);

    RegionEntryTimes times;
    // Maximal all-true suffix for each region.
    std::optional<std::size_t> orthant_start, cone_start;
    for (std::size_t k = traj.size(); k-- > 0;) {
        const auto& record = traj.records[k];
        if (orthant_compatible(record, teacher)) {
            orthant_start = k;
        } else {
            break;
        }
    }
    for (std::size_t k = traj.size(); k-- > 0;) {
        if (cone_compatible(traj.records[k], teacher, teacher_order)) {
            cone_start = k;
        } else {
            break;
        }
    }
    if (orthant_start) times.orthant_entry = traj.records[*orthant_start].t;
    if (cone_start) times.cone_entry = traj.records[*cone_start].t;
    return times;
}

ConditionReport check_binary_condition(const Teacher& teacher) {
    teacher.validate();
    const std::size_t n = teacher.n();
    const double threshold = 1.0 / std::sqrt(static_cast<double>(n));

    BinaryConditionDetails details;
    details.bound = 2.0 * threshold;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = teacher.w_star[j];
        if (std::abs(w) < threshold) {
            const double what = w >= 0.0 ? threshold : -threshold;  // bsign(0) = +1
            details.below_threshold_coordinates.push_back(j);
            details.contributions.push_back(std::abs(w - what));
            details.sum_below += std::abs(w - what);
        }
    }
    details.teacher_quantized = details.below_threshold_coordinates.empty();

    ConditionReport report;
    report.mode = QuantizationMode::Binary;
    report.margin = std::min(details.sum_below, details.bound - details.sum_below);
    report.satisfied = details.sum_below > 0.0 && details.sum_below < details.bound;
    report.binary = std::move(details);
    return report;
}

ConditionReport check_ternary_condition(const Teacher& teacher) {
    teacher.validate();
    VertexSet vertices = vertex_set(teacher.w_star);
    require(!vertices.empty(), "check_ternary_condition: teacher has empty vertex set");

    const QuantizedWeight optimum = normalized_project(teacher.w_star, QuantizationMode::Ternary);
    const auto index = vertices.find(optimum);
    if (!index) {
        throw Error("check_ternary_condition: normalized projection is not a vertex "
                    "(tie-degenerate teacher)");
    }

    TernaryConditionDetails details;
    details.vertices = vertices.with_first(optimum);
    details.lambdas = decompose_in_cone(teacher.w_star, details.vertices);
    for (std::size_t i = 1; i < details.lambdas.size(); ++i) {
        details.lambda_tail_sum += details.lambdas[i];
    }

    ConditionReport report;
    report.mode = QuantizationMode::Ternary;
    report.margin = std::min(details.lambda_tail_sum, 1.0 - details.lambda_tail_sum);
    report.satisfied = details.lambda_tail_sum > 0.0 && details.lambda_tail_sum < 1.0;
    report.ternary = std::move(details);
    return report;
}

std::vector<VertexVisitStats> visit_frequency_vs_lambda(const Trajectory& traj,
                                                        const Teacher& teacher,
                                                        double tail_fraction) {
    require(traj.mode == QuantizationMode::Ternary,
            "visit_frequency_vs_lambda: ternary trajectories only");
    require_same_dimension(teacher.n(), traj.n, "visit_frequency_vs_lambda");
    const ConditionReport condition = check_ternary_condition(teacher);
    const auto& details = *condition.ternary;

    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::ceil(tail_fraction * static_cast<double>(traj.size()))));
    const std::size_t start = traj.size() - count;

    std::vector<VertexVisitStats> stats(details.vertices.size());
    for (std::size_t i = 0; i < details.vertices.size(); ++i) {
        stats[i].vertex = details.vertices.vertices[i];
        stats[i].lambda = details.lambdas[i];
    }
    for (std::size_t k = start; k < traj.size(); ++k) {
        for (auto& s : stats) {
            if (traj.records[k].w.same_state(s.vertex)) {
                ++s.visits;
                break;
            }
        }
    }
    for (auto& s : stats) {
        s.empirical_freq = static_cast<double>(s.visits) / static_cast<double>(count);
    }
    return stats;
}

}  // namespace quantdyn
