#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "quantdyn/model.hpp"
#include "quantdyn/quantize.hpp"
#include "quantdyn/schedule.hpp"
#include "quantdyn/types.hpp"

namespace quantdyn {

enum class GradientSource : std::uint8_t { Population, Sampled };
enum class UpdateRule : std::uint8_t { Quant, BinaryConnectStyle };

const char* to_string(GradientSource source);
const char* to_string(UpdateRule rule);

/**
 * Full description of one experiment. Teachers and explicit start points are
 * stored concretely; a seeded start point is resolved deterministically from
 * (y0_seed, y0_scale) at run time. Sampled gradients draw a fresh batch per
 * step from the stream (sample_seed, t + 1), so a step is a pure function of
 * (y, t, config) in both gradient modes.
 */
struct ExperimentConfig {
    std::string label = "run";
    QuantizationMode mode = QuantizationMode::Binary;
    Teacher teacher;
    LearningRateSchedule schedule;
    std::int64_t iterations = 1;
    std::optional<RealVector> y0;
    std::uint64_t y0_seed = 0;
    double y0_scale = 1.0;
    GradientSource gradient_source = GradientSource::Population;
    int batch_size = 64;
    std::uint64_t sample_seed = 0;
    UpdateRule update_rule = UpdateRule::Quant;
    /// Optional output option: emit only the last sign_tail iterations in the
    /// sign-matrix CSV. Echoed into the manifest.
    std::optional<int> sign_tail;

    std::size_t n() const { return teacher.n(); }
    void validate() const;

    /// The explicit start point, drawing from the seed when necessary.
    /// Seeded draws are i.i.d. normal scaled by y0_scale and are redrawn
    /// whole if any coordinate lands exactly at zero.
    RealVector resolve_y0() const;

    /// Copy with y0 made explicit; this is what manifests echo.
    ExperimentConfig resolved() const;
};

struct TrajectoryRecord {
    std::int64_t t = 0;
    double eta = 0.0;
    RealVector y;
    QuantizedWeight w;
};

/// Ordered record of (t, eta_t, y^t, w^t) with the generating config.
struct Trajectory {
    std::size_t n = 0;
    QuantizationMode mode = QuantizationMode::Binary;
    std::vector<TrajectoryRecord> records;
    std::optional<ExperimentConfig> config;

    std::size_t size() const { return records.size(); }
};

struct StepResult {
    RealVector y_next;
    QuantizedWeight w_next;
};

/**
 * One step of the quantized iteration: with w = normalized_project(y, mode),
 * y_next = y - eta_t * g(w) and w_next = normalized_project(y_next, mode).
 * The float weights are perturbed, never the projection. g is the population
 * coarse gradient or a per-step sampled batch average, per the config.
 * A y_next of exactly zero (measure-zero) aborts with an error instructing a
 * perturbed restart.
 */
StepResult quant_step(const RealVector& y, std::int64_t t, const ExperimentConfig& config);

/// The BinaryConnect-style comparison rule. Instantiated with the coarse
/// gradient it performs the identical update as quant_step; it exists to
/// make that coincidence explicit and testable.
StepResult binaryconnect_step(const RealVector& y, std::int64_t t,
                              const ExperimentConfig& config);

/// Iterate quant_step `iterations` times from y0, recording every state.
/// Deterministic given the config, including sampled-gradient seeds.
Trajectory run(const ExperimentConfig& config);

/**
 * The period-3 counterexample configuration: binary mode, n = 4, teacher
 * (1/6, 1/6, 1/6, sqrt(11/3)/2), constant rate. With lambda =
 * eta |v|^2 / (6 sqrt(2 pi)), the fractions place the start point at
 * y1 = -lambda f1, y2 = lambda f2, y3 = lambda (1 + f3), y4 = f4, inside the
 * intervals that force w^{t+3} = w^t forever while the optimum
 * (1/2, 1/2, 1/2, 1/2) is never visited.
 */
ExperimentConfig example1_config(const std::array<double, 4>& y0_fractions,
                                 double eta = 0.1, double v_norm_sq = 1.0,
                                 std::int64_t iterations = 1003);

/// The synthetic oscillation preset: n = 8, m = 4, 200 iterations, constant
/// rate 0.1, teacher and v drawn from fixed seeds, sign-matrix tail of 100.
ExperimentConfig synthetic_fig2_config(QuantizationMode mode = QuantizationMode::Binary);

}  // namespace quantdyn
