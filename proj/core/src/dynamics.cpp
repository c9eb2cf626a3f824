#include "quantdyn/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "quantdyn/random.hpp"

namespace quantdyn {

const char* to_string(GradientSource source) {
    return source == GradientSource::Population ? "population" : "sampled";
}

const char* to_string(UpdateRule rule) {
    return rule == UpdateRule::Quant ? "quant" : "binaryconnect";
}

namespace {

RealVector gradient_at(const QuantizedWeight& w, std::int64_t t,
                       const ExperimentConfig& config) {
    const RealVector w_vec = w.vector();
    if (config.gradient_source == GradientSource::Population) {
        return population_coarse_grad(w_vec, config.teacher);
    }
    require(config.teacher.has_v(), "sampled gradient requires teacher.v");
    // Fresh batch per step, stream derived from (seed, t) so a step is a
    // pure function of (y, t, config).
    GaussianSampler sampler(config.sample_seed,
                            streams::kGradientBase + static_cast<std::uint64_t>(t));
    Matrix Z(config.teacher.m(), config.teacher.n());
    RealVector g(w_vec.size(), 0.0);
    for (int b = 0; b < config.batch_size; ++b) {
        sampler.fill(Z);
        const RealVector gb = sample_coarse_grad(Z, w_vec, config.teacher);
        for (std::size_t j = 0; j < g.size(); ++j) g[j] += gb[j];
    }
    for (double& x : g) x /= static_cast<double>(config.batch_size);
    return g;
}

StepResult step_impl(const RealVector& y, std::int64_t t, const ExperimentConfig& config) {
    require(!is_zero(y), "quant_step: y must be nonzero");
    require_same_dimension(y.size(), config.n(), "quant_step: y vs config");
    const QuantizedWeight w = normalized_project(y, config.mode);
    const RealVector g = gradient_at(w, t, config);
    const double eta = config.schedule.eta(t);

    StepResult result;
    result.y_next.resize(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        result.y_next[j] = y[j] - eta * g[j];
    }
    if (is_zero(result.y_next)) {
        throw InvalidValue("quant_step: iterate reached the zero vector at t = " +
                           std::to_string(t) + "; restart from a perturbed y0");
    }
    result.w_next = normalized_project(result.y_next, config.mode);
    return result;
}

}  // namespace

void ExperimentConfig::validate() const {
    teacher.validate();
    require(iterations >= 1, "config.iterations must be at least 1");
    require(batch_size >= 1, "config.batch_size must be at least 1");
    if (y0) {
        require_same_dimension(y0->size(), n(), "config.y0 vs teacher");
        require(!is_zero(*y0), "config.y0 must be nonzero");
    }
    require(y0_scale > 0.0, "config.y0_scale must be positive");
    if (gradient_source == GradientSource::Sampled) {
        require(teacher.has_v(), "config: sampled gradients require teacher.v");
    }
    if (sign_tail) {
        require(*sign_tail >= 1, "config.sign_tail must be at least 1");
    }
    require(schedule.defined_at(iterations - 1),
            "config.schedule: table too short for the iteration budget");
}

RealVector ExperimentConfig::resolve_y0() const {
    if (y0) return *y0;
    GaussianSampler sampler(y0_seed, streams::kY0);
    RealVector draw(n());
    while (true) {
        sampler.fill(draw);
        bool has_exact_zero = false;
        for (double& x : draw) {
            x *= y0_scale;
            if (x == 0.0) has_exact_zero = true;
        }
        if (!has_exact_zero) return draw;
    }
}

ExperimentConfig ExperimentConfig::resolved() const {
    ExperimentConfig out = *this;
    out.y0 = resolve_y0();
    return out;
}

StepResult quant_step(const RealVector& y, std::int64_t t, const ExperimentConfig& config) {
    return step_impl(y, t, config);
}

StepResult binaryconnect_step(const RealVector& y, std::int64_t t,
                              const ExperimentConfig& config) {
    // With the gradient evaluated at the projected state and applied to the
    // float weights, this rule coincides with quant_step in this model.
    return step_impl(y, t, config);
}

Trajectory run(const ExperimentConfig& config) {
    config.validate();
    const ExperimentConfig resolved = config.resolved();

    Trajectory traj;
    traj.n = resolved.n();
    traj.mode = resolved.mode;
    traj.config = resolved;
    traj.records.reserve(static_cast<std::size_t>(resolved.iterations) + 1);

    RealVector y = *resolved.y0;
    traj.records.push_back(
        {0, resolved.schedule.eta(0), y, normalized_project(y, resolved.mode)});
    for (std::int64_t t = 0; t < resolved.iterations; ++t) {
        StepResult step = step_impl(y, t, resolved);
        y = std::move(step.y_next);
        // A finite table has no rate beyond the last step; record the one used.
        const double eta = resolved.schedule.defined_at(t + 1)
                               ? resolved.schedule.eta(t + 1)
                               : resolved.schedule.eta(t);
        traj.records.push_back({t + 1, eta, y, std::move(step.w_next)});
    }
    return traj;
}

ExperimentConfig example1_config(const std::array<double, 4>& y0_fractions, double eta,
                                 double v_norm_sq, std::int64_t iterations) {
    for (double f : y0_fractions) {
        require(f > 0.0 && f < 1.0, "example1_config: fractions must lie in (0, 1)");
    }
    require(eta > 0.0, "example1_config: eta must be positive");
    require(v_norm_sq > 0.0, "example1_config: v_norm_sq must be positive");

    ExperimentConfig config;
    config.label = "example1";
    config.mode = QuantizationMode::Binary;
    config.teacher = Teacher::population_only(
        {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 0.5 * std::sqrt(11.0 / 3.0)}, v_norm_sq);
    config.schedule = LearningRateSchedule::constant(eta);
    config.iterations = iterations;

    const double lambda = eta * v_norm_sq / (6.0 * std::sqrt(2.0 * std::numbers::pi));
    config.y0 = RealVector{-lambda * y0_fractions[0], lambda * y0_fractions[1],
                           lambda * (1.0 + y0_fractions[2]), y0_fractions[3]};
    // The cycle argument needs the start strictly inside these intervals;
    // reject fractions that rounded onto a boundary.
    const RealVector& y0 = *config.y0;
    require(y0[0] > -lambda && y0[0] < 0.0, "example1_config: y1 not in (-lambda, 0)");
    require(y0[1] > 0.0 && y0[1] < lambda, "example1_config: y2 not in (0, lambda)");
    require(y0[2] > lambda && y0[2] < 2.0 * lambda,
            "example1_config: y3 not in (lambda, 2 lambda)");
    require(y0[3] > 0.0, "example1_config: y4 not in (0, inf)");
    return config;
}

ExperimentConfig synthetic_fig2_config(QuantizationMode mode) {
    ExperimentConfig config;
    config.label = mode == QuantizationMode::Binary ? "synthetic-fig2" : "synthetic-fig2-ternary";
    config.mode = mode;

    GaussianSampler teacher_sampler(8, streams::kTeacher);
    RealVector w_star(8);
    teacher_sampler.fill(w_star);
    const double w_norm = norm(w_star);
    for (double& x : w_star) x /= w_norm;

    GaussianSampler v_sampler(8, streams::kSecondLayer);
    RealVector v(4);
    v_sampler.fill(v);

    config.teacher = Teacher::from_v(std::move(w_star), std::move(v));
    config.schedule = LearningRateSchedule::constant(0.1);
    config.iterations = 200;
    config.y0_seed = 8;
    config.y0_scale = 1.0;
    config.sign_tail = 100;
    return config;
}

}  // namespace quantdyn
