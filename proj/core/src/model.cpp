#include "quantdyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace quantdyn {

namespace {

double binary_activation_sum(const Matrix& Z, const RealVector& w, const RealVector& v) {
    double out = 0.0;
    for (std::size_t i = 0; i < Z.rows(); ++i) {
        if (dot(Z.row(i), w) > 0.0) out += v[i];
    }
    return out;
}

}  // namespace

Teacher Teacher::from_v(RealVector w_star, RealVector v) {
    Teacher teacher;
    teacher.w_star = std::move(w_star);
    double norm_sq = 0.0;
    for (double x : v) norm_sq += x * x;
    teacher.v_norm_sq = norm_sq;
    teacher.v = std::move(v);
    teacher.validate();
    return teacher;
}

Teacher Teacher::population_only(RealVector w_star, double v_norm_sq) {
    Teacher teacher;
    teacher.w_star = std::move(w_star);
    teacher.v_norm_sq = v_norm_sq;
    teacher.validate();
    return teacher;
}

void Teacher::validate() const {
    require(!w_star.empty(), "Teacher: w_star must have dimension at least 1");
    require(std::abs(norm(w_star) - 1.0) <= 1e-12, "Teacher: w_star must be unit-norm");
    require(v_norm_sq > 0.0, "Teacher: v_norm_sq must be positive");
    if (v) {
        require(!v->empty(), "Teacher: v must have dimension at least 1");
        double norm_sq = 0.0;
        for (double x : *v) norm_sq += x * x;
        require(std::abs(norm_sq - v_norm_sq) <= 1e-12 * std::max(1.0, v_norm_sq),
                "Teacher: v_norm_sq inconsistent with v");
    }
}

double forward(const Matrix& Z, const RealVector& w, const RealVector& v) {
    require_same_dimension(Z.cols(), w.size(), "forward: Z columns vs w");
    require_same_dimension(Z.rows(), v.size(), "forward: Z rows vs v");
    return binary_activation_sum(Z, w, v);
}

double sample_loss(const Matrix& Z, const RealVector& w, const Teacher& teacher) {
    require(teacher.has_v(), "sample_loss: teacher.v required for sampled paths");
    require_same_dimension(Z.cols(), w.size(), "sample_loss: Z columns vs w");
    require_same_dimension(w.size(), teacher.n(), "sample_loss: w vs teacher");
    const RealVector& v = *teacher.v;
    require_same_dimension(Z.rows(), v.size(), "sample_loss: Z rows vs v");
    const double residual =
        binary_activation_sum(Z, w, v) - binary_activation_sum(Z, teacher.w_star, v);
    return 0.5 * residual * residual;
}

double population_loss(const RealVector& w, const Teacher& teacher) {
    require_same_dimension(w.size(), teacher.n(), "population_loss");
    const double w_norm = norm(w);
    require(w_norm > 0.0, "population_loss: w must be nonzero");
    const double cosine = std::clamp(dot(w, teacher.w_star) / w_norm, -1.0, 1.0);
    return teacher.v_norm_sq / (2.0 * std::numbers::pi) * std::acos(cosine);
}

double coarse_grad_constant(const Teacher& teacher) {
    return teacher.v_norm_sq / (2.0 * std::sqrt(2.0 * std::numbers::pi));
}

RealVector population_coarse_grad(const RealVector& w, const Teacher& teacher) {
    require_same_dimension(w.size(), teacher.n(), "population_coarse_grad");
    const double w_norm = norm(w);
    require(w_norm > 0.0, "population_coarse_grad: w must be nonzero");
    const double c = coarse_grad_constant(teacher);
    RealVector g(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        g[j] = c * (w[j] / w_norm - teacher.w_star[j]);
    }
    return g;
}

RealVector sample_coarse_grad(const Matrix& Z, const RealVector& w, const Teacher& teacher) {
    require(teacher.has_v(), "sample_coarse_grad: teacher.v required for sampled paths");
    require_same_dimension(Z.cols(), w.size(), "sample_coarse_grad: Z columns vs w");
    require_same_dimension(w.size(), teacher.n(), "sample_coarse_grad: w vs teacher");
    const RealVector& v = *teacher.v;
    require_same_dimension(Z.rows(), v.size(), "sample_coarse_grad: Z rows vs v");

    const double residual =
        binary_activation_sum(Z, w, v) - binary_activation_sum(Z, teacher.w_star, v);
    RealVector g(w.size(), 0.0);
    if (residual == 0.0) return g;
    for (std::size_t i = 0; i < Z.rows(); ++i) {
        // ReLU STE mask: mu'(x) = 1{x > 0}.
        if (dot(Z.row(i), w) > 0.0) {
            const auto row = Z.row(i);
            for (std::size_t j = 0; j < w.size(); ++j) g[j] += v[i] * row[j];
        }
    }
    for (double& x : g) x *= residual;
    return g;
}

McScalarEstimate mc_estimate_loss(const RealVector& w, const Teacher& teacher,
                                  GaussianSampler& sampler, std::uint64_t count) {
    require(teacher.has_v(), "mc_estimate_loss: teacher.v required");
    require(count >= 1, "mc_estimate_loss: count must be at least 1");
    const std::size_t m = teacher.m();
    Matrix Z(m, teacher.n());

    // Welford accumulation keeps the variance stable over 1e6 draws.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) {
        sampler.fill(Z);
        const double value = sample_loss(Z, w, teacher);
        const double delta = value - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (value - mean);
    }
    McScalarEstimate estimate;
    estimate.mean = mean;
    estimate.count = count;
    if (count > 1) {
        estimate.standard_error =
            std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
    }
    return estimate;
}

McVectorEstimate mc_estimate_grad(const RealVector& w, const Teacher& teacher,
                                  GaussianSampler& sampler, std::uint64_t count) {
    require(teacher.has_v(), "mc_estimate_grad: teacher.v required");
    require(count >= 1, "mc_estimate_grad: count must be at least 1");
    const std::size_t n = teacher.n();
    Matrix Z(teacher.m(), n);

    RealVector mean(n, 0.0);
    RealVector m2(n, 0.0);
    for (std::uint64_t k = 0; k < count; ++k) {
        sampler.fill(Z);
        const RealVector g = sample_coarse_grad(Z, w, teacher);
        for (std::size_t j = 0; j < n; ++j) {
            const double delta = g[j] - mean[j];
            mean[j] += delta / static_cast<double>(k + 1);
            m2[j] += delta * (g[j] - mean[j]);
        }
    }
    McVectorEstimate estimate;
    estimate.mean = std::move(mean);
    estimate.standard_error.assign(n, 0.0);
    estimate.count = count;
    if (count > 1) {
        for (std::size_t j = 0; j < n; ++j) {
            estimate.standard_error[j] =
                std::sqrt(m2[j] / static_cast<double>(count - 1) / static_cast<double>(count));
        }
    }
    return estimate;
}

}  // namespace quantdyn
