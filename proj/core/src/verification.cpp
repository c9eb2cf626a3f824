#include "quantdyn/verification.hpp"

#include <algorithm>
#include <cmath>

namespace quantdyn {

namespace {

constexpr std::uint64_t kStreamInstance = 64;
constexpr std::uint64_t kStreamMcLoss = 65;
constexpr std::uint64_t kStreamMcGrad = 66;

RealVector draw_unit(GaussianSampler& sampler, std::size_t n) {
    RealVector x(n);
    while (true) {
        sampler.fill(x);
        const double x_norm = norm(x);
        if (x_norm == 0.0) continue;
        bool has_zero = false;
        for (double& v : x) {
            v /= x_norm;
            if (v == 0.0) has_zero = true;
        }
        if (!has_zero) return x;
    }
}

}  // namespace

McAgreementReport run_mc_agreement(std::uint64_t seed, std::size_t instances,
                                   std::uint64_t samples, double z_threshold,
                                   double constant_scale) {
    require(instances >= 1, "run_mc_agreement: at least one instance");
    require(samples >= 2, "run_mc_agreement: at least two samples");

    McAgreementReport report;
    report.samples = samples;
    report.z_threshold = z_threshold;
    report.all_pass = true;

    for (std::size_t i = 0; i < instances; ++i) {
        const std::uint64_t instance_seed = seed + i;
        GaussianSampler setup(instance_seed, kStreamInstance);
        const auto n = static_cast<std::size_t>(2 + std::min(4, static_cast<int>(setup.next_uniform() * 5.0)));
        const auto m = static_cast<std::size_t>(2 + std::min(4, static_cast<int>(setup.next_uniform() * 5.0)));

        const RealVector w_star = draw_unit(setup, n);
        RealVector v(m);
        setup.fill(v);
        const Teacher teacher = Teacher::from_v(w_star, std::move(v));
        const RealVector w = draw_unit(setup, n);

        McCheckResult check;
        check.n = n;
        check.m = m;
        check.instance_seed = instance_seed;

        // Gradient: component-wise z-scores against the closed form.
        RealVector closed_grad = population_coarse_grad(w, teacher);
        for (double& g : closed_grad) g *= constant_scale;
        GaussianSampler grad_sampler(instance_seed, kStreamMcGrad);
        const McVectorEstimate grad = mc_estimate_grad(w, teacher, grad_sampler, samples);
        for (std::size_t j = 0; j < n; ++j) {
            const double diff = std::abs(closed_grad[j] - grad.mean[j]);
            const double se = grad.standard_error[j];
            const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : HUGE_VAL);
            check.max_z_grad = std::max(check.max_z_grad, z);
        }

        // Loss.
        const double closed_loss = constant_scale * population_loss(w, teacher);
        GaussianSampler loss_sampler(instance_seed, kStreamMcLoss);
        const McScalarEstimate loss = mc_estimate_loss(w, teacher, loss_sampler, samples);
        const double loss_diff = std::abs(closed_loss - loss.mean);
        check.z_loss =
            loss.standard_error > 0.0 ? loss_diff / loss.standard_error
                                      : (loss_diff == 0.0 ? 0.0 : HUGE_VAL);

        check.pass = check.max_z_grad <= z_threshold && check.z_loss <= z_threshold;
        report.all_pass = report.all_pass && check.pass;
        report.instances.push_back(check);
    }
    return report;
}

}  // namespace quantdyn
