#pragma once

#include <cstdint>
#include <vector>

#include "quantdyn/model.hpp"

namespace quantdyn {

/// One Monte-Carlo agreement check: closed-form loss and coarse gradient
/// against their empirical estimates on a random instance.
struct McCheckResult {
    std::size_t n = 0;
    std::size_t m = 0;
    std::uint64_t instance_seed = 0;
    /// max over components of |closed - mc| / SE for the gradient
    double max_z_grad = 0.0;
    /// |closed - mc| / SE for the loss
    double z_loss = 0.0;
    bool pass = false;
};

struct McAgreementReport {
    std::vector<McCheckResult> instances;
    std::uint64_t samples = 0;
    double z_threshold = 4.0;
    bool all_pass = false;
};

/**
 * Runs the closed-form-vs-Monte-Carlo agreement suite on `instances` random
 * instances with n, m in [2, 6]: for each, every component of the closed-form
 * coarse gradient and the closed-form loss must lie within z_threshold
 * standard errors of the empirical mean over `samples` draws.
 *
 * `constant_scale` is a negative-control hook: it multiplies the closed
 * forms, so any value other than 1 must make the suite fail.
 */
McAgreementReport run_mc_agreement(std::uint64_t seed, std::size_t instances,
                                   std::uint64_t samples, double z_threshold = 4.0,
                                   double constant_scale = 1.0);

}  // namespace quantdyn
