#pragma once

#include <cstdint>
#include <optional>

#include "quantdyn/random.hpp"
#include "quantdyn/types.hpp"

namespace quantdyn {

/**
 * The data-generating side of the model: unit-norm first-layer weights
 * w_star, the fixed second-layer norm |v|^2, and optionally v itself
 * (required by the sampled-data paths).
 */
struct Teacher {
    RealVector w_star;
    double v_norm_sq = 0.0;
    std::optional<RealVector> v;

    /// Teacher with explicit second-layer weights; v_norm_sq is derived.
    static Teacher from_v(RealVector w_star, RealVector v);

    /// Teacher for closed-form-only work; no sampled paths available.
    static Teacher population_only(RealVector w_star, double v_norm_sq);

    std::size_t n() const { return w_star.size(); }
    bool has_v() const { return v.has_value(); }
    std::size_t m() const { return v ? v->size() : 0; }

    /// Checks |w_star| = 1 and, when v is present, |v|^2 = v_norm_sq (1e-12).
    void validate() const;
};

/// Network output v^T sigma(Z w) with the binary activation sigma(x) = 1{x > 0}.
double forward(const Matrix& Z, const RealVector& w, const RealVector& v);

/// Squared sample loss 0.5 (v^T sigma(Zw) - v^T sigma(Zw*))^2.
double sample_loss(const Matrix& Z, const RealVector& w, const Teacher& teacher);

/// Closed-form population loss (|v|^2 / 2pi) * arccos(<w, w*> / |w|);
/// zero exactly when w/|w| = w_star. Rejects w = 0.
double population_loss(const RealVector& w, const Teacher& teacher);

/// The constant |v|^2 / (2 sqrt(2 pi)) in front of the expected coarse
/// gradient; exposed so experiments can derive step sizes from it.
double coarse_grad_constant(const Teacher& teacher);

/// Closed-form expected coarse gradient c * (w/|w| - w_star). Rejects w = 0.
RealVector population_coarse_grad(const RealVector& w, const Teacher& teacher);

/**
 * Sample coarse gradient with the ReLU straight-through estimator:
 * Z^T (mu'(Zw) ⊙ v) * (v^T sigma(Zw) - v^T sigma(Zw*)), with
 * mu'(x) = 1{x > 0}. Its expectation over Z ~ N(0, I) is the closed form
 * above, which the Monte-Carlo suites verify.
 */
RealVector sample_coarse_grad(const Matrix& Z, const RealVector& w, const Teacher& teacher);

struct McScalarEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t count = 0;
};

struct McVectorEstimate {
    RealVector mean;
    RealVector standard_error;
    std::uint64_t count = 0;
};

/// Empirical mean and standard error of the sample loss over fresh draws.
McScalarEstimate mc_estimate_loss(const RealVector& w, const Teacher& teacher,
                                  GaussianSampler& sampler, std::uint64_t count);

/// Empirical mean and per-component standard error of the sample coarse
/// gradient over fresh draws.
McVectorEstimate mc_estimate_grad(const RealVector& w, const Teacher& teacher,
                                  GaussianSampler& sampler, std::uint64_t count);

}  // namespace quantdyn
