#include "quantdyn/quantize.hpp"

#include <algorithm>
#include <cmath>

#include "quantdyn/geometry.hpp"

namespace quantdyn {

const char* to_string(QuantizationMode mode) {
    return mode == QuantizationMode::Binary ? "binary" : "ternary";
}

SignPattern::SignPattern(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
    for (std::int8_t s : signs_) {
        require(s == -1 || s == 0 || s == 1, "SignPattern: entries must be in {-1, 0, +1}");
    }
}

SignPattern SignPattern::of(const RealVector& x) {
    std::vector<std::int8_t> signs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        signs[i] = x[i] > 0.0 ? std::int8_t{1} : (x[i] < 0.0 ? std::int8_t{-1} : std::int8_t{0});
    }
    return SignPattern(std::move(signs));
}

bool SignPattern::regular() const {
    return std::none_of(signs_.begin(), signs_.end(), [](std::int8_t s) { return s == 0; });
}

std::size_t SignPattern::support_size() const {
    return static_cast<std::size_t>(
        std::count_if(signs_.begin(), signs_.end(), [](std::int8_t s) { return s != 0; }));
}

QuantizedWeight::QuantizedWeight(double delta, SignPattern signs, QuantizationMode mode)
    : delta(delta), signs(std::move(signs)), mode(mode) {
    require(delta >= 0.0, "QuantizedWeight: delta must be nonnegative");
    if (mode == QuantizationMode::Binary) {
        require(this->signs.regular(), "QuantizedWeight: binary pattern must have no zeros");
    }
}

RealVector QuantizedWeight::vector() const {
    RealVector v(signs.size());
    for (std::size_t i = 0; i < signs.size(); ++i) {
        v[i] = delta * static_cast<double>(signs[i]);
    }
    return v;
}

double QuantizedWeight::norm() const {
    return delta * std::sqrt(static_cast<double>(support_size()));
}

bool QuantizedWeight::unit_normalized() const {
    const std::size_t support = support_size();
    if (support == 0) return false;
    return std::abs(delta * std::sqrt(static_cast<double>(support)) - 1.0) <= 1e-12;
}

QuantizedWeight project_binary(const RealVector& y) {
    require(!y.empty(), "project_binary: dimension must be at least 1");
    require(!is_zero(y), "project_binary: zero vector has no projection direction");
    const std::size_t n = y.size();
    std::vector<std::int8_t> signs(n);
    for (std::size_t i = 0; i < n; ++i) {
        signs[i] = y[i] >= 0.0 ? std::int8_t{1} : std::int8_t{-1};  // bsign(0) = +1
    }
    return {l1_norm(y) / static_cast<double>(n), SignPattern(std::move(signs)),
            QuantizationMode::Binary};
}

QuantizedWeight project_ternary(const RealVector& y) {
    require(!y.empty(), "project_ternary: dimension must be at least 1");
    require(!is_zero(y), "project_ternary: zero vector has no projection direction");
    const std::size_t n = y.size();
    const auto ordering = magnitude_ordering(y);

    // j* = argmax_j |y_[j]|_1^2 / j, ties to the smallest j.
    std::size_t best_j = 1;
    double best_score = 0.0;
    double prefix = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        prefix += std::abs(y[ordering.order[j - 1]]);
        const double score = prefix * prefix / static_cast<double>(j);
        if (score > best_score) {
            best_score = score;
            best_j = j;
        }
    }

    double kept_l1 = 0.0;
    std::vector<std::int8_t> signs(n, 0);
    for (std::size_t j = 0; j < best_j; ++j) {
        const std::size_t idx = ordering.order[j];
        kept_l1 += std::abs(y[idx]);
        signs[idx] = y[idx] > 0.0 ? std::int8_t{1} : std::int8_t{-1};
    }
    return {kept_l1 / static_cast<double>(best_j), SignPattern(std::move(signs)),
            QuantizationMode::Ternary};
}

QuantizedWeight normalized_project(const RealVector& y, QuantizationMode mode) {
    QuantizedWeight w =
        mode == QuantizationMode::Binary ? project_binary(y) : project_ternary(y);
    w.delta = 1.0 / std::sqrt(static_cast<double>(w.support_size()));
    return w;
}

namespace {

// Lexicographic order on sign sequences with -1 < 0 < +1.
bool pattern_less(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::size_t support_of(const std::vector<std::int8_t>& pattern) {
    return static_cast<std::size_t>(
        std::count_if(pattern.begin(), pattern.end(), [](std::int8_t s) { return s != 0; }));
}

}  // namespace

BruteForceResult brute_force_project(const RealVector& y, QuantizationMode mode) {
    require(!y.empty(), "brute_force_project: dimension must be at least 1");
    require(!is_zero(y), "brute_force_project: zero vector has no projection direction");
    const std::size_t n = y.size();
    if (n > 12) {
        throw InvalidValue("brute_force_project: enumeration guard n <= 12, got " +
                           std::to_string(n));
    }

    const double y_norm_sq = dot(y, y);
    const bool ternary = mode == QuantizationMode::Ternary;

    std::vector<std::int8_t> pattern(n, -1);
    BruteForceResult best;
    bool have_best = false;
    std::vector<std::int8_t> best_pattern;
    double best_delta = 0.0;

    while (true) {
        const std::size_t support = support_of(pattern);
        if (support > 0) {
            double inner = 0.0;
            for (std::size_t i = 0; i < n; ++i) inner += y[i] * static_cast<double>(pattern[i]);
            const double delta = std::max(0.0, inner / static_cast<double>(support));
            const double dist_sq =
                y_norm_sq - 2.0 * delta * inner + delta * delta * static_cast<double>(support);
            if (!have_best || dist_sq < best.distance_sq) {
                best.distance_sq = dist_sq;
                best.optimal_patterns = 1;
                best_pattern = pattern;
                best_delta = delta;
                have_best = true;
            } else if (dist_sq == best.distance_sq) {
                ++best.optimal_patterns;
                const std::size_t best_support = support_of(best_pattern);
                if (support < best_support ||
                    (support == best_support && pattern_less(pattern, best_pattern))) {
                    best_pattern = pattern;
                    best_delta = delta;
                }
            }
        }
        // Advance the odometer; ternary walks {-1,0,+1}, binary {-1,+1}.
        std::size_t i = 0;
        while (i < n && pattern[i] == 1) pattern[i++] = -1;
        if (i == n) break;
        pattern[i] = static_cast<std::int8_t>(pattern[i] + (ternary ? 1 : 2));
    }

    require(have_best, "brute_force_project: no candidate pattern");
    best.weight = QuantizedWeight(best_delta, SignPattern(std::move(best_pattern)), mode);
    return best;
}

}  // namespace quantdyn
