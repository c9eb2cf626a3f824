#include "quantdyn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace quantdyn {

MagnitudeOrdering magnitude_ordering(const RealVector& x, double tie_tolerance) {
    require(tie_tolerance >= 0.0, "magnitude_ordering: tie tolerance must be nonnegative");
    const std::size_t n = x.size();
    MagnitudeOrdering result;
    result.order.resize(n);
    std::iota(result.order.begin(), result.order.end(), std::size_t{0});
    std::stable_sort(result.order.begin(), result.order.end(),
                     [&x](std::size_t a, std::size_t b) {
                         return std::abs(x[a]) > std::abs(x[b]);
                     });
    std::size_t pos = 0;
    while (pos < n) {
        std::size_t end = pos + 1;
        while (end < n && std::abs(std::abs(x[result.order[end]]) -
                                   std::abs(x[result.order[end - 1]])) <= tie_tolerance) {
            ++end;
        }
        result.tie_group_sizes.push_back(end - pos);
        pos = end;
    }
    return result;
}

bool ConeDescriptor::regular() const {
    if (!signs.regular()) return false;
    for (std::size_t size : tie_group_sizes) {
        if (size != 1) return false;
    }
    return true;
}

bool ConeDescriptor::operator==(const ConeDescriptor& other) const {
    return signs == other.signs && order == other.order &&
           tie_group_sizes == other.tie_group_sizes;
}

SignPattern orthant_of(const RealVector& x) {
    require(!x.empty(), "orthant_of: dimension must be at least 1");
    return SignPattern::of(x);
}

ConeDescriptor cone_of(const RealVector& x, double tie_tolerance) {
    require(!x.empty(), "cone_of: dimension must be at least 1");
    auto ordering = magnitude_ordering(x, tie_tolerance);
    return ConeDescriptor{SignPattern::of(x), std::move(ordering.order),
                          std::move(ordering.tie_group_sizes)};
}

std::optional<std::size_t> VertexSet::find(const QuantizedWeight& z) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].signs == z.signs) return i;
    }
    return std::nullopt;
}

VertexSet VertexSet::with_first(const QuantizedWeight& z1) const {
    auto index = find(z1);
    require(index.has_value(), "VertexSet::with_first: vertex not in set");
    VertexSet reordered;
    reordered.vertices.reserve(vertices.size());
    reordered.vertices.push_back(vertices[*index]);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (i != *index) reordered.vertices.push_back(vertices[i]);
    }
    return reordered;
}

bool VertexSet::operator==(const VertexSet& other) const {
    if (vertices.size() != other.vertices.size()) return false;
    // Order-insensitive: vertex sets are sets.
    for (const auto& z : vertices) {
        if (!other.find(z)) return false;
    }
    return true;
}

VertexSet vertex_set(const RealVector& x) {
    const std::size_t n = x.size();
    VertexSet result;
    if (is_zero(x)) return result;

    const auto ordering = magnitude_ordering(x);
    const auto& order = ordering.order;
    std::vector<std::int8_t> signs(n, 0);
    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t idx = order[k - 1];
        if (x[idx] == 0.0) break;
        signs[idx] = x[idx] > 0.0 ? std::int8_t{1} : std::int8_t{-1};
        // A prefix of length k is a vertex when the magnitude strictly drops
        // after position k (or k = n).
        const bool boundary =
            (k == n) || (std::abs(x[order[k]]) < std::abs(x[order[k - 1]]));
        if (boundary) {
            result.vertices.emplace_back(1.0 / std::sqrt(static_cast<double>(k)),
                                         SignPattern(signs), QuantizationMode::Ternary);
        }
    }
    return result;
}

std::vector<double> decompose_in_cone(const RealVector& y, const VertexSet& basis) {
    require(!basis.empty(), "decompose_in_cone: empty basis");
    const std::size_t n = basis.vertices.front().dimension();
    require_same_dimension(y.size(), n, "decompose_in_cone");

    const double scale = norm(y);
    const double tol = 1e-12 * std::max(scale, 1e-300);

    // The basis order is the caller's; work through ascending support sizes
    // so the nested-support block structure lines up.
    const std::size_t m = basis.size();
    std::vector<std::size_t> by_support(m);
    std::iota(by_support.begin(), by_support.end(), std::size_t{0});
    std::sort(by_support.begin(), by_support.end(), [&basis](std::size_t a, std::size_t b) {
        return basis.vertices[a].support_size() < basis.vertices[b].support_size();
    });

    // Blocks are the support increments between consecutive vertices.
    std::vector<double> block_values(m, 0.0);  // signed magnitude per block
    std::vector<bool> covered(n, false);
    double reconstruction_error_sq = 0.0;

    for (std::size_t rank = 0; rank < m; ++rank) {
        const auto& z = basis.vertices[by_support[rank]];
        require_same_dimension(z.dimension(), n, "decompose_in_cone: basis");
        double value_sum = 0.0;
        std::size_t block_size = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (z.signs[j] != 0 && !covered[j]) {
                value_sum += y[j] * static_cast<double>(z.signs[j]);
                covered[j] = true;
                ++block_size;
            }
        }
        require(block_size > 0, "decompose_in_cone: basis supports are not strictly nested");
        block_values[rank] = value_sum / static_cast<double>(block_size);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!covered[j]) reconstruction_error_sq += y[j] * y[j];
    }

    // Back-substitution: mu for the k-support vertex is sqrt(k) * (a_k - a_next),
    // with a beyond the last support 0. Nonnegativity of every mu is exactly
    // closure membership.
    std::vector<double> mu(m, 0.0);
    for (std::size_t rank = 0; rank < m; ++rank) {
        const double next = (rank + 1 < m) ? block_values[rank + 1] : 0.0;
        const double k = static_cast<double>(basis.vertices[by_support[rank]].support_size());
        const double coeff = std::sqrt(k) * (block_values[rank] - next);
        if (coeff < -tol) {
            throw InvalidValue("decompose_in_cone: not in cone closure (negative coefficient)");
        }
        mu[by_support[rank]] = std::max(coeff, 0.0);
    }

    RealVector reconstruction(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& z = basis.vertices[i];
        const double step = mu[i] * z.delta;
        for (std::size_t j = 0; j < n; ++j) {
            reconstruction[j] += step * static_cast<double>(z.signs[j]);
        }
    }
    double err_sq = reconstruction_error_sq;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = y[j] - reconstruction[j];
        err_sq += d * d;
    }
    if (std::sqrt(err_sq) > tol) {
        throw InvalidValue("decompose_in_cone: not in cone closure (reconstruction residual)");
    }
    return mu;
}

ConeMembership in_cone(const RealVector& y, const RealVector& x) {
    require_same_dimension(y.size(), x.size(), "in_cone");
    require(!is_zero(x), "in_cone: x must be nonzero");
    if (cone_of(y) == cone_of(x)) return ConeMembership::Interior;
    try {
        decompose_in_cone(y, vertex_set(x));
        return ConeMembership::Closure;
    } catch (const InvalidValue&) {
        return ConeMembership::Outside;
    }
}

const char* to_string(ConeMembership membership) {
    switch (membership) {
        case ConeMembership::Interior: return "interior";
        case ConeMembership::Closure: return "closure";
        case ConeMembership::Outside: return "outside";
    }
    return "?";
}

namespace {

std::uint64_t factorial(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

std::uint64_t power(std::uint64_t base, std::size_t exponent) {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < exponent; ++i) p *= base;
    return p;
}

void check_enumeration_guard(std::size_t n, const char* what) {
    if (n < 1 || n > 8) {
        throw InvalidValue(std::string(what) + ": n must be in [1, 8], got " +
                           std::to_string(n));
    }
}

}  // namespace

GeometryCounts count_geometry(std::size_t n) {
    check_enumeration_guard(n, "count_geometry");
    return {power(3, n), power(2, n), factorial(n)};
}

GeometryCounts enumerate_geometry_counts(std::size_t n) {
    check_enumeration_guard(n, "enumerate_geometry_counts");

    // Orthants: walk every pattern in {-1,0,+1}^n with an odometer.
    std::uint64_t orthants = 0;
    std::uint64_t regular_orthants = 0;
    std::vector<int> pattern(n, -1);
    while (true) {
        ++orthants;
        if (std::none_of(pattern.begin(), pattern.end(), [](int s) { return s == 0; })) {
            ++regular_orthants;
        }
        std::size_t i = 0;
        while (i < n && pattern[i] == 1) pattern[i++] = -1;
        if (i == n) break;
        ++pattern[i];
    }

    // Cones: inside the all-positive orthant, each strict magnitude ordering
    // is one regular cone; representatives with magnitudes n..1 placed per
    // permutation must map to distinct descriptors.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::set<std::vector<std::size_t>> distinct_cones;
    do {
        RealVector representative(n, 0.0);
        for (std::size_t rank = 0; rank < n; ++rank) {
            representative[perm[rank]] = static_cast<double>(n - rank);
        }
        const ConeDescriptor descriptor = cone_of(representative);
        if (!descriptor.regular()) {
            throw Error("enumerate_geometry_counts: representative cone not regular");
        }
        distinct_cones.insert(descriptor.order);
    } while (std::next_permutation(perm.begin(), perm.end()));

    return {orthants, regular_orthants, static_cast<std::uint64_t>(distinct_cones.size())};
}

}  // namespace quantdyn
