#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "quantdyn/quantized_weight.hpp"
#include "quantdyn/types.hpp"

namespace quantdyn {

// ----------------------------------------------------------------------------
// Magnitude ordering
// ----------------------------------------------------------------------------

/**
 * Descending-magnitude ordering of a vector's coordinates.
 *
 * `order` is a permutation of {0..n-1} sorting |x| in descending order;
 * equal magnitudes are broken by ascending coordinate index, so the
 * representation is canonical. `tie_group_sizes` partitions the sorted
 * positions into maximal blocks of equal magnitude (equality within
 * `tie_tolerance`, exact by default).
 */
struct MagnitudeOrdering {
    std::vector<std::size_t> order;
    std::vector<std::size_t> tie_group_sizes;
};

MagnitudeOrdering magnitude_ordering(const RealVector& x, double tie_tolerance = 0.0);

// ----------------------------------------------------------------------------
// Orthants and cones
// ----------------------------------------------------------------------------

/**
 * Identifier of the cone of a vector: its sign pattern together with the
 * ordering/tie structure of its coordinate magnitudes. Two vectors lie in
 * the same cone exactly when their descriptors are equal; permutations
 * inside a tie group do not affect equality because the canonical ordering
 * sorts tied coordinates by index.
 */
struct ConeDescriptor {
    SignPattern signs;
    std::vector<std::size_t> order;
    std::vector<std::size_t> tie_group_sizes;

    /// Regular: no zero sign and every tie group a singleton.
    bool regular() const;

    bool operator==(const ConeDescriptor& other) const;
    bool operator!=(const ConeDescriptor& other) const { return !(*this == other); }
};

/// Result of a cone membership query.
enum class ConeMembership : std::uint8_t { Interior, Closure, Outside };

const char* to_string(ConeMembership membership);

/**
 * The vertex set Lambda(x): unit-norm quantized vectors built from prefixes
 * of x's descending-magnitude ordering. A prefix of length k contributes a
 * vertex exactly when x's k-th sorted coordinate is nonzero and either k = n
 * or the magnitude strictly drops after position k. Vertices are stored in
 * ascending support size; supports are strictly nested.
 */
struct VertexSet {
    std::vector<QuantizedWeight> vertices;

    std::size_t size() const { return vertices.size(); }
    bool empty() const { return vertices.empty(); }

    /// Index of the vertex with the same sign pattern, if present.
    std::optional<std::size_t> find(const QuantizedWeight& z) const;

    /// Copy with the given vertex moved to the front (order otherwise kept).
    VertexSet with_first(const QuantizedWeight& z1) const;

    bool operator==(const VertexSet& other) const;
};

// ----------------------------------------------------------------------------
// Operations
// ----------------------------------------------------------------------------

/// Coordinate-wise sign pattern identifying the orthant of x.
SignPattern orthant_of(const RealVector& x);

/// Cone descriptor of x: sign pattern plus magnitude ordering with ties.
ConeDescriptor cone_of(const RealVector& x, double tie_tolerance = 0.0);

/**
 * Membership of y in the cone of x.
 *
 * Interior: cone_of(y) == cone_of(x). Closure: y is a nonnegative
 * combination of the vertices of x (checked by decomposition). Outside
 * otherwise. x must be nonzero.
 */
ConeMembership in_cone(const RealVector& y, const RealVector& x);

/// The vertex set Lambda(x); empty exactly when x = 0.
VertexSet vertex_set(const RealVector& x);

/**
 * Coefficients mu >= 0 with y = sum mu_z z over the basis, aligned with the
 * basis order. Computed by back-substitution on the nested supports: the
 * coefficient of the k-support vertex is sqrt(k) * (a_k - a_next), where a_k
 * is the common signed magnitude of y on that vertex's block and a beyond
 * the last support is 0. Throws InvalidValue ("not in cone closure") when
 * some coefficient would be negative or the reconstruction misses y by more
 * than 1e-12 * |y|.
 */
std::vector<double> decompose_in_cone(const RealVector& y, const VertexSet& basis);

struct GeometryCounts {
    std::uint64_t orthants = 0;
    std::uint64_t regular_orthants = 0;
    std::uint64_t regular_cones_per_regular_orthant = 0;

    bool operator==(const GeometryCounts&) const = default;
};

/// Closed-form counts (3^n, 2^n, n!) for 1 <= n <= 8.
GeometryCounts count_geometry(std::size_t n);

/// Same counts confirmed by explicit enumeration of sign patterns and
/// orderings; used by the test suites. Guarded to 1 <= n <= 8.
GeometryCounts enumerate_geometry_counts(std::size_t n);

}  // namespace quantdyn
