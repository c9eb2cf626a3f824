#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace quantdyn {

using RealVector = std::vector<double>;

/// Base class for all quantdyn errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input document (CSV/JSON/vector literal). CLI exit code 2.
struct ParseError : Error {
    using Error::Error;
};

/// Value outside its admissible domain (zero vector, bad fraction, ...). CLI exit code 3.
struct InvalidValue : Error {
    using Error::Error;
};

/// Conflicting dimensions or modes between inputs. CLI exit code 4.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// Dense row-major matrix, used for the m x n Gaussian input batches.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("dot: vectors of size " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const RealVector& a);
double l1_norm(const RealVector& a);
double linf_norm(const RealVector& a);

/// True when every coordinate is exactly zero.
bool is_zero(const RealVector& a);

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidValue(message);
}

inline void require_same_dimension(std::size_t a, std::size_t b, const std::string& what) {
    if (a != b) {
        throw DimensionMismatch(what + ": dimensions " + std::to_string(a) + " and " +
                                std::to_string(b) + " do not match");
    }
}

}  // namespace quantdyn
