#include "quantdyn/types.hpp"

#include <cmath>

namespace quantdyn {

double norm(const RealVector& a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

double l1_norm(const RealVector& a) {
    double s = 0.0;
    for (double x : a) s += std::abs(x);
    return s;
}

double linf_norm(const RealVector& a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    return s;
}

bool is_zero(const RealVector& a) {
    for (double x : a) {
        if (x != 0.0) return false;
    }
    return true;
}

}  // namespace quantdyn
