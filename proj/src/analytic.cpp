#include "parsearch/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace parsearch {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

void validate_cost(const Cost& cost, bool need_cprime) {
    if (!(cost.c > 0.0) || !std::isfinite(cost.c)) {
        throw std::invalid_argument("search cost c must be positive, got " +
                                    std::to_string(cost.c));
    }
    if (need_cprime && (!(cost.cprime > 0.0) || !std::isfinite(cost.cprime))) {
        throw std::invalid_argument("sequential cost cprime must be positive, got " +
                                    std::to_string(cost.cprime));
    }
}

void validate_hybrid_cost(const Cost& cost) {
    validate_cost(cost, true);
    if (!(cost.cprime > 0.5 * cost.c && cost.cprime < cost.c)) {
        throw std::invalid_argument(
            "hybrid mode requires c/2 < cprime < c; got c=" + std::to_string(cost.c) +
            ", cprime=" + std::to_string(cost.cprime));
    }
}

RotatedPoint to_rotated(double x1, double x2) {
    return RotatedPoint{(x1 + x2) / kSqrt2, (x1 - x2) / kSqrt2};
}

void from_rotated(const RotatedPoint& p, double& x1, double& x2) {
    x1 = (p.t + p.s) / kSqrt2;
    x2 = (p.t - p.s) / kSqrt2;
}

double psi_value(double x, double c) {
    validate_cost(Cost{c, 0.0});
    const double b = 1.0 / (4.0 * c);
    if (x >= b) return x;
    if (x <= -b) return 0.0;
    const double y = x + b;
    return c * y * y;
}

double eta_value(const RotatedPoint& p, double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw std::invalid_argument("eta_value: theta must be positive, got " +
                                    std::to_string(theta));
    }
    const double half_width = 1.0 / (2.0 * kSqrt2 * theta);
    const double as = std::fabs(p.s);
    if (as <= half_width) {
        return p.t / kSqrt2 + theta * p.s * p.s + 1.0 / (8.0 * theta);
    }
    return (p.t + as) / kSqrt2;
}

double phi_upper(const RotatedPoint& p, double c, double eps) {
    validate_cost(Cost{c, 0.0});
    if (!(eps > 0.0 && eps < c)) {
        throw std::invalid_argument("phi_upper: eps must lie in (0, c); got eps=" +
                                    std::to_string(eps) + ", c=" + std::to_string(c));
    }
    const double alpha = 2.0 * std::sqrt(c * eps);
    const double z = std::max(1.0 - alpha * p.t, 0.0);
    return z * z / (4.0 * c) + eta_value(p, c - eps);
}

double dfb_upper_bound(double T, double c) {
    validate_cost(Cost{c, 0.0});
    if (!(T >= 1.0 / (2.0 * c))) {
        throw std::invalid_argument("dfb_upper_bound: requires T >= 1/(2c); got T=" +
                                    std::to_string(T) + ", c=" + std::to_string(c));
    }
    return 1.0 / (8.0 * kSqrt2 * c * c * c * T * T);
}

double value_upper_bound_2d(double x1, double x2, double c) {
    validate_cost(Cost{c, 0.0});
    return std::max(x1, 0.0) + std::max(x2, 0.0) + 1.0 / (4.0 * c);
}

}  // namespace parsearch
