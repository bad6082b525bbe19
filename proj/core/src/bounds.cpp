#include "dguard/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dguard/errors.hpp"

namespace dguard {

namespace {

void require_positive(const char* field, double value) {
    if (!(std::isfinite(value) && value > 0.0)) {
        throw ParameterError(field, "must be finite and > 0");
    }
}

void require_slow(double speed) {
    if (!(speed < 1.0)) {
        throw RegimeError("bound applies to v < 1 only, got v = " + std::to_string(speed));
    }
}

}  // namespace

double erf(double x) { return std::erf(x); }

double lp_lower_bound(double rate, double width) {
    require_positive("lambda", rate);
    require_positive("W", width);
    const double a = rate * width / 2.0;
    const double root = std::sqrt(a);
    return 1.0 / (std::sqrt(std::numbers::pi * a) * erf(root) + std::exp(-a));
}

double lp_competitive_factor(double speed, double width, double length) {
    require_positive("v", speed);
    require_positive("W", width);
    require_positive("L", length);
    if (!(speed >= 1.0)) {
        throw RegimeError("competitive factor applies to v >= 1 only, got v = " +
                          std::to_string(speed));
    }
    return std::max(0.0, 1.0 - speed * width / length);
}

double causal_upper_bound(double speed, double rate, double width) {
    require_positive("v", speed);
    require_positive("lambda", rate);
    require_positive("W", width);
    require_slow(speed);
    return std::min(1.0, 2.0 / std::sqrt(speed * rate * width));
}

double tf_lower_bound(double speed, double rate, double width, double beta_tsp) {
    require_positive("v", speed);
    require_positive("lambda", rate);
    require_positive("W", width);
    require_positive("beta_tsp", beta_tsp);
    require_slow(speed);
    return std::min(1.0, 1.0 / (beta_tsp * std::sqrt(speed * rate * width)));
}

}  // namespace dguard
