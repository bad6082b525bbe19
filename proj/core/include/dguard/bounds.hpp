#pragma once

// Closed-form capture-fraction bounds.

namespace dguard {

// Beardwood-Halton-Hammersley constant for Euclidean tours in the plane.
inline constexpr double kBetaTsp = 0.7120;

// Standard error function, (2/sqrt(pi)) * integral_0^x exp(-t^2) dt.
double erf(double x);

struct BoundsInput {
    double speed = 1.0;
    double rate = 1.0;
    double width = 1.0;
    double length = 1.0;
    double beta_tsp = kBetaTsp;

    // lambda W / 2
    double alpha() const noexcept { return rate * width / 2.0; }
};

// Greedy-path (hence LP) lower bound, valid when L >= vW:
// 1 / (sqrt(pi a) erf(sqrt(a)) + exp(-a)), a = lambda W / 2.
double lp_lower_bound(double rate, double width);

// max(0, 1 - vW/L): F(LP) >= factor * F(NCLP). Requires v >= 1.
double lp_competitive_factor(double speed, double width, double length);

// min{1, 2 / sqrt(v lambda W)} for every causal policy. Requires v < 1.
double causal_upper_bound(double speed, double rate, double width);

// min{1, 1 / (beta sqrt(v lambda W))} for the TMHP-fraction policy in the
// slow, heavy-load limit. Requires v < 1.
double tf_lower_bound(double speed, double rate, double width, double beta_tsp = kBetaTsp);

}  // namespace dguard
