#pragma once

// Environment, demand kinematics and Poisson demand-stream generation.
//
// Coordinates: demands arrive on the generator y = 0 and translate in +y at
// speed v toward the deadline y = L. The service vehicle moves at unit speed,
// so time and length share units.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dguard {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

// Validated environment parameters. Construct through make_env().
class EnvParams {
public:
    double width() const noexcept { return width_; }
    double length() const noexcept { return length_; }
    double speed() const noexcept { return speed_; }
    double rate() const noexcept { return rate_; }

    // Demands per unit area in an unserviced region: lambda / (v W).
    double areal_intensity() const noexcept { return rate_ / (speed_ * width_); }

    // Time a demand spends between generator and deadline.
    double transit_time() const noexcept { return length_ / speed_; }

    friend bool operator==(const EnvParams&, const EnvParams&) = default;

private:
    friend EnvParams make_env(double, double, double, double);
    double width_ = 1.0;
    double length_ = 1.0;
    double speed_ = 1.0;
    double rate_ = 1.0;
};

// Throws ParameterError naming the first non-finite or non-positive field.
EnvParams make_env(double width, double length, double speed, double rate);

enum class DemandStatus { pending, outstanding, captured, escaped };

const char* to_string(DemandStatus status) noexcept;

struct Demand {
    std::size_t id = 0;
    double t_arr = 0.0;
    double x = 0.0;
    DemandStatus status = DemandStatus::pending;
    double resolve_time = std::numeric_limits<double>::quiet_NaN();
};

// Instant at which the demand reaches the deadline: t_arr + L / v.
inline double escape_time(const Demand& d, const EnvParams& env) noexcept {
    return d.t_arr + env.transit_time();
}

// Position (x, v (t - t_arr)); a negative ordinate means not yet arrived.
Point demand_position(const Demand& demand, double speed, double t) noexcept;

class DemandStream {
public:
    DemandStream(EnvParams env, std::vector<Demand> demands, std::uint64_t seed);

    const EnvParams& env() const noexcept { return env_; }
    std::span<const Demand> demands() const noexcept { return demands_; }
    std::uint64_t seed() const noexcept { return seed_; }
    std::size_t size() const noexcept { return demands_.size(); }
    bool empty() const noexcept { return demands_.empty(); }
    const Demand& operator[](std::size_t i) const { return demands_[i]; }

private:
    EnvParams env_;
    std::vector<Demand> demands_;
    std::uint64_t seed_ = 0;
};

// n_demands Poisson arrivals: exponential gaps via -ln(U)/lambda, abscissae
// uniform on [0, W). Driven by std::mt19937_64 seeded with `seed`.
DemandStream generate_stream(const EnvParams& env, std::size_t n_demands, std::uint64_t seed);

struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    double area() const noexcept { return (x1 - x0) * (y1 - y0); }
    bool contains(const Point& p) const noexcept {
        return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1;
    }
};

// Number of demands whose unserviced position at time t lies in `rect`
// (half-open on the upper edges).
std::size_t region_count(const DemandStream& stream, const Rect& rect, double t);

// Vehicle position and clock.
struct VehicleState {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
};

}  // namespace dguard
