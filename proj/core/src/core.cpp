#include "dguard/core.hpp"

#include <cmath>
#include <random>
#include <string>

#include "dguard/errors.hpp"

namespace dguard {

namespace {

void require_positive(const char* field, double value) {
    if (!std::isfinite(value)) {
        throw ParameterError(field, "must be finite, got " + std::to_string(value));
    }
    if (value <= 0.0) {
        throw ParameterError(field, "must be > 0, got " + std::to_string(value));
    }
}

}  // namespace

double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

EnvParams make_env(double width, double length, double speed, double rate) {
    require_positive("W", width);
    require_positive("L", length);
    require_positive("v", speed);
    require_positive("lambda", rate);
    EnvParams env;
    env.width_ = width;
    env.length_ = length;
    env.speed_ = speed;
    env.rate_ = rate;
    return env;
}

const char* to_string(DemandStatus status) noexcept {
    switch (status) {
        case DemandStatus::pending: return "pending";
        case DemandStatus::outstanding: return "outstanding";
        case DemandStatus::captured: return "captured";
        case DemandStatus::escaped: return "escaped";
    }
    return "unknown";
}

Point demand_position(const Demand& demand, double speed, double t) noexcept {
    return {demand.x, speed * (t - demand.t_arr)};
}

DemandStream::DemandStream(EnvParams env, std::vector<Demand> demands, std::uint64_t seed)
    : env_(env), demands_(std::move(demands)), seed_(seed) {
    for (std::size_t i = 0; i < demands_.size(); ++i) {
        const Demand& d = demands_[i];
        if (d.id != i) {
            throw ContractError("demand ids must equal arrival ordinals");
        }
        if (!std::isfinite(d.t_arr) || d.t_arr < 0.0) {
            throw ContractError("demand " + std::to_string(i) + " has invalid arrival time");
        }
        if (i > 0 && !(d.t_arr > demands_[i - 1].t_arr)) {
            throw ContractError("arrival times must be strictly increasing");
        }
        if (!(d.x >= 0.0 && d.x < env_.width())) {
            throw ContractError("demand " + std::to_string(i) + " abscissa outside [0, W)");
        }
    }
}

DemandStream generate_stream(const EnvParams& env, std::size_t n_demands, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Demand> demands;
    demands.reserve(n_demands);
    double t = 0.0;
    for (std::size_t i = 0; i < n_demands; ++i) {
        double next = t;
        // A zero draw or a gap below the clock's resolution would break the
        // strict ordering; redraw (probability ~2^-53 per draw).
        while (!(next > t)) {
            const double u = unit(rng);
            if (u > 0.0) {
                next = t - std::log(u) / env.rate();
            }
        }
        t = next;
        double x = env.width() * unit(rng);
        if (x >= env.width()) {
            x = std::nextafter(env.width(), 0.0);
        }
        demands.push_back({.id = i, .t_arr = t, .x = x});
    }
    return DemandStream(env, std::move(demands), seed);
}

std::size_t region_count(const DemandStream& stream, const Rect& rect, double t) {
    std::size_t count = 0;
    const double v = stream.env().speed();
    for (const Demand& d : stream.demands()) {
        if (d.t_arr > t) {
            break;
        }
        if (rect.contains(demand_position(d, v, t))) {
            ++count;
        }
    }
    return count;
}

}  // namespace dguard
