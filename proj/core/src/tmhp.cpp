#include "dguard/tmhp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "dguard/errors.hpp"
#include "recorder.hpp"

namespace dguard {

namespace {

constexpr std::size_t kPerturbedLimit = 24;
constexpr int kKicks = 30;

void check_speed(double speed) {
    if (!(speed > 0.0 && speed < 1.0)) {
        throw ParameterError("v", "must lie in (0, 1), got " + std::to_string(speed));
    }
}

// Pinned-endpoint path s, interior..., f. Full-sequence position 0 is s,
// n + 1 is f, and k in [1, n] is interior[k - 1].
class PinnedPath {
public:
    PinnedPath(const Point& s, std::span<const Point> points, const Point& f,
               std::vector<std::size_t> interior)
        : points_(points), seq_(std::move(interior)), s_(s), f_(f) {}

    const Point& at(std::size_t k) const {
        if (k == 0) return s_;
        if (k == seq_.size() + 1) return f_;
        return points_[seq_[k - 1]];
    }
    double dist(std::size_t a, std::size_t b) const { return distance(at(a), at(b)); }
    double length() const { return path_length(s_, points_, seq_, f_); }

    std::vector<std::size_t>& interior() { return seq_; }
    const std::vector<std::size_t>& interior() const { return seq_; }

private:
    std::span<const Point> points_;
    std::vector<std::size_t> seq_;
    Point s_;
    Point f_;
};

bool shortens(double removed, double added) { return added < removed - 1e-12 * removed; }

std::vector<std::size_t> nearest_neighbour(const Point& from, std::span<const Point> points) {
    const std::size_t n = points.size();
    std::vector<std::size_t> seq;
    seq.reserve(n);
    std::vector<char> used(n, 0);
    Point at = from;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pick = n;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double d = distance(at, points[j]);
            if (d < best) {
                best = d;
                pick = j;
            }
        }
        used[pick] = 1;
        seq.push_back(pick);
        at = points[pick];
    }
    return seq;
}

// 2-opt reversals of interior positions [i, j] and Or-opt relocation of
// segments of up to three points (either orientation) until no move
// shortens the path or `examined` reaches `budget`.
void local_search(PinnedPath& path, std::size_t& examined, std::size_t budget) {
    auto& seq = path.interior();
    const std::size_t n = seq.size();
    bool improved = n >= 2;
    while (improved && examined < budget) {
        improved = false;
        for (std::size_t i = 1; i < n && examined < budget; ++i) {
            for (std::size_t j = i + 1; j <= n && examined < budget; ++j) {
                ++examined;
                const double removed = path.dist(i - 1, i) + path.dist(j, j + 1);
                const double added = path.dist(i - 1, j) + path.dist(i, j + 1);
                if (shortens(removed, added)) {
                    std::reverse(seq.begin() + static_cast<std::ptrdiff_t>(i - 1),
                                 seq.begin() + static_cast<std::ptrdiff_t>(j));
                    improved = true;
                }
            }
        }
        for (std::size_t len = 1; len <= 3 && len < n && examined < budget; ++len) {
            for (std::size_t i = 1; i + len - 1 <= n && examined < budget; ++i) {
                const std::size_t j = i + len - 1;
                // Re-insert [i, j] between p and p + 1, both outside [i - 1, j].
                for (std::size_t p = 0; p <= n && examined < budget; ++p) {
                    if (p + 1 >= i && p <= j) continue;
                    ++examined;
                    const double removed =
                        path.dist(i - 1, i) + path.dist(j, j + 1) + path.dist(p, p + 1);
                    const double bridged = path.dist(i - 1, j + 1);
                    const double forward = path.dist(p, i) + path.dist(j, p + 1);
                    const double backward = path.dist(p, j) + path.dist(i, p + 1);
                    if (!shortens(removed, bridged + std::min(forward, backward))) continue;

                    const auto first = seq.begin() + static_cast<std::ptrdiff_t>(i - 1);
                    const auto last = seq.begin() + static_cast<std::ptrdiff_t>(j);
                    std::vector<std::size_t> segment(first, last);
                    if (backward < forward) std::reverse(segment.begin(), segment.end());
                    seq.erase(first, last);
                    const std::size_t slot = p < i ? p : p - len;
                    seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(slot), segment.begin(),
                               segment.end());
                    improved = true;
                    break;
                }
            }
        }
    }
}

// Double-bridge kick: split the interior into A B C D and reorder as A C B D.
void double_bridge(std::vector<std::size_t>& seq, std::mt19937_64& rng) {
    const std::size_t n = seq.size();
    std::uniform_int_distribution<std::size_t> cut(1, n - 1);
    std::size_t c[3] = {cut(rng), cut(rng), cut(rng)};
    std::sort(std::begin(c), std::end(c));
    if (c[0] == c[1] || c[1] == c[2]) return;
    std::vector<std::size_t> out(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(c[0]));
    out.insert(out.end(), seq.begin() + static_cast<std::ptrdiff_t>(c[1]),
               seq.begin() + static_cast<std::ptrdiff_t>(c[2]));
    out.insert(out.end(), seq.begin() + static_cast<std::ptrdiff_t>(c[0]),
               seq.begin() + static_cast<std::ptrdiff_t>(c[1]));
    out.insert(out.end(), seq.begin() + static_cast<std::ptrdiff_t>(c[2]), seq.end());
    seq = std::move(out);
}

}  // namespace

Point g_map(const Point& p, double speed) {
    check_speed(speed);
    const double k = 1.0 - speed * speed;
    return {p.x / std::sqrt(k), p.y / k};
}

Point g_inv(const Point& p, double speed) {
    check_speed(speed);
    const double k = 1.0 - speed * speed;
    return {p.x * std::sqrt(k), p.y * k};
}

double intercept_time(const Point& vehicle, const Point& target, double speed) {
    check_speed(speed);
    const double k = 1.0 - speed * speed;
    const double dx = vehicle.x - target.x;
    const double dy = vehicle.y - target.y;
    return (std::sqrt(k * dx * dx + dy * dy) - speed * dy) / k;
}

double tmhp_drift_correction(const Point& s, const Point& f, double speed) {
    check_speed(speed);
    return speed * (f.y - s.y) / (1.0 - speed * speed);
}

double path_length(const Point& s, std::span<const Point> points,
                   std::span<const std::size_t> order, const Point& f) {
    double len = 0.0;
    Point at = s;
    for (std::size_t i : order) {
        len += distance(at, points[i]);
        at = points[i];
    }
    return len + distance(at, f);
}

HamiltonianPath emhp_exact(const Point& s, std::span<const Point> points, const Point& f) {
    const std::size_t n = points.size();
    if (n > kExactSolverCap) {
        throw SizeError("emhp_exact handles at most " + std::to_string(kExactSolverCap) +
                        " points, got " + std::to_string(n) + "; use emhp_heuristic");
    }
    HamiltonianPath best;
    if (n == 0) {
        best.length = distance(s, f);
        return best;
    }

    const std::size_t full = (std::size_t{1} << n) - 1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    // rest[mask * n + i]: shortest completion from point i (last visited, in
    // mask) through every point outside mask and on to f.
    std::vector<double> rest((full + 1) * n, inf);
    for (std::size_t i = 0; i < n; ++i) {
        rest[full * n + i] = distance(points[i], f);
    }
    for (std::size_t mask = full; mask-- > 1;) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (std::size_t{1} << i))) continue;
            double m = inf;
            for (std::size_t j = 0; j < n; ++j) {
                if (mask & (std::size_t{1} << j)) continue;
                const std::size_t next = mask | (std::size_t{1} << j);
                m = std::min(m, distance(points[i], points[j]) + rest[next * n + j]);
            }
            rest[mask * n + i] = m;
        }
    }

    // Forward reconstruction; scanning j upward keeps the first (smallest)
    // index among exact ties.
    std::size_t mask = 0;
    Point at = s;
    for (std::size_t step = 0; step < n; ++step) {
        double m = inf;
        std::size_t pick = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (mask & (std::size_t{1} << j)) continue;
            const std::size_t next = mask | (std::size_t{1} << j);
            const double c = distance(at, points[j]) + rest[next * n + j];
            if (c < m) {
                m = c;
                pick = j;
            }
        }
        best.order.push_back(pick);
        mask |= std::size_t{1} << pick;
        at = points[pick];
    }
    best.length = path_length(s, points, best.order, f);
    return best;
}

HamiltonianPath emhp_heuristic(const Point& s, std::span<const Point> points, const Point& f) {
    const std::size_t n = points.size();
    const std::size_t budget = 50 * n * n;

    // Two constructions: nearest neighbour forward from s, and backward from
    // f (reversed). Each is polished by local search; the shorter wins.
    std::vector<std::size_t> backward = nearest_neighbour(f, points);
    std::reverse(backward.begin(), backward.end());
    PinnedPath best(s, points, f, nearest_neighbour(s, points));
    std::size_t examined = 0;
    local_search(best, examined, budget);
    double best_len = best.length();
    {
        std::size_t spent = 0;
        PinnedPath alt(s, points, f, std::move(backward));
        local_search(alt, spent, budget);
        if (const double len = alt.length(); len < best_len) {
            best = std::move(alt);
            best_len = len;
        }
    }

    // Small instances: a fixed number of seeded double-bridge kicks, each
    // followed by local search, keeping only improvements.
    if (n >= 8 && n <= kPerturbedLimit) {
        std::mt19937_64 rng(0x5eed + n);
        for (int kick = 0; kick < kKicks; ++kick) {
            PinnedPath trial = best;
            double_bridge(trial.interior(), rng);
            std::size_t spent = 0;
            local_search(trial, spent, budget);
            if (const double len = trial.length(); len < best_len) {
                best = std::move(trial);
                best_len = len;
            }
        }
    }

    HamiltonianPath result;
    result.order = best.interior();
    result.length = best_len;
    return result;
}

TmhpSolution tmhp_solve(const TmhpInstance& instance) {
    const double v = instance.speed;
    check_speed(v);

    std::vector<Point> mapped;
    mapped.reserve(instance.points.size());
    for (const Point& p : instance.points) {
        mapped.push_back(g_map(p, v));
    }
    const Point gs = g_map(instance.start, v);
    const Point gf = g_map(instance.finish, v);
    const HamiltonianPath path = mapped.size() <= kExactSolverCap
                                     ? emhp_exact(gs, mapped, gf)
                                     : emhp_heuristic(gs, mapped, gf);

    TmhpSolution sol;
    sol.order = path.order;
    sol.emhp_length = path.length;

    // Execute: targets drift by v * elapsed in +y.
    double elapsed = 0.0;
    Point at = instance.start;
    auto visit = [&](const Point& initial) {
        const Point now{initial.x, initial.y + v * elapsed};
        const double dt = intercept_time(at, now, v);
        elapsed += dt;
        at = {initial.x, initial.y + v * elapsed};
    };
    for (std::size_t i : sol.order) {
        visit(instance.points[i]);
    }
    visit(instance.finish);
    sol.duration = elapsed;
    return sol;
}

RunResult run_tf(const DemandStream& stream, const Point& start, const RunOptions& options) {
    const EnvParams& env = stream.env();
    const double v = env.speed();
    if (!(v < 1.0)) {
        throw RegimeError("the TMHP-fraction policy requires v < 1, got v = " + std::to_string(v));
    }
    const double half = env.length() / 2.0;
    const double budget = half / v;  // L / (2v)

    detail::RunRecorder rec(stream, start, options);
    std::size_t lo = 0;
    std::size_t hi = 0;
    double t = 0.0;
    bool woken = false;

    std::vector<std::size_t> members;
    TmhpInstance inst;
    inst.speed = v;
    while (true) {
        while (hi < stream.size() && stream[hi].t_arr <= t) ++hi;
        while (lo < hi && v * (t - stream[lo].t_arr) > half) ++lo;
        rec.recompute(t, woken);

        members.clear();
        for (std::size_t i = lo; i < hi; ++i) {
            if (!rec.is_captured(i)) members.push_back(i);
        }
        if (members.empty()) {
            if (hi >= stream.size()) break;
            t = stream[hi].t_arr;
            rec.wait_until(t);
            woken = true;
            continue;
        }
        woken = false;

        // The latest arrival has the lowest ordinate; it closes the path.
        const std::size_t last = members.back();
        members.pop_back();
        inst.start = rec.position();
        inst.finish = demand_position(stream[last], v, t);
        inst.points.clear();
        for (std::size_t i : members) {
            inst.points.push_back(demand_position(stream[i], v, t));
        }
        const TmhpSolution plan = tmhp_solve(inst);

        std::vector<std::size_t> route;
        route.reserve(plan.order.size() + 1);
        for (std::size_t k : plan.order) route.push_back(members[k]);
        route.push_back(last);

        const double stop = t + budget;
        double now = t;
        for (std::size_t id : route) {
            const Point at = rec.position();
            const Point target = demand_position(stream[id], v, now);
            const double dt = intercept_time(at, target, v);
            const Point meet{target.x, target.y + v * dt};
            if (now + dt <= stop) {
                rec.move_to(now, meet);
                now += dt;
                rec.capture(id, now);
                continue;
            }
            // Budget runs out mid-leg: stop short on the line toward `meet`.
            const double frac = (stop - now) / dt;
            rec.move_to(now, {at.x + frac * (meet.x - at.x), at.y + frac * (meet.y - at.y)});
            now = stop;
            break;
        }
        // The recorder's clock carries rounding from the legs; the plan clock
        // is authoritative.
        rec.wait_until(now);
        t = now;
    }
    return std::move(rec).finish();
}

}  // namespace dguard
