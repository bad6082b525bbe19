#include "dguard/stream_io.hpp"

#include <istream>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "dguard/errors.hpp"

namespace dguard {

using nlohmann::json;

void write_stream_jsonl(std::ostream& out, const DemandStream& stream) {
    const EnvParams& env = stream.env();
    json header = {
        {"env", {{"W", env.width()}, {"L", env.length()}, {"v", env.speed()}, {"lambda", env.rate()}}},
        {"seed", stream.seed()},
        {"n", stream.size()},
    };
    out << header.dump() << '\n';
    for (const Demand& d : stream.demands()) {
        json rec = {{"id", d.id}, {"t_arr", d.t_arr}, {"x", d.x}};
        out << rec.dump() << '\n';
    }
}

DemandStream read_stream_jsonl(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("stream file is empty");
    }
    try {
        const json header = json::parse(line);
        const json& e = header.at("env");
        const EnvParams env = make_env(e.at("W").get<double>(), e.at("L").get<double>(),
                                       e.at("v").get<double>(), e.at("lambda").get<double>());
        const auto seed = header.at("seed").get<std::uint64_t>();
        const auto n = header.at("n").get<std::size_t>();

        std::vector<Demand> demands;
        demands.reserve(n);
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            const json rec = json::parse(line);
            demands.push_back({.id = rec.at("id").get<std::size_t>(),
                               .t_arr = rec.at("t_arr").get<double>(),
                               .x = rec.at("x").get<double>()});
        }
        if (demands.size() != n) {
            throw ConfigError("header announces " + std::to_string(n) + " demands, found " +
                              std::to_string(demands.size()));
        }
        return DemandStream(env, std::move(demands), seed);
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("malformed stream record: ") + ex.what());
    } catch (const ContractError& ex) {
        throw ConfigError(std::string("invalid stream: ") + ex.what());
    }
}

}  // namespace dguard
