#pragma once

#include <iosfwd>

#include "dguard/core.hpp"

namespace dguard {

// JSON-lines stream format. The first line is a header
//   {"env":{"W":..,"L":..,"v":..,"lambda":..},"seed":..,"n":..}
// followed by one {"id":..,"t_arr":..,"x":..} record per demand.
// Doubles are written in shortest round-trip form, so a read-back stream is
// bit-identical to the one written.
void write_stream_jsonl(std::ostream& out, const DemandStream& stream);

// Throws ConfigError on malformed input.
DemandStream read_stream_jsonl(std::istream& in);

}  // namespace dguard
