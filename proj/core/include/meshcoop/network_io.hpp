#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "meshcoop/net_model.hpp"

namespace meshcoop {

// JSON network document:
//
//   {
//     "providers": 3,                      // optional, defaults to max owner
//     "params": { "price_per_rate": 10, "cost_per_rate": 1,
//                 "bandwidth_hz": 200000, "tx_range_m": 150,
//                 "gain_coeff": 62.5, "gain_exponent": 4,
//                 "tx_power_w": 1, "noise_power_w": 1e-10,
//                 "area_side_m": 600, "rate_req_range_kbps": [20, 80] },
//     "nodes": [ { "id": 1, "owner": 1, "x": 12.5, "y": 300 } ],
//     "sessions": [ { "id": "l1.1", "owner": 1, "source": 1,
//                     "destination": 2, "rate_req_kbps": 33 } ],
//     "capacity_overrides": [ { "from": 1, "to": 2, "capacity_kbps": 100 } ]
//   }
//
// Every params key is optional (defaults of Params). Unknown keys are
// rejected. Rates are Kbps, distances meters.

// Throws ParseError on malformed input (with field path, and line for
// syntax errors) and ValidationError on violated invariants.
NetworkSpec parse_network(std::string_view text);
NetworkSpec read_network(const std::filesystem::path& path);

// Deterministic output; parse_network(write_network(s)) == s.
std::string write_network(const NetworkSpec& spec);
void write_network(const NetworkSpec& spec, const std::filesystem::path& path);

}  // namespace meshcoop
