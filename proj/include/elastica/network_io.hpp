#pragma once

#include <filesystem>
#include <string>

#include "elastica/network.hpp"

namespace elastica {

// Network files are JSON documents:
//
//   {
//     "mu": 1.0,                      // or one value per curve
//     "curves": [ {"closed": false, "points": [[x, y], ...]}, ... ],
//     "junctions": [
//       {"kind": "natural", "members": [{"curve": 0, "end": "start"}, ...]},
//       {"kind": "clamped", "members": [...], "cosines": [-0.5, -0.5]}
//     ],
//     "endpoints": [
//       {"curve": 1, "end": "end", "bc": "navier", "point": [x, y]},
//       {"curve": 2, "end": "start", "bc": "clamped", "point": [x, y], "tangent": [tx, ty]}
//     ]
//   }
//
// Endpoint "point" defaults to the current curve end. Parse and schema errors
// raise ConfigError; structural errors raise InvalidNetwork.
[[nodiscard]] NetworkSpec network_from_json(const std::string& text);
[[nodiscard]] std::string network_to_json(const NetworkSpec& spec, int indent = 1);

[[nodiscard]] NetworkSpec load_network(const std::filesystem::path& path);
void save_network(const NetworkSpec& spec, const std::filesystem::path& path);

}  // namespace elastica
