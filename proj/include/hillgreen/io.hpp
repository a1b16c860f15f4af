#ifndef HILLGREEN_IO_HPP_
#define HILLGREEN_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hillgreen/potential.hpp"

namespace hillgreen {

class GreensFunction;

/// Parses a potential descriptor:
///
///   {"T": 2, "shift": 0,
///    "pieces": [{"from": 0, "to": 1, "kind": "const", "value": 0},
///               {"from": 1, "to": 2, "kind": "cos", "c0": 0, "c1": 1, "omega": 1, "phase": 0},
///               {"from": .., "to": .., "kind": "poly", "coeffs": [c0, c1, c2, c3]},
///               {"from": .., "to": .., "kind": "table", "x": [...], "y": [...], "order": 3}]}
///
/// Pieces are functions of absolute t unless "origin"/"direction" remap the
/// argument (written by to_json for mirrored segments). Throws DescriptorError.
Potential potential_from_json(const nlohmann::json& j);
nlohmann::json potential_to_json(const Potential& p);

Potential load_potential(const std::filesystem::path& path);

/// Hash of the canonical descriptor; tags sampled kernels with their potential.
std::size_t potential_hash(const Potential& p);

/// Shortest decimal string that round-trips to the same double (at most 17
/// significant digits).
std::string format_number(double x);

/// CSV with header `t,s,G`, rows in lexicographic (t, s) order.
void write_kernel_csv(std::ostream& out, const GreensFunction& g);

}  // namespace hillgreen

#endif  // HILLGREEN_IO_HPP_
