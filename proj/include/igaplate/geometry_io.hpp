#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "igaplate/dof_map.hpp"

namespace igaplate {

// Text format, one patch per block:
//
//   igaplate-geometry v1
//   patch
//   degrees <p> <q>
//   knots_u <k ...>
//   knots_v <k ...>
//   points
//   <x y z w>          n*m lines, eta outer
//   end
//
// Blank lines and lines starting with '#' are skipped.
std::vector<SurfacePatch> parse_geometry(std::string_view text);

// Canonical form: shortest round-trip decimal for every number.
std::string format_geometry(const std::vector<SurfacePatch>& patches);

PatchAssembly read_geometry_file(const std::string& path);
void write_geometry_file(const PatchAssembly& assembly, const std::string& path);

}  // namespace igaplate
