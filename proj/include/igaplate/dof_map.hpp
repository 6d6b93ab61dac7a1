#pragma once

#include <vector>

#include "igaplate/surface.hpp"

namespace igaplate {

// Patch sides: xi = first/last, eta = first/last.
enum class Side { u0, u1, v0, v1 };

struct Interface {
  int patch_a = 0;
  Side side_a = Side::u1;
  int patch_b = 0;
  Side side_b = Side::u0;
  bool reversed = false;  // edge parameters run in opposite directions
};

/// Patches plus the displacement/rotation node numbering shared across
/// conforming interfaces.
struct PatchAssembly {
  std::vector<SurfacePatch> patches;
  std::vector<Interface> interfaces;
  int n_nodes = 0;
  std::vector<std::vector<int>> node_map;  // [patch][local control point] -> node
  std::vector<char> clamped;               // [node] lies on an exterior edge
};

// Local control-point indices along a side, in increasing edge parameter.
std::vector<int> side_indices(const ControlNet& net, Side side);

// Finds every pair of coincident edges. Edges whose end points meet but
// whose knots, points or weights differ beyond 1e-12 are rejected.
std::vector<Interface> detect_interfaces(const std::vector<SurfacePatch>& patches);

PatchAssembly build_dof_map(const std::vector<SurfacePatch>& patches,
                            const std::vector<Interface>& interfaces);
PatchAssembly build_dof_map(const std::vector<SurfacePatch>& patches);

}  // namespace igaplate
