#include "igaplate/dof_map.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "igaplate/error.hpp"

namespace igaplate {

namespace {

constexpr double kMatchTol = 1e-12;

const KnotVector& edge_knots(const SurfacePatch& p, Side s) {
  return (s == Side::u0 || s == Side::u1) ? p.knots_v : p.knots_u;
}

std::vector<double> mirrored(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  const double a = v.front(), b = v.back();
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = a + b - v[v.size() - 1 - k];
  return out;
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    x = parent[static_cast<std::size_t>(x)];
  }
  return x;
}

}  // namespace

std::vector<int> side_indices(const ControlNet& net, Side side) {
  std::vector<int> out;
  switch (side) {
    case Side::u0:
      for (int j = 0; j < net.m; ++j) out.push_back(net.index(0, j));
      break;
    case Side::u1:
      for (int j = 0; j < net.m; ++j) out.push_back(net.index(net.n - 1, j));
      break;
    case Side::v0:
      for (int i = 0; i < net.n; ++i) out.push_back(net.index(i, 0));
      break;
    case Side::v1:
      for (int i = 0; i < net.n; ++i) out.push_back(net.index(i, net.m - 1));
      break;
  }
  return out;
}

std::vector<Interface> detect_interfaces(const std::vector<SurfacePatch>& patches) {
  constexpr Side sides[] = {Side::u0, Side::u1, Side::v0, Side::v1};
  std::vector<Interface> out;
  for (std::size_t a = 0; a < patches.size(); ++a) {
    for (std::size_t b = a + 1; b < patches.size(); ++b) {
      const auto& pa = patches[a];
      const auto& pb = patches[b];
      for (Side sa : sides) {
        const auto ia = side_indices(pa.net, sa);
        const auto& A0 = pa.net.points[static_cast<std::size_t>(ia.front())];
        const auto& A1 = pa.net.points[static_cast<std::size_t>(ia.back())];
        // Coarse end-point test selects candidates; the strict test follows.
        const double loose = 1e-3 * std::max(1.0, (A1 - A0).norm());
        for (Side sb : sides) {
          const auto ib = side_indices(pb.net, sb);
          const auto& B0 = pb.net.points[static_cast<std::size_t>(ib.front())];
          const auto& B1 = pb.net.points[static_cast<std::size_t>(ib.back())];
          bool reversed;
          if ((A0 - B0).norm() < loose && (A1 - B1).norm() < loose)
            reversed = false;
          else if ((A0 - B1).norm() < loose && (A1 - B0).norm() < loose)
            reversed = true;
          else
            continue;
          if ((A1 - A0).norm() < kMatchTol) continue;  // collapsed edge
          const std::string where = "patches " + std::to_string(a) + " and " + std::to_string(b);
          const auto& ka = edge_knots(pa, sa);
          const auto& kb = edge_knots(pb, sb);
          if (ka.degree() != kb.degree() || ia.size() != ib.size())
            throw Error(ErrorCode::NonConformingInterface, where + ": degree or size mismatch");
          const auto kbv = reversed ? mirrored(kb.values()) : kb.values();
          for (std::size_t k = 0; k < kbv.size(); ++k)
            if (std::abs(ka.values()[k] - kbv[k]) > kMatchTol)
              throw Error(ErrorCode::NonConformingInterface, where + ": knot vectors differ");
          for (std::size_t k = 0; k < ia.size(); ++k) {
            const auto kb_idx = static_cast<std::size_t>(ib[reversed ? ib.size() - 1 - k : k]);
            const auto ka_idx = static_cast<std::size_t>(ia[k]);
            if ((pa.net.points[ka_idx] - pb.net.points[kb_idx]).norm() > kMatchTol ||
                std::abs(pa.net.weights[ka_idx] - pb.net.weights[kb_idx]) > kMatchTol)
              throw Error(ErrorCode::NonConformingInterface,
                          where + ": control point " + std::to_string(k) + " does not match");
          }
          out.push_back({static_cast<int>(a), sa, static_cast<int>(b), sb, reversed});
        }
      }
    }
  }
  return out;
}

PatchAssembly build_dof_map(const std::vector<SurfacePatch>& patches,
                            const std::vector<Interface>& interfaces) {
  PatchAssembly out;
  out.patches = patches;
  out.interfaces = interfaces;
  std::vector<int> offset(patches.size() + 1, 0);
  for (std::size_t p = 0; p < patches.size(); ++p) {
    validate_patch(patches[p]);
    offset[p + 1] = offset[p] + patches[p].net.n * patches[p].net.m;
  }
  std::vector<int> parent(static_cast<std::size_t>(offset.back()));
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& itf : interfaces) {
    const auto ia = side_indices(patches[static_cast<std::size_t>(itf.patch_a)].net, itf.side_a);
    const auto ib = side_indices(patches[static_cast<std::size_t>(itf.patch_b)].net, itf.side_b);
    if (ia.size() != ib.size()) throw Error(ErrorCode::NonConformingInterface, "edge sizes differ");
    for (std::size_t k = 0; k < ia.size(); ++k) {
      const int ga = offset[static_cast<std::size_t>(itf.patch_a)] + ia[k];
      const int gb = offset[static_cast<std::size_t>(itf.patch_b)] +
                     ib[itf.reversed ? ib.size() - 1 - k : k];
      const int ra = find_root(parent, ga), rb = find_root(parent, gb);
      if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
    }
  }
  // Number roots in order of first appearance.
  std::vector<int> id(parent.size(), -1);
  out.node_map.resize(patches.size());
  for (std::size_t p = 0; p < patches.size(); ++p) {
    const int count = offset[p + 1] - offset[p];
    out.node_map[p].resize(static_cast<std::size_t>(count));
    for (int l = 0; l < count; ++l) {
      const auto root = static_cast<std::size_t>(find_root(parent, offset[p] + l));
      if (id[root] < 0) id[root] = out.n_nodes++;
      out.node_map[p][static_cast<std::size_t>(l)] = id[root];
    }
  }
  // Clamp nodes on sides that are not part of an interface.
  out.clamped.assign(static_cast<std::size_t>(out.n_nodes), 0);
  constexpr Side sides[] = {Side::u0, Side::u1, Side::v0, Side::v1};
  for (std::size_t p = 0; p < patches.size(); ++p) {
    for (Side s : sides) {
      bool shared = false;
      for (const auto& itf : interfaces)
        if ((itf.patch_a == static_cast<int>(p) && itf.side_a == s) ||
            (itf.patch_b == static_cast<int>(p) && itf.side_b == s))
          shared = true;
      if (shared) continue;
      for (int l : side_indices(patches[p].net, s))
        out.clamped[static_cast<std::size_t>(out.node_map[p][static_cast<std::size_t>(l)])] = 1;
    }
  }
  return out;
}

PatchAssembly build_dof_map(const std::vector<SurfacePatch>& patches) {
  return build_dof_map(patches, detect_interfaces(patches));
}

}  // namespace igaplate
