#pragma once

#include <vector>

#include <Eigen/Dense>

#include "igaplate/condensation.hpp"
#include "igaplate/plate.hpp"

namespace igaplate {

struct MultipatchCondensed {
  CondensedSystem system;
  double lump_dev = 0.0;
};

// Assembles every patch and eliminates its shear unknowns with that patch's
// own dual transforms. Each patch gives a displacement-only contribution;
// the contributions are summed in patch order. std needs no elimination and
// mxd uses the exact Schur complement.
MultipatchCondensed assemble_and_condense_multipatch(const Discretization& disc,
                                                     const PlateMaterial& mat, Variant variant,
                                                     const LoadFunction& load,
                                                     Condensation mode = Condensation::automatic);

// Largest deflection mismatch seen from the two sides of every interface,
// sampled at `samples` points per interface.
double interface_jump(const Discretization& disc, const Eigen::VectorXd& d, int samples = 20);

// True when no S-S, transformed S-S or transform entry links shear dofs of
// different patches.
bool shear_blocks_patch_local(const SpMat& block, const std::vector<int>& offsets, int total);

// Patch that owns a global shear index given the per-patch offsets.
int shear_owner(const std::vector<int>& offsets, int index);

}  // namespace igaplate
