/* The copyright in this software is being made available under the BSD
 * Licence, included below.  This software may be subject to other third
 * party and contributor rights, including patent rights, and no such
 * rights are granted under this licence.
 *
 * Copyright (c) 2026, the pcc4d contributors
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 * * Redistributions of source code must retain the above copyright
 *   notice, this list of conditions and the following disclaimer.
 *
 * * Redistributions in binary form must reproduce the above copyright
 *   notice, this list of conditions and the following disclaimer in the
 *   documentation and/or other materials provided with the distribution.
 *
 * * Neither the name of the copyright holder nor the names of its
 *   contributors may be used to endorse or promote products derived from
 *   this software without specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE
 * LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF THE
 * POSSIBILITY OF SUCH DAMAGE.
 */

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "Vec3.h"

namespace pcc {

//============================================================================
// Region adaptive hierarchical transform.
//
// Level 0 holds one leaf per voxel.  Going from level s-1 to level s halves
// one axis: x, y, z, x, ... starting with the least significant bit, i.e. a
// level-s node covers all voxels whose Morton code shares (code >> s).  Two
// occupied siblings merge into a node carrying one high-pass coefficient;
// a lone child passes through unchanged.  The root sits at level 3 * depth.

struct RahtNode {
  int level = 0;
  uint64_t key = 0;  // Morton code >> level
  int weight = 1;
  Vec3d centroid;
  int child[2] = {-1, -1};  // child[0] is the lower sibling (bit == 0)
  int parent = -1;
  int codedIndex = -1;  // position in the coding order, merged nodes only

  bool merged() const { return child[1] >= 0; }
};

class RahtTree {
public:
  // Positions must be unique and sorted by Morton code.
  static RahtTree build(std::span<const Vec3i> positions, int depth);

  int depth() const { return depth_; }
  int pointCount() const { return pointCount_; }
  int root() const { return root_; }
  int levelCount() const { return 3 * depth_ + 1; }

  const std::vector<RahtNode>& nodes() const { return nodes_; }
  const RahtNode& node(int id) const { return nodes_[id]; }

  // Node ids per level in Morton order; leaves (level 0) are ids 0..n-1.
  const std::vector<int>& level(int s) const { return levels_[s]; }

  // Merged nodes: root level first, Morton order within a level.  There are
  // exactly pointCount - 1 of them.
  const std::vector<int>& codingOrder() const { return codingOrder_; }

  // Coding index of the closest merged strict ancestor of coded node c, or
  // -1 when there is none.  Always precedes c in the coding order.
  const std::vector<int>& codedParent() const { return codedParent_; }

  // Cell coordinates of a node at its own level's resolution.
  Vec3i cell(int id) const;

  // Side length (in voxels) of a level's cell, geometric mean over axes.
  static double cellScale(int level);

private:
  int depth_ = 0;
  int pointCount_ = 0;
  int root_ = -1;
  std::vector<RahtNode> nodes_;
  std::vector<std::vector<int>> levels_;
  std::vector<int> codingOrder_;
  std::vector<int> codedParent_;
};

//============================================================================

struct Coefficients {
  Vec3d dc;
  std::vector<Vec3d> highs;  // in coding order
};

struct QuantizedCoefficients {
  Vec3<int32_t> dc;
  std::vector<Vec3<int32_t>> highs;
  double qstep = 1.0;
};

// Throws ShapeMismatch when the attribute count does not match the tree.
Coefficients
rahtForward(const RahtTree& tree, std::span<const Vec3d> attributes);

std::vector<Vec3d>
rahtInverse(const RahtTree& tree, const Coefficients& coeffs);

// Low-pass coefficient of every node (indexed by node id) for the given
// attributes; used to read node-level values of a transformed signal.
std::vector<Vec3d>
rahtNodeLows(const RahtTree& tree, std::span<const Vec3d> attributes);

// Weight-weighted mean of a per-point field over every node.
std::vector<Vec3d>
nodeAverages(const RahtTree& tree, std::span<const Vec3d> perPoint);

//----------------------------------------------------------------------------
// Uniform scalar quantisation, round half away from zero.

int32_t quantize(double value, double qstep);

QuantizedCoefficients quantize(const Coefficients& coeffs, double qstep);
Coefficients dequantize(const QuantizedCoefficients& q);

}  // namespace pcc
