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
// A raw, not yet voxelized, colored point cloud as read from disk.

struct RawPointCloud {
  std::vector<Vec3d> positions;
  std::vector<Vec3<uint8_t>> colors;  // R, G, B

  size_t size() const { return positions.size(); }
};

//============================================================================
// One voxelized frame of a sequence.  Positions are unique integer voxel
// coordinates in [0, 2^depth) sorted by Morton code; attributes are Y, U, V
// in [0, 255].

struct PointFrame {
  int frameIndex = 0;
  int depth = 0;
  std::vector<Vec3i> positions;
  std::vector<Vec3d> attributes;

  size_t size() const { return positions.size(); }

  // Throws ShapeMismatch / GeometryMismatch style errors if the invariants
  // listed above do not hold.
  void validate() const;
};

//----------------------------------------------------------------------------
// Full-range BT.709.

Vec3d rgbToYuv(const Vec3<uint8_t>& rgb);
Vec3<uint8_t> yuvToRgb(const Vec3d& yuv);

std::vector<Vec3d> rgbToYuv(std::span<const Vec3<uint8_t>> colors);

//----------------------------------------------------------------------------

struct VoxelizeInfo {
  // All input points coincide; output is a single voxel at the origin.
  bool degenerate = false;
  Vec3d origin;
  double scale = 1.0;
};

// Min-max normalises to [0, 2^depth) with a uniform scale of
// (2^depth - 1) / max_extent, floors, merges colliding points with the mean
// attribute and sorts by Morton code.
PointFrame voxelize(
  const RawPointCloud& cloud, int depth, VoxelizeInfo* info = nullptr);

// Voxelizes several clouds with one shared bounding box so that frames of a
// sequence stay in a common coordinate system.
std::vector<PointFrame>
voxelizeSequence(std::span<const RawPointCloud> clouds, int depth);

// Builds a frame from a cloud whose positions are already integral voxel
// coordinates (merging duplicates); throws ParseError otherwise.
PointFrame frameFromVoxels(const RawPointCloud& cloud, int depth);

// True if every coordinate is an integer in [0, 2^depth).
bool isVoxelized(const RawPointCloud& cloud, int depth);

// Merges points that fall in the same voxel (mean attribute) and sorts by
// Morton code.  Also returns, for each output voxel, the indices of the
// inputs it absorbed when |members| is non-null.
PointFrame mergeVoxels(
  std::span<const Vec3i> positions,
  std::span<const Vec3d> attributes,
  int depth,
  std::vector<std::vector<int>>* members = nullptr);

//----------------------------------------------------------------------------

struct Metrics {
  double bpp = 0;
  double psnrY = 0;
  double mseY = 0;
};

constexpr double kPsnrCap = 100.0;

double psnrFromMse(double mseY);

Metrics computeMetrics(
  const PointFrame& original, const PointFrame& reconstructed,
  uint64_t totalBits);

}  // namespace pcc
