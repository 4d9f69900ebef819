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
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "PointFrame.h"

namespace pcc {

//============================================================================
// Synthetic dynamic sequences with exact ground-truth motion.

enum class Shape
{
  kSphere,
  kCube,
  kTwoBlobs,
};

enum class ColorMode
{
  kSmoothGradient,
  kTexturedNoise,
};

struct SequenceSpec {
  int frameCount = 2;
  Shape shape = Shape::kSphere;
  int pointsPerFrame = 2000;
  Vec3d translation;      // voxels per frame
  double rotationZ = 0;   // radians per frame, about the object centre
  ColorMode colorMode = ColorMode::kSmoothGradient;
  double noiseSigma = 0;  // per-frame positional jitter, voxels
  uint64_t seed = 1;
  int depth = 9;
  // Object size in voxels; 0 picks a size giving roughly one sample per
  // unit of surface area.
  double extent = 0;
};

// Motion vectors, one per point of a frame, pointing from the current frame
// to the previous one.
struct FlowGroundTruth {
  std::vector<Vec3d> vectors;
};

struct SequenceFrame {
  PointFrame frame;
  FlowGroundTruth flow;  // all zero for the first frame
};

std::vector<SequenceFrame> generateSequence(const SequenceSpec& spec);

SequenceSpec sequenceSpecFromJson(const nlohmann::json& j);
nlohmann::json toJson(const SequenceSpec& spec);

//----------------------------------------------------------------------------
// Nearest neighbour of every current point in the previous frame under
// |dxyz|^2 + colorWeight * |dyuv|^2; the vector points at that neighbour.

FlowGroundTruth pseudoMotion(
  const PointFrame& prev, const PointFrame& cur, double colorWeight = 1.0);

}  // namespace pcc
