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

#include <span>
#include <vector>

#include "KdTree.h"
#include "PointFrame.h"
#include "RAHT.h"
#include "nn/Mlp.h"

namespace pcc {

//============================================================================
// Per-point displacement, current frame -> previous frame, in voxels.

struct MotionField {
  std::vector<Vec3d> vectors;
};

// Nearest-neighbour search over the points of a frame; equal distances
// resolve to the lowest (Morton-ordered) index.
class FrameIndex {
public:
  explicit FrameIndex(const PointFrame& frame);

  const PointFrame& frame() const { return *frame_; }
  int nearest(const Vec3d& q) const;
  std::vector<int> knn(const Vec3d& q, int k, int exclude = -1) const;

private:
  const PointFrame* frame_;
  KdTree3 tree_;
};

// Attributes of the Euclidean-nearest previous point for every query.
std::vector<Vec3d>
nnAttributes(const PointFrame& prev, std::span<const Vec3d> queries);
std::vector<Vec3d>
nnAttributes(const FrameIndex& prev, std::span<const Vec3d> queries);

std::vector<Vec3d> toReal(std::span<const Vec3i> positions);

// Weight-weighted mean motion of every tree node (indexed by node id).
std::vector<Vec3d> nodeMotion(const RahtTree& tree, const MotionField& motion);

//============================================================================
// Network hyper-parameters.

constexpr int kMotionNeighbors = 8;
// Relative offsets are expressed in units of this many voxels.
constexpr double kOffsetScale = 4.0;
// Motion network output unit, in voxels.
constexpr double kMotionUnit = 16.0;

//----------------------------------------------------------------------------
// Point-flow network: one round of per-cloud kNN feature aggregation, one
// round of cross-frame flow embedding, and a head that also sees the
// displacement of the cloud centroids.  The output is multiplied by a
// learnable per-axis scale that starts at zero.

class MotionEstimator {
public:
  MotionEstimator() = default;
  explicit MotionEstimator(Rng& rng);

  // n x 3 motion in voxel units.
  nn::Var estimate(
    nn::Graph& g, const FrameIndex& prev, std::span<const Vec3i> current,
    std::span<const Vec3d> aNn) const;

  MotionField estimate(
    const FrameIndex& prev, std::span<const Vec3i> current,
    std::span<const Vec3d> aNn) const;

  bool initialized() const { return !pointNet_.widths().empty(); }

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;

private:
  nn::Mlp pointNet_;
  nn::Mlp embedNet_;
  nn::Mlp head_;
  nn::Parameter scale_;
};

//----------------------------------------------------------------------------

struct PredictionBundle {
  std::vector<Vec3d> aNn;
  std::vector<Vec3d> warped;  // G + V
  std::vector<Vec3d> aW;
  std::vector<Vec3d> aP;
  std::vector<Vec3d> residual;  // A - A_p, encoder side only
  MotionField motion;
};

// Refines the warped nearest-neighbour attributes with a local set
// aggregation around each warped position.  The refinement is multiplied by
// a learnable per-channel scale that starts at zero.

class MotionCompensator {
public:
  MotionCompensator() = default;
  explicit MotionCompensator(Rng& rng);

  struct Output {
    nn::Var aP;  // n x 3
    std::vector<Vec3d> warped;
    std::vector<Vec3d> aW;
  };

  Output compensate(
    nn::Graph& g, const FrameIndex& prev, std::span<const Vec3i> current,
    nn::Var motion) const;

  bool initialized() const { return !localNet_.widths().empty(); }

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;

private:
  nn::Mlp localNet_;
  nn::Mlp head_;
  nn::Parameter scale_;
};

// Full inference path shared by encoder and decoder.  |attributes| (current
// frame, may be empty) is used only to form the residual.
PredictionBundle predict(
  const MotionEstimator& me, const MotionCompensator& mc,
  const FrameIndex& prev, std::span<const Vec3i> current,
  std::span<const Vec3d> attributes = {});

nn::Matrix toMatrix(std::span<const Vec3d> v);
std::vector<Vec3d> fromMatrix(const nn::Matrix& m);

}  // namespace pcc
