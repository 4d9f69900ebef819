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

#include "RAHT.h"
#include "nn/Density.h"
#include "nn/Mlp.h"

namespace pcc {

constexpr int kContextNeighbors = 3;
constexpr int kContextWidth = 8;

struct ContextSwitches {
  bool explicitContext = true;
  bool implicitContext = true;
};

//============================================================================
// Attribute-independent neighbourhoods of the coded (merged) nodes of the
// current tree, all indexed by coding position.
//
//  prev*: up to k merged nodes of the previous tree at the same level,
//         nearest to the motion-warped node centroid;
//  cur*:  up to k other merged nodes of the current tree at the same level,
//         nearest to the node centroid.
// Offsets are neighbour minus query, in units of the level's cell size.

struct ContextGeometry {
  std::vector<std::vector<int>> prevNeighbors;
  std::vector<std::vector<Vec3d>> prevOffsets;
  std::vector<std::vector<int>> curNeighbors;
  std::vector<std::vector<Vec3d>> curOffsets;
  std::vector<double> levelFeature;
  std::vector<double> weightFeature;
  std::vector<int> codedParent;
  // [begin, end) coding positions of each populated level, root level first
  std::vector<std::pair<int, int>> levelRanges;
};

// |motion| holds one vector per node id of |cur| (see nodeMotion()).
ContextGeometry buildContextGeometry(
  const RahtTree& cur, const RahtTree& prev, std::span<const Vec3d> motion);

// sign(x) log(1 + |x|)
double slog(double x);

//============================================================================
// Values the context model conditions on, all known to the decoder.

struct ContextInputs {
  double qstep = 1.0;
  // previous frame: high-pass coefficients of its reconstruction,
  // previous coding order
  std::span<const Vec3d> prevCoeffs;
  // slog(c_p / qstep) of the prediction's high-pass coefficients, a graph
  // value of size (n - 1) x 3
  nn::Var predSlog;
  // dequantised residual coefficients decoded so far (coding order); only
  // entries of coded parents are read
  std::span<const Vec3d> decoded;
};

class ContextModel {
public:
  ContextModel() = default;
  ContextModel(Rng& rng, nn::DensityVariant variant, ContextSwitches sw);

  // Density conditioning rows for coding positions [begin, end): three rows
  // per node (Y, U, V), each the context vector followed by the channel
  // one-hot.
  nn::Var conditioning(
    nn::Graph& g, const ContextGeometry& geom, const ContextInputs& in,
    int begin, int end) const;

  const ContextSwitches& switches() const { return switches_; }

  // Turns context branches on or off.  Newly enabled branches start with
  // zero fusion weights, leaving the model's output unchanged.
  void setSwitches(ContextSwitches sw);

  const nn::DensityModel& density() const { return density_; }
  bool initialized() const { return !fusion_.widths().empty(); }

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;

private:
  nn::Mlp explicit_;
  nn::Mlp latent_;
  nn::Mlp spatial_;
  nn::Mlp implicit_;
  nn::Mlp intra_;
  nn::Mlp fusion_;
  nn::DensityModel density_;
  ContextSwitches switches_;
};

}  // namespace pcc
