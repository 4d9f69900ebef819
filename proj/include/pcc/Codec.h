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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "Bitstream.h"
#include "Model.h"
#include "PointFrame.h"
#include "RAHT.h"

namespace pcc {

//============================================================================

struct CodecConfig {
  int depth = 9;
  double qstep = 10.0;
  int kNeighbors = kContextNeighbors;
  nn::DensityVariant densityVariant = nn::DensityVariant::kConditionalLaplace;
  std::string modelPath;
  // Intra frame period; 0 codes only the first frame as intra.
  int gop = 0;

  void validate() const;
  std::string toJson() const;
  static CodecConfig fromJson(const std::string& text);
};

// The step actually used for quantisation: the header stores binary32.
double effectiveQstep(double qstep);

//============================================================================
// History shared by encoder and decoder: the previous reconstruction.

struct CodecState {
  std::optional<PointFrame> previous;
  uint64_t framesCoded = 0;
  uint64_t totalBits = 0;
};

using EncoderState = CodecState;
using DecoderState = CodecState;

struct EncodedFrame {
  std::vector<uint8_t> bytes;
  FrameType type = FrameType::kIntra;
  PointFrame reconstruction;
  QuantizedCoefficients coefficients;
};

// Codes |frame| as intra or predicted (gop rule) and advances |state| to the
// decoder-identical reconstruction.  P-frames use the learned model when
// |model| is given, the nearest-neighbour predictor otherwise.
EncodedFrame encodeFrame(
  EncoderState& state, const PointFrame& frame, const CodecConfig& config,
  const Model* model = nullptr);

EncodedFrame encodeIntra(
  EncoderState& state, const PointFrame& frame, const CodecConfig& config);

EncodedFrame encodePredicted(
  EncoderState& state, const PointFrame& frame, const CodecConfig& config,
  const Model* model);

// Decodes one frame given its geometry (sorted, unique voxel positions).
PointFrame decodeFrame(
  DecoderState& state, std::span<const uint8_t> bytes,
  std::span<const Vec3i> geometry, const Model* model = nullptr,
  int frameIndex = -1);

//----------------------------------------------------------------------------
// Whole sequences.

struct SequenceResult {
  std::vector<std::vector<uint8_t>> frames;
  std::vector<PointFrame> reconstructions;
  std::vector<FrameType> types;
};

SequenceResult encodeSequence(
  std::span<const PointFrame> frames, const CodecConfig& config,
  const Model* model = nullptr);

std::vector<PointFrame> decodeSequence(
  std::span<const std::vector<uint8_t>> frames,
  std::span<const std::vector<Vec3i>> geometry, const Model* model = nullptr);

}  // namespace pcc
