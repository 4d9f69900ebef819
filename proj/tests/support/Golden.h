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

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pcc/Codec.h"
#include "pcc/Sequence.h"

namespace pcc::test {

//============================================================================
// The streams stored under tests/data.  Regenerate with PCC_WRITE_GOLDEN=1
// (unit tests) after an intentional format change.

struct GoldenFile {
  std::string name;
  std::vector<uint8_t> bytes;
};

struct GoldenSet {
  std::vector<PointFrame> frames;
  Model model;
  std::vector<GoldenFile> files;
  std::vector<PointFrame> modelReconstructions;
};

inline GoldenSet
makeGoldenSet()
{
  SequenceSpec spec;
  spec.frameCount = 2;
  spec.pointsPerFrame = 64;
  spec.depth = 5;
  spec.seed = 42;
  spec.translation = Vec3d(1, 0, 0);

  GoldenSet g;
  for (auto& f : generateSequence(spec))
    g.frames.push_back(std::move(f.frame));

  CodecConfig cfg;
  cfg.depth = spec.depth;
  cfg.qstep = 8;
  ModelConfig mc;
  mc.seed = 42;
  g.model = Model(mc);

  auto plain = encodeSequence(g.frames, cfg);
  auto learned = encodeSequence(g.frames, cfg, &g.model);
  g.files = {
    {"golden_intra.4dac", plain.frames[0]},
    {"golden_predicted_nn.4dac", plain.frames[1]},
    {"golden_predicted_model.4dac", learned.frames[1]},
  };
  g.modelReconstructions = learned.reconstructions;
  return g;
}

inline std::vector<uint8_t>
readBytes(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

inline void
writeBytes(const std::filesystem::path& p, const std::vector<uint8_t>& bytes)
{
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

}  // namespace pcc::test
