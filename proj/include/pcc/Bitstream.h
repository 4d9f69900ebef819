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
// Compressed frame container.  All multi-byte fields are little-endian.
//
//   offset  size  field
//        0     4  magic "4DAC"
//        4     1  version
//        5     1  frame type (0 = intra, 1 = predicted)
//        6     1  octree depth
//        7     1  flags (reserved, zero)
//        8     4  qstep (IEEE-754 binary32)
//       12     4  point count
//       16     8  model hash (0: no learned model involved)
//       24    12  quantised DC coefficient, Y U V (int32)
//       36     4  payload length
//       40     n  payload

constexpr uint8_t kBitstreamVersion = 1;
constexpr size_t kFrameHeaderSize = 40;

enum class FrameType : uint8_t {
  kIntra = 0,
  kPredicted = 1,
};

struct FrameHeader {
  uint8_t version = kBitstreamVersion;
  FrameType type = FrameType::kIntra;
  uint8_t depth = 0;
  uint8_t flags = 0;
  float qstep = 1.0f;
  uint32_t pointCount = 0;
  uint64_t modelHash = 0;
  Vec3<int32_t> dc;
};

struct ParsedFrame {
  FrameHeader header;
  std::vector<uint8_t> payload;
};

std::vector<uint8_t>
writeFrame(const FrameHeader& header, std::span<const uint8_t> payload);

// Throws BadMagic, UnsupportedVersion, TruncatedPayload or ParseError.
ParsedFrame readFrame(std::span<const uint8_t> bytes);

// Throws ModelMismatch unless the frame was produced with the given model
// (or needs none).
void checkModelHash(const FrameHeader& header, uint64_t loadedHash);

//----------------------------------------------------------------------------
// A stream is a concatenation of frames, each preceded by its u32 length.

std::vector<uint8_t>
writeStream(std::span<const std::vector<uint8_t>> frames);

std::vector<std::vector<uint8_t>> readStream(std::span<const uint8_t> bytes);

//----------------------------------------------------------------------------
// CRC-32 (IEEE) used for the end-of-payload reconstruction checksum.

uint32_t crc32(std::span<const uint8_t> bytes);
uint32_t attributeChecksum(std::span<const Vec3d> attributes);

}  // namespace pcc
