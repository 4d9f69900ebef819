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

#include "pcc/Bitstream.h"

#include <cmath>
#include <cstring>

#include <zlib.h>

#include "pcc/ByteIO.h"
#include "pcc/Error.h"

namespace pcc {

static const char kMagic[4] = {'4', 'D', 'A', 'C'};

//============================================================================

std::vector<uint8_t>
writeFrame(const FrameHeader& h, std::span<const uint8_t> payload)
{
  ByteWriter w;
  for (char c : kMagic)
    w.u8(uint8_t(c));
  w.u8(h.version);
  w.u8(uint8_t(h.type));
  w.u8(h.depth);
  w.u8(h.flags);
  w.f32(h.qstep);
  w.u32(h.pointCount);
  w.u64(h.modelHash);
  for (int c = 0; c < 3; c++)
    w.i32(h.dc[c]);
  w.u32(uint32_t(payload.size()));
  w.bytes(payload);
  return w.take();
}

ParsedFrame
readFrame(std::span<const uint8_t> bytes)
{
  if (bytes.size() < kFrameHeaderSize)
    raise(ErrorCode::kTruncatedPayload, "frame shorter than its header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    raise(ErrorCode::kBadMagic, "not a 4DAC frame");

  ByteReader r(bytes.subspan(4));
  ParsedFrame f;
  FrameHeader& h = f.header;
  h.version = r.u8();
  if (h.version != kBitstreamVersion)
    raise(ErrorCode::kUnsupportedVersion, "unsupported bitstream version");

  uint8_t type = r.u8();
  if (type > 1)
    raise(ErrorCode::kParseError, "unknown frame type");
  h.type = FrameType(type);
  h.depth = r.u8();
  h.flags = r.u8();
  h.qstep = r.f32();
  h.pointCount = r.u32();
  h.modelHash = r.u64();
  for (int c = 0; c < 3; c++)
    h.dc[c] = r.i32();
  uint32_t len = r.u32();

  if (h.depth < 1 || h.depth > 16)
    raise(ErrorCode::kParseError, "frame depth out of range");
  if (!(std::isfinite(h.qstep) && h.qstep > 0))
    raise(ErrorCode::kParseError, "invalid qstep");
  if (h.pointCount == 0)
    raise(ErrorCode::kParseError, "frame declares zero points");

  auto payload = r.bytes(len);
  if (r.remaining())
    raise(ErrorCode::kParseError, "trailing bytes after frame payload");
  f.payload.assign(payload.begin(), payload.end());
  return f;
}

void
checkModelHash(const FrameHeader& h, uint64_t loadedHash)
{
  if (h.modelHash != 0 && h.modelHash != loadedHash)
    raise(ErrorCode::kModelMismatch, "frame was coded with another model");
}

//============================================================================

std::vector<uint8_t>
writeStream(std::span<const std::vector<uint8_t>> frames)
{
  ByteWriter w;
  for (const auto& f : frames) {
    w.u32(uint32_t(f.size()));
    w.bytes(f);
  }
  return w.take();
}

std::vector<std::vector<uint8_t>>
readStream(std::span<const uint8_t> bytes)
{
  ByteReader r(bytes);
  std::vector<std::vector<uint8_t>> frames;
  while (r.remaining()) {
    uint32_t len = r.u32();
    auto b = r.bytes(len);
    frames.emplace_back(b.begin(), b.end());
  }
  return frames;
}

//============================================================================

uint32_t
crc32(std::span<const uint8_t> bytes)
{
  uLong crc = ::crc32(0L, Z_NULL, 0);
  return uint32_t(::crc32(crc, bytes.data(), uInt(bytes.size())));
}

uint32_t
attributeChecksum(std::span<const Vec3d> attributes)
{
  ByteWriter w;
  for (const auto& a : attributes)
    for (int c = 0; c < 3; c++)
      w.f64(a[c]);
  return crc32(w.buffer());
}

}  // namespace pcc
