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

#include "pcc/nn/ParameterFile.h"

#include <cstring>
#include <fstream>
#include <iterator>

#include "pcc/ByteIO.h"
#include "pcc/Error.h"

namespace pcc::nn {

static const char kModelMagic[8] = {'4', 'D', 'A', 'C', 'M', 'O', 'D', 'L'};

uint64_t
fnv1a64(std::span<const uint8_t> bytes)
{
  uint64_t h = 0xcbf29ce484222325ull;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h ? h : 1;
}

//============================================================================

std::vector<uint8_t>
serializeParameters(
  const std::string& config, std::span<const Parameter* const> params)
{
  ByteWriter w;
  for (char c : kModelMagic)
    w.u8(uint8_t(c));
  w.u32(kParameterFileVersion);
  w.str(config);
  w.u32(uint32_t(params.size()));
  for (const Parameter* p : params) {
    w.str(p->name);
    w.u32(uint32_t(p->value.rows));
    w.u32(uint32_t(p->value.cols));
    for (double v : p->value.data)
      w.f64(v);
  }
  w.u64(fnv1a64(w.buffer()));
  return w.take();
}

ParameterFile
parseParameters(std::span<const uint8_t> bytes)
{
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kModelMagic, 8) != 0)
    raise(ErrorCode::kBadMagic, "not a model parameter file");
  if (bytes.size() < 8 + 4 + 8)
    raise(ErrorCode::kTruncatedPayload, "model file too short");

  auto body = bytes.first(bytes.size() - 8);
  ByteReader tail(bytes.last(8));
  uint64_t stored = tail.u64();
  if (stored != fnv1a64(body))
    raise(ErrorCode::kChecksumMismatch, "model file hash mismatch");

  ByteReader r(body.subspan(8));
  if (r.u32() != kParameterFileVersion)
    raise(ErrorCode::kUnsupportedVersion, "unsupported model file version");

  ParameterFile f;
  f.hash = stored;
  f.config = r.str();
  uint32_t count = r.u32();
  for (uint32_t i = 0; i < count; i++) {
    std::string name = r.str();
    uint32_t rows = r.u32();
    uint32_t cols = r.u32();
    if (uint64_t(rows) * cols * 8 > r.remaining())
      raise(ErrorCode::kTruncatedPayload, "model tensor truncated");
    Matrix m{int(rows), int(cols)};
    for (double& v : m.data)
      v = r.f64();
    f.tensors.emplace_back(std::move(name), std::move(m));
  }
  if (r.remaining())
    raise(ErrorCode::kParseError, "trailing bytes in model file");
  return f;
}

void
assignParameters(const ParameterFile& file, std::span<Parameter* const> params)
{
  if (file.tensors.size() != params.size())
    raise(ErrorCode::kModelMismatch, "model tensor count mismatch");
  for (size_t i = 0; i < params.size(); i++) {
    const Parameter& src = file.tensors[i];
    Parameter& dst = *params[i];
    if (src.name != dst.name || !src.value.sameShape(dst.value))
      raise(ErrorCode::kModelMismatch, "model tensor mismatch: " + src.name);
    dst.value = src.value;
    dst.grad = Matrix(dst.value.rows, dst.value.cols);
  }
}

//============================================================================

std::vector<uint8_t>
readFileBytes(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    raise(ErrorCode::kIoError, "cannot open " + path);
  return std::vector<uint8_t>(
    std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void
writeFileBytes(const std::string& path, std::span<const uint8_t> bytes)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    raise(ErrorCode::kIoError, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  if (!out)
    raise(ErrorCode::kIoError, "write failed: " + path);
}

}  // namespace pcc::nn
