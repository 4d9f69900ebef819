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
#include <string>
#include <vector>

#include "Graph.h"

namespace pcc::nn {

//============================================================================
// Versioned binary parameter file.
//
//   "4DACMODL"  magic (8 bytes)
//   u32         format version
//   str         configuration (JSON text)
//   u32         tensor count
//   per tensor: str name, u32 rows, u32 cols, rows * cols f64
//   u64         FNV-1a hash of every preceding byte
//
// str = u32 length followed by the bytes.  The trailing hash identifies the
// model in bitstream headers; it is never zero.

constexpr uint32_t kParameterFileVersion = 1;

uint64_t fnv1a64(std::span<const uint8_t> bytes);

struct ParameterFile {
  std::string config;
  std::vector<Parameter> tensors;
  uint64_t hash = 0;
};

std::vector<uint8_t> serializeParameters(
  const std::string& config, std::span<const Parameter* const> params);

// Throws BadMagic, UnsupportedVersion, TruncatedPayload, ChecksumMismatch.
ParameterFile parseParameters(std::span<const uint8_t> bytes);

// Copies values by position; names and shapes must agree (ModelMismatch).
void assignParameters(
  const ParameterFile& file, std::span<Parameter* const> params);

std::vector<uint8_t> readFileBytes(const std::string& path);
void writeFileBytes(const std::string& path, std::span<const uint8_t> bytes);

}  // namespace pcc::nn
