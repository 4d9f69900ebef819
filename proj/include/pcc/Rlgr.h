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

namespace pcc {

//============================================================================
// Adaptive run-length / Golomb-Rice coding (RLGR1 variant).
//
// Values are signed; the direct mode maps them with the zig-zag rule
// 0, -1, 1, -2, ... -> 0, 1, 2, 3, ...; the run mode codes a run of zeros
// followed by sign and magnitude - 1 of the terminating value.  Golomb-Rice
// codes whose unary prefix would reach kRlgrEscapeLength ones are replaced
// by that many ones followed by the 32-bit value, which bounds code length
// for arbitrary int32 input.

constexpr int kRlgrKpMax = 80;
constexpr int kRlgrLsgr = 3;
constexpr int kRlgrUpGr = 4;
constexpr int kRlgrDnGr = 6;
constexpr int kRlgrUqGr = 3;
constexpr int kRlgrDqGr = 3;
constexpr int kRlgrEscapeLength = 32;

struct RlgrState {
  int k = 1;
  int kp = 1 << kRlgrLsgr;
  int kr = 1;
  int krp = 1 << kRlgrLsgr;
};

//----------------------------------------------------------------------------
// MSB-first bit packing.

class BitWriter {
public:
  void put(uint32_t value, int bits);
  void putBit(int bit);
  void putOnes(int count);

  uint64_t bitCount() const { return bits_; }
  std::vector<uint8_t> finish();

private:
  std::vector<uint8_t> out_;
  uint32_t acc_ = 0;
  int fill_ = 0;
  uint64_t bits_ = 0;
};

class BitReader {
public:
  explicit BitReader(std::span<const uint8_t> in) : in_(in) {}

  uint32_t get(int bits);
  int getBit();

private:
  std::span<const uint8_t> in_;
  uint64_t pos_ = 0;
};

//----------------------------------------------------------------------------

std::vector<uint8_t>
rlgrEncode(std::span<const int32_t> values, RlgrState* finalState = nullptr);

// |count| values are decoded; throws TruncatedPayload when the input ends
// early.
std::vector<int32_t> rlgrDecode(
  std::span<const uint8_t> bytes, size_t count,
  RlgrState* finalState = nullptr);

}  // namespace pcc
