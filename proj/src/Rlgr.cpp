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

#include "pcc/Rlgr.h"

#include <algorithm>
#include <cstdlib>

#include "pcc/Error.h"

namespace pcc {

//============================================================================

void
BitWriter::putBit(int bit)
{
  acc_ = (acc_ << 1) | uint32_t(bit & 1);
  bits_++;
  if (++fill_ == 8) {
    out_.push_back(uint8_t(acc_));
    acc_ = 0;
    fill_ = 0;
  }
}

void
BitWriter::put(uint32_t value, int bits)
{
  for (int i = bits - 1; i >= 0; i--)
    putBit(int(value >> i) & 1);
}

void
BitWriter::putOnes(int count)
{
  for (int i = 0; i < count; i++)
    putBit(1);
}

std::vector<uint8_t>
BitWriter::finish()
{
  if (fill_) {
    out_.push_back(uint8_t(acc_ << (8 - fill_)));
    acc_ = 0;
    fill_ = 0;
  }
  return std::move(out_);
}

int
BitReader::getBit()
{
  if (pos_ >= uint64_t(in_.size()) * 8)
    raise(ErrorCode::kTruncatedPayload, "RLGR payload exhausted");
  int bit = (in_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
  pos_++;
  return bit;
}

uint32_t
BitReader::get(int bits)
{
  uint32_t v = 0;
  for (int i = 0; i < bits; i++)
    v = (v << 1) | uint32_t(getBit());
  return v;
}

//============================================================================

namespace {

  void updateParam(int& param, int delta, int& out)
  {
    param = std::clamp(param + delta, 0, kRlgrKpMax);
    out = param >> kRlgrLsgr;
  }

  void adaptGr(RlgrState& s, uint32_t vk)
  {
    if (vk == 0)
      updateParam(s.krp, -2, s.kr);
    else if (vk > 1)
      updateParam(s.krp, int(std::min<uint32_t>(vk, kRlgrKpMax)), s.kr);
  }

  void codeGr(BitWriter& bw, RlgrState& s, uint32_t val)
  {
    uint32_t vk = val >> s.kr;
    if (vk < uint32_t(kRlgrEscapeLength)) {
      bw.putOnes(int(vk));
      bw.putBit(0);
      if (s.kr)
        bw.put(val & ((1u << s.kr) - 1), s.kr);
    } else {
      bw.putOnes(kRlgrEscapeLength);
      bw.put(val, 32);
    }
    adaptGr(s, vk);
  }

  uint32_t decodeGr(BitReader& br, RlgrState& s)
  {
    uint32_t vk = 0;
    while (vk < uint32_t(kRlgrEscapeLength) && br.getBit())
      vk++;

    uint32_t val;
    if (vk == uint32_t(kRlgrEscapeLength)) {
      val = br.get(32);
      vk = val >> s.kr;
    } else {
      val = (vk << s.kr) | (s.kr ? br.get(s.kr) : 0);
    }
    adaptGr(s, vk);
    return val;
  }

}  // namespace

//----------------------------------------------------------------------------

std::vector<uint8_t>
rlgrEncode(std::span<const int32_t> values, RlgrState* finalState)
{
  BitWriter bw;
  RlgrState s;
  const size_t n = values.size();
  size_t i = 0;

  while (i < n) {
    if (s.k) {
      // run mode
      uint32_t zeros = 0;
      while (i < n && values[i] == 0) {
        zeros++;
        i++;
      }
      while (zeros >= (1u << s.k)) {
        bw.putBit(0);
        zeros -= 1u << s.k;
        updateParam(s.kp, kRlgrUpGr, s.k);
      }
      if (i == n) {
        if (zeros) {
          bw.putBit(1);
          bw.put(zeros, s.k);
        }
        break;
      }

      bw.putBit(1);
      bw.put(zeros, s.k);

      int64_t v = values[i++];
      bw.putBit(v < 0);
      codeGr(bw, s, uint32_t(std::llabs(v) - 1));
      updateParam(s.kp, -kRlgrDnGr, s.k);
    } else {
      // direct Golomb-Rice mode
      int64_t v = values[i++];
      uint32_t twoMs = uint32_t(v >= 0 ? 2 * v : -2 * v - 1);
      codeGr(bw, s, twoMs);
      if (twoMs == 0)
        updateParam(s.kp, kRlgrUqGr, s.k);
      else
        updateParam(s.kp, -kRlgrDqGr, s.k);
    }
  }

  if (finalState)
    *finalState = s;
  return bw.finish();
}

std::vector<int32_t>
rlgrDecode(
  std::span<const uint8_t> bytes, size_t count, RlgrState* finalState)
{
  BitReader br(bytes);
  RlgrState s;
  std::vector<int32_t> out;
  out.reserve(count);

  auto pushZeros = [&](uint64_t run) {
    if (out.size() + run > count)
      raise(ErrorCode::kParseError, "RLGR run exceeds symbol count");
    out.insert(out.end(), run, 0);
  };

  while (out.size() < count) {
    if (s.k) {
      bool ended = false;
      while (!br.getBit()) {
        pushZeros(1u << s.k);
        updateParam(s.kp, kRlgrUpGr, s.k);
        if (out.size() == count) {
          ended = true;
          break;
        }
      }
      if (ended)
        break;

      pushZeros(br.get(s.k));
      if (out.size() == count)
        break;

      int sign = br.getBit();
      int64_t mag = int64_t(decodeGr(br, s)) + 1;
      int64_t v = sign ? -mag : mag;
      if (v > INT32_MAX || v < INT32_MIN)
        raise(ErrorCode::kParseError, "RLGR value out of range");
      out.push_back(int32_t(v));
      updateParam(s.kp, -kRlgrDnGr, s.k);
    } else {
      uint32_t twoMs = decodeGr(br, s);
      int64_t v = (twoMs & 1) ? -int64_t(twoMs >> 1) - 1 : int64_t(twoMs >> 1);
      out.push_back(int32_t(v));
      if (twoMs == 0)
        updateParam(s.kp, kRlgrUqGr, s.k);
      else
        updateParam(s.kp, -kRlgrDqGr, s.k);
    }
  }

  if (finalState)
    *finalState = s;
  return out;
}

}  // namespace pcc
