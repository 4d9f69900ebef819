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

#include "pcc/RangeCoder.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "pcc/Error.h"

namespace pcc {

//============================================================================

void
RangeEncoder::encode(uint32_t cum, uint32_t freq)
{
  if (freq == 0 || cum + freq > kProbabilityTotal)
    raise(ErrorCode::kSymbolOutOfAlphabet, "symbol has no probability mass");

  uint32_t r = range_ >> kProbabilityBits;
  low_ += uint64_t(r) * cum;
  // the last symbol absorbs the truncation remainder
  if (cum + freq == kProbabilityTotal)
    range_ -= r * cum;
  else
    range_ = r * freq;

  while (range_ < (1u << 24)) {
    range_ <<= 8;
    shiftLow();
  }
}

void
RangeEncoder::encodeBits(uint32_t value, int bits)
{
  uint32_t shift = kProbabilityBits - bits;
  encode(value << shift, 1u << shift);
}

void
RangeEncoder::shiftLow()
{
  if (uint32_t(low_) < 0xff000000u || (low_ >> 32) != 0) {
    uint8_t carry = uint8_t(low_ >> 32);
    uint8_t temp = cache_;
    do {
      if (skippedFirst_)
        out_.push_back(uint8_t(temp + carry));
      skippedFirst_ = true;
      temp = 0xff;
    } while (--cacheSize_ != 0);
    cache_ = uint8_t(low_ >> 24);
  }
  cacheSize_++;
  low_ = (low_ & 0x00ffffffu) << 8;
}

std::vector<uint8_t>
RangeEncoder::finish()
{
  for (int i = 0; i < 5; i++)
    shiftLow();
  return std::move(out_);
}

//============================================================================

RangeDecoder::RangeDecoder(std::span<const uint8_t> payload) : in_(payload)
{
  for (int i = 0; i < 4; i++)
    code_ = (code_ << 8) | nextByte();
}

uint8_t
RangeDecoder::nextByte()
{
  if (pos_ >= in_.size())
    raise(ErrorCode::kTruncatedPayload, "range coder payload exhausted");
  return in_[pos_++];
}

uint32_t
RangeDecoder::target()
{
  r_ = range_ >> kProbabilityBits;
  return std::min(code_ / r_, kProbabilityTotal - 1);
}

void
RangeDecoder::consume(uint32_t cum, uint32_t freq)
{
  code_ -= r_ * cum;
  if (cum + freq == kProbabilityTotal)
    range_ -= r_ * cum;
  else
    range_ = r_ * freq;
  normalize();
}

void
RangeDecoder::normalize()
{
  while (range_ < (1u << 24)) {
    code_ = (code_ << 8) | nextByte();
    range_ <<= 8;
  }
}

uint32_t
RangeDecoder::decodeBits(int bits)
{
  uint32_t shift = kProbabilityBits - bits;
  uint32_t v = target() >> shift;
  consume(v << shift, 1u << shift);
  return v;
}

//============================================================================

void
encodeSymbol(RangeEncoder& enc, int index, const CumulativeFrequencies& cdf)
{
  if (index < 0 || index >= cdf.size())
    raise(ErrorCode::kSymbolOutOfAlphabet, "symbol index outside alphabet");
  uint32_t lo = cdf.cum(index);
  uint32_t hi = cdf.cum(index + 1);
  if (hi <= lo)
    raise(ErrorCode::kSymbolOutOfAlphabet, "symbol has zero frequency");
  enc.encode(lo, hi - lo);
}

int
decodeSymbol(RangeDecoder& dec, const CumulativeFrequencies& cdf)
{
  uint32_t t = dec.target();
  // largest index with cum(index) <= t
  int lo = 0, hi = cdf.size();
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (cdf.cum(mid) <= t)
      lo = mid;
    else
      hi = mid;
  }
  uint32_t c = cdf.cum(lo);
  dec.consume(c, cdf.cum(lo + 1) - c);
  return lo;
}

//============================================================================

FrequencyTable
FrequencyTable::fromProbabilities(std::span<const double> p)
{
  const int n = int(p.size());
  if (n < 1 || uint32_t(n) > kProbabilityTotal)
    raise(ErrorCode::kSymbolOutOfAlphabet, "alphabet size out of range");

  double sum = 0;
  for (double v : p)
    sum += std::max(v, 0.0);

  if (!(sum > 0))
    sum = 1;

  FrequencyTable t;
  t.cum_.resize(n + 1);
  const double spare = double(kProbabilityTotal - uint32_t(n));
  double acc = 0;
  for (int i = 0; i < n; i++) {
    t.cum_[i] = uint32_t(i) + uint32_t(std::floor(acc / sum * spare));
    acc += std::max(p[i], 0.0);
  }
  t.cum_[n] = kProbabilityTotal;
  return t;
}

}  // namespace pcc

namespace pcc {

//============================================================================

int
symbolIndex(int32_t k)
{
  if (k < -kMaxSymbol)
    return 0;
  if (k > kMaxSymbol)
    return kAlphabetSize - 1;
  return k + kMaxSymbol + 1;
}

uint32_t
alphabetCum(int index, double cdfAtBoundary)
{
  if (index <= 0)
    return 0;
  if (index >= kAlphabetSize)
    return kProbabilityTotal;
  double f = std::clamp(cdfAtBoundary, 0.0, 1.0);
  return uint32_t(index) + uint32_t(std::floor(f * kAlphabetSpare));
}

void
encodeValue(RangeEncoder& enc, int32_t k, const CumulativeFrequencies& cdf)
{
  int idx = symbolIndex(k);
  encodeSymbol(enc, idx, cdf);
  if (idx == 0 || idx == kAlphabetSize - 1) {
    uint32_t extra = uint32_t(std::llabs(int64_t(k)) - (kMaxSymbol + 1));
    enc.encodeBits(extra >> 16, 16);
    enc.encodeBits(extra & 0xffff, 16);
  }
}

int32_t
decodeValue(RangeDecoder& dec, const CumulativeFrequencies& cdf)
{
  int idx = decodeSymbol(dec, cdf);
  if (idx != 0 && idx != kAlphabetSize - 1)
    return idx - kMaxSymbol - 1;

  uint32_t hi = dec.decodeBits(16);
  uint32_t lo = dec.decodeBits(16);
  int64_t mag = int64_t((hi << 16) | lo) + kMaxSymbol + 1;
  int64_t v = idx == 0 ? -mag : mag;
  if (v < INT32_MIN || v > INT32_MAX)
    raise(ErrorCode::kParseError, "escaped value out of range");
  return int32_t(v);
}

}  // namespace pcc
