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
// Byte-oriented range coder: 32-bit range, 64-bit low register with delayed
// carry propagation, 16-bit cumulative frequencies (total 2^16).
//
// The first byte the encoder produces is always zero and is not stored; the
// decoder therefore primes itself with four bytes.  Encoder and decoder
// consume exactly the same number of bytes, so reading past the end of a
// payload is reported as TruncatedPayload.

constexpr int kProbabilityBits = 16;
constexpr uint32_t kProbabilityTotal = 1u << kProbabilityBits;

class RangeEncoder {
public:
  // Requires freq >= 1 and cum + freq <= 2^16.
  void encode(uint32_t cum, uint32_t freq);

  // Up to 16 raw bits with a uniform distribution.
  void encodeBits(uint32_t value, int bits);

  std::vector<uint8_t> finish();

private:
  void shiftLow();

  uint64_t low_ = 0;
  uint32_t range_ = 0xffffffffu;
  uint8_t cache_ = 0;
  uint64_t cacheSize_ = 1;
  bool skippedFirst_ = false;
  std::vector<uint8_t> out_;
};

class RangeDecoder {
public:
  explicit RangeDecoder(std::span<const uint8_t> payload);

  // Cumulative-frequency target of the next symbol, in [0, 2^16).
  uint32_t target();

  // Must follow target() with the decoded symbol's interval.
  void consume(uint32_t cum, uint32_t freq);

  uint32_t decodeBits(int bits);

  size_t bytesConsumed() const { return pos_; }

private:
  uint8_t nextByte();
  void normalize();

  std::span<const uint8_t> in_;
  size_t pos_ = 0;
  uint32_t code_ = 0;
  uint32_t range_ = 0xffffffffu;
  uint32_t r_ = 0;
};

//----------------------------------------------------------------------------
// A distribution over symbol indices [0, size) given as a cumulative
// frequency function: cum(0) = 0, cum(size) = 2^16, strictly increasing.

class CumulativeFrequencies {
public:
  virtual ~CumulativeFrequencies() = default;
  virtual int size() const = 0;
  virtual uint32_t cum(int index) const = 0;
};

void encodeSymbol(
  RangeEncoder& enc, int index, const CumulativeFrequencies& cdf);
int decodeSymbol(RangeDecoder& dec, const CumulativeFrequencies& cdf);

// Plain table-backed distribution.
class FrequencyTable : public CumulativeFrequencies {
public:
  // Builds cumulative frequencies from probabilities; every symbol gets at
  // least one count.
  static FrequencyTable fromProbabilities(std::span<const double> p);

  int size() const override { return int(cum_.size()) - 1; }
  uint32_t cum(int index) const override { return cum_[index]; }

private:
  std::vector<uint32_t> cum_;
};

}  // namespace pcc

namespace pcc {

//============================================================================
// Bounded integer alphabet used by the model-driven coder.
//
// Index 0 is the low escape (k < -kMaxSymbol), indices 1 .. 2K+1 carry
// k = -K .. K and index 2K+2 is the high escape.  An escaped value is
// followed by |k| - (K + 1) as 32 raw bits.
//
// A continuous CDF F is quantised as
//   cum(i) = i + floor(F(i - K - 3/2) * (2^16 - A)),  A = 2K + 3,
// so that every symbol, escapes included, has a frequency of at least one
// and the total is exactly 2^16.

constexpr int kMaxSymbol = 1023;
constexpr int kAlphabetSize = 2 * kMaxSymbol + 3;
constexpr uint32_t kAlphabetSpare = kProbabilityTotal - kAlphabetSize;

int symbolIndex(int32_t k);

// Quantised cumulative frequency at boundary |index| given F evaluated at
// that boundary (ignored for the two ends).
uint32_t alphabetCum(int index, double cdfAtBoundary);

// Real-valued boundary (in symbol units) below alphabet index |index|.
inline double
alphabetBoundary(int index)
{
  return double(index) - kMaxSymbol - 1.5;
}

void encodeValue(
  RangeEncoder& enc, int32_t k, const CumulativeFrequencies& cdf);
int32_t decodeValue(RangeDecoder& dec, const CumulativeFrequencies& cdf);

}  // namespace pcc
