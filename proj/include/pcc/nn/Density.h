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

#include <span>
#include <string>
#include <vector>

#include "pcc/RangeCoder.h"
#include "Mlp.h"

namespace pcc::nn {

enum class DensityVariant {
  kConditionalLaplace,
  kFactorizedCdf,
};

std::string toString(DensityVariant v);
DensityVariant densityVariantFromString(const std::string& s);

//============================================================================
// Conditional density over integer symbols.
//
// The conditioning input of a row is a context feature vector followed by a
// three-way channel one-hot.  A head network maps it to two numbers:
//   conditional_laplace: (mu, raw log-scale) of a Laplace distribution;
//   factorized_cdf:      (shift, log-scale) applied to the input of a
//                        monotone univariate CDF network.
// The head's output layer starts at zero, so an untrained model assigns the
// same distribution to every context.

class DensityModel {
public:
  DensityModel() = default;
  DensityModel(DensityVariant variant, int contextWidth, Rng& rng);

  DensityVariant variant() const { return variant_; }
  int contextWidth() const { return contextWidth_; }
  int inputWidth() const { return contextWidth_ + 3; }

  // Distribution parameters for each conditioning row (n x 2).
  Var headOutput(Graph& g, Var conditioning) const;

  // Negative natural-log probability of [y - 1/2, y + 1/2] for each row;
  // y is n x 1, |head| the output of headOutput().
  Var nll(Graph& g, Var head, Var y) const;

  // Continuous CDF for one head-output row.
  double cdf(const double* head, double x) const;

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

private:
  Var monotone(Graph& g, Var x) const;
  double monotone(double x) const;

  DensityVariant variant_ = DensityVariant::kConditionalLaplace;
  int contextWidth_ = 0;
  Mlp head_;
  // factorized_cdf only: per layer matrix (pre-softplus), bias, gate
  std::vector<Parameter> h_, b_, a_;
};

// Laplace log-scale is soft-limited to (-kLogScaleLimit, kLogScaleLimit).
constexpr double kLogScaleLimit = 8.0;

//----------------------------------------------------------------------------
// Quantised symbol distribution for one head-output row.

class SymbolDistribution : public CumulativeFrequencies {
public:
  SymbolDistribution(const DensityModel& model, const double* head)
    : model_(&model), head_{head[0], head[1]}
  {}

  int size() const override { return kAlphabetSize; }
  uint32_t cum(int index) const override;

  // Quantised probability of value k (escape mass for |k| > kMaxSymbol).
  double probability(int32_t k) const;

private:
  const DensityModel* model_;
  double head_[2];
};

// Probability the coder assigns to k for a single conditioning vector
// (context followed by channel one-hot).
double symbolProbability(
  const DensityModel& model, std::span<const double> conditioning, int32_t k);

// Unquantised interval mass F(k + 1/2) - F(k - 1/2) under Laplace(mu, b).
double laplaceIntervalProbability(double mu, double b, double k);

}  // namespace pcc::nn
