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

#include "pcc/nn/Density.h"

#include <cmath>

#include "pcc/Error.h"

namespace pcc::nn {

namespace {

  constexpr int kMonotoneWidths[] = {1, 3, 3, 3, 1};
  constexpr int kMonotoneLayers = 4;
  constexpr double kMonotoneInitScale = 4.0;

  double softplus(double v)
  {
    return v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
  }

  double sigmoid(double v)
  {
    if (v >= 0)
      return 1.0 / (1.0 + std::exp(-v));
    double e = std::exp(v);
    return e / (1.0 + e);
  }

}  // namespace

std::string
toString(DensityVariant v)
{
  return v == DensityVariant::kConditionalLaplace ? "conditional_laplace"
                                                  : "factorized_cdf";
}

DensityVariant
densityVariantFromString(const std::string& s)
{
  if (s == "conditional_laplace")
    return DensityVariant::kConditionalLaplace;
  if (s == "factorized_cdf")
    return DensityVariant::kFactorizedCdf;
  raise(ErrorCode::kConfigError, "unknown density variant: " + s);
}

//============================================================================

DensityModel::DensityModel(
  DensityVariant variant, int contextWidth, Rng& rng)
  : variant_(variant), contextWidth_(contextWidth)
{
  head_ = Mlp("density.head", {contextWidth + 3, 32, 2}, rng);
  head_.zeroOutputLayer();

  if (variant_ == DensityVariant::kFactorizedCdf) {
    const double scale = std::pow(kMonotoneInitScale, 1.0 / kMonotoneLayers);
    for (int l = 0; l < kMonotoneLayers; l++) {
      int in = kMonotoneWidths[l], out = kMonotoneWidths[l + 1];
      std::string tag = "density.cdf." + std::to_string(l);
      double init = std::log(std::expm1(1.0 / scale / out));
      h_.emplace_back(tag + ".h", Matrix(in, out, init));
      Matrix b(1, out);
      for (double& v : b.data)
        v = rng.uniform(-0.5, 0.5);
      b_.emplace_back(tag + ".b", std::move(b));
      if (l + 1 < kMonotoneLayers)
        a_.emplace_back(tag + ".a", Matrix(1, out));
    }
  }
}

Var
DensityModel::headOutput(Graph& g, Var conditioning) const
{
  if (head_.widths().empty())
    raise(ErrorCode::kModelMissing, "density model not initialised");
  return head_.forward(g, conditioning);
}

Var
DensityModel::monotone(Graph& g, Var x) const
{
  for (int l = 0; l < kMonotoneLayers; l++) {
    x = g.linear(x, g.softplus(g.param(h_[l])), g.param(b_[l]));
    if (l + 1 < kMonotoneLayers)
      x = g.add(x, g.mulRow(g.tanh(x), g.tanh(g.param(a_[l]))));
  }
  return x;
}

double
DensityModel::monotone(double x) const
{
  double cur[3] = {x, 0, 0};
  int width = 1;
  for (int l = 0; l < kMonotoneLayers; l++) {
    const Matrix& H = h_[l].value;
    const Matrix& B = b_[l].value;
    double next[3] = {0, 0, 0};
    for (int o = 0; o < H.cols; o++) {
      double s = 0;
      for (int i = 0; i < width; i++)
        s += cur[i] * softplus(H(i, o));
      next[o] = s + B.data[o];
    }
    width = H.cols;
    if (l + 1 < kMonotoneLayers)
      for (int o = 0; o < width; o++)
        next[o] += std::tanh(a_[l].value.data[o]) * std::tanh(next[o]);
    std::copy(next, next + 3, cur);
  }
  return cur[0];
}

Var
DensityModel::nll(Graph& g, Var head, Var y) const
{
  Var p0 = g.sliceCols(head, 0, 1);
  Var p1 = g.sliceCols(head, 1, 2);

  if (variant_ == DensityVariant::kConditionalLaplace) {
    Var logb = g.scale(g.tanh(g.scale(p1, 1.0 / kLogScaleLimit)), kLogScaleLimit);
    return g.laplaceNll(y, p0, logb);
  }

  // factorized: F(v) = sigmoid(f((v - shift) * exp(-logscale)))
  Var invScale = g.exp(g.scale(p1, -1.0));
  Var centered = g.sub(y, p0);
  Var lo = g.mul(g.addScalar(centered, -0.5), invScale);
  Var hi = g.mul(g.addScalar(centered, 0.5), invScale);
  Var fl = monotone(g, lo);
  Var fh = monotone(g, hi);

  // evaluate the difference on the side where the sigmoids are not
  // saturated towards one
  const Matrix& FL = g.value(fl);
  const Matrix& FH = g.value(fh);
  Matrix sgn(FL.rows, 1);
  for (int i = 0; i < FL.rows; i++)
    sgn.data[i] = FL.data[i] + FH.data[i] > 0 ? -1.0 : 1.0;
  Var s = g.constant(std::move(sgn));
  Var diff = g.sub(g.sigmoid(g.mul(s, fh)), g.sigmoid(g.mul(s, fl)));
  return g.scale(g.log(g.mul(s, diff), 1e-300), -1.0);
}

double
DensityModel::cdf(const double* head, double x) const
{
  if (variant_ == DensityVariant::kConditionalLaplace) {
    double logb = kLogScaleLimit * std::tanh(head[1] / kLogScaleLimit);
    return laplaceCdf(x, head[0], std::exp(logb));
  }
  return sigmoid(monotone((x - head[0]) * std::exp(-head[1])));
}

std::vector<Parameter*>
DensityModel::parameters()
{
  auto p = head_.parameters();
  for (size_t l = 0; l < h_.size(); l++) {
    p.push_back(&h_[l]);
    p.push_back(&b_[l]);
    if (l < a_.size())
      p.push_back(&a_[l]);
  }
  return p;
}

std::vector<const Parameter*>
DensityModel::parameters() const
{
  auto p = head_.parameters();
  for (size_t l = 0; l < h_.size(); l++) {
    p.push_back(&h_[l]);
    p.push_back(&b_[l]);
    if (l < a_.size())
      p.push_back(&a_[l]);
  }
  return p;
}

//============================================================================

uint32_t
SymbolDistribution::cum(int index) const
{
  if (index <= 0 || index >= kAlphabetSize)
    return alphabetCum(index, 0.0);
  return alphabetCum(index, model_->cdf(head_, alphabetBoundary(index)));
}

double
SymbolDistribution::probability(int32_t k) const
{
  int idx = symbolIndex(k);
  return double(cum(idx + 1) - cum(idx)) / double(kProbabilityTotal);
}

double
symbolProbability(
  const DensityModel& model, std::span<const double> conditioning, int32_t k)
{
  if (int(conditioning.size()) != model.inputWidth())
    raise(ErrorCode::kShapeMismatch, "conditioning width mismatch");
  Graph g;
  Matrix c(1, model.inputWidth());
  std::copy(conditioning.begin(), conditioning.end(), c.data.begin());
  Var head = model.headOutput(g, g.constant(std::move(c)));
  SymbolDistribution dist(model, g.value(head).row(0));
  return dist.probability(k);
}

double
laplaceIntervalProbability(double mu, double b, double k)
{
  // mirror onto the lower tail to avoid cancellation near F = 1
  double d = std::abs(k - mu);
  return laplaceCdf(0.5 - d, 0.0, b) - laplaceCdf(-0.5 - d, 0.0, b);
}

}  // namespace pcc::nn
