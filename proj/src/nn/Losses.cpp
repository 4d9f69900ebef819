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

#include "pcc/nn/Losses.h"

#include <cmath>

#include "pcc/Error.h"

namespace pcc::nn {

Var
meanSquaredDistance(Graph& g, Var pred, Var target)
{
  int rows = g.value(pred).rows;
  Var s = g.sumAll(g.square(g.sub(pred, target)));
  return g.scale(s, rows ? 1.0 / rows : 0.0);
}

static double
meanSquared(std::span<const Vec3d> a, std::span<const Vec3d> b)
{
  if (a.size() != b.size())
    raise(ErrorCode::kLengthMismatch, "loss operands differ in length");
  if (a.empty())
    return 0.0;
  double s = 0;
  for (size_t i = 0; i < a.size(); i++)
    s += (a[i] - b[i]).norm2();
  return s / double(a.size());
}

double
lossMe(std::span<const Vec3d> pred, std::span<const Vec3d> gt)
{
  return meanSquared(pred, gt);
}

double
lossMc(std::span<const Vec3d> pred, std::span<const Vec3d> gt)
{
  return meanSquared(pred, gt);
}

double
lossCe(std::span<const double> probabilities)
{
  double s = 0;
  for (double q : probabilities)
    s -= std::log(q);
  return s;
}

double
totalLoss(double ce, double me, double mc, const LossWeights& w)
{
  return ce + w.lambdaMe * me + w.lambdaMc * mc;
}

Var
totalLoss(Graph& g, Var ce, Var me, Var mc, const LossWeights& w)
{
  return g.add(ce, g.add(g.scale(me, w.lambdaMe), g.scale(mc, w.lambdaMc)));
}

}  // namespace pcc::nn
