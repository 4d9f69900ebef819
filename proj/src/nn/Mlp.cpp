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

#include "pcc/nn/Mlp.h"

#include <cmath>

#include "pcc/Error.h"

namespace pcc::nn {

//============================================================================

Mlp::Mlp(const std::string& name, std::vector<int> widths, Rng& rng)
  : widths_(std::move(widths))
{
  if (widths_.size() < 2)
    raise(ErrorCode::kConfigError, "an MLP needs at least one layer");

  for (size_t l = 0; l + 1 < widths_.size(); l++) {
    int in = widths_[l], out = widths_[l + 1];
    // Glorot uniform
    double a = std::sqrt(6.0 / double(in + out));
    Matrix w(in, out);
    for (double& v : w.data)
      v = rng.uniform(-a, a);
    std::string tag = name + "." + std::to_string(l);
    weights_.emplace_back(tag + ".w", std::move(w));
    biases_.emplace_back(tag + ".b", Matrix(1, out));
  }
}

Var
Mlp::forward(Graph& g, Var x) const
{
  if (g.value(x).cols != inWidth())
    raise(ErrorCode::kShapeMismatch, "MLP input width mismatch");

  Var h = x;
  for (size_t l = 0; l < weights_.size(); l++) {
    h = g.linear(h, g.param(weights_[l]), g.param(biases_[l]));
    if (l + 1 < weights_.size())
      h = g.leakyRelu(h, kLeakySlope);
  }
  return h;
}

Var
Mlp::forwardFrom(Graph& g, Var h, int layer) const
{
  for (size_t l = layer; l < weights_.size(); l++) {
    if (l > size_t(layer))
      h = g.linear(h, g.param(weights_[l]), g.param(biases_[l]));
    if (l + 1 < weights_.size())
      h = g.leakyRelu(h, kLeakySlope);
  }
  return h;
}

void
Mlp::zeroOutputLayer()
{
  weights_.back().value.setZero();
  biases_.back().value.setZero();
}

std::vector<Parameter*>
Mlp::parameters()
{
  std::vector<Parameter*> p;
  for (size_t l = 0; l < weights_.size(); l++) {
    p.push_back(&weights_[l]);
    p.push_back(&biases_[l]);
  }
  return p;
}

std::vector<const Parameter*>
Mlp::parameters() const
{
  std::vector<const Parameter*> p;
  for (size_t l = 0; l < weights_.size(); l++) {
    p.push_back(&weights_[l]);
    p.push_back(&biases_[l]);
  }
  return p;
}

//============================================================================

Var
setAggregate(
  Graph& g, const Mlp& net, Var rows, const std::vector<int>& offsets,
  std::vector<int> keys)
{
  for (size_t i = 0; i + 1 < offsets.size(); i++)
    if (offsets[i + 1] <= offsets[i])
      raise(ErrorCode::kEmptyNeighborhood, "set aggregation over no points");
  return g.groupMax(net.forward(g, rows), offsets, std::move(keys));
}

}  // namespace pcc::nn
