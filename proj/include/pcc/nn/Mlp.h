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

#include <string>
#include <vector>

#include "pcc/Random.h"
#include "Graph.h"

namespace pcc::nn {

constexpr double kLeakySlope = 0.1;

//============================================================================
// Fully connected network: leaky rectifier on hidden layers, identity on
// the output layer.  widths = {in, hidden..., out}.

class Mlp {
public:
  Mlp() = default;
  Mlp(const std::string& name, std::vector<int> widths, Rng& rng);

  int inWidth() const { return widths_.front(); }
  int outWidth() const { return widths_.back(); }
  const std::vector<int>& widths() const { return widths_; }

  Var forward(Graph& g, Var x) const;

  // Continues a forward pass from the pre-activation output of |layer|
  // (computed by the caller, e.g. from a factorised first layer).
  Var forwardFrom(Graph& g, Var preActivation, int layer) const;

  const Parameter& weight(int layer) const { return weights_[layer]; }
  const Parameter& bias(int layer) const { return biases_[layer]; }

  // Sets the output layer to zero so that the network initially emits its
  // (zero) output bias regardless of input.
  void zeroOutputLayer();

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  Parameter& weight(int layer) { return weights_[layer]; }
  Parameter& bias(int layer) { return biases_[layer]; }
  int layerCount() const { return int(weights_.size()); }

private:
  std::vector<int> widths_;
  std::vector<Parameter> weights_;  // in x out
  std::vector<Parameter> biases_;   // 1 x out
};

// MAX over each contiguous group of rows of MLP(rows).  Throws
// EmptyNeighborhood if a group is empty.
Var setAggregate(
  Graph& g, const Mlp& net, Var rows, const std::vector<int>& offsets,
  std::vector<int> keys = {});

}  // namespace pcc::nn
