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

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "pcc/Random.h"
#include "pcc/nn/Graph.h"

namespace pcc::test {

//============================================================================
// Central finite-difference checks of reverse-mode gradients.
//
// The error of one instance is |a - n| / max(|a|, |n|, 1e-8) over the
// vector of checked entries (a analytic, n numeric), which stays robust
// when a perturbation happens to cross a leaky-ReLU or max kink.
//
// Deep graphs with thousands of pre-activations regularly have one within
// 1e-5 of a kink; those callers pass a smaller step (kFineFdStep).

constexpr double kFdStep = 1e-5;
constexpr double kFineFdStep = 1e-7;

inline double
relativeError(const std::vector<double>& a, const std::vector<double>& n)
{
  double d = 0, na = 0, nn = 0;
  for (size_t i = 0; i < a.size(); i++) {
    d += (a[i] - n[i]) * (a[i] - n[i]);
    na += a[i] * a[i];
    nn += n[i] * n[i];
  }
  return std::sqrt(d) / std::max({std::sqrt(na), std::sqrt(nn), 1e-8});
}

using InputLoss =
  std::function<nn::Var(nn::Graph&, const std::vector<nn::Var>&)>;

// Gradient w.r.t. every entry of every input matrix.
inline double
checkInputGradients(const InputLoss& f, std::vector<nn::Matrix> inputs)
{
  auto eval = [&](const std::vector<nn::Matrix>& in) {
    nn::Graph g;
    std::vector<nn::Var> vars;
    for (const auto& m : in)
      vars.push_back(g.constant(m));
    return g.value(f(g, vars)).data[0];
  };

  nn::Graph g;
  std::vector<nn::Var> vars;
  for (const auto& m : inputs)
    vars.push_back(g.variable(m));
  g.backward(f(g, vars));

  std::vector<double> analytic, numeric;
  for (size_t k = 0; k < inputs.size(); k++) {
    for (size_t i = 0; i < inputs[k].data.size(); i++) {
      analytic.push_back(g.grad(vars[k]).data[i]);
      double x = inputs[k].data[i];
      inputs[k].data[i] = x + kFdStep;
      double up = eval(inputs);
      inputs[k].data[i] = x - kFdStep;
      double dn = eval(inputs);
      inputs[k].data[i] = x;
      numeric.push_back((up - dn) / (2 * kFdStep));
    }
  }
  return relativeError(analytic, numeric);
}

// Gradient w.r.t. up to |perParam| random entries of each parameter.
inline double
checkParameterGradients(
  const std::function<nn::Var(nn::Graph&)>& f,
  const std::vector<nn::Parameter*>& params, Rng& rng, int perParam,
  double step = kFdStep)
{
  for (auto* p : params)
    p->grad.setZero();
  {
    nn::Graph g(true);
    g.backward(f(g));
  }
  auto eval = [&] {
    nn::Graph g(false);
    return g.value(f(g)).data[0];
  };

  std::vector<double> analytic, numeric;
  for (auto* p : params) {
    int n = int(p->value.data.size());
    int count = std::min(perParam, n);
    for (int c = 0; c < count; c++) {
      int i = count == n ? c : rng.uniformInt(0, n - 1);
      double x = p->value.data[i];
      p->value.data[i] = x + step;
      double up = eval();
      p->value.data[i] = x - step;
      double dn = eval();
      p->value.data[i] = x;
      analytic.push_back(p->grad.data[i]);
      numeric.push_back((up - dn) / (2 * step));
    }
  }
  return relativeError(analytic, numeric);
}

inline nn::Matrix
randomMatrix(Rng& rng, int rows, int cols, double lo = -1, double hi = 1)
{
  nn::Matrix m(rows, cols);
  for (auto& v : m.data)
    v = rng.uniform(lo, hi);
  return m;
}

}  // namespace pcc::test
