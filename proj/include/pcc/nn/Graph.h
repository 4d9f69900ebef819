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

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pcc/RAHT.h"
#include "Matrix.h"

namespace pcc::nn {

//============================================================================
// A named trainable tensor and its accumulated gradient.

struct Parameter {
  std::string name;
  Matrix value;
  mutable Matrix grad;

  Parameter() = default;
  Parameter(std::string n, Matrix v)
    : name(std::move(n)), value(std::move(v)), grad(value.rows, value.cols)
  {}
};

struct Var {
  int id = -1;
};

//============================================================================
// Reverse-mode automatic differentiation over matrices.
//
// Every operation appends a node holding its value and a closure that
// propagates the node's gradient to its inputs.  A graph is used once:
// build, optionally call backward() on a 1x1 result, discard.  When
// |trainable| is false parameters behave as constants and no gradient
// bookkeeping happens.

class Graph {
public:
  explicit Graph(bool trainable = false) : trainable_(trainable) {}

  Var constant(Matrix m);
  // A leaf whose gradient is recorded (used to differentiate w.r.t. inputs).
  Var variable(Matrix m);
  Var param(const Parameter& p);

  const Matrix& value(Var v) const { return nodes_[v.id].value; }
  const Matrix& grad(Var v) const { return nodes_[v.id].grad; }

  // Seeds d(loss)/d(loss) = 1 and propagates to every recorded input.
  void backward(Var loss);

  //--------------------------------------------------------------------------
  // x * W + b, x: n x in, W: in x out, b: 1 x out.
  Var linear(Var x, Var w, Var b);
  Var matmul(Var x, Var w);

  Var leakyRelu(Var x, double slope);
  Var tanh(Var x);
  Var sigmoid(Var x);
  Var softplus(Var x);
  Var exp(Var x);
  // log(max(x, floor)); the gradient is zero where the floor is active.
  Var log(Var x, double floor = 0.0);
  Var square(Var x);
  // sign(x) * log(1 + |x|)
  Var slog(Var x);

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var x, double s);
  Var addScalar(Var x, double s);

  // Row-vector broadcast: r is 1 x cols.
  Var addRow(Var x, Var r);
  Var mulRow(Var x, Var r);

  Var concat(std::span<const Var> parts);
  Var sliceCols(Var x, int begin, int end);
  Var sliceRows(Var x, int begin, int end);
  // Reinterprets the row-major data with a new shape.
  Var reshape(Var x, int rows, int cols);
  Var gatherRows(Var x, std::vector<int> index);

  // Element-wise maximum over contiguous row groups [offsets[g],
  // offsets[g+1]).  Equal maxima are resolved in favour of the row with the
  // smallest key (row position if |keys| is empty).  Empty groups yield a
  // zero row.
  Var groupMax(Var x, std::vector<int> offsets, std::vector<int> keys = {});

  Var sumAll(Var x);
  Var meanAll(Var x);
  Var meanRows(Var x);
  Var broadcastRows(Var r, int rows);

  // Negative log-likelihood of the unit-width interval [y - 1/2, y + 1/2]
  // under Laplace(mu, exp(logb)); all inputs n x 1.
  Var laplaceNll(Var y, Var mu, Var logb);

  // High-pass RAHT coefficients (coding order) of n x 3 attributes.
  // The graph keeps |tree| alive until it is destroyed.
  Var rahtHighs(Var attributes, std::shared_ptr<const RahtTree> tree);

  size_t size() const { return nodes_.size(); }

private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool needsGrad = false;
    std::function<void()> backward;
  };

  Var push(Matrix value, bool needsGrad);
  bool needs(Var v) const { return nodes_[v.id].needsGrad; }
  Matrix& g(Var v);
  Node& node(Var v) { return nodes_[v.id]; }

  template<typename F, typename D>
  Var unary(Var x, F f, D df);

  bool trainable_;
  std::vector<Node> nodes_;
};

//----------------------------------------------------------------------------

// Laplace interval probability pieces shared with the coder side.
double laplaceCdf(double x, double mu, double b);

}  // namespace pcc::nn
