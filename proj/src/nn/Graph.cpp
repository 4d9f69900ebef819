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

#include "pcc/nn/Graph.h"

#include <cmath>
#include <limits>

#include "pcc/Error.h"

namespace pcc::nn {

//============================================================================

Var
Graph::push(Matrix value, bool needsGrad)
{
  Node n;
  n.value = std::move(value);
  n.needsGrad = needsGrad;
  nodes_.push_back(std::move(n));
  return Var{int(nodes_.size()) - 1};
}

Matrix&
Graph::g(Var v)
{
  Node& n = nodes_[v.id];
  if (n.grad.size() != n.value.size())
    n.grad = Matrix(n.value.rows, n.value.cols);
  return n.grad;
}

Var
Graph::constant(Matrix m)
{
  return push(std::move(m), false);
}

Var
Graph::variable(Matrix m)
{
  return push(std::move(m), true);
}

Var
Graph::param(const Parameter& p)
{
  Var v = push(p.value, trainable_);
  if (trainable_) {
    const Parameter* pp = &p;
    node(v).backward = [this, v, pp] {
      const Matrix& gv = nodes_[v.id].grad;
      if (pp->grad.size() != gv.size())
        pp->grad = Matrix(gv.rows, gv.cols);
      for (size_t i = 0; i < gv.size(); i++)
        pp->grad.data[i] += gv.data[i];
    };
  }
  return v;
}

void
Graph::backward(Var loss)
{
  if (value(loss).size() != 1)
    raise(ErrorCode::kShapeMismatch, "backward() needs a scalar");
  g(loss).data[0] = 1.0;
  for (int i = loss.id; i >= 0; i--) {
    Node& n = nodes_[i];
    if (!n.needsGrad || n.grad.size() == 0 || !n.backward)
      continue;
    n.backward();
  }
}

//============================================================================

Var
Graph::matmul(Var x, Var w)
{
  const Matrix& X = value(x);
  const Matrix& W = value(w);
  if (X.cols != W.rows)
    raise(ErrorCode::kShapeMismatch, "matmul: inner dimensions differ");

  Matrix Y(X.rows, W.cols);
  for (int r = 0; r < X.rows; r++) {
    const double* xr = X.row(r);
    double* yr = Y.row(r);
    for (int k = 0; k < X.cols; k++) {
      double xv = xr[k];
      const double* wr = W.row(k);
      for (int c = 0; c < W.cols; c++)
        yr[c] += xv * wr[c];
    }
  }

  Var y = push(std::move(Y), needs(x) || needs(w));
  if (node(y).needsGrad) {
    node(y).backward = [this, x, w, y] {
      const Matrix& X = value(x);
      const Matrix& W = value(w);
      const Matrix& G = nodes_[y.id].grad;
      if (needs(x)) {
        // dX = G W^T, accumulated row-wise against the transposed weights
        Matrix WT(W.cols, W.rows);
        for (int k = 0; k < W.rows; k++)
          for (int c = 0; c < W.cols; c++)
            WT(c, k) = W(k, c);
        Matrix& GX = g(x);
        for (int r = 0; r < X.rows; r++) {
          const double* gr = G.row(r);
          double* gx = GX.row(r);
          for (int c = 0; c < W.cols; c++) {
            double gv = gr[c];
            const double* wt = WT.row(c);
            for (int k = 0; k < X.cols; k++)
              gx[k] += gv * wt[k];
          }
        }
      }
      if (needs(w)) {
        Matrix& GW = g(w);
        for (int r = 0; r < X.rows; r++) {
          const double* xr = X.row(r);
          const double* gr = G.row(r);
          for (int k = 0; k < X.cols; k++) {
            double xv = xr[k];
            double* gw = GW.row(k);
            for (int c = 0; c < W.cols; c++)
              gw[c] += xv * gr[c];
          }
        }
      }
    };
  }
  return y;
}

Var
Graph::linear(Var x, Var w, Var b)
{
  return addRow(matmul(x, w), b);
}

//----------------------------------------------------------------------------

template<typename F, typename D>
Var
Graph::unary(Var x, F f, D df)
{
  const Matrix& X = value(x);
  Matrix Y(X.rows, X.cols);
  for (size_t i = 0; i < X.size(); i++)
    Y.data[i] = f(X.data[i]);
  Var y = push(std::move(Y), needs(x));
  if (node(y).needsGrad) {
    node(y).backward = [this, x, y, df] {
      const Matrix& X = value(x);
      const Matrix& Y = value(y);
      const Matrix& G = nodes_[y.id].grad;
      Matrix& GX = g(x);
      for (size_t i = 0; i < X.size(); i++)
        GX.data[i] += G.data[i] * df(X.data[i], Y.data[i]);
    };
  }
  return y;
}

Var
Graph::leakyRelu(Var x, double slope)
{
  return unary(
    x, [slope](double v) { return v > 0 ? v : slope * v; },
    [slope](double v, double) { return v > 0 ? 1.0 : slope; });
}

Var
Graph::tanh(Var x)
{
  return unary(
    x, [](double v) { return std::tanh(v); },
    [](double, double y) { return 1.0 - y * y; });
}

static double
stableSigmoid(double v)
{
  if (v >= 0)
    return 1.0 / (1.0 + std::exp(-v));
  double e = std::exp(v);
  return e / (1.0 + e);
}

Var
Graph::sigmoid(Var x)
{
  return unary(
    x, stableSigmoid, [](double, double y) { return y * (1.0 - y); });
}

Var
Graph::softplus(Var x)
{
  return unary(
    x,
    [](double v) {
      return v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
    },
    [](double v, double) { return stableSigmoid(v); });
}

Var
Graph::exp(Var x)
{
  return unary(
    x, [](double v) { return std::exp(v); },
    [](double, double y) { return y; });
}

Var
Graph::log(Var x, double floor)
{
  return unary(
    x, [floor](double v) { return std::log(std::max(v, floor)); },
    [floor](double v, double) { return v > floor ? 1.0 / v : 0.0; });
}

Var
Graph::square(Var x)
{
  return unary(
    x, [](double v) { return v * v; },
    [](double v, double) { return 2.0 * v; });
}

Var
Graph::slog(Var x)
{
  return unary(
    x, [](double v) { return std::copysign(std::log1p(std::fabs(v)), v); },
    [](double v, double) { return 1.0 / (1.0 + std::fabs(v)); });
}

Var
Graph::scale(Var x, double s)
{
  return unary(
    x, [s](double v) { return s * v; }, [s](double, double) { return s; });
}

Var
Graph::addScalar(Var x, double s)
{
  return unary(
    x, [s](double v) { return v + s; }, [](double, double) { return 1.0; });
}

//----------------------------------------------------------------------------

Var
Graph::add(Var a, Var b)
{
  const Matrix& A = value(a);
  const Matrix& B = value(b);
  if (!A.sameShape(B))
    raise(ErrorCode::kShapeMismatch, "add: shapes differ");
  Matrix Y = A;
  for (size_t i = 0; i < Y.size(); i++)
    Y.data[i] += B.data[i];
  Var y = push(std::move(Y), needs(a) || needs(b));
  if (node(y).needsGrad) {
    node(y).backward = [this, a, b, y] {
      const Matrix& G = nodes_[y.id].grad;
      for (Var v : {a, b}) {
        if (!needs(v))
          continue;
        Matrix& GV = g(v);
        for (size_t i = 0; i < G.size(); i++)
          GV.data[i] += G.data[i];
      }
    };
  }
  return y;
}

Var
Graph::sub(Var a, Var b)
{
  return add(a, scale(b, -1.0));
}

Var
Graph::mul(Var a, Var b)
{
  const Matrix& A = value(a);
  const Matrix& B = value(b);
  if (!A.sameShape(B))
    raise(ErrorCode::kShapeMismatch, "mul: shapes differ");
  Matrix Y = A;
  for (size_t i = 0; i < Y.size(); i++)
    Y.data[i] *= B.data[i];
  Var y = push(std::move(Y), needs(a) || needs(b));
  if (node(y).needsGrad) {
    node(y).backward = [this, a, b, y] {
      const Matrix& A = value(a);
      const Matrix& B = value(b);
      const Matrix& G = nodes_[y.id].grad;
      if (needs(a)) {
        Matrix& GA = g(a);
        for (size_t i = 0; i < G.size(); i++)
          GA.data[i] += G.data[i] * B.data[i];
      }
      if (needs(b)) {
        Matrix& GB = g(b);
        for (size_t i = 0; i < G.size(); i++)
          GB.data[i] += G.data[i] * A.data[i];
      }
    };
  }
  return y;
}

Var
Graph::addRow(Var x, Var r)
{
  const Matrix& X = value(x);
  const Matrix& R = value(r);
  if (R.rows != 1 || R.cols != X.cols)
    raise(ErrorCode::kShapeMismatch, "addRow: row vector width differs");
  Matrix Y = X;
  for (int i = 0; i < Y.rows; i++)
    for (int c = 0; c < Y.cols; c++)
      Y(i, c) += R.data[c];
  Var y = push(std::move(Y), needs(x) || needs(r));
  if (node(y).needsGrad) {
    node(y).backward = [this, x, r, y] {
      const Matrix& G = nodes_[y.id].grad;
      if (needs(x)) {
        Matrix& GX = g(x);
        for (size_t i = 0; i < G.size(); i++)
          GX.data[i] += G.data[i];
      }
      if (needs(r)) {
        Matrix& GR = g(r);
        for (int i = 0; i < G.rows; i++)
          for (int c = 0; c < G.cols; c++)
            GR.data[c] += G(i, c);
      }
    };
  }
  return y;
}

Var
Graph::mulRow(Var x, Var r)
{
  const Matrix& X = value(x);
  const Matrix& R = value(r);
  if (R.rows != 1 || R.cols != X.cols)
    raise(ErrorCode::kShapeMismatch, "mulRow: row vector width differs");
  Matrix Y = X;
  for (int i = 0; i < Y.rows; i++)
    for (int c = 0; c < Y.cols; c++)
      Y(i, c) *= R.data[c];
  Var y = push(std::move(Y), needs(x) || needs(r));
  if (node(y).needsGrad) {
    node(y).backward = [this, x, r, y] {
      const Matrix& X = value(x);
      const Matrix& R = value(r);
      const Matrix& G = nodes_[y.id].grad;
      if (needs(x)) {
        Matrix& GX = g(x);
        for (int i = 0; i < G.rows; i++)
          for (int c = 0; c < G.cols; c++)
            GX(i, c) += G(i, c) * R.data[c];
      }
      if (needs(r)) {
        Matrix& GR = g(r);
        for (int i = 0; i < G.rows; i++)
          for (int c = 0; c < G.cols; c++)
            GR.data[c] += G(i, c) * X(i, c);
      }
    };
  }
  return y;
}

//----------------------------------------------------------------------------

Var
Graph::concat(std::span<const Var> parts)
{
  if (parts.empty())
    raise(ErrorCode::kShapeMismatch, "concat of nothing");
  int rows = value(parts[0]).rows;
  int cols = 0;
  bool anyGrad = false;
  for (Var p : parts) {
    if (value(p).rows != rows)
      raise(ErrorCode::kShapeMismatch, "concat: row counts differ");
    cols += value(p).cols;
    anyGrad |= needs(p);
  }

  Matrix Y(rows, cols);
  int c0 = 0;
  for (Var p : parts) {
    const Matrix& P = value(p);
    for (int i = 0; i < rows; i++)
      std::copy(P.row(i), P.row(i) + P.cols, Y.row(i) + c0);
    c0 += P.cols;
  }

  Var y = push(std::move(Y), anyGrad);
  if (anyGrad) {
    std::vector<Var> ps(parts.begin(), parts.end());
    node(y).backward = [this, ps, y] {
      const Matrix& G = nodes_[y.id].grad;
      int c0 = 0;
      for (Var p : ps) {
        int w = value(p).cols;
        if (needs(p)) {
          Matrix& GP = g(p);
          for (int i = 0; i < G.rows; i++)
            for (int c = 0; c < w; c++)
              GP(i, c) += G(i, c0 + c);
        }
        c0 += w;
      }
    };
  }
  return y;
}

Var
Graph::sliceCols(Var x, int begin, int end)
{
  const Matrix& X = value(x);
  if (begin < 0 || end > X.cols || begin >= end)
    raise(ErrorCode::kShapeMismatch, "sliceCols: bad range");
  Matrix Y(X.rows, end - begin);
  for (int i = 0; i < X.rows; i++)
    for (int c = begin; c < end; c++)
      Y(i, c - begin) = X(i, c);
  Var y = push(std::move(Y), needs(x));
  if (node(y).needsGrad) {
    node(y).backward = [this, x, y, begin] {
      const Matrix& G = nodes_[y.id].grad;
      Matrix& GX = g(x);
      for (int i = 0; i < G.rows; i++)
        for (int c = 0; c < G.cols; c++)
          GX(i, begin + c) += G(i, c);
    };
  }
  return y;
}

Var
Graph::sliceRows(Var x, int begin, int end)
{
  const Matrix& X = value(x);
  if (begin < 0 || end > X.rows || begin >= end)
    raise(ErrorCode::kShapeMismatch, "sliceRows: bad range");
  Matrix Y(end - begin, X.cols);
  std::copy(X.row(begin), X.row(begin) + Y.size(), Y.data.begin());
  Var y = push(std::move(Y), needs(x));
  if (node(y).needsGrad) {
    node(y).backward = [this, x, y, begin] {
      const Matrix& G = nodes_[y.id].grad;
      double* gx = g(x).row(begin);
      for (size_t i = 0; i < G.size(); i++)
        gx[i] += G.data[i];
    };
  }
  return y;
}

Var
Graph::reshape(Var x, int rows, int cols)
{
  const Matrix& X = value(x);
  if (size_t(rows) * cols != X.size())
    raise(ErrorCode::kShapeMismatch, "reshape: element count differs");
  Matrix Y = X;
  Y.rows = rows;
  Y.cols = cols;
  Var y = push(std::move(Y), needs(x));
  if (node(y).needsGrad) {
    node(y).backward = [this, x, y] {
      const Matrix& G = nodes_[y.id].grad;
      Matrix& GX = g(x);
      for (size_t i = 0; i < G.size(); i++)
        GX.data[i] += G.data[i];
    };
  }
  return y;
}

Var
Graph::gatherRows(Var x, std::vector<int> index)
{
  const Matrix& X = value(x);
  Matrix Y(int(index.size()), X.cols);
  for (size_t i = 0; i < index.size(); i++) {
    int r = index[i];
    if (r < 0 || r >= X.rows)
      raise(ErrorCode::kShapeMismatch, "gatherRows: index out of range");
    std::copy(X.row(r), X.row(r) + X.cols, Y.row(int(i)));
  }
  Var y = push(std::move(Y), needs(x));
  if (node(y).needsGrad) {
    node(y).backward = [this, x, y, index = std::move(index)] {
      const Matrix& G = nodes_[y.id].grad;
      Matrix& GX = g(x);
      for (size_t i = 0; i < index.size(); i++) {
        double* gx = GX.row(index[i]);
        const double* gr = G.row(int(i));
        for (int c = 0; c < G.cols; c++)
          gx[c] += gr[c];
      }
    };
  }
  return y;
}

Var
Graph::groupMax(Var x, std::vector<int> offsets, std::vector<int> keys)
{
  const Matrix& X = value(x);
  const int groups = int(offsets.size()) - 1;
  if (groups < 0 || offsets.back() != X.rows)
    raise(ErrorCode::kShapeMismatch, "groupMax: offsets do not cover input");
  if (!keys.empty() && int(keys.size()) != X.rows)
    raise(ErrorCode::kShapeMismatch, "groupMax: key count differs");

  Matrix Y(groups, X.cols);
  std::vector<int> arg(size_t(groups) * X.cols, -1);
  for (int gi = 0; gi < groups; gi++) {
    for (int c = 0; c < X.cols; c++) {
      int best = -1;
      for (int r = offsets[gi]; r < offsets[gi + 1]; r++) {
        if (best < 0 || X(r, c) > X(best, c))
          best = r;
        else if (X(r, c) == X(best, c) && !keys.empty() && keys[r] < keys[best])
          best = r;
      }
      arg[size_t(gi) * X.cols + c] = best;
      Y(gi, c) = best >= 0 ? X(best, c) : 0.0;
    }
  }

  Var y = push(std::move(Y), needs(x));
  if (node(y).needsGrad) {
    node(y).backward = [this, x, y, arg = std::move(arg)] {
      const Matrix& G = nodes_[y.id].grad;
      Matrix& GX = g(x);
      for (int gi = 0; gi < G.rows; gi++)
        for (int c = 0; c < G.cols; c++) {
          int r = arg[size_t(gi) * G.cols + c];
          if (r >= 0)
            GX(r, c) += G(gi, c);
        }
    };
  }
  return y;
}

//----------------------------------------------------------------------------

Var
Graph::sumAll(Var x)
{
  const Matrix& X = value(x);
  Matrix Y(1, 1);
  for (double v : X.data)
    Y.data[0] += v;
  Var y = push(std::move(Y), needs(x));
  if (node(y).needsGrad) {
    node(y).backward = [this, x, y] {
      double gv = nodes_[y.id].grad.data[0];
      Matrix& GX = g(x);
      for (double& v : GX.data)
        v += gv;
    };
  }
  return y;
}

Var
Graph::meanAll(Var x)
{
  size_t n = value(x).size();
  return scale(sumAll(x), n ? 1.0 / double(n) : 0.0);
}

Var
Graph::meanRows(Var x)
{
  const Matrix& X = value(x);
  Matrix Y(1, X.cols);
  for (int i = 0; i < X.rows; i++)
    for (int c = 0; c < X.cols; c++)
      Y.data[c] += X(i, c);
  double inv = X.rows ? 1.0 / X.rows : 0.0;
  for (double& v : Y.data)
    v *= inv;
  Var y = push(std::move(Y), needs(x));
  if (node(y).needsGrad) {
    node(y).backward = [this, x, y, inv] {
      const Matrix& G = nodes_[y.id].grad;
      Matrix& GX = g(x);
      for (int i = 0; i < GX.rows; i++)
        for (int c = 0; c < GX.cols; c++)
          GX(i, c) += G.data[c] * inv;
    };
  }
  return y;
}

Var
Graph::broadcastRows(Var r, int rows)
{
  return addRow(constant(Matrix(rows, value(r).cols)), r);
}

//============================================================================

double
laplaceCdf(double x, double mu, double b)
{
  double t = (x - mu) / b;
  if (t < 0)
    return 0.5 * std::exp(t);
  return 1.0 - 0.5 * std::exp(-t);
}

Var
Graph::laplaceNll(Var y, Var mu, Var logb)
{
  const Matrix& Yv = value(y);
  const Matrix& M = value(mu);
  const Matrix& L = value(logb);
  if (Yv.cols != 1 || !Yv.sameShape(M) || !Yv.sameShape(L))
    raise(ErrorCode::kShapeMismatch, "laplaceNll expects n x 1 inputs");

  const int n = Yv.rows;
  Matrix out(n, 1);
  // d(nll)/d(y), d(nll)/d(mu), d(nll)/d(logb)
  Matrix dy(n, 1), dmu(n, 1), dlb(n, 1);

  for (int i = 0; i < n; i++) {
    double s = std::exp(L.data[i]);
    double lo = Yv.data[i] - 0.5;
    double hi = Yv.data[i] + 0.5;
    double m = M.data[i];

    if (lo >= m || hi <= m) {
      // interval on one side of the mode: P = e^{-u} (1 - e^{-1/s}) / 2
      double sgn = lo >= m ? 1.0 : -1.0;
      double u = lo >= m ? (lo - m) / s : (m - hi) / s;
      double t = std::exp(-1.0 / s);
      out.data[i] = std::log(2.0) + u - std::log(-std::expm1(-1.0 / s));
      dy.data[i] = sgn / s;
      dmu.data[i] = -sgn / s;
      double dds = -u / s + t / (s * s * (1.0 - t));
      dlb.data[i] = s * dds;
    } else {
      double e1 = std::exp(-(m - lo) / s);
      double e2 = std::exp(-(hi - m) / s);
      double p = 1.0 - 0.5 * (e1 + e2);
      out.data[i] = -std::log(p);
      double dpdy = 0.5 * (e2 - e1) / s;
      double dpdm = 0.5 * (e1 - e2) / s;
      double dpds = -0.5 * (e1 * (m - lo) + e2 * (hi - m)) / (s * s);
      dy.data[i] = -dpdy / p;
      dmu.data[i] = -dpdm / p;
      dlb.data[i] = -s * dpds / p;
    }
  }

  Var r = push(std::move(out), needs(y) || needs(mu) || needs(logb));
  if (node(r).needsGrad) {
    node(r).backward = [this, y, mu, logb, r, dy = std::move(dy),
                        dmu = std::move(dmu), dlb = std::move(dlb)] {
      const Matrix& G = nodes_[r.id].grad;
      const std::pair<Var, const Matrix*> parts[] = {
        {y, &dy}, {mu, &dmu}, {logb, &dlb}};
      for (const auto& [v, d] : parts) {
        if (!needs(v))
          continue;
        Matrix& GV = g(v);
        for (int i = 0; i < G.rows; i++)
          GV.data[i] += G.data[i] * d->data[i];
      }
    };
  }
  return r;
}

//============================================================================

Var
Graph::rahtHighs(Var attributes, std::shared_ptr<const RahtTree> treePtr)
{
  const RahtTree& tree = *treePtr;
  const Matrix& A = value(attributes);
  if (A.cols != 3 || A.rows != tree.pointCount())
    raise(ErrorCode::kShapeMismatch, "rahtHighs: attribute shape");

  std::vector<Vec3d> attrs(A.rows);
  for (int i = 0; i < A.rows; i++)
    attrs[i] = Vec3d{A(i, 0), A(i, 1), A(i, 2)};
  Coefficients coeffs = rahtForward(tree, attrs);

  Matrix Y(int(coeffs.highs.size()), 3);
  for (int i = 0; i < Y.rows; i++)
    for (int c = 0; c < 3; c++)
      Y(i, c) = coeffs.highs[i][c];

  Var y = push(std::move(Y), needs(attributes));
  if (node(y).needsGrad) {
    node(y).backward = [this, attributes, y, t = std::move(treePtr)] {
      // the transform is orthonormal: its adjoint is the inverse
      const Matrix& G = nodes_[y.id].grad;
      Coefficients gc;
      gc.dc = Vec3d{0, 0, 0};
      gc.highs.resize(G.rows);
      for (int i = 0; i < G.rows; i++)
        gc.highs[i] = Vec3d{G(i, 0), G(i, 1), G(i, 2)};
      std::vector<Vec3d> ga = rahtInverse(*t, gc);
      Matrix& GA = g(attributes);
      for (int i = 0; i < GA.rows; i++)
        for (int c = 0; c < 3; c++)
          GA(i, c) += ga[i][c];
    };
  }
  return y;
}

}  // namespace pcc::nn
