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

#include "pcc/Context.h"

#include <cmath>

#include "pcc/Error.h"
#include "pcc/KdTree.h"

namespace pcc {

using nn::Graph;
using nn::Matrix;
using nn::Var;

double
slog(double x)
{
  return std::copysign(std::log1p(std::fabs(x)), x);
}

//============================================================================

namespace {

  // Coding positions of a tree grouped by level.
  std::vector<std::vector<int>> codedByLevel(const RahtTree& t)
  {
    std::vector<std::vector<int>> out(t.levelCount());
    const auto& order = t.codingOrder();
    for (int c = 0; c < int(order.size()); c++)
      out[t.node(order[c]).level].push_back(c);
    return out;
  }

  KdTree3 centroidIndex(const RahtTree& t, const std::vector<int>& coded)
  {
    std::vector<KdTree3::Point> pts;
    pts.reserve(coded.size());
    for (int c : coded) {
      const Vec3d& p = t.node(t.codingOrder()[c]).centroid;
      pts.push_back({p[0], p[1], p[2]});
    }
    return KdTree3(std::move(pts));
  }

}  // namespace

ContextGeometry
buildContextGeometry(
  const RahtTree& cur, const RahtTree& prev, std::span<const Vec3d> motion)
{
  if (int(motion.size()) != int(cur.nodes().size()))
    raise(ErrorCode::kLengthMismatch, "node motion does not match tree");

  const int m = int(cur.codingOrder().size());
  ContextGeometry geom;
  geom.prevNeighbors.resize(m);
  geom.prevOffsets.resize(m);
  geom.curNeighbors.resize(m);
  geom.curOffsets.resize(m);
  geom.levelFeature.resize(m);
  geom.weightFeature.resize(m);
  geom.codedParent = cur.codedParent();

  auto curLevels = codedByLevel(cur);
  auto prevLevels = codedByLevel(prev);
  const double norm = 3.0 * cur.depth();

  for (int s = cur.levelCount() - 1; s >= 0; s--) {
    const auto& cl = curLevels[s];
    if (cl.empty())
      continue;
    geom.levelRanges.emplace_back(cl.front(), cl.back() + 1);

    const double cell = RahtTree::cellScale(s);
    KdTree3 curIndex = centroidIndex(cur, cl);
    const std::vector<int>* pl =
      s < int(prevLevels.size()) ? &prevLevels[s] : nullptr;
    KdTree3 prevIndex;
    if (pl && !pl->empty())
      prevIndex = centroidIndex(prev, *pl);

    for (int local = 0; local < int(cl.size()); local++) {
      const int c = cl[local];
      const RahtNode& node = cur.node(cur.codingOrder()[c]);
      const Vec3d x = node.centroid;
      geom.levelFeature[c] = double(s) / norm;
      geom.weightFeature[c] = std::log2(double(node.weight)) / norm;

      if (prevIndex.size()) {
        const Vec3d xw = x + motion[cur.codingOrder()[c]];
        for (const auto& nb :
             prevIndex.knn({xw[0], xw[1], xw[2]}, kContextNeighbors)) {
          int pc = (*pl)[nb.index];
          const Vec3d& xp = prev.node(prev.codingOrder()[pc]).centroid;
          geom.prevNeighbors[c].push_back(pc);
          geom.prevOffsets[c].push_back((xp - xw) * (1.0 / cell));
        }
      }

      for (const auto& nb :
           curIndex.knn({x[0], x[1], x[2]}, kContextNeighbors, local)) {
        int cc = cl[nb.index];
        const Vec3d& xn = cur.node(cur.codingOrder()[cc]).centroid;
        geom.curNeighbors[c].push_back(cc);
        geom.curOffsets[c].push_back((xn - x) * (1.0 / cell));
      }
    }
  }
  return geom;
}

//============================================================================

ContextModel::ContextModel(
  Rng& rng, nn::DensityVariant variant, ContextSwitches sw)
{
  explicit_ = nn::Mlp("ctx.explicit", {6, 16, 32, kContextWidth}, rng);
  latent_ = nn::Mlp("ctx.latent", {3, 16, 32, kContextWidth}, rng);
  spatial_ = nn::Mlp("ctx.spatial", {6, 16, 32, kContextWidth}, rng);
  implicit_ = nn::Mlp("ctx.implicit", {16, 32, kContextWidth}, rng);
  intra_ = nn::Mlp("ctx.intra", {5, 32, kContextWidth}, rng);
  fusion_ = nn::Mlp("ctx.fusion", {3 * kContextWidth, 32, kContextWidth}, rng);
  density_ = nn::DensityModel(variant, kContextWidth, rng);
  switches_ = ContextSwitches{false, false};
  setSwitches(sw);
}

void
ContextModel::setSwitches(ContextSwitches sw)
{
  Matrix& w = fusion_.weight(0).value;
  auto clearRows = [&](int first) {
    for (int r = first; r < first + kContextWidth; r++)
      for (int c = 0; c < w.cols; c++)
        w(r, c) = 0.0;
  };
  if (sw.explicitContext && !switches_.explicitContext)
    clearRows(0);
  if (sw.implicitContext && !switches_.implicitContext)
    clearRows(kContextWidth);
  switches_ = sw;
}

Var
ContextModel::conditioning(
  Graph& g, const ContextGeometry& geom, const ContextInputs& in, int begin,
  int end) const
{
  if (!initialized())
    raise(ErrorCode::kModelMissing, "context model not loaded");
  const int m = end - begin;
  const double invQ = 1.0 / in.qstep;

  // explicit temporal context
  Var e;
  if (switches_.explicitContext) {
    int rows = 0;
    for (int c = begin; c < end; c++)
      rows += int(geom.prevNeighbors[c].size());
    Matrix x(rows, 6);
    std::vector<int> offsets{0}, keys;
    int r = 0;
    for (int c = begin; c < end; c++) {
      for (size_t j = 0; j < geom.prevNeighbors[c].size(); j++) {
        int pc = geom.prevNeighbors[c][j];
        for (int ch = 0; ch < 3; ch++) {
          x(r, ch) = slog(in.prevCoeffs[pc][ch] * invQ);
          x(r, 3 + ch) = geom.prevOffsets[c][j][ch];
        }
        keys.push_back(pc);
        r++;
      }
      offsets.push_back(r);
    }
    if (rows)
      e = g.groupMax(
        explicit_.forward(g, g.constant(std::move(x))), std::move(offsets),
        std::move(keys));
    else
      e = g.constant(Matrix(m, kContextWidth));
  } else {
    e = g.constant(Matrix(m, kContextWidth));
  }

  // implicit context from the prediction's coefficients
  Var imp;
  if (switches_.implicitContext) {
    std::vector<int> self(m);
    for (int c = begin; c < end; c++)
      self[c - begin] = c;
    Var nFeat = latent_.forward(g, g.gatherRows(in.predSlog, std::move(self)));

    std::vector<int> nbr, offsets{0}, keys;
    std::vector<double> rel;
    for (int c = begin; c < end; c++) {
      for (size_t j = 0; j < geom.curNeighbors[c].size(); j++) {
        nbr.push_back(geom.curNeighbors[c][j]);
        keys.push_back(geom.curNeighbors[c][j]);
        for (int ch = 0; ch < 3; ch++)
          rel.push_back(geom.curOffsets[c][j][ch]);
      }
      offsets.push_back(int(nbr.size()));
    }
    Var sFeat;
    if (!nbr.empty()) {
      Matrix relM(int(nbr.size()), 3);
      relM.data = std::move(rel);
      Var parts[] = {
        g.gatherRows(in.predSlog, std::move(nbr)),
        g.constant(std::move(relM))};
      sFeat = g.groupMax(
        spatial_.forward(g, g.concat(parts)), std::move(offsets),
        std::move(keys));
    } else {
      sFeat = g.constant(Matrix(m, kContextWidth));
    }
    Var parts[] = {nFeat, sFeat};
    imp = implicit_.forward(g, g.concat(parts));
  } else {
    imp = g.constant(Matrix(m, kContextWidth));
  }

  // intra context: parent coefficient, level, weight
  Matrix intraIn(m, 5);
  for (int c = begin; c < end; c++) {
    int p = geom.codedParent[c];
    for (int ch = 0; ch < 3; ch++)
      intraIn(c - begin, ch) = p >= 0 ? slog(in.decoded[p][ch] * invQ) : 0.0;
    intraIn(c - begin, 3) = geom.levelFeature[c];
    intraIn(c - begin, 4) = geom.weightFeature[c];
  }
  Var intra = intra_.forward(g, g.constant(std::move(intraIn)));

  Var parts[] = {e, imp, intra};
  Var ctx = fusion_.forward(g, g.concat(parts));

  std::vector<int> rep(3 * m);
  Matrix onehot(3 * m, 3);
  for (int i = 0; i < m; i++)
    for (int ch = 0; ch < 3; ch++) {
      rep[3 * i + ch] = i;
      onehot(3 * i + ch, ch) = 1.0;
    }
  Var cond[] = {g.gatherRows(ctx, std::move(rep)), g.constant(std::move(onehot))};
  return g.concat(cond);
}

std::vector<nn::Parameter*>
ContextModel::parameters()
{
  std::vector<nn::Parameter*> p;
  for (auto* net :
       {&explicit_, &latent_, &spatial_, &implicit_, &intra_, &fusion_})
    for (auto* q : net->parameters())
      p.push_back(q);
  for (auto* q : density_.parameters())
    p.push_back(q);
  return p;
}

std::vector<const nn::Parameter*>
ContextModel::parameters() const
{
  std::vector<const nn::Parameter*> p;
  for (const auto* net :
       {&explicit_, &latent_, &spatial_, &implicit_, &intra_, &fusion_})
    for (const auto* q : net->parameters())
      p.push_back(q);
  for (const auto* q : density_.parameters())
    p.push_back(q);
  return p;
}

}  // namespace pcc
