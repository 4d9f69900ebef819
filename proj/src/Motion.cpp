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

#include "pcc/Motion.h"

#include <algorithm>

#include "pcc/Error.h"

namespace pcc {

using nn::Graph;
using nn::Matrix;
using nn::Var;

//============================================================================

static std::array<double, 3>
arr(const Vec3d& v)
{
  return {v[0], v[1], v[2]};
}

FrameIndex::FrameIndex(const PointFrame& frame) : frame_(&frame)
{
  if (frame.positions.empty())
    raise(ErrorCode::kShapeMismatch, "nearest-neighbour index on empty frame");
  std::vector<KdTree3::Point> pts;
  pts.reserve(frame.size());
  for (const auto& p : frame.positions)
    pts.push_back({double(p[0]), double(p[1]), double(p[2])});
  tree_ = KdTree3(std::move(pts));
}

int
FrameIndex::nearest(const Vec3d& q) const
{
  return tree_.nearest(arr(q)).index;
}

std::vector<int>
FrameIndex::knn(const Vec3d& q, int k, int exclude) const
{
  std::vector<int> out;
  for (const auto& n : tree_.knn(arr(q), k, exclude))
    out.push_back(n.index);
  return out;
}

std::vector<Vec3d>
nnAttributes(const FrameIndex& prev, std::span<const Vec3d> queries)
{
  std::vector<Vec3d> out(queries.size());
  for (size_t i = 0; i < queries.size(); i++)
    out[i] = prev.frame().attributes[prev.nearest(queries[i])];
  return out;
}

std::vector<Vec3d>
nnAttributes(const PointFrame& prev, std::span<const Vec3d> queries)
{
  return nnAttributes(FrameIndex(prev), queries);
}

std::vector<Vec3d>
toReal(std::span<const Vec3i> positions)
{
  std::vector<Vec3d> out(positions.size());
  for (size_t i = 0; i < positions.size(); i++)
    out[i] = Vec3d(positions[i]);
  return out;
}

std::vector<Vec3d>
nodeMotion(const RahtTree& tree, const MotionField& motion)
{
  return nodeAverages(tree, motion.vectors);
}

Matrix
toMatrix(std::span<const Vec3d> v)
{
  Matrix m(int(v.size()), 3);
  for (size_t i = 0; i < v.size(); i++)
    for (int c = 0; c < 3; c++)
      m(int(i), c) = v[i][c];
  return m;
}

std::vector<Vec3d>
fromMatrix(const Matrix& m)
{
  std::vector<Vec3d> v(m.rows);
  for (int i = 0; i < m.rows; i++)
    v[i] = Vec3d{m(i, 0), m(i, 1), m(i, 2)};
  return v;
}

//============================================================================

namespace {

  // Rows [attr / 255, (x_j - x_i) / R] over the k nearest same-cloud
  // neighbours of every point, grouped per point.
  struct NeighborRows {
    Matrix rows;
    std::vector<int> offsets;
    std::vector<int> keys;
    std::vector<int> owner;
  };

  NeighborRows selfNeighborhoods(
    const KdTree3& tree, std::span<const Vec3d> pos,
    std::span<const Vec3d> attrs)
  {
    const int n = int(pos.size());
    const int k = std::min(kMotionNeighbors, n);
    NeighborRows nr;
    nr.rows = Matrix(n * k, 6);
    nr.offsets.reserve(n + 1);
    nr.offsets.push_back(0);
    int r = 0;
    for (int i = 0; i < n; i++) {
      for (const auto& nb : tree.knn(arr(pos[i]), k)) {
        int j = nb.index;
        for (int c = 0; c < 3; c++) {
          nr.rows(r, c) = attrs[j][c] / 255.0;
          nr.rows(r, 3 + c) = (pos[j][c] - pos[i][c]) / kOffsetScale;
        }
        nr.keys.push_back(j);
        nr.owner.push_back(i);
        r++;
      }
      nr.offsets.push_back(r);
    }
    return nr;
  }

  KdTree3 buildTree(std::span<const Vec3d> pos)
  {
    std::vector<KdTree3::Point> pts;
    pts.reserve(pos.size());
    for (const auto& p : pos)
      pts.push_back(arr(p));
    return KdTree3(std::move(pts));
  }

  Vec3d centroid(std::span<const Vec3d> pos)
  {
    Vec3d s{0, 0, 0};
    for (const auto& p : pos)
      s += p;
    return s * (1.0 / double(pos.size()));
  }

}  // namespace

//============================================================================

MotionEstimator::MotionEstimator(Rng& rng)
{
  pointNet_ = nn::Mlp("me.point", {6, 32, 32}, rng);
  embedNet_ = nn::Mlp("me.embed", {67, 32, 32}, rng);
  head_ = nn::Mlp("me.head", {67, 32, 3}, rng);
  scale_ = nn::Parameter("me.scale", Matrix(1, 3));
}

Var
MotionEstimator::estimate(
  Graph& g, const FrameIndex& prev, std::span<const Vec3i> current,
  std::span<const Vec3d> aNn) const
{
  if (!initialized())
    raise(ErrorCode::kModelMissing, "motion estimation model not loaded");
  if (aNn.size() != current.size())
    raise(ErrorCode::kLengthMismatch, "aNn does not match current frame");

  const PointFrame& pf = prev.frame();
  std::vector<Vec3d> prevPos = toReal(pf.positions);
  std::vector<Vec3d> curPos = toReal(current);
  const int n = int(curPos.size());

  KdTree3 prevTree = buildTree(prevPos);
  KdTree3 curTree = buildTree(curPos);

  auto pn = selfNeighborhoods(prevTree, prevPos, pf.attributes);
  auto cn = selfNeighborhoods(curTree, curPos, aNn);
  Var fPrev = nn::setAggregate(
    g, pointNet_, g.constant(std::move(pn.rows)), pn.offsets, pn.keys);
  Var fCur = nn::setAggregate(
    g, pointNet_, g.constant(std::move(cn.rows)), cn.offsets, cn.keys);

  // flow embedding: current point against its nearest previous points
  const int k = std::min<int>(kMotionNeighbors, int(prevPos.size()));
  std::vector<int> curIdx, prevIdx, offsets{0};
  Matrix rel(n * k, 3);
  int r = 0;
  for (int i = 0; i < n; i++) {
    for (const auto& nb : prevTree.knn(arr(curPos[i]), k)) {
      curIdx.push_back(i);
      prevIdx.push_back(nb.index);
      for (int c = 0; c < 3; c++)
        rel(r, c) = (prevPos[nb.index][c] - curPos[i][c]) / kOffsetScale;
      r++;
    }
    offsets.push_back(r);
  }
  std::vector<int> keys = prevIdx;

  // First embedding layer on [fCur_i, fPrev_j, rel_ij], factorised so that
  // the feature projections are computed once per point, not per pair.
  const int fw = pointNet_.outWidth();
  Var w0 = g.param(embedNet_.weight(0));
  Var pre = g.add(
    g.gatherRows(g.matmul(fCur, g.sliceRows(w0, 0, fw)), std::move(curIdx)),
    g.gatherRows(
      g.matmul(fPrev, g.sliceRows(w0, fw, 2 * fw)), std::move(prevIdx)));
  pre = g.add(pre, g.matmul(g.constant(std::move(rel)), g.sliceRows(w0, 2 * fw, 2 * fw + 3)));
  pre = g.addRow(pre, g.param(embedNet_.bias(0)));
  Var emb = g.groupMax(embedNet_.forwardFrom(g, pre, 0), offsets, keys);

  Vec3d shift = (centroid(prevPos) - centroid(curPos)) * (1.0 / kOffsetScale);
  Matrix shiftRow(1, 3);
  for (int c = 0; c < 3; c++)
    shiftRow.data[c] = shift[c];
  Var global = g.broadcastRows(g.constant(std::move(shiftRow)), n);

  Var headIn[] = {emb, fCur, global};
  Var raw = head_.forward(g, g.concat(headIn));
  return g.scale(g.mulRow(raw, g.param(scale_)), kMotionUnit);
}

MotionField
MotionEstimator::estimate(
  const FrameIndex& prev, std::span<const Vec3i> current,
  std::span<const Vec3d> aNn) const
{
  Graph g;
  Var v = estimate(g, prev, current, aNn);
  return MotionField{fromMatrix(g.value(v))};
}

std::vector<nn::Parameter*>
MotionEstimator::parameters()
{
  std::vector<nn::Parameter*> p;
  for (auto* net : {&pointNet_, &embedNet_, &head_})
    for (auto* q : net->parameters())
      p.push_back(q);
  p.push_back(&scale_);
  return p;
}

std::vector<const nn::Parameter*>
MotionEstimator::parameters() const
{
  std::vector<const nn::Parameter*> p;
  for (const auto* net : {&pointNet_, &embedNet_, &head_})
    for (const auto* q : net->parameters())
      p.push_back(q);
  p.push_back(&scale_);
  return p;
}

//============================================================================

MotionCompensator::MotionCompensator(Rng& rng)
{
  localNet_ = nn::Mlp("mc.local", {6, 32, 32}, rng);
  head_ = nn::Mlp("mc.head", {35, 32, 3}, rng);
  scale_ = nn::Parameter("mc.scale", Matrix(1, 3));
}

MotionCompensator::Output
MotionCompensator::compensate(
  Graph& g, const FrameIndex& prev, std::span<const Vec3i> current,
  Var motion) const
{
  if (!initialized())
    raise(ErrorCode::kModelMissing, "motion compensation model not loaded");
  const Matrix& V = g.value(motion);
  if (V.rows != int(current.size()) || V.cols != 3)
    raise(ErrorCode::kLengthMismatch, "motion field does not match frame");

  const PointFrame& pf = prev.frame();
  const int n = int(current.size());
  const int k = std::min<int>(kMotionNeighbors, int(pf.size()));

  Output out;
  out.warped.resize(n);
  out.aW.resize(n);

  std::vector<int> rep, keys, offsets{0};
  Matrix diff(n * k, 3), rel(n * k, 3), aw(n, 3);
  int r = 0;
  for (int i = 0; i < n; i++) {
    Vec3d p(current[i]);
    Vec3d w = p + Vec3d{V(i, 0), V(i, 1), V(i, 2)};
    out.warped[i] = w;
    out.aW[i] = pf.attributes[prev.nearest(w)];
    for (int c = 0; c < 3; c++)
      aw(i, c) = out.aW[i][c] / 255.0;

    for (int j : prev.knn(w, k)) {
      rep.push_back(i);
      keys.push_back(j);
      for (int c = 0; c < 3; c++) {
        diff(r, c) = (pf.attributes[j][c] - out.aW[i][c]) / 255.0;
        // the motion term is added back below so that gradients reach V
        rel(r, c) = (pf.positions[j][c] - p[c]) / kOffsetScale;
      }
      r++;
    }
    offsets.push_back(r);
  }

  Var relV = g.sub(
    g.constant(std::move(rel)),
    g.scale(g.gatherRows(motion, std::move(rep)), 1.0 / kOffsetScale));
  Var rowsParts[] = {g.constant(std::move(diff)), relV};
  Var m = nn::setAggregate(
    g, localNet_, g.concat(rowsParts), offsets, std::move(keys));

  Var awV = g.constant(aw);
  Var headIn[] = {m, awV};
  Var raw = head_.forward(g, g.concat(headIn));
  Var refine = g.scale(g.mulRow(raw, g.param(scale_)), 255.0);
  out.aP = g.add(g.constant(toMatrix(out.aW)), refine);
  return out;
}

std::vector<nn::Parameter*>
MotionCompensator::parameters()
{
  std::vector<nn::Parameter*> p;
  for (auto* net : {&localNet_, &head_})
    for (auto* q : net->parameters())
      p.push_back(q);
  p.push_back(&scale_);
  return p;
}

std::vector<const nn::Parameter*>
MotionCompensator::parameters() const
{
  std::vector<const nn::Parameter*> p;
  for (const auto* net : {&localNet_, &head_})
    for (const auto* q : net->parameters())
      p.push_back(q);
  p.push_back(&scale_);
  return p;
}

//============================================================================

PredictionBundle
predict(
  const MotionEstimator& me, const MotionCompensator& mc,
  const FrameIndex& prev, std::span<const Vec3i> current,
  std::span<const Vec3d> attributes)
{
  PredictionBundle b;
  b.aNn = nnAttributes(prev, toReal(current));

  Graph g;
  Var v = me.estimate(g, prev, current, b.aNn);
  auto out = mc.compensate(g, prev, current, v);
  b.motion.vectors = fromMatrix(g.value(v));
  b.warped = std::move(out.warped);
  b.aW = std::move(out.aW);
  b.aP = fromMatrix(g.value(out.aP));

  if (!attributes.empty()) {
    if (attributes.size() != current.size())
      raise(ErrorCode::kLengthMismatch, "attributes do not match geometry");
    b.residual.resize(attributes.size());
    for (size_t i = 0; i < attributes.size(); i++)
      b.residual[i] = attributes[i] - b.aP[i];
  }
  return b;
}

}  // namespace pcc
