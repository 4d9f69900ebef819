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

#include "pcc/RAHT.h"

#include <cmath>
#include <limits>

#include "pcc/Error.h"
#include "pcc/Morton.h"

namespace pcc {

//============================================================================

RahtTree
RahtTree::build(std::span<const Vec3i> positions, int depth)
{
  if (positions.empty())
    raise(ErrorCode::kShapeMismatch, "cannot build a tree without points");
  if (depth < 1 || depth > 16)
    raise(ErrorCode::kConfigError, "depth must be in [1, 16]");

  RahtTree t;
  t.depth_ = depth;
  t.pointCount_ = int(positions.size());
  t.levels_.resize(3 * depth + 1);

  uint64_t prevCode = 0;
  for (size_t i = 0; i < positions.size(); i++) {
    RahtNode leaf;
    leaf.key = mortonCode(positions[i]);
    if (i && leaf.key <= prevCode)
      raise(ErrorCode::kShapeMismatch, "positions not unique/Morton sorted");
    prevCode = leaf.key;
    leaf.centroid = toReal(positions[i]);
    t.levels_[0].push_back(int(t.nodes_.size()));
    t.nodes_.push_back(leaf);
  }

  for (int s = 1; s <= 3 * depth; s++) {
    const auto& below = t.levels_[s - 1];
    auto& here = t.levels_[s];
    for (size_t i = 0; i < below.size();) {
      int a = below[i];
      uint64_t key = t.nodes_[a].key >> 1;
      RahtNode n;
      n.level = s;
      n.key = key;
      n.child[0] = a;
      if (i + 1 < below.size() && (t.nodes_[below[i + 1]].key >> 1) == key) {
        int b = below[i + 1];
        const auto& na = t.nodes_[a];
        const auto& nb = t.nodes_[b];
        n.child[1] = b;
        n.weight = na.weight + nb.weight;
        n.centroid = (na.centroid * double(na.weight)
                      + nb.centroid * double(nb.weight))
          * (1.0 / double(n.weight));
        i += 2;
      } else {
        n.weight = t.nodes_[a].weight;
        n.centroid = t.nodes_[a].centroid;
        i += 1;
      }
      int id = int(t.nodes_.size());
      t.nodes_[n.child[0]].parent = id;
      if (n.child[1] >= 0)
        t.nodes_[n.child[1]].parent = id;
      t.nodes_.push_back(n);
      here.push_back(id);
    }
  }
  t.root_ = t.levels_.back().front();

  for (int s = 3 * depth; s >= 1; s--)
    for (int id : t.levels_[s])
      if (t.nodes_[id].merged()) {
        t.nodes_[id].codedIndex = int(t.codingOrder_.size());
        t.codingOrder_.push_back(id);
      }

  t.codedParent_.resize(t.codingOrder_.size(), -1);
  for (size_t c = 0; c < t.codingOrder_.size(); c++) {
    int p = t.nodes_[t.codingOrder_[c]].parent;
    while (p >= 0 && !t.nodes_[p].merged())
      p = t.nodes_[p].parent;
    t.codedParent_[c] = p >= 0 ? t.nodes_[p].codedIndex : -1;
  }
  return t;
}

Vec3i
RahtTree::cell(int id) const
{
  const auto& n = nodes_[id];
  // undo the partial shift so that decoding sees whole xyz triplets
  int pad = n.level % 3;
  Vec3i c = mortonDecode(n.key << pad);
  for (int k = 0; k < pad; k++)
    c[k] >>= 1;
  return c;
}

double
RahtTree::cellScale(int level)
{
  return std::exp2(double(level) / 3.0);
}

//============================================================================

namespace {

  void checkSize(const RahtTree& tree, size_t n)
  {
    if (int(n) != tree.pointCount())
      raise(ErrorCode::kShapeMismatch, "attribute count does not match tree");
  }

}  // namespace

std::vector<Vec3d>
rahtNodeLows(const RahtTree& tree, std::span<const Vec3d> attributes)
{
  checkSize(tree, attributes.size());
  const auto& nodes = tree.nodes();
  std::vector<Vec3d> low(nodes.size());
  for (int i = 0; i < tree.pointCount(); i++)
    low[i] = attributes[i];

  for (int s = 1; s < tree.levelCount(); s++) {
    for (int id : tree.level(s)) {
      const auto& n = nodes[id];
      if (!n.merged()) {
        low[id] = low[n.child[0]];
        continue;
      }
      double w1 = nodes[n.child[0]].weight, w2 = nodes[n.child[1]].weight;
      double a = std::sqrt(w1), b = std::sqrt(w2), d = std::sqrt(w1 + w2);
      const Vec3d& l1 = low[n.child[0]];
      const Vec3d& l2 = low[n.child[1]];
      for (int k = 0; k < 3; k++)
        low[id][k] = (a * l1[k] + b * l2[k]) / d;
    }
  }
  return low;
}

Coefficients
rahtForward(const RahtTree& tree, std::span<const Vec3d> attributes)
{
  auto low = rahtNodeLows(tree, attributes);
  const auto& nodes = tree.nodes();

  Coefficients c;
  c.dc = low[tree.root()];
  c.highs.resize(tree.codingOrder().size());
  for (size_t i = 0; i < tree.codingOrder().size(); i++) {
    const auto& n = nodes[tree.codingOrder()[i]];
    double w1 = nodes[n.child[0]].weight, w2 = nodes[n.child[1]].weight;
    double a = std::sqrt(w1), b = std::sqrt(w2), d = std::sqrt(w1 + w2);
    const Vec3d& l1 = low[n.child[0]];
    const Vec3d& l2 = low[n.child[1]];
    for (int k = 0; k < 3; k++)
      c.highs[i][k] = (-b * l1[k] + a * l2[k]) / d;
  }
  return c;
}

std::vector<Vec3d>
rahtInverse(const RahtTree& tree, const Coefficients& coeffs)
{
  if (coeffs.highs.size() != tree.codingOrder().size())
    raise(ErrorCode::kShapeMismatch, "coefficient count does not match tree");

  const auto& nodes = tree.nodes();
  std::vector<Vec3d> low(nodes.size());
  low[tree.root()] = coeffs.dc;

  for (int s = tree.levelCount() - 1; s >= 1; s--) {
    for (int id : tree.level(s)) {
      const auto& n = nodes[id];
      if (!n.merged()) {
        low[n.child[0]] = low[id];
        continue;
      }
      double w1 = nodes[n.child[0]].weight, w2 = nodes[n.child[1]].weight;
      double a = std::sqrt(w1), b = std::sqrt(w2), d = std::sqrt(w1 + w2);
      const Vec3d& l = low[id];
      const Vec3d& h = coeffs.highs[n.codedIndex];
      for (int k = 0; k < 3; k++) {
        low[n.child[0]][k] = (a * l[k] - b * h[k]) / d;
        low[n.child[1]][k] = (b * l[k] + a * h[k]) / d;
      }
    }
  }
  low.resize(tree.pointCount());
  return low;
}

std::vector<Vec3d>
nodeAverages(const RahtTree& tree, std::span<const Vec3d> perPoint)
{
  checkSize(tree, perPoint.size());
  const auto& nodes = tree.nodes();
  std::vector<Vec3d> avg(nodes.size());
  for (int i = 0; i < tree.pointCount(); i++)
    avg[i] = perPoint[i];
  for (int s = 1; s < tree.levelCount(); s++) {
    for (int id : tree.level(s)) {
      const auto& n = nodes[id];
      if (!n.merged()) {
        avg[id] = avg[n.child[0]];
        continue;
      }
      double w1 = nodes[n.child[0]].weight, w2 = nodes[n.child[1]].weight;
      avg[id] = (avg[n.child[0]] * w1 + avg[n.child[1]] * w2)
        * (1.0 / (w1 + w2));
    }
  }
  return avg;
}

//============================================================================

int32_t
quantize(double value, double qstep)
{
  if (!(qstep > 0))
    raise(ErrorCode::kConfigError, "qstep must be > 0");
  double k = std::round(value / qstep);
  if (!(std::fabs(k) <= double(std::numeric_limits<int32_t>::max())))
    raise(ErrorCode::kOverflow, "quantized coefficient exceeds 32 bits");
  return int32_t(k);
}

QuantizedCoefficients
quantize(const Coefficients& coeffs, double qstep)
{
  QuantizedCoefficients q;
  q.qstep = qstep;
  for (int k = 0; k < 3; k++)
    q.dc[k] = quantize(coeffs.dc[k], qstep);
  q.highs.resize(coeffs.highs.size());
  for (size_t i = 0; i < coeffs.highs.size(); i++)
    for (int k = 0; k < 3; k++)
      q.highs[i][k] = quantize(coeffs.highs[i][k], qstep);
  return q;
}

Coefficients
dequantize(const QuantizedCoefficients& q)
{
  Coefficients c;
  for (int k = 0; k < 3; k++)
    c.dc[k] = double(q.dc[k]) * q.qstep;
  c.highs.resize(q.highs.size());
  for (size_t i = 0; i < q.highs.size(); i++)
    for (int k = 0; k < 3; k++)
      c.highs[i][k] = double(q.highs[i][k]) * q.qstep;
  return c;
}

}  // namespace pcc
