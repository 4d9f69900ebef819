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
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace pcc {

//============================================================================
// Static k-d tree for exact k-nearest-neighbour queries.
//
// Results are ordered by (squared distance, point index), so the answer does
// not depend on how the tree happened to be split: equal-distance candidates
// are resolved in favour of the lowest index.  Callers store points in
// Morton order, which makes this "lowest Morton index wins".

template<int Dim>
class KdTree {
public:
  using Point = std::array<double, Dim>;

  struct Neighbor {
    int index;
    double dist2;
  };

  KdTree() = default;

  explicit KdTree(std::vector<Point> points) : points_(std::move(points))
  {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    if (!points_.empty())
      build(0, int(points_.size()));
  }

  size_t size() const { return points_.size(); }
  const Point& point(int i) const { return points_[i]; }

  // k nearest points to |q|; |exclude| (if >= 0) is skipped.
  std::vector<Neighbor>
  knn(const Point& q, int k, int exclude = -1) const
  {
    std::vector<Neighbor> best;
    if (k <= 0 || points_.empty())
      return best;
    best.reserve(k + 1);
    search(0, q, k, exclude, best);
    return best;
  }

  Neighbor nearest(const Point& q) const { return knn(q, 1).front(); }

private:
  static constexpr int kLeafSize = 8;

  struct Node {
    int begin, end;
    int left = -1, right = -1;
    Point lo, hi;
  };

  static bool better(const Neighbor& a, const Neighbor& b)
  {
    return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
  }

  int build(int begin, int end)
  {
    int id = int(nodes_.size());
    nodes_.push_back(Node{begin, end, -1, -1, {}, {}});
    Point lo, hi;
    lo.fill(std::numeric_limits<double>::max());
    hi.fill(std::numeric_limits<double>::lowest());
    for (int i = begin; i < end; i++) {
      const auto& p = points_[order_[i]];
      for (int d = 0; d < Dim; d++) {
        lo[d] = std::min(lo[d], p[d]);
        hi[d] = std::max(hi[d], p[d]);
      }
    }
    nodes_[id].lo = lo;
    nodes_[id].hi = hi;
    if (end - begin <= kLeafSize)
      return id;

    int axis = 0;
    for (int d = 1; d < Dim; d++)
      if (hi[d] - lo[d] > hi[axis] - lo[axis])
        axis = d;
    if (!(hi[axis] > lo[axis]))
      return id;

    int mid = (begin + end) / 2;
    std::nth_element(
      order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
      [&](int a, int b) {
        double pa = points_[a][axis], pb = points_[b][axis];
        return pa < pb || (pa == pb && a < b);
      });
    int l = build(begin, mid);
    int r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  static double boxDist2(const Node& n, const Point& q)
  {
    double s = 0;
    for (int d = 0; d < Dim; d++) {
      double e = 0;
      if (q[d] < n.lo[d])
        e = n.lo[d] - q[d];
      else if (q[d] > n.hi[d])
        e = q[d] - n.hi[d];
      s += e * e;
    }
    return s;
  }

  void search(
    int id, const Point& q, int k, int exclude,
    std::vector<Neighbor>& best) const
  {
    const Node& n = nodes_[id];
    if (int(best.size()) == k && boxDist2(n, q) > best.back().dist2)
      return;

    if (n.left < 0) {
      for (int i = n.begin; i < n.end; i++) {
        int idx = order_[i];
        if (idx == exclude)
          continue;
        const auto& p = points_[idx];
        double s = 0;
        for (int d = 0; d < Dim; d++) {
          double e = p[d] - q[d];
          s += e * e;
        }
        Neighbor cand{idx, s};
        if (int(best.size()) == k && !better(cand, best.back()))
          continue;
        auto it = std::upper_bound(best.begin(), best.end(), cand, better);
        best.insert(it, cand);
        if (int(best.size()) > k)
          best.pop_back();
      }
      return;
    }

    int first = n.left, second = n.right;
    if (boxDist2(nodes_[second], q) < boxDist2(nodes_[first], q))
      std::swap(first, second);
    search(first, q, k, exclude, best);
    search(second, q, k, exclude, best);
  }

  std::vector<Point> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

using KdTree3 = KdTree<3>;

}  // namespace pcc
