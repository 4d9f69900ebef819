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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "GradCheck.h"
#include "TestModels.h"
#include "pcc/Error.h"
#include "pcc/Motion.h"
#include "pcc/Morton.h"
#include "pcc/Sequence.h"

using namespace pcc;
using namespace pcc::nn;

namespace {

PointFrame
randomFrame(Rng& rng, int n, int depth)
{
  std::vector<Vec3i> pos;
  std::vector<Vec3d> attr;
  const int lim = (1 << depth) - 1;
  for (int i = 0; i < n; i++) {
    pos.push_back(Vec3i(
      rng.uniformInt(0, lim), rng.uniformInt(0, lim), rng.uniformInt(0, lim)));
    attr.push_back(Vec3d(
      rng.uniform(0.0, 255.0), rng.uniform(0.0, 255.0),
      rng.uniform(0.0, 255.0)));
  }
  return mergeVoxels(pos, attr, depth);
}

}  // namespace

//============================================================================

TEST(NnAttributesTest, IdentityAndSinglePoint)
{
  Rng rng(1);
  auto f = randomFrame(rng, 500, 8);
  EXPECT_EQ(nnAttributes(f, toReal(f.positions)), f.attributes);

  PointFrame one;
  one.depth = 8;
  one.positions = {Vec3i(4, 5, 6)};
  one.attributes = {Vec3d(9, 8, 7)};
  auto a = nnAttributes(one, toReal(f.positions));
  for (auto& v : a)
    EXPECT_EQ(v, Vec3d(9, 8, 7));
}

TEST(NnAttributesTest, MatchesBruteForce)
{
  Rng rng(2);
  auto f = randomFrame(rng, 800, 7);
  std::vector<Vec3d> q(1000);
  for (auto& p : q)
    p = Vec3d(
      rng.uniform(-5.0, 133.0), rng.uniform(-5.0, 133.0),
      rng.uniform(-5.0, 133.0));
  auto a = nnAttributes(f, q);
  for (size_t i = 0; i < q.size(); i++) {
    int best = -1;
    double bd = std::numeric_limits<double>::max();
    for (size_t j = 0; j < f.size(); j++) {
      double d = (Vec3d(f.positions[j]) - q[i]).norm2();
      if (d < bd) {
        bd = d;
        best = int(j);
      }
    }
    EXPECT_EQ(a[i], f.attributes[best]);
  }
}

//============================================================================

TEST(MotionEstimatorTest, ZeroAtInitialisation)
{
  Rng rng(3);
  MotionEstimator me(rng);
  for (int trial = 0; trial < 5; trial++) {
    auto prev = randomFrame(rng, 300, 7);
    auto cur = randomFrame(rng, 250, 7);
    FrameIndex idx(prev);
    auto v = me.estimate(idx, cur.positions, nnAttributes(idx, toReal(cur.positions)));
    ASSERT_EQ(v.vectors.size(), cur.size());
    for (auto& x : v.vectors)
      EXPECT_EQ(x, Vec3d());
  }
}

TEST(MotionCompensatorTest, PredictionEqualsWarpAtInitialisation)
{
  Rng rng(4);
  MotionEstimator me(rng);
  MotionCompensator mc(rng);
  auto prev = randomFrame(rng, 400, 7);
  auto cur = randomFrame(rng, 350, 7);
  FrameIndex idx(prev);
  auto b = predict(me, mc, idx, cur.positions, cur.attributes);
  EXPECT_EQ(b.aP, b.aW);
  // zero motion: the warp is the nearest-neighbour prediction
  EXPECT_EQ(b.aW, b.aNn);
  // arbitrary doubles: (a - p) + p is within one rounding of a
  for (size_t i = 0; i < cur.size(); i++)
    for (int k = 0; k < 3; k++)
      EXPECT_LE(
        std::abs(b.aP[i][k] + b.residual[i][k] - cur.attributes[i][k]),
        std::numeric_limits<double>::epsilon() * 256);
}

TEST(MotionCompensatorTest, ReconstructionIdentityOnDyadicGrid)
{
  // attributes on a 2^-8 grid make every sum and difference exact
  Rng rng(14);
  MotionEstimator me(rng);
  MotionCompensator mc(rng);
  auto prev = randomFrame(rng, 400, 7);
  auto cur = randomFrame(rng, 350, 7);
  for (auto* f : {&prev, &cur})
    for (auto& a : f->attributes)
      for (int k = 0; k < 3; k++)
        a[k] = std::round(a[k] * 256.0) / 256.0;
  FrameIndex idx(prev);
  auto b = predict(me, mc, idx, cur.positions, cur.attributes);
  for (size_t i = 0; i < cur.size(); i++)
    EXPECT_EQ(b.aP[i] + b.residual[i], cur.attributes[i]);
}

TEST(MotionCompensatorTest, IdenticalFramesGiveZeroResidual)
{
  Rng rng(5);
  MotionEstimator me(rng);
  MotionCompensator mc(rng);
  auto f = randomFrame(rng, 500, 8);
  FrameIndex idx(f);
  auto b = predict(me, mc, idx, f.positions, f.attributes);
  EXPECT_EQ(b.aW, f.attributes);
  for (auto& r : b.residual)
    EXPECT_EQ(r, Vec3d());
}

TEST(MotionTest, RequiresModels)
{
  MotionEstimator me;
  MotionCompensator mc;
  Rng rng(6);
  auto f = randomFrame(rng, 50, 6);
  FrameIndex idx(f);
  EXPECT_THROW(predict(me, mc, idx, f.positions), Error);
}

//============================================================================

TEST(NodeMotionTest, UniformAndPairs)
{
  std::vector<Vec3i> pos = {Vec3i(0, 0, 0), Vec3i(1, 0, 0)};
  auto t = RahtTree::build(pos, 3);
  MotionField m;
  m.vectors = {Vec3d(1, 2, 3), Vec3d(3, 0, -1)};
  auto nm = nodeMotion(t, m);
  EXPECT_EQ(nm[t.codingOrder()[0]], Vec3d(2, 1, 1));

  Rng rng(7);
  auto f = randomFrame(rng, 300, 7);
  auto tree = RahtTree::build(f.positions, 7);
  MotionField u;
  u.vectors.assign(f.size(), Vec3d(0.5, -1.25, 2));
  for (auto& v : nodeMotion(tree, u))
    for (int k = 0; k < 3; k++)
      EXPECT_NEAR(v[k], u.vectors[0][k], 1e-12);

  MotionField r;
  Vec3d mean;
  for (size_t i = 0; i < f.size(); i++) {
    r.vectors.push_back(
      Vec3d(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)));
    mean += r.vectors.back();
  }
  mean = mean * (1.0 / double(f.size()));
  auto root = nodeMotion(tree, r)[tree.root()];
  for (int k = 0; k < 3; k++)
    EXPECT_NEAR(root[k], mean[k], 1e-12);
}

//============================================================================

TEST(MotionGradientTest, EstimatorAndCompensator)
{
  for (int trial = 0; trial < 5; trial++) {
    Model m = test::perturbedModel(100 + trial);
    Rng rng(200 + trial);
    auto prev = randomFrame(rng, 40, 5);
    auto cur = randomFrame(rng, 30, 5);
    FrameIndex idx(prev);
    auto aNn = nnAttributes(idx, toReal(cur.positions));

    double e = test::checkParameterGradients([&](Graph& g) {
      return g.sumAll(g.square(m.me.estimate(g, idx, cur.positions, aNn)));
    }, m.me.parameters(), rng, 6);
    EXPECT_LT(e, 1e-4);

    Matrix v(int(cur.size()), 3);
    for (auto& x : v.data)
      x = rng.uniform(-0.8, 0.8);
    e = test::checkParameterGradients([&](Graph& g) {
      auto out = m.mc.compensate(g, idx, cur.positions, g.constant(v));
      return g.scale(g.sumAll(g.square(out.aP)), 1e-4);
    }, m.mc.parameters(), rng, 6);
    EXPECT_LT(e, 1e-4);
  }
}
