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

#include "GradCheck.h"
#include "TestModels.h"
#include "pcc/Context.h"
#include "pcc/Morton.h"
#include "pcc/RAHT.h"

using namespace pcc;
using namespace pcc::nn;

namespace {

struct Fixture {
  RahtTree cur, prev;
  ContextGeometry geom;
  std::vector<Vec3d> prevCoeffs, decoded;
  Matrix predSlog;
};

std::vector<Vec3i>
randomPositions(Rng& rng, int n, int depth)
{
  std::vector<uint64_t> codes;
  const uint64_t mask = (uint64_t(1) << (3 * depth)) - 1;
  for (int i = 0; i < n; i++)
    codes.push_back(rng.next() & mask);
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  std::vector<Vec3i> out;
  for (auto c : codes)
    out.push_back(mortonDecode(c));
  return out;
}

std::vector<Vec3d>
randomVectors(Rng& rng, size_t n, double scale)
{
  std::vector<Vec3d> v(n);
  for (auto& x : v)
    x = Vec3d(
      rng.uniform(-scale, scale), rng.uniform(-scale, scale),
      rng.uniform(-scale, scale));
  return v;
}

Fixture
makeFixture(Rng& rng, int n, bool twin)
{
  Fixture f;
  auto pc = randomPositions(rng, n, 6);
  auto pp = twin ? pc : randomPositions(rng, n, 6);
  f.cur = RahtTree::build(pc, 6);
  f.prev = RahtTree::build(pp, 6);
  std::vector<Vec3d> motion(f.cur.nodes().size());
  if (!twin)
    motion = randomVectors(rng, motion.size(), 1.0);
  f.geom = buildContextGeometry(f.cur, f.prev, motion);
  f.prevCoeffs = randomVectors(rng, f.prev.codingOrder().size(), 60);
  f.decoded = randomVectors(rng, f.cur.codingOrder().size(), 60);
  f.predSlog = Matrix(int(f.cur.codingOrder().size()), 3);
  for (auto& v : f.predSlog.data)
    v = rng.uniform(-4.0, 4.0);
  return f;
}

Matrix
conditioningOf(const ContextModel& m, const Fixture& f, double qstep = 10)
{
  Graph g;
  ContextInputs in;
  in.qstep = qstep;
  in.prevCoeffs = f.prevCoeffs;
  in.decoded = f.decoded;
  in.predSlog = g.constant(f.predSlog);
  return g.value(m.conditioning(g, f.geom, in, 0, int(f.decoded.size())));
}

ContextModel
perturbedContext(uint64_t seed, ContextSwitches sw = {})
{
  Rng rng(seed);
  ContextModel m(rng, DensityVariant::kConditionalLaplace, sw);
  test::perturb(m.parameters(), rng, 0.2);
  return m;
}

void
zeroNet(ContextModel& m, const std::string& prefix)
{
  for (auto* p : m.parameters())
    if (p->name.rfind(prefix, 0) == 0)
      p->value.setZero();
}

}  // namespace

//============================================================================

TEST(ContextGeometryTest, TwinFramesIncludeSelfMatch)
{
  Rng rng(1);
  auto f = makeFixture(rng, 300, true);
  for (size_t c = 0; c < f.geom.prevNeighbors.size(); c++) {
    const auto& nb = f.geom.prevNeighbors[c];
    auto it = std::find(nb.begin(), nb.end(), int(c));
    ASSERT_NE(it, nb.end());
    EXPECT_EQ(f.geom.prevOffsets[c][it - nb.begin()], Vec3d());
  }
}

TEST(ContextGeometryTest, NeighbourhoodRules)
{
  Rng rng(2);
  auto f = makeFixture(rng, 200, false);
  for (size_t c = 0; c < f.geom.curNeighbors.size(); c++) {
    int level = f.cur.node(f.cur.codingOrder()[c]).level;
    EXPECT_LE(f.geom.curNeighbors[c].size(), size_t(kContextNeighbors));
    for (int n : f.geom.curNeighbors[c]) {
      EXPECT_NE(n, int(c));  // self excluded
      EXPECT_EQ(f.cur.node(f.cur.codingOrder()[n]).level, level);
    }
    for (int n : f.geom.prevNeighbors[c])
      EXPECT_EQ(f.prev.node(f.prev.codingOrder()[n]).level, level);
  }
  // the root level holds one coded node: no spatial neighbours
  EXPECT_TRUE(f.geom.curNeighbors[0].empty());
  EXPECT_EQ(f.geom.levelRanges.front(), std::make_pair(0, 1));
  // a single previous node at the root level is the only candidate
  EXPECT_EQ(f.geom.prevNeighbors[0], std::vector<int>{0});
}

//============================================================================

TEST(ContextModelTest, UntrainedPathSharesOneDistribution)
{
  Rng rng(3);
  auto f = makeFixture(rng, 150, false);
  Rng mr(4);
  ContextModel m(mr, DensityVariant::kConditionalLaplace, {});
  Graph g;
  Matrix cond = conditioningOf(m, f);
  Var head = m.density().headOutput(g, g.constant(cond));
  const Matrix& h = g.value(head);
  for (int r = 0; r < h.rows; r++) {
    EXPECT_EQ(h(r, 0), 0.0);
    EXPECT_EQ(h(r, 1), 0.0);
  }
}

TEST(ContextModelTest, ZeroExplicitNetIgnoresPreviousCoefficients)
{
  Rng rng(5);
  auto f = makeFixture(rng, 150, false);
  auto m = perturbedContext(6);
  auto base = conditioningOf(m, f);
  auto g = f;
  for (auto& v : g.prevCoeffs)
    v = v * 3.0;
  EXPECT_NE(conditioningOf(m, g).data, base.data);
  zeroNet(m, "ctx.explicit");
  EXPECT_EQ(conditioningOf(m, g).data, conditioningOf(m, f).data);
}

TEST(ContextModelTest, ZeroImplicitNetsIgnorePrediction)
{
  Rng rng(7);
  auto f = makeFixture(rng, 150, false);
  auto m = perturbedContext(8);
  auto g = f;
  for (auto& v : g.predSlog.data)
    v = -v;
  EXPECT_NE(conditioningOf(m, g).data, conditioningOf(m, f).data);
  zeroNet(m, "ctx.implicit");
  EXPECT_EQ(conditioningOf(m, g).data, conditioningOf(m, f).data);
}

TEST(ContextModelTest, EnablingBranchIsNeutral)
{
  Rng rng(9);
  auto f = makeFixture(rng, 200, false);
  auto m = perturbedContext(10, {false, false});
  auto before = conditioningOf(m, f);
  m.setSwitches({true, false});
  EXPECT_EQ(conditioningOf(m, f).data, before.data);
  m.setSwitches({true, true});
  EXPECT_EQ(conditioningOf(m, f).data, before.data);
}

TEST(ContextModelTest, SpatialMaxIsPermutationInvariant)
{
  Rng rng(11);
  auto f = makeFixture(rng, 200, false);
  auto m = perturbedContext(12);
  auto base = conditioningOf(m, f);
  auto g = f;
  for (auto* side : {&g.geom.curNeighbors, &g.geom.prevNeighbors})
    for (size_t c = 0; c < side->size(); c++) {
      auto& nb = (*side)[c];
      auto& off =
        side == &g.geom.curNeighbors ? g.geom.curOffsets[c] : g.geom.prevOffsets[c];
      std::reverse(nb.begin(), nb.end());
      std::reverse(off.begin(), off.end());
    }
  EXPECT_EQ(conditioningOf(m, g).data, base.data);
}

TEST(ContextModelTest, ParameterGradients)
{
  for (int trial = 0; trial < 5; trial++) {
    Rng rng(20 + trial);
    auto f = makeFixture(rng, 60, false);
    auto m = perturbedContext(30 + trial);
    Matrix y(3 * int(f.decoded.size()), 1);
    for (auto& v : y.data)
      v = rng.uniformInt(-5, 5);
    double e = test::checkParameterGradients([&](Graph& g) {
      ContextInputs in;
      in.qstep = 10;
      in.prevCoeffs = f.prevCoeffs;
      in.decoded = f.decoded;
      in.predSlog = g.constant(f.predSlog);
      Var cond = m.conditioning(g, f.geom, in, 0, int(f.decoded.size()));
      Var head = m.density().headOutput(g, cond);
      return g.sumAll(m.density().nll(g, head, g.constant(y)));
    }, m.parameters(), rng, 5, test::kFineFdStep);
    EXPECT_LT(e, 1e-4);
  }
}
