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
#include <set>
#include <tuple>

#include "pcc/Error.h"
#include "pcc/Morton.h"
#include "pcc/PointFrame.h"
#include "pcc/Random.h"

using namespace pcc;

namespace {

template<typename F>
ErrorCode
codeOf(F&& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIoError;
}

}  // namespace

//============================================================================

TEST(ColorTest, WhiteAndBlack)
{
  auto w = rgbToYuv(Vec3<uint8_t>(255, 255, 255));
  EXPECT_NEAR(w[0], 255.0, 1e-9);
  EXPECT_NEAR(w[1], 128.0, 1e-9);
  EXPECT_NEAR(w[2], 128.0, 1e-9);
  auto k = rgbToYuv(Vec3<uint8_t>(0, 0, 0));
  EXPECT_NEAR(k[0], 0.0, 1e-9);
  EXPECT_NEAR(k[1], 128.0, 1e-9);
  EXPECT_NEAR(k[2], 128.0, 1e-9);

  EXPECT_EQ(yuvToRgb(Vec3d(255, 128, 128)), Vec3<uint8_t>(255, 255, 255));
  EXPECT_EQ(yuvToRgb(Vec3d(0, 128, 128)), Vec3<uint8_t>(0, 0, 0));
}

TEST(ColorTest, RgbGridRoundTrip)
{
  for (int r = 0; r < 8; r++)
    for (int g = 0; g < 8; g++)
      for (int b = 0; b < 8; b++) {
        Vec3<uint8_t> c(r * 255 / 7, g * 255 / 7, b * 255 / 7);
        auto back = yuvToRgb(rgbToYuv(c));
        for (int k = 0; k < 3; k++)
          EXPECT_LE(std::abs(int(back[k]) - int(c[k])), 1);
      }
}

TEST(ColorTest, YuvSampledRoundTrip)
{
  // draw RGB first so the YUV value is inside the gamut
  Rng rng(3);
  for (int i = 0; i < 2000; i++) {
    Vec3<uint8_t> c(
      rng.uniformInt(0, 255), rng.uniformInt(0, 255), rng.uniformInt(0, 255));
    Vec3d yuv = rgbToYuv(c);
    Vec3d again = rgbToYuv(yuvToRgb(yuv));
    for (int k = 0; k < 3; k++)
      EXPECT_LE(std::abs(again[k] - yuv[k]), 1.0);
  }
}

//============================================================================

TEST(MortonTest, InterleavesXyz)
{
  EXPECT_EQ(mortonCode(Vec3i(1, 0, 0)), 1u);
  EXPECT_EQ(mortonCode(Vec3i(0, 1, 0)), 2u);
  EXPECT_EQ(mortonCode(Vec3i(0, 0, 1)), 4u);
  EXPECT_EQ(mortonCode(Vec3i(3, 0, 0)), 9u);

  Rng rng(1);
  for (int i = 0; i < 1000; i++) {
    Vec3i p(
      rng.uniformInt(0, 65535), rng.uniformInt(0, 65535),
      rng.uniformInt(0, 65535));
    EXPECT_EQ(mortonDecode(mortonCode(p)), p);
  }
}

//============================================================================

TEST(VoxelizeTest, MeanMergeInOneVoxel)
{
  RawPointCloud c;
  c.positions = {Vec3d(5, 5, 5), Vec3d(5, 5, 5)};
  c.colors = {Vec3<uint8_t>(100, 100, 100), Vec3<uint8_t>(200, 200, 200)};
  auto f = frameFromVoxels(c, 4);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_NEAR(f.attributes[0][0], 150.0, 1e-9);
}

TEST(VoxelizeTest, VoxelizedGridIsIdentity)
{
  RawPointCloud c;
  Rng rng(9);
  std::set<std::tuple<int, int, int>> cells;
  for (int i = 0; i < 300; i++) {
    int x = rng.uniformInt(0, 63), y = rng.uniformInt(0, 63),
        z = rng.uniformInt(0, 63);
    if (!cells.insert({x, y, z}).second)
      continue;
    c.positions.push_back(Vec3d(x, y, z));
    c.colors.push_back(Vec3<uint8_t>(x, y, z));
  }
  ASSERT_TRUE(isVoxelized(c, 6));
  auto f = frameFromVoxels(c, 6);
  ASSERT_EQ(f.size(), cells.size());
  std::set<std::tuple<int, int, int>> got;
  for (auto& p : f.positions)
    got.insert({p[0], p[1], p[2]});
  EXPECT_EQ(got, cells);
  EXPECT_NO_THROW(f.validate());
}

TEST(VoxelizeTest, CountMatchesBruteForceCells)
{
  Rng rng(21);
  RawPointCloud c;
  for (int i = 0; i < 10000; i++) {
    c.positions.push_back(Vec3d(
      rng.uniform(-3.0, 7.0), rng.uniform(0.0, 2.0), rng.uniform(1.0, 4.0)));
    c.colors.push_back(Vec3<uint8_t>(10, 20, 30));
  }
  VoxelizeInfo info;
  auto f = voxelize(c, 9, &info);

  // independent oracle: distinct floored cells under the same mapping
  std::set<std::tuple<long, long, long>> cells;
  for (auto& p : c.positions) {
    long k[3];
    for (int a = 0; a < 3; a++)
      k[a] = std::min<long>(
        511, long(std::floor((p[a] - info.origin[a]) * info.scale)));
    cells.insert({k[0], k[1], k[2]});
  }
  EXPECT_EQ(f.size(), cells.size());
  EXPECT_NO_THROW(f.validate());
}

TEST(VoxelizeTest, Errors)
{
  RawPointCloud empty;
  EXPECT_EQ(codeOf([&] { voxelize(empty, 9); }), ErrorCode::kParseError);
  RawPointCloud one;
  one.positions = {Vec3d(1, 2, 3)};
  one.colors = {Vec3<uint8_t>(1, 2, 3)};
  EXPECT_EQ(codeOf([&] { voxelize(one, 0); }), ErrorCode::kConfigError);
  VoxelizeInfo info;
  EXPECT_EQ(voxelize(one, 9, &info).size(), 1u);
  EXPECT_TRUE(info.degenerate);
}

//============================================================================

TEST(MetricsTest, IdenticalFramesHitCap)
{
  PointFrame f;
  f.depth = 10;
  for (int i = 0; i < 1000; i++) {
    f.positions.push_back(mortonDecode(uint64_t(i)));
    f.attributes.push_back(Vec3d(i % 256, 128, 128));
  }
  auto m = computeMetrics(f, f, 2400);
  EXPECT_DOUBLE_EQ(m.bpp, 2.4);
  EXPECT_DOUBLE_EQ(m.psnrY, 100.0);
}

TEST(MetricsTest, UnitMse)
{
  EXPECT_NEAR(psnrFromMse(1.0), 48.1308036, 1e-6);
  EXPECT_NEAR(psnrFromMse(1.0), 10.0 * std::log10(255.0 * 255.0), 1e-12);
}

TEST(MetricsTest, RawStorageReference)
{
  // three uint8 colour channels per point
  PointFrame f;
  f.depth = 4;
  f.positions = {Vec3i(0, 0, 0), Vec3i(1, 0, 0)};
  f.attributes = {Vec3d(1, 2, 3), Vec3d(4, 5, 6)};
  EXPECT_DOUBLE_EQ(computeMetrics(f, f, 2 * 3 * 8).bpp, 24.0);
}

TEST(MetricsTest, GeometryMismatch)
{
  PointFrame a, b;
  a.depth = b.depth = 4;
  a.positions = {Vec3i(0, 0, 0)};
  b.positions = {Vec3i(1, 0, 0)};
  a.attributes = b.attributes = {Vec3d(1, 1, 1)};
  EXPECT_EQ(
    codeOf([&] { computeMetrics(a, b, 8); }), ErrorCode::kGeometryMismatch);
}
