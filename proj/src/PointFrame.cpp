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

#include "pcc/PointFrame.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pcc/Error.h"
#include "pcc/Morton.h"

namespace pcc {

//============================================================================

void
PointFrame::validate() const
{
  if (positions.empty())
    raise(ErrorCode::kShapeMismatch, "frame has no points");
  if (positions.size() != attributes.size())
    raise(ErrorCode::kShapeMismatch, "positions/attributes length differ");
  if (depth < 1 || depth > 16)
    raise(ErrorCode::kConfigError, "frame depth out of range");

  const int32_t lim = 1 << depth;
  uint64_t prev = 0;
  for (size_t i = 0; i < positions.size(); i++) {
    for (int k = 0; k < 3; k++) {
      if (positions[i][k] < 0 || positions[i][k] >= lim)
        raise(ErrorCode::kShapeMismatch, "position outside the voxel grid");
      double a = attributes[i][k];
      if (!std::isfinite(a) || a < 0.0 || a > 255.0)
        raise(ErrorCode::kShapeMismatch, "attribute outside [0, 255]");
    }
    uint64_t code = mortonCode(positions[i]);
    if (i && code <= prev)
      raise(ErrorCode::kShapeMismatch, "positions not unique/Morton sorted");
    prev = code;
  }
}

//============================================================================

namespace {

  constexpr double kKr = 0.2126;
  constexpr double kKg = 0.7152;
  constexpr double kKb = 0.0722;
  constexpr double kCb = 1.8556;
  constexpr double kCr = 1.5748;

  double clamp255(double x) { return std::clamp(x, 0.0, 255.0); }

}  // namespace

Vec3d
rgbToYuv(const Vec3<uint8_t>& rgb)
{
  double r = rgb[0], g = rgb[1], b = rgb[2];
  double y = kKr * r + kKg * g + kKb * b;
  double u = (b - y) / kCb + 128.0;
  double v = (r - y) / kCr + 128.0;
  return Vec3d(clamp255(y), clamp255(u), clamp255(v));
}

Vec3<uint8_t>
yuvToRgb(const Vec3d& yuv)
{
  double y = yuv[0], u = yuv[1] - 128.0, v = yuv[2] - 128.0;
  double r = y + kCr * v;
  double b = y + kCb * u;
  double g = (y - kKr * r - kKb * b) / kKg;
  auto q = [](double c) { return uint8_t(std::lround(clamp255(c))); };
  return Vec3<uint8_t>(q(r), q(g), q(b));
}

std::vector<Vec3d>
rgbToYuv(std::span<const Vec3<uint8_t>> colors)
{
  std::vector<Vec3d> out;
  out.reserve(colors.size());
  for (const auto& c : colors)
    out.push_back(rgbToYuv(c));
  return out;
}

//============================================================================

PointFrame
mergeVoxels(
  std::span<const Vec3i> positions,
  std::span<const Vec3d> attributes,
  int depth,
  std::vector<std::vector<int>>* members)
{
  std::vector<std::pair<uint64_t, int>> order(positions.size());
  for (size_t i = 0; i < positions.size(); i++)
    order[i] = {mortonCode(positions[i]), int(i)};
  std::sort(order.begin(), order.end());

  PointFrame frame;
  frame.depth = depth;
  if (members)
    members->clear();

  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    Vec3d sum;
    while (j < order.size() && order[j].first == order[i].first)
      sum += attributes[order[j++].second];
    frame.positions.push_back(positions[order[i].second]);
    frame.attributes.push_back(sum * (1.0 / double(j - i)));
    if (members) {
      auto& m = members->emplace_back();
      for (size_t t = i; t < j; t++)
        m.push_back(order[t].second);
    }
    i = j;
  }
  return frame;
}

//----------------------------------------------------------------------------

namespace {

  struct Bounds {
    Vec3d lo{std::numeric_limits<double>::max(),
             std::numeric_limits<double>::max(),
             std::numeric_limits<double>::max()};
    Vec3d hi{std::numeric_limits<double>::lowest(),
             std::numeric_limits<double>::lowest(),
             std::numeric_limits<double>::lowest()};

    void add(const Vec3d& p)
    {
      for (int k = 0; k < 3; k++) {
        if (!std::isfinite(p[k]))
          raise(ErrorCode::kParseError, "non-finite coordinate");
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }

    double maxExtent() const
    {
      return std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
    }
  };

  PointFrame quantizeCloud(
    const RawPointCloud& cloud, int depth, const Bounds& bounds,
    VoxelizeInfo* info)
  {
    const int32_t maxCoord = (1 << depth) - 1;
    double extent = bounds.maxExtent();
    bool degenerate = !(extent > 0.0);
    double scale = degenerate ? 0.0 : double(maxCoord) / extent;

    std::vector<Vec3i> pos(cloud.size());
    for (size_t i = 0; i < cloud.size(); i++) {
      for (int k = 0; k < 3; k++) {
        double c = std::floor((cloud.positions[i][k] - bounds.lo[k]) * scale);
        pos[i][k] = int32_t(std::clamp(c, 0.0, double(maxCoord)));
      }
    }
    auto attrs = rgbToYuv(cloud.colors);

    if (info) {
      info->degenerate = degenerate;
      info->origin = bounds.lo;
      info->scale = scale;
    }
    return mergeVoxels(pos, attrs, depth);
  }

  void checkCloud(const RawPointCloud& cloud, int depth)
  {
    if (depth < 1 || depth > 16)
      raise(ErrorCode::kConfigError, "depth must be in [1, 16]");
    if (cloud.positions.empty())
      raise(ErrorCode::kParseError, "empty point cloud");
    if (cloud.positions.size() != cloud.colors.size())
      raise(ErrorCode::kShapeMismatch, "positions/colors length differ");
  }

}  // namespace

PointFrame
voxelize(const RawPointCloud& cloud, int depth, VoxelizeInfo* info)
{
  checkCloud(cloud, depth);
  Bounds b;
  for (const auto& p : cloud.positions)
    b.add(p);
  return quantizeCloud(cloud, depth, b, info);
}

std::vector<PointFrame>
voxelizeSequence(std::span<const RawPointCloud> clouds, int depth)
{
  Bounds b;
  for (const auto& c : clouds) {
    checkCloud(c, depth);
    for (const auto& p : c.positions)
      b.add(p);
  }
  std::vector<PointFrame> frames;
  for (size_t i = 0; i < clouds.size(); i++) {
    frames.push_back(quantizeCloud(clouds[i], depth, b, nullptr));
    frames.back().frameIndex = int(i);
  }
  return frames;
}

bool
isVoxelized(const RawPointCloud& cloud, int depth)
{
  const double lim = double(1 << depth);
  for (const auto& p : cloud.positions)
    for (int k = 0; k < 3; k++)
      if (p[k] != std::floor(p[k]) || p[k] < 0 || p[k] >= lim)
        return false;
  return true;
}

PointFrame
frameFromVoxels(const RawPointCloud& cloud, int depth)
{
  checkCloud(cloud, depth);
  if (!isVoxelized(cloud, depth))
    raise(ErrorCode::kParseError, "cloud is not voxelized at this depth");
  std::vector<Vec3i> pos(cloud.size());
  for (size_t i = 0; i < cloud.size(); i++)
    pos[i] = Vec3i(cloud.positions[i]);
  return mergeVoxels(pos, rgbToYuv(cloud.colors), depth);
}

//============================================================================

double
psnrFromMse(double mseY)
{
  if (mseY < 255.0 * 255.0 * 1e-10)
    return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(255.0 * 255.0 / mseY));
}

Metrics
computeMetrics(
  const PointFrame& original, const PointFrame& reconstructed,
  uint64_t totalBits)
{
  if (original.positions != reconstructed.positions)
    raise(ErrorCode::kGeometryMismatch, "frames have different geometry");
  if (original.positions.empty())
    raise(ErrorCode::kGeometryMismatch, "frames are empty");

  double sse = 0;
  for (size_t i = 0; i < original.size(); i++) {
    double d = original.attributes[i][0] - reconstructed.attributes[i][0];
    sse += d * d;
  }

  Metrics m;
  m.mseY = sse / double(original.size());
  m.psnrY = psnrFromMse(m.mseY);
  m.bpp = double(totalBits) / double(original.size());
  return m;
}

}  // namespace pcc
