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

#include "pcc/Sequence.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "pcc/Error.h"
#include "pcc/KdTree.h"
#include "pcc/Random.h"

namespace pcc {

//============================================================================

namespace {

  constexpr double kPi = std::numbers::pi;

  Vec3d sampleSphere(Rng& rng, double radius)
  {
    double z = rng.uniform(-1.0, 1.0);
    double phi = rng.uniform(0.0, 2.0 * kPi);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return Vec3d(r * std::cos(phi), r * std::sin(phi), z) * radius;
  }

  Vec3d sampleCube(Rng& rng, double side)
  {
    int face = rng.uniformInt(0, 5);
    double a = rng.uniform(-0.5, 0.5), b = rng.uniform(-0.5, 0.5);
    double s = (face & 1) ? 0.5 : -0.5;
    Vec3d p;
    switch (face >> 1) {
    case 0: p = Vec3d(s, a, b); break;
    case 1: p = Vec3d(a, s, b); break;
    default: p = Vec3d(a, b, s); break;
    }
    return p * side;
  }

  double defaultExtent(Shape shape, int n)
  {
    switch (shape) {
    case Shape::kSphere: return 2.0 * std::sqrt(n / (4.0 * kPi));
    case Shape::kCube: return std::sqrt(n / 6.0);
    case Shape::kTwoBlobs: return 4.0 * std::sqrt(n / (8.0 * kPi));
    }
    return 16.0;
  }

  Vec3<uint8_t> sampleColor(
    Rng& rng, const Vec3d& local, double extent, ColorMode mode)
  {
    const double w = 2.0 * kPi / std::max(extent, 1.0);
    double r = 128.0 + 70.0 * std::sin(w * local[0] + 0.3);
    double g = 128.0 + 70.0 * std::sin(w * local[1] + 1.1);
    double b = 128.0 + 70.0 * std::cos(w * local[2] - 0.4);
    if (mode == ColorMode::kTexturedNoise) {
      // noise amplitude varies between flat and detailed patches
      double t = 0.5 + 0.5 * std::sin(0.5 * w * local[0] + 0.7)
          * std::cos(0.5 * w * local[1] - 0.2);
      double amp = 60.0 * t * t;
      r += amp * rng.uniform(-1.0, 1.0);
      g += amp * rng.uniform(-1.0, 1.0);
      b += amp * rng.uniform(-1.0, 1.0);
    }
    auto q = [](double c) {
      return uint8_t(std::lround(std::clamp(c, 20.0, 235.0)));
    };
    return Vec3<uint8_t>(q(r), q(g), q(b));
  }

  Vec3d rotateZ(const Vec3d& p, double angle)
  {
    double c = std::cos(angle), s = std::sin(angle);
    return Vec3d(c * p[0] - s * p[1], s * p[0] + c * p[1], p[2]);
  }

}  // namespace

//============================================================================

std::vector<SequenceFrame>
generateSequence(const SequenceSpec& spec)
{
  if (spec.frameCount < 2)
    raise(ErrorCode::kConfigError, "frame_count must be >= 2");
  if (spec.pointsPerFrame < 1)
    raise(ErrorCode::kConfigError, "points_per_frame must be >= 1");
  if (spec.depth < 1 || spec.depth > 16)
    raise(ErrorCode::kConfigError, "depth must be in [1, 16]");
  if (spec.noiseSigma < 0)
    raise(ErrorCode::kConfigError, "noise_sigma must be >= 0");

  Rng rng(spec.seed);
  const int n = spec.pointsPerFrame;
  const double extent =
    spec.extent > 0 ? spec.extent : defaultExtent(spec.shape, n);
  const double half = double(1 << spec.depth) / 2.0;
  const Vec3d center0(half, half, half);

  // object-local source samples with their colours
  std::vector<Vec3d> local(n);
  std::vector<Vec3d> yuv(n);
  for (int i = 0; i < n; i++) {
    switch (spec.shape) {
    case Shape::kSphere: local[i] = sampleSphere(rng, extent / 2); break;
    case Shape::kCube: local[i] = sampleCube(rng, extent); break;
    case Shape::kTwoBlobs: {
      Vec3d offset(extent / 4, 0, 0);
      local[i] = sampleSphere(rng, extent / 4);
      local[i] += (i & 1) ? offset : -offset;
      break;
    }
    }
    yuv[i] = rgbToYuv(sampleColor(rng, local[i], extent, spec.colorMode));
  }

  const double lim = double(1 << spec.depth);
  std::vector<Vec3d> prevObserved;
  std::vector<SequenceFrame> out;
  for (int t = 0; t < spec.frameCount; t++) {
    Vec3d center = center0 + spec.translation * double(t);
    std::vector<Vec3d> observed(n);
    for (int i = 0; i < n; i++) {
      observed[i] = rotateZ(local[i], spec.rotationZ * t) + center;
      if (spec.noiseSigma > 0)
        for (int k = 0; k < 3; k++)
          observed[i][k] += spec.noiseSigma * rng.normal();
    }

    std::vector<Vec3i> pos;
    std::vector<Vec3d> attrs;
    std::vector<int> source;
    for (int i = 0; i < n; i++) {
      const auto& p = observed[i];
      if (p[0] < 0 || p[1] < 0 || p[2] < 0 || p[0] >= lim || p[1] >= lim
          || p[2] >= lim)
        continue;
      pos.push_back(Vec3i(
        int32_t(std::floor(p[0])), int32_t(std::floor(p[1])),
        int32_t(std::floor(p[2]))));
      attrs.push_back(yuv[i]);
      source.push_back(i);
    }
    if (pos.empty())
      raise(ErrorCode::kConfigError, "sequence left the voxel grid");

    std::vector<std::vector<int>> members;
    SequenceFrame sf;
    sf.frame = mergeVoxels(pos, attrs, spec.depth, &members);
    sf.frame.frameIndex = t;
    sf.flow.vectors.resize(sf.frame.size());
    if (t > 0) {
      for (size_t v = 0; v < members.size(); v++) {
        Vec3d sum;
        for (int m : members[v]) {
          int i = source[m];
          sum += prevObserved[i] - observed[i];
        }
        sf.flow.vectors[v] = sum * (1.0 / double(members[v].size()));
      }
    }
    out.push_back(std::move(sf));
    prevObserved = std::move(observed);
  }
  return out;
}

//============================================================================

FlowGroundTruth
pseudoMotion(const PointFrame& prev, const PointFrame& cur, double colorWeight)
{
  if (prev.positions.empty() || cur.positions.empty())
    raise(ErrorCode::kShapeMismatch, "pseudo motion needs non-empty frames");
  if (colorWeight < 0)
    raise(ErrorCode::kConfigError, "color weight must be >= 0");

  const double cw = std::sqrt(colorWeight);
  auto embed = [cw](const Vec3i& p, const Vec3d& a) {
    return KdTree<6>::Point{
      double(p[0]), double(p[1]), double(p[2]),
      cw * a[0],    cw * a[1],    cw * a[2]};
  };

  std::vector<KdTree<6>::Point> pts(prev.size());
  for (size_t i = 0; i < prev.size(); i++)
    pts[i] = embed(prev.positions[i], prev.attributes[i]);
  KdTree<6> tree(std::move(pts));

  FlowGroundTruth flow;
  flow.vectors.resize(cur.size());
  for (size_t i = 0; i < cur.size(); i++) {
    int j = tree.nearest(embed(cur.positions[i], cur.attributes[i])).index;
    flow.vectors[i] = toReal(prev.positions[j]) - toReal(cur.positions[i]);
  }
  return flow;
}

//============================================================================

namespace {

  Vec3d vec3FromJson(const nlohmann::json& j)
  {
    if (!j.is_array() || j.size() != 3)
      raise(ErrorCode::kConfigError, "expected a 3-vector");
    return Vec3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  }

}  // namespace

SequenceSpec
sequenceSpecFromJson(const nlohmann::json& j)
{
  SequenceSpec s;
  try {
    s.frameCount = j.value("frame_count", s.frameCount);
    std::string shape = j.value("shape", std::string("sphere"));
    if (shape == "sphere")
      s.shape = Shape::kSphere;
    else if (shape == "cube")
      s.shape = Shape::kCube;
    else if (shape == "two_blobs")
      s.shape = Shape::kTwoBlobs;
    else
      raise(ErrorCode::kConfigError, "unknown shape '" + shape + "'");
    s.pointsPerFrame = j.value("points_per_frame", s.pointsPerFrame);
    if (j.contains("translation"))
      s.translation = vec3FromJson(j["translation"]);
    s.rotationZ = j.value("rotation_z", s.rotationZ);
    std::string color = j.value("color_mode", std::string("smooth_gradient"));
    if (color == "smooth_gradient")
      s.colorMode = ColorMode::kSmoothGradient;
    else if (color == "textured_noise")
      s.colorMode = ColorMode::kTexturedNoise;
    else
      raise(ErrorCode::kConfigError, "unknown color_mode '" + color + "'");
    s.noiseSigma = j.value("noise_sigma", s.noiseSigma);
    s.seed = j.value("seed", s.seed);
    s.depth = j.value("depth", s.depth);
    s.extent = j.value("extent", s.extent);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kConfigError, std::string("bad sequence spec: ") + e.what());
  }
  return s;
}

nlohmann::json
toJson(const SequenceSpec& s)
{
  static const char* shapes[] = {"sphere", "cube", "two_blobs"};
  static const char* colors[] = {"smooth_gradient", "textured_noise"};
  return {
    {"frame_count", s.frameCount},
    {"shape", shapes[int(s.shape)]},
    {"points_per_frame", s.pointsPerFrame},
    {"translation", {s.translation[0], s.translation[1], s.translation[2]}},
    {"rotation_z", s.rotationZ},
    {"color_mode", colors[int(s.colorMode)]},
    {"noise_sigma", s.noiseSigma},
    {"seed", s.seed},
    {"depth", s.depth},
    {"extent", s.extent},
  };
}

}  // namespace pcc
