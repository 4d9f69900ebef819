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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.  All tolerances and budgets are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "GradCheck.h"
#include "Golden.h"
#include "TestModels.h"
#include "pcc/Codec.h"
#include "pcc/Context.h"
#include "pcc/Error.h"
#include "pcc/Morton.h"
#include "pcc/Motion.h"
#include "pcc/RAHT.h"
#include "pcc/RangeCoder.h"
#include "pcc/Rlgr.h"
#include "pcc/Sequence.h"
#include "pcc/Training.h"
#include "pcc/nn/Density.h"
#include "pcc/nn/Mlp.h"

using namespace pcc;
using nn::Graph;
using nn::Matrix;
using nn::Var;

namespace {

//============================================================================
// Pinned tolerances and budgets.

// 1
constexpr int kRahtFrames = 1000;
constexpr int kRahtMaxPoints = 10000;
constexpr double kRahtIdentityTol = 1e-9;  // absolute, attributes in [0,255]
constexpr double kRahtEnergyTol = 1e-9;    // relative
constexpr double kRahtBudgetSec = 60;
// 2
constexpr double kButterflyTol = 1e-12;
// 3
constexpr int kChainSequences = 10;
constexpr int kChainFrames = 30;
constexpr double kChainBudgetSec = 300;
// 4
constexpr int kCoderStreams = 100;
constexpr double kCoderRelSlack = 1e-3;
constexpr double kCoderAbsSlackBits = 64;
constexpr size_t kRlgrZeros = 10000;
constexpr size_t kRlgrZeroBytes = 64;
// 5
constexpr double kTemporalRatio = 0.5;
// 7
constexpr int kGradInstances = 20;
constexpr double kGradTol = 1e-4;
// 8
constexpr double kPseudoMotionTol = 0.5;
constexpr double kPseudoColorWeight = 1e4;
// 9
constexpr int kDensityContexts = 100;
constexpr double kDensitySumTol = 1e-9;
// 11
constexpr double kTinyQstep = 1e-6;
constexpr double kRawBpp = 24;
constexpr double kWellBelowBpp = 0.5 * kRawBpp;

constexpr double kQstep = 10;

//============================================================================

struct Outcome {
  bool pass = false;
  std::string detail;
};

double
seconds(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
    .count();
}

std::string
fmt(const char* f, ...)
{
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::vector<Vec3i>
randomPositions(Rng& rng, int n, int depth)
{
  std::set<uint64_t> codes;
  const uint64_t mask = (uint64_t(1) << (3 * depth)) - 1;
  while (int(codes.size()) < n)
    codes.insert(rng.next() & mask);
  std::vector<Vec3i> out;
  for (auto c : codes)
    out.push_back(mortonDecode(c));
  return out;
}

std::vector<Vec3d>
randomVectors(Rng& rng, size_t n, double lo, double hi)
{
  std::vector<Vec3d> v(n);
  for (auto& x : v)
    x = Vec3d(rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi));
  return v;
}

std::vector<PointFrame>
framesOf(const SequenceSpec& spec)
{
  std::vector<PointFrame> out;
  for (auto& f : generateSequence(spec))
    out.push_back(std::move(f.frame));
  return out;
}

std::vector<std::vector<Vec3i>>
geometryOf(const std::vector<PointFrame>& frames)
{
  std::vector<std::vector<Vec3i>> g;
  for (const auto& f : frames)
    g.push_back(f.positions);
  return g;
}

bool
bitIdentical(const std::vector<Vec3d>& a, const std::vector<Vec3d>& b)
{
  return a.size() == b.size()
    && std::memcmp(a.data(), b.data(), a.size() * sizeof(Vec3d)) == 0;
}

std::vector<TrainingSample>
samplesOf(const std::vector<SequenceSpec>& specs)
{
  std::vector<TrainingSample> out;
  for (const auto& s : specs)
    for (auto& x : makeTrainingSamples(generateSequence(s), kQstep))
      out.push_back(std::move(x));
  return out;
}

double
meanIntraBpp(std::span<const TrainingSample> samples)
{
  double sum = 0;
  for (const auto& s : samples) {
    EncoderState st;
    CodecConfig cfg;
    cfg.depth = s.current.depth;
    cfg.qstep = kQstep;
    sum += 8.0 * double(encodeIntra(st, s.current, cfg).bytes.size())
      / double(s.current.size());
  }
  return sum / double(samples.size());
}

//============================================================================
// 1. RAHT inverse/forward identity, energy, coefficient count.

Outcome
rahtCorrectness()
{
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(1001);
  double worstId = 0, worstEnergy = 0;
  bool countOk = true;
  long total = 0;
  for (int f = 0; f < kRahtFrames; f++) {
    int n = rng.uniformInt(1, kRahtMaxPoints);
    int minDepth = 1;
    while ((uint64_t(1) << (3 * minDepth)) < uint64_t(2 * n))
      minDepth++;
    int depth = rng.uniformInt(minDepth, 10);
    auto pos = randomPositions(rng, n, depth);
    auto attr = randomVectors(rng, pos.size(), 0, 255);
    auto tree = RahtTree::build(pos, depth);
    auto c = rahtForward(tree, attr);
    countOk &= c.highs.size() == pos.size() - 1;

    double e0 = 0, e1 = 0;
    for (const auto& a : attr)
      e0 += a.norm2();
    e1 = c.dc.norm2();
    for (const auto& h : c.highs)
      e1 += h.norm2();
    worstEnergy = std::max(worstEnergy, std::abs(e1 - e0) / e0);

    auto back = rahtInverse(tree, c);
    for (size_t i = 0; i < attr.size(); i++)
      for (int k = 0; k < 3; k++)
        worstId = std::max(worstId, std::abs(back[i][k] - attr[i][k]));
    total += n;
  }
  double t = seconds(t0);
  Outcome o;
  o.pass = countOk && worstId <= kRahtIdentityTol
    && worstEnergy <= kRahtEnergyTol && t < kRahtBudgetSec;
  o.detail = fmt(
    "%d frames, %ld points; max |A - inv(fwd(A))| %.2e (tol %.0e), max "
    "energy rel err %.2e (tol %.0e), highs == n-1: %s, %.1f s (budget %.0f s)",
    kRahtFrames, total, worstId, kRahtIdentityTol, worstEnergy,
    kRahtEnergyTol, countOk ? "yes" : "no", t, kRahtBudgetSec);
  return o;
}

//============================================================================
// 2. Butterfly values.

Outcome
butterflyValues()
{
  double err = 0;
  {
    std::vector<Vec3i> p = {Vec3i(0, 0, 0), Vec3i(1, 0, 0)};
    auto t = RahtTree::build(p, 2);
    auto c = rahtForward(t, std::vector<Vec3d>{Vec3d(10, 0, 0), Vec3d(6, 0, 0)});
    err = std::max(err, std::abs(c.dc[0] - 16.0 / std::sqrt(2.0)));
    err = std::max(err, std::abs(c.highs[0][0] - (-4.0 / std::sqrt(2.0))));
  }
  {
    // weight-3 node (low 4) merged with a weight-1 node (low 8)
    std::vector<Vec3i> p = {
      Vec3i(0, 0, 0), Vec3i(1, 0, 0), Vec3i(0, 1, 0), Vec3i(0, 0, 1)};
    auto t = RahtTree::build(p, 2);
    const double a = 4.0 / std::sqrt(3.0);
    auto c = rahtForward(
      t, std::vector<Vec3d>{
           Vec3d(a, 0, 0), Vec3d(a, 0, 0), Vec3d(a, 0, 0), Vec3d(8, 0, 0)});
    const auto& top = t.node(t.codingOrder()[0]);
    if (t.node(top.child[0]).weight != 3 || t.node(top.child[1]).weight != 1)
      return {false, "unexpected merge weights"};
    err = std::max(err, std::abs(c.dc[0] - (4.0 * std::sqrt(3.0) + 8.0) / 2.0));
    err = std::max(
      err, std::abs(c.highs[0][0] - (8.0 * std::sqrt(3.0) - 4.0) / 2.0));
  }
  return {
    err <= kButterflyTol,
    fmt("w=(1,1) and w=(3,1) cases, max error %.2e (tol %.0e)", err,
        kButterflyTol)};
}

//============================================================================
// 3. Closed-loop symmetry over long P-chains.

Outcome
codecNoDrift()
{
  auto t0 = std::chrono::steady_clock::now();
  int frames = 0, mismatches = 0;
  for (int s = 0; s < kChainSequences; s++) {
    auto spec = test::smallSpec(300 + s, 600, kChainFrames);
    spec.translation = spec.translation * 0.5;
    auto seq = framesOf(spec);
    Model model = test::perturbedModel(400 + s);
    CodecConfig cfg;
    cfg.depth = spec.depth;
    cfg.qstep = 2.0 + 2.0 * s;
    // even sequences use the learned path, odd ones the baseline predictor
    const Model* m = (s % 2 == 0) ? &model : nullptr;
    auto enc = encodeSequence(seq, cfg, m);
    auto dec = decodeSequence(enc.frames, geometryOf(seq), m);
    for (size_t i = 0; i < seq.size(); i++) {
      frames++;
      if (!bitIdentical(dec[i].attributes, enc.reconstructions[i].attributes))
        mismatches++;
    }
  }
  double t = seconds(t0);
  return {
    mismatches == 0 && t < kChainBudgetSec,
    fmt("%d sequences x %d frames (%d total), %d mismatching frames, "
        "%.1f s (budget %.0f s)",
        kChainSequences, kChainFrames, frames, mismatches, t, kChainBudgetSec)};
}

//============================================================================
// 4. Coder losslessness and efficiency.

Outcome
coderEfficiency()
{
  Rng rng(4004);
  int failures = 0;
  double worstExcess = -1e9;
  nn::DensityModel density(nn::DensityVariant::kConditionalLaplace, 4, rng);
  for (int trial = 0; trial < kCoderStreams; trial++) {
    RangeEncoder enc;
    double ideal = 0;
    std::vector<int32_t> values;
    std::vector<std::array<double, 2>> heads;
    bool perSymbol = trial % 2;
    int n = rng.uniformInt(0, 20000);

    if (!perSymbol) {
      // fixed random table
      int size = rng.uniformInt(2, 300);
      std::vector<double> p(size);
      for (auto& x : p)
        x = std::pow(rng.uniform(), 3.0);
      auto cdf = FrequencyTable::fromProbabilities(p);
      for (int i = 0; i < n; i++) {
        uint32_t t = uint32_t(rng.uniformInt(0, kProbabilityTotal - 1));
        int lo = 0, hi = size;
        while (hi - lo > 1) {
          int mid = (lo + hi) / 2;
          (cdf.cum(mid) <= t ? lo : hi) = mid;
        }
        values.push_back(lo);
        ideal -= std::log2(
          double(cdf.cum(lo + 1) - cdf.cum(lo)) / kProbabilityTotal);
        encodeSymbol(enc, lo, cdf);
      }
      auto bytes = enc.finish();
      RangeDecoder dec(bytes);
      bool ok = true;
      for (int v : values)
        ok &= decodeSymbol(dec, cdf) == v;
      double excess = 8.0 * double(bytes.size())
        - (ideal * (1 + kCoderRelSlack) + kCoderAbsSlackBits);
      worstExcess = std::max(worstExcess, excess);
      failures += !ok || excess > 0;
      continue;
    }

    // a different Laplace distribution for every symbol
    for (int i = 0; i < n; i++) {
      std::array<double, 2> h = {rng.uniform(-20.0, 20.0), rng.uniform(-3.0, 6.0)};
      nn::SymbolDistribution dist(density, h.data());
      double mu = h[0];
      int32_t k = int32_t(std::lround(mu + rng.uniform(-30.0, 30.0)));
      k = std::clamp(k, -kMaxSymbol, kMaxSymbol);
      values.push_back(k);
      heads.push_back(h);
      int idx = symbolIndex(k);
      ideal -= std::log2(
        double(dist.cum(idx + 1) - dist.cum(idx)) / kProbabilityTotal);
      encodeValue(enc, k, dist);
    }
    auto bytes = enc.finish();
    RangeDecoder dec(bytes);
    bool ok = true;
    for (int i = 0; i < n; i++) {
      nn::SymbolDistribution dist(density, heads[i].data());
      ok &= decodeValue(dec, dist) == values[i];
    }
    double excess = 8.0 * double(bytes.size())
      - (ideal * (1 + kCoderRelSlack) + kCoderAbsSlackBits);
    worstExcess = std::max(worstExcess, excess);
    failures += !ok || excess > 0;
  }

  int rlgrFailures = 0;
  for (int trial = 0; trial < kCoderStreams; trial++) {
    std::vector<int32_t> v(rng.uniformInt(0, 5000));
    double scale = std::exp(rng.uniform(-2.0, 12.0));
    for (auto& x : v) {
      if (rng.uniform() < 0.4)
        continue;
      x = int32_t(std::lround(rng.normal() * scale));
    }
    if (trial == 0)
      v = {std::numeric_limits<int32_t>::min(), std::numeric_limits<int32_t>::max(), 0};
    rlgrFailures += rlgrDecode(rlgrEncode(v), v.size()) != v;
  }
  std::vector<int32_t> zeros(kRlgrZeros, 0);
  auto zbytes = rlgrEncode(zeros);
  bool zerosOk = zbytes.size() < kRlgrZeroBytes
    && rlgrDecode(zbytes, zeros.size()) == zeros;

  return {
    failures == 0 && rlgrFailures == 0 && zerosOk,
    fmt("range coder: %d/%d streams failed, worst margin to CE*(1+%.0e)+%.0f "
        "bits: %.1f bits; RLGR: %d/%d round trips failed, %zu zeros -> %zu "
        "bytes (limit < %zu)",
        failures, kCoderStreams, kCoderRelSlack, kCoderAbsSlackBits,
        worstExcess, rlgrFailures, kCoderStreams, kRlgrZeros, zbytes.size(),
        kRlgrZeroBytes)};
}

//============================================================================
// 5. Temporal gain.

Outcome
temporalGain()
{
  auto t0 = std::chrono::steady_clock::now();
  // enough sequences that every translation direction in [-3,3]^3 is seen
  auto trainSet = samplesOf(randomMotionSuite(30, 800, 50, true));
  auto testSet = samplesOf(randomMotionSuite(4, 800, 51, true));

  TrainConfig cfg;
  cfg.motionSteps = 600;
  cfg.compensationSteps = 200;
  cfg.jointSteps = 200;
  Model model = train(trainSet, cfg);

  double iBpp = meanIntraBpp(testSet);
  double pBpp = meanPredictedBpp(&model, testSet, kQstep);
  double epe = meanEndPointError(model, testSet);

  // untrained models on near-identical frames
  std::vector<SequenceSpec> still;
  for (int s = 0; s < 4; s++) {
    auto spec = test::smallSpec(60 + s, 2000, 2);
    spec.depth = 9;
    spec.translation = Vec3d(0, 0, 0);
    spec.rotationZ = 0;
    spec.noiseSigma = 0.0;
    still.push_back(spec);
  }
  auto stillSet = samplesOf(still);
  Model zero;
  double iStill = meanIntraBpp(stillSet);
  double pStill = meanPredictedBpp(&zero, stillSet, kQstep);

  double t = seconds(t0);
  return {
    pBpp <= kTemporalRatio * iBpp && pStill < iStill,
    fmt("trained on integer translations: P %.3f bpp vs I %.3f bpp (limit "
        "ratio %.2f, got %.3f), test EPE %.3f; zero-init on still frames: P "
        "%.3f bpp < I %.3f bpp; %.1f s",
        pBpp, iBpp, kTemporalRatio, pBpp / iBpp, epe, pStill, iStill, t)};
}

//============================================================================
// 6. Context ablation.

Outcome
contextAblation()
{
  auto t0 = std::chrono::steady_clock::now();
  auto trainSet = samplesOf(randomMotionSuite(20, 800, 60, false));
  auto valSet = samplesOf(randomMotionSuite(4, 800, 61, false));
  auto testSet = samplesOf(randomMotionSuite(6, 800, 62, false));

  TrainConfig cfg;
  cfg.model.switches = {false, false};
  Model model(cfg.model);
  trainSteps(model, trainSet, TrainScope::kMotionEstimation, 600, cfg);
  trainSteps(model, trainSet, TrainScope::kMotionCompensation, 200, cfg);
  auto stages = runContextAblation(model, trainSet, valSet, testSet, cfg, 4, 150);

  bool ok = stages.size() == 3 && stages[1].testBpp <= stages[0].testBpp
    && stages[2].testBpp <= stages[1].testBpp;
  double t = seconds(t0);
  return {
    ok,
    fmt("held-out P-frame bpp at qstep %.0f: no temporal context %.4f -> "
        "+explicit %.4f -> +implicit %.4f (must be non-increasing); %.1f s",
        kQstep, stages[0].testBpp, stages[1].testBpp, stages[2].testBpp, t)};
}

//============================================================================
// 7. Gradient checks.

struct GradReport {
  std::string name;
  double worst = 0;
  double step = 0;
};

Outcome
gradientCorrectness()
{
  std::vector<GradReport> reports;
  auto run = [&](const std::string& name, double step,
                 const std::function<double(int, double)>& instance) {
    GradReport r{name, 0, step};
    for (int i = 0; i < kGradInstances; i++)
      r.worst = std::max(r.worst, instance(i, step));
    reports.push_back(r);
  };

  run("mlp", test::kFdStep, [](int i, double h) {
    Rng rng(7000 + i);
    nn::Mlp net("m", {5, 16, 8, 2}, rng);
    auto x = test::randomMatrix(rng, 6, 5);
    double p = test::checkParameterGradients([&](Graph& g) {
      return g.sumAll(g.square(net.forward(g, g.constant(x))));
    }, net.parameters(), rng, 12, h);
    double in = test::checkInputGradients([&](Graph& g, const std::vector<Var>& v) {
      return g.sumAll(g.square(net.forward(g, v[0])));
    }, {x});
    return std::max(p, in);
  });

  run("set_aggregate", test::kFdStep, [](int i, double h) {
    Rng rng(7100 + i);
    nn::Mlp net("s", {6, 12, 8}, rng);
    auto rows = test::randomMatrix(rng, 12, 6);
    std::vector<int> offsets = {0, 3, 4, 9, 12};
    return test::checkParameterGradients([&](Graph& g) {
      return g.sumAll(g.square(nn::setAggregate(g, net, g.constant(rows), offsets)));
    }, net.parameters(), rng, 12, h);
  });

  for (auto variant :
       {nn::DensityVariant::kConditionalLaplace, nn::DensityVariant::kFactorizedCdf}) {
    run("density/" + nn::toString(variant), test::kFdStep,
        [variant](int i, double h) {
      Rng rng(7200 + i);
      nn::DensityModel m(variant, 8, rng);
      test::perturb(m.parameters(), rng, 0.3);
      auto c = test::randomMatrix(rng, 6, m.inputWidth());
      Matrix y(6, 1);
      for (auto& v : y.data)
        v = std::round(rng.uniform(-4, 4));
      return test::checkParameterGradients([&](Graph& g) {
        return g.sumAll(m.nll(g, m.headOutput(g, g.constant(c)), g.constant(y)));
      }, m.parameters(), rng, 8, h);
    });
  }

  // deep graphs with thousands of leaky-ReLU pre-activations: finer stencil
  run("motion_estimation", test::kFineFdStep, [](int i, double h) {
    Model m = test::perturbedModel(7300 + i);
    Rng rng(7400 + i);
    auto prev = mergeVoxels(randomPositions(rng, 40, 5),
                            randomVectors(rng, 40, 0, 255), 5);
    auto cur = randomPositions(rng, 30, 5);
    FrameIndex idx(prev);
    auto aNn = nnAttributes(idx, toReal(cur));
    return test::checkParameterGradients([&](Graph& g) {
      return g.sumAll(g.square(m.me.estimate(g, idx, cur, aNn)));
    }, m.me.parameters(), rng, 6, h);
  });

  run("motion_compensation", test::kFineFdStep, [](int i, double h) {
    Model m = test::perturbedModel(7500 + i);
    Rng rng(7600 + i);
    auto prev = mergeVoxels(randomPositions(rng, 40, 5),
                            randomVectors(rng, 40, 0, 255), 5);
    auto cur = randomPositions(rng, 30, 5);
    FrameIndex idx(prev);
    Matrix v(int(cur.size()), 3);
    for (auto& x : v.data)
      x = rng.uniform(-0.8, 0.8);
    return test::checkParameterGradients([&](Graph& g) {
      auto out = m.mc.compensate(g, idx, cur, g.constant(v));
      return g.scale(g.sumAll(g.square(out.aP)), 1e-4);
    }, m.mc.parameters(), rng, 6, h);
  });

  for (auto variant :
       {nn::DensityVariant::kConditionalLaplace, nn::DensityVariant::kFactorizedCdf}) {
    run("context/" + nn::toString(variant), test::kFineFdStep,
        [variant](int i, double h) {
      Rng rng(7700 + i);
      const int depth = 6;
      auto pc = randomPositions(rng, 60, depth);
      auto pp = randomPositions(rng, 60, depth);
      auto cur = RahtTree::build(pc, depth);
      auto prev = RahtTree::build(pp, depth);
      auto motion = randomVectors(rng, cur.nodes().size(), -1, 1);
      auto geom = buildContextGeometry(cur, prev, motion);
      auto prevCoeffs = randomVectors(rng, prev.codingOrder().size(), -60, 60);
      auto decoded = randomVectors(rng, cur.codingOrder().size(), -60, 60);
      int rows = int(cur.codingOrder().size());
      Matrix predSlog(rows, 3);
      for (auto& v : predSlog.data)
        v = rng.uniform(-4.0, 4.0);
      Matrix y(3 * rows, 1);
      for (auto& v : y.data)
        v = rng.uniformInt(-5, 5);
      ContextModel m(rng, variant, {});
      test::perturb(m.parameters(), rng, 0.2);
      return test::checkParameterGradients([&](Graph& g) {
        ContextInputs in;
        in.qstep = kQstep;
        in.prevCoeffs = prevCoeffs;
        in.decoded = decoded;
        in.predSlog = g.constant(predSlog);
        Var cond = m.conditioning(g, geom, in, 0, rows);
        Var head = m.density().headOutput(g, cond);
        return g.sumAll(m.density().nll(g, head, g.constant(y)));
      }, m.parameters(), rng, 5, h);
    });
  }

  bool ok = true;
  std::string detail = fmt("%d instances each, tol %.0e:", kGradInstances, kGradTol);
  for (const auto& r : reports) {
    ok &= r.worst < kGradTol;
    detail += fmt(" %s %.1e (h=%.0e);", r.name.c_str(), r.worst, r.step);
  }
  detail.pop_back();
  return {ok, detail};
}

//============================================================================
// 8. Pseudo-motion against the brute-force oracle.

Outcome
pseudoMotionOracle()
{
  Rng rng(8008);
  int sequences = 10, mismatches = 0, offTarget = 0;
  long points = 0;
  double worst = 0;
  for (int s = 0; s < sequences; s++) {
    Vec3i d(rng.uniformInt(-4, 4), rng.uniformInt(-4, 4), rng.uniformInt(-4, 4));
    // random voxels, each with its own colour, rigidly translated by d
    auto pos = randomPositions(rng, 1500, 7);
    std::vector<Vec3i> moved;
    std::vector<Vec3d> attrs;
    for (size_t i = 0; i < pos.size(); i++) {
      pos[i] += Vec3i(8, 8, 8);
      moved.push_back(pos[i] + d);
      attrs.push_back(Vec3d(double(i % 200), double((i / 200) % 200), 7.0));
    }
    auto prev = mergeVoxels(pos, attrs, 8);
    auto cur = mergeVoxels(moved, attrs, 8);
    auto flow = pseudoMotion(prev, cur, kPseudoColorWeight);
    for (size_t i = 0; i < cur.size(); i++) {
      int best = -1;
      double bestD = std::numeric_limits<double>::max();
      for (size_t j = 0; j < prev.size(); j++) {
        double dd = (toReal(prev.positions[j]) - toReal(cur.positions[i])).norm2()
          + kPseudoColorWeight * (prev.attributes[j] - cur.attributes[i]).norm2();
        if (dd < bestD) {
          bestD = dd;
          best = int(j);
        }
      }
      Vec3d oracle = toReal(prev.positions[best]) - toReal(cur.positions[i]);
      mismatches += !(flow.vectors[i] == oracle);
      double e = 0;
      for (int k = 0; k < 3; k++)
        e = std::max(e, std::abs(flow.vectors[i][k] + double(d[k])));
      worst = std::max(worst, e);
      offTarget += e > kPseudoMotionTol;
    }
    points += long(cur.size());
  }
  return {
    mismatches == 0 && offTarget == 0,
    fmt("%d translated sequences, %ld points: %d differ from the O(n^2) "
        "oracle, max |v + d| %.3f voxel (tol %.1f), color weight %.0e",
        sequences, points, mismatches, worst, kPseudoMotionTol,
        kPseudoColorWeight)};
}

//============================================================================
// 9. Density soundness.

Outcome
densitySoundness()
{
  Rng rng(9009);
  double worstSum = 0, minP = 1;
  bool monotone = true;
  for (auto variant :
       {nn::DensityVariant::kConditionalLaplace, nn::DensityVariant::kFactorizedCdf}) {
    nn::DensityModel m(variant, 16, rng);
    test::perturb(m.parameters(), rng, 0.5);
    for (int t = 0; t < kDensityContexts; t++) {
      auto c = test::randomMatrix(rng, 1, m.inputWidth(), -4, 4);
      Graph g;
      const double* head = g.value(m.headOutput(g, g.constant(c))).row(0);
      nn::SymbolDistribution d(m, head);
      double sum = 0;
      for (int i = 0; i < kAlphabetSize; i++) {
        monotone &= d.cum(i + 1) > d.cum(i);
        double p = double(d.cum(i + 1) - d.cum(i)) / kProbabilityTotal;
        minP = std::min(minP, p);
        sum += p;
      }
      worstSum = std::max(worstSum, std::abs(sum - 1));
      double prev = -1;
      for (double x = -1500; x <= 1500; x += 0.5) {
        double f = m.cdf(head, x);
        monotone &= f >= prev;
        prev = f;
      }
    }
  }
  bool ok = worstSum <= kDensitySumTol && monotone && minP >= std::ldexp(1.0, -16);
  return {
    ok,
    fmt("%d contexts x 2 variants: max |sum - 1| %.1e (tol %.0e), CDFs "
        "monotone: %s, min probability 2^%.2f (floor 2^-16)",
        kDensityContexts, worstSum, kDensitySumTol, monotone ? "yes" : "no",
        std::log2(minP))};
}

//============================================================================
// 10. Determinism.

Outcome
determinism()
{
  auto spec = test::smallSpec(1010, 1500, 4);
  auto frames = framesOf(spec);
  Model model = test::perturbedModel(1011);
  CodecConfig cfg;
  cfg.depth = spec.depth;
  cfg.qstep = kQstep;

  auto serial = encodeSequence(frames, cfg, &model);
  auto again = encodeSequence(frames, cfg, &model);
  bool ok = serial.frames == again.frames;

  // concurrent encoders must not influence each other
  const int threads = 4;
  std::vector<SequenceResult> par(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; t++)
    pool.emplace_back([&, t] { par[t] = encodeSequence(frames, cfg, &model); });
  for (auto& th : pool)
    th.join();
  for (const auto& r : par)
    ok &= r.frames == serial.frames;

  auto golden = test::makeGoldenSet();
  const std::filesystem::path dir = PCC_TEST_DATA_DIR;
  int goldenOk = 0;
  for (const auto& f : golden.files)
    goldenOk += test::readBytes(dir / f.name) == f.bytes;
  ok &= goldenOk == int(golden.files.size());

  return {
    ok,
    fmt("repeat encode identical, %d concurrent encoders identical, "
        "%d/%zu golden streams byte-identical",
        threads, goldenOk, golden.files.size())};
}

//============================================================================
// 11. End-to-end sanity.

Outcome
endToEnd()
{
  // i32 DC at qstep 1e-6 limits clouds to ~280 points (DC = sqrt(n) * mean)
  int capped = 0, checked = 0;
  for (int s = 0; s < 5; s++) {
    auto spec = test::smallSpec(1100 + s, 150, 3);
    spec.colorMode = ColorMode::kSmoothGradient;
    auto frames = framesOf(spec);
    CodecConfig cfg;
    cfg.depth = spec.depth;
    cfg.qstep = kTinyQstep;
    auto enc = encodeSequence(frames, cfg);
    auto dec = decodeSequence(enc.frames, geometryOf(frames));
    for (size_t i = 0; i < frames.size(); i++) {
      auto m = computeMetrics(frames[i], dec[i], 8 * enc.frames[i].size());
      capped += m.psnrY == kPsnrCap;
      checked++;
    }
  }

  double bits = 0, points = 0;
  for (int s = 0; s < 5; s++) {
    SequenceSpec spec;
    spec.frameCount = 3;
    spec.pointsPerFrame = 8000;
    spec.shape = Shape(s % 3);
    spec.colorMode = ColorMode::kSmoothGradient;
    spec.translation = Vec3d(1, 0.5, -1);
    spec.seed = 1200 + s;
    auto frames = framesOf(spec);
    CodecConfig cfg;
    cfg.depth = spec.depth;
    cfg.qstep = kQstep;
    auto enc = encodeSequence(frames, cfg);
    for (size_t i = 0; i < frames.size(); i++) {
      bits += 8.0 * double(enc.frames[i].size());
      points += double(frames[i].size());
    }
  }
  double bpp = bits / points;
  return {
    capped == checked && bpp < kWellBelowBpp,
    fmt("qstep %.0e: %d/%d frames at the %.0f dB cap; qstep %.0f on the "
        "smooth-gradient suite: %.3f bpp (limit < %.0f, raw %.0f)",
        kTinyQstep, capped, checked, kPsnrCap, kQstep, bpp, kWellBelowBpp,
        kRawBpp)};
}

}  // namespace

//============================================================================

int
main()
{
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
    {"raht_correctness", rahtCorrectness},
    {"butterfly_values", butterflyValues},
    {"codec_no_drift", codecNoDrift},
    {"coder_lossless_efficiency", coderEfficiency},
    {"temporal_gain", temporalGain},
    {"context_ablation_trend", contextAblation},
    {"gradient_correctness", gradientCorrectness},
    {"pseudo_motion_oracle", pseudoMotionOracle},
    {"density_soundness", densitySoundness},
    {"determinism", determinism},
    {"end_to_end_sanity", endToEnd},
  };

  int failed = 0, index = 1;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf(
      "%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, c.name,
      o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", int(std::size(criteria)) - failed,
              std::size(criteria));
  return failed ? 1 : 0;
}
