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

#include "pcc/Training.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "pcc/Error.h"
#include "pcc/nn/Adam.h"
#include "pcc/nn/ParameterFile.h"

namespace pcc {

using json = nlohmann::json;
using nn::Graph;
using nn::Matrix;
using nn::Var;

//============================================================================

std::vector<TrainingSample>
makeTrainingSamples(std::span<const SequenceFrame> sequence, double qstep)
{
  CodecConfig cfg;
  cfg.qstep = qstep;
  std::vector<TrainingSample> out;
  for (size_t t = 1; t < sequence.size(); t++) {
    EncoderState st;
    cfg.depth = sequence[t - 1].frame.depth;
    auto ref = encodeIntra(st, sequence[t - 1].frame, cfg).reconstruction;
    out.push_back({std::move(ref), sequence[t].frame, sequence[t].flow.vectors});
  }
  return out;
}

std::vector<TrainingSample>
makePseudoMotionSamples(
  std::span<const PointFrame> frames, double qstep, double colorWeight)
{
  CodecConfig cfg;
  cfg.qstep = qstep;
  std::vector<TrainingSample> out;
  for (size_t t = 1; t < frames.size(); t++) {
    EncoderState st;
    cfg.depth = frames[t - 1].depth;
    auto ref = encodeIntra(st, frames[t - 1], cfg).reconstruction;
    auto flow = pseudoMotion(frames[t - 1], frames[t], colorWeight).vectors;
    out.push_back({std::move(ref), frames[t], std::move(flow)});
  }
  return out;
}

//============================================================================

std::string
TrainConfig::toJson() const
{
  json j;
  j["motion_steps"] = motionSteps;
  j["compensation_steps"] = compensationSteps;
  j["joint_steps"] = jointSteps;
  j["learning_rate"] = learningRate;
  j["lambda_me"] = weights.lambdaMe;
  j["lambda_mc"] = weights.lambdaMc;
  j["qstep"] = qstep;
  j["seed"] = seed;
  j["model"] = json::parse(model.toJson());
  return j.dump();
}

TrainConfig
TrainConfig::fromJson(const std::string& text)
{
  TrainConfig c;
  try {
    json j = json::parse(text);
    c.motionSteps = j.value("motion_steps", c.motionSteps);
    c.compensationSteps = j.value("compensation_steps", c.compensationSteps);
    c.jointSteps = j.value("joint_steps", c.jointSteps);
    c.learningRate = j.value("learning_rate", c.learningRate);
    c.weights.lambdaMe = j.value("lambda_me", c.weights.lambdaMe);
    c.weights.lambdaMc = j.value("lambda_mc", c.weights.lambdaMc);
    c.qstep = j.value("qstep", c.qstep);
    c.seed = j.value("seed", c.seed);
    if (j.contains("model"))
      c.model = ModelConfig::fromJson(j["model"].dump());
  } catch (const json::exception& e) {
    raise(ErrorCode::kConfigError, std::string("train config: ") + e.what());
  }
  if (c.learningRate <= 0 || c.qstep <= 0 || c.weights.lambdaMe < 0
      || c.weights.lambdaMc < 0)
    raise(ErrorCode::kConfigError, "invalid training hyper-parameters");
  return c;
}

std::string
TrainingLog::toJson() const
{
  json arr = json::array();
  for (const auto& e : entries)
    arr.push_back(
      {{"stage", e.stage},
       {"epoch", e.epoch},
       {"ce", e.loss.ce},
       {"me", e.loss.me},
       {"mc", e.loss.mc},
       {"total", e.loss.total}});
  return arr.dump(2);
}

//============================================================================

namespace {

  struct LossVars {
    Var ce, me, mc, total;
    bool hasCe = false, hasMe = false, hasMc = false;
  };

  // Builds the requested loss terms for one sample.  Components whose
  // parameters are not being trained are evaluated separately and enter
  // the graph as constants.
  LossVars buildLoss(
    Graph& g, const Model& model, const TrainingSample& s, double qstep,
    const nn::LossWeights& w, TrainScope scope, Rng* noise)
  {
    const bool gradMe =
      scope == TrainScope::kMotionEstimation || scope == TrainScope::kJoint;
    const bool gradMc =
      scope == TrainScope::kMotionCompensation || scope == TrainScope::kJoint;
    const bool wantCe =
      scope == TrainScope::kJoint || scope == TrainScope::kContext;
    const bool wantMe =
      scope == TrainScope::kMotionEstimation || scope == TrainScope::kJoint;
    const bool wantMc =
      scope == TrainScope::kMotionCompensation || scope == TrainScope::kJoint;

    const PointFrame& cur = s.current;
    const int n = int(cur.size());
    FrameIndex prevIndex(s.previous);
    auto aNn = nnAttributes(prevIndex, toReal(cur.positions));

    LossVars lv;
    Var v;
    if (gradMe) {
      v = model.me.estimate(g, prevIndex, cur.positions, aNn);
    } else {
      Graph inf;
      v = g.constant(inf.value(model.me.estimate(inf, prevIndex, cur.positions, aNn)));
    }
    if (wantMe) {
      if (s.flow.size() != size_t(n))
        raise(ErrorCode::kLengthMismatch, "motion target length");
      lv.me = nn::meanSquaredDistance(g, v, g.constant(toMatrix(s.flow)));
      lv.hasMe = true;
    }
    if (scope == TrainScope::kMotionEstimation) {
      lv.total = g.scale(lv.me, w.lambdaMe > 0 ? w.lambdaMe : 1.0);
      return lv;
    }

    Var aP;
    if (gradMc) {
      aP = model.mc.compensate(g, prevIndex, cur.positions, v).aP;
    } else {
      Graph inf;
      Var vi = inf.constant(g.value(v));
      aP = g.constant(
        inf.value(model.mc.compensate(inf, prevIndex, cur.positions, vi).aP));
    }
    Var target = g.constant(toMatrix(cur.attributes));
    if (wantMc) {
      lv.mc = g.scale(
        nn::meanSquaredDistance(g, aP, target), 1.0 / (255.0 * 255.0));
      lv.hasMc = true;
    }
    if (scope == TrainScope::kMotionCompensation) {
      lv.total = g.scale(lv.mc, w.lambdaMc > 0 ? w.lambdaMc : 1.0);
      return lv;
    }

    if (wantCe && n > 1) {
      auto treePtr = std::make_shared<const RahtTree>(
        RahtTree::build(cur.positions, cur.depth));
      const RahtTree& tree = *treePtr;
      RahtTree prevTree = RahtTree::build(s.previous.positions, s.previous.depth);
      auto prevCoeffs = rahtForward(prevTree, s.previous.attributes).highs;

      Var highs = g.rahtHighs(g.sub(target, aP), treePtr);
      const Matrix& hv = g.value(highs);
      const int m = hv.rows;
      std::vector<Vec3d> decoded(m);
      for (int i = 0; i < m; i++)
        for (int c = 0; c < 3; c++)
          decoded[i][c] = double(quantize(hv(i, c), qstep)) * qstep;

      Matrix u(m, 3);
      if (noise)
        for (double& x : u.data)
          x = noise->uniform(-0.5, 0.5);
      Var y = g.reshape(
        g.add(g.scale(highs, 1.0 / qstep), g.constant(std::move(u))), 3 * m,
        1);

      Var predSlog = g.slog(g.scale(g.rahtHighs(aP, treePtr), 1.0 / qstep));
      MotionField mf{fromMatrix(g.value(v))};
      auto geom = buildContextGeometry(tree, prevTree, nodeMotion(tree, mf));

      ContextInputs in;
      in.qstep = qstep;
      in.prevCoeffs = prevCoeffs;
      in.predSlog = predSlog;
      in.decoded = decoded;
      Var cond = model.context.conditioning(g, geom, in, 0, m);
      const auto& density = model.context.density();
      Var nll = density.nll(g, density.headOutput(g, cond), y);
      lv.ce = g.scale(g.sumAll(nll), 1.0 / n);
    } else {
      lv.ce = g.constant(Matrix(1, 1));
    }
    lv.hasCe = true;

    if (scope == TrainScope::kContext) {
      lv.total = lv.ce;
      return lv;
    }
    lv.total = nn::totalLoss(g, lv.ce, lv.me, lv.mc, w);
    return lv;
  }

  LossTerms terms(const Graph& g, const LossVars& lv)
  {
    LossTerms t;
    if (lv.hasCe)
      t.ce = g.value(lv.ce).data[0];
    if (lv.hasMe)
      t.me = g.value(lv.me).data[0];
    if (lv.hasMc)
      t.mc = g.value(lv.mc).data[0];
    t.total = g.value(lv.total).data[0];
    return t;
  }

  std::vector<nn::Parameter*> scopeParameters(Model& m, TrainScope scope)
  {
    switch (scope) {
    case TrainScope::kMotionEstimation: return m.me.parameters();
    case TrainScope::kMotionCompensation: return m.mc.parameters();
    case TrainScope::kContext: return m.context.parameters();
    case TrainScope::kJoint: break;
    }
    return m.parameters();
  }

  void restore(Model& m, const std::vector<uint8_t>& snapshot)
  {
    auto f = nn::parseParameters(snapshot);
    auto params = m.parameters();
    nn::assignParameters(f, params);
  }

}  // namespace

//============================================================================

LossTerms
evaluateLoss(
  const Model& model, std::span<const TrainingSample> samples, double qstep,
  const nn::LossWeights& weights, uint64_t noiseSeed)
{
  LossTerms sum;
  Rng rng(noiseSeed);
  for (const auto& s : samples) {
    Graph g;
    auto lv = buildLoss(g, model, s, qstep, weights, TrainScope::kJoint, &rng);
    LossTerms t = terms(g, lv);
    sum.ce += t.ce;
    sum.me += t.me;
    sum.mc += t.mc;
    sum.total += t.total;
  }
  double k = samples.empty() ? 0.0 : 1.0 / double(samples.size());
  sum.ce *= k;
  sum.me *= k;
  sum.mc *= k;
  sum.total *= k;
  return sum;
}

void
trainSteps(
  Model& model, std::span<const TrainingSample> samples, TrainScope scope,
  int steps, const TrainConfig& config, TrainingLog* log, const char* stage)
{
  if (samples.empty() || steps <= 0)
    return;

  nn::Adam opt(scopeParameters(model, scope), {config.learningRate});
  Rng noise(config.seed * 0x9e3779b97f4a7c15ull + uint64_t(scope) + 1);
  std::vector<uint8_t> lastGood = model.serialize();

  LossTerms epochSum;
  int inEpoch = 0, epoch = 0;
  for (int step = 0; step < steps; step++) {
    const auto& s = samples[size_t(step) % samples.size()];
    opt.zeroGrad();
    Graph g(true);
    auto lv =
      buildLoss(g, model, s, config.qstep, config.weights, scope, &noise);
    LossTerms t = terms(g, lv);
    if (!std::isfinite(t.total)) {
      restore(model, lastGood);
      raise(ErrorCode::kDivergenceDetected, "training loss is not finite");
    }
    // parameters known to give a finite loss, taken once per pass
    if (inEpoch == 0)
      lastGood = model.serialize();
    g.backward(lv.total);
    opt.step();

    epochSum.ce += t.ce;
    epochSum.me += t.me;
    epochSum.mc += t.mc;
    epochSum.total += t.total;
    if (++inEpoch == int(samples.size()) || step + 1 == steps) {
      if (log) {
        double k = 1.0 / inEpoch;
        log->entries.push_back(
          {stage, epoch,
           {epochSum.ce * k, epochSum.me * k, epochSum.mc * k,
            epochSum.total * k}});
      }
      epoch++;
      inEpoch = 0;
      epochSum = LossTerms{};
    }
  }
}

Model
train(
  std::span<const TrainingSample> samples, const TrainConfig& config,
  TrainingLog* log, const std::string& checkpointPath)
{
  Model model(config.model);
  try {
    trainSteps(
      model, samples, TrainScope::kMotionEstimation, config.motionSteps,
      config, log, "pretrain_me");
    trainSteps(
      model, samples, TrainScope::kMotionCompensation,
      config.compensationSteps, config, log, "pretrain_mc");
    trainSteps(
      model, samples, TrainScope::kJoint, config.jointSteps, config, log,
      "joint");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDivergenceDetected && !checkpointPath.empty())
      model.save(checkpointPath);
    throw;
  }
  return model;
}

//============================================================================

double
meanPredictedBits(
  const Model* model, std::span<const TrainingSample> samples, double qstep)
{
  if (samples.empty())
    return 0.0;
  CodecConfig cfg;
  cfg.qstep = qstep;
  double bits = 0;
  for (const auto& s : samples) {
    EncoderState st;
    st.previous = s.previous;
    cfg.depth = s.current.depth;
    bits += 8.0 * encodePredicted(st, s.current, cfg, model).bytes.size();
  }
  return bits / double(samples.size());
}

double
meanEndPointError(const Model& model, std::span<const TrainingSample> samples)
{
  double sum = 0;
  size_t count = 0;
  for (const auto& s : samples) {
    FrameIndex prev(s.previous);
    auto aNn = nnAttributes(prev, toReal(s.current.positions));
    auto v = model.me.estimate(prev, s.current.positions, aNn);
    for (size_t i = 0; i < v.vectors.size(); i++) {
      sum += std::sqrt((v.vectors[i] - s.flow[i]).norm2());
      count++;
    }
  }
  return count ? sum / double(count) : 0.0;
}

double
meanPredictedBpp(
  const Model* model, std::span<const TrainingSample> samples, double qstep)
{
  if (samples.empty())
    return 0.0;
  CodecConfig cfg;
  cfg.qstep = qstep;
  double sum = 0;
  for (const auto& s : samples) {
    EncoderState st;
    st.previous = s.previous;
    cfg.depth = s.current.depth;
    auto bytes = encodePredicted(st, s.current, cfg, model).bytes.size();
    sum += 8.0 * double(bytes) / double(s.current.size());
  }
  return sum / double(samples.size());
}

//============================================================================

DatasetSpec
DatasetSpec::fromJson(const std::string& text)
{
  DatasetSpec d;
  try {
    json j = json::parse(text);
    if (!j.contains("sequences") || !j["sequences"].is_array())
      raise(ErrorCode::kConfigError, "dataset: 'sequences' array required");
    for (const auto& s : j["sequences"])
      d.sequences.push_back(sequenceSpecFromJson(s));
    if (j.contains("train"))
      d.train = TrainConfig::fromJson(j["train"].dump());
    d.pseudoMotion = j.value("pseudo_motion", false);
    d.colorWeight = j.value("color_weight", 1.0);
  } catch (const json::exception& e) {
    raise(ErrorCode::kConfigError, std::string("dataset: ") + e.what());
  }
  if (d.sequences.empty())
    raise(ErrorCode::kConfigError, "dataset: no sequences");
  return d;
}

std::vector<TrainingSample>
makeDataset(const DatasetSpec& spec)
{
  std::vector<TrainingSample> out;
  for (const auto& ss : spec.sequences) {
    auto seq = generateSequence(ss);
    std::vector<TrainingSample> part;
    if (spec.pseudoMotion) {
      std::vector<PointFrame> frames;
      for (auto& f : seq)
        frames.push_back(std::move(f.frame));
      part = makePseudoMotionSamples(
        frames, spec.train.qstep, spec.colorWeight);
    } else {
      part = makeTrainingSamples(seq, spec.train.qstep);
    }
    for (auto& p : part)
      out.push_back(std::move(p));
  }
  return out;
}

std::vector<SequenceSpec>
randomMotionSuite(
  int count, int pointsPerFrame, uint64_t seed, bool integerMotion,
  int frameCount)
{
  Rng rng(seed);
  std::vector<SequenceSpec> out;
  for (int i = 0; i < count; i++) {
    SequenceSpec s;
    s.frameCount = frameCount;
    s.pointsPerFrame = pointsPerFrame;
    s.shape = Shape(i % 3);
    s.colorMode = ColorMode::kTexturedNoise;
    s.seed = seed * 1000 + uint64_t(i);
    if (integerMotion) {
      s.translation = Vec3d(
        rng.uniformInt(-3, 3), rng.uniformInt(-3, 3), rng.uniformInt(-3, 3));
    } else {
      s.translation = Vec3d(
        rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0),
        rng.uniform(-3.0, 3.0));
      s.rotationZ = rng.uniform(-0.03, 0.03);
    }
    out.push_back(s);
  }
  return out;
}

//----------------------------------------------------------------------------

std::vector<AblationStage>
runContextAblation(
  Model& model, std::span<const TrainingSample> train,
  std::span<const TrainingSample> validation,
  std::span<const TrainingSample> test, const TrainConfig& config,
  int rounds, int stepsPerRound, TrainingLog* log)
{
  const ContextSwitches chain[] = {
    {false, false}, {true, false}, {true, true}};
  const char* names[] = {"ctx_none", "ctx_explicit", "ctx_explicit_implicit"};

  std::vector<AblationStage> out;
  for (int c = 0; c < 3; c++) {
    model.setSwitches(chain[c]);
    Model best = model;
    double bestVal = meanPredictedBpp(&model, validation, config.qstep);
    for (int r = 0; r < rounds; r++) {
      trainSteps(
        model, train, TrainScope::kContext, stepsPerRound, config, log,
        names[c]);
      double v = meanPredictedBpp(&model, validation, config.qstep);
      if (v < bestVal) {
        bestVal = v;
        best = model;
      }
    }
    model = best;
    out.push_back(
      {chain[c], bestVal, meanPredictedBpp(&model, test, config.qstep)});
  }
  return out;
}

}  // namespace pcc
