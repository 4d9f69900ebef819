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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "Codec.h"
#include "Model.h"
#include "Sequence.h"
#include "nn/Losses.h"

namespace pcc {

//============================================================================

struct TrainingSample {
  PointFrame previous;  // reference as the decoder holds it
  PointFrame current;
  std::vector<Vec3d> flow;  // current -> previous target motion
};

// One sample per consecutive frame pair; the reference is the intra-coded
// reconstruction of the earlier frame at |qstep|.
std::vector<TrainingSample>
makeTrainingSamples(std::span<const SequenceFrame> sequence, double qstep);

// Same, with pseudo motion (nearest neighbour in position + colour) as the
// motion target.
std::vector<TrainingSample> makePseudoMotionSamples(
  std::span<const PointFrame> frames, double qstep, double colorWeight = 1.0);

//----------------------------------------------------------------------------

struct TrainConfig {
  int motionSteps = 300;
  int compensationSteps = 200;
  int jointSteps = 200;
  double learningRate = 1e-3;
  nn::LossWeights weights;
  double qstep = 10.0;
  uint64_t seed = 1;
  ModelConfig model;

  std::string toJson() const;
  static TrainConfig fromJson(const std::string& text);
};

// Per-point loss terms: ce in nats per point, me in squared voxels, mc in
// squared normalised attribute units (attributes / 255).
struct LossTerms {
  double ce = 0;
  double me = 0;
  double mc = 0;
  double total = 0;
};

enum class TrainScope {
  kMotionEstimation,    // L_ME, estimator parameters
  kMotionCompensation,  // L_MC, compensator parameters
  kJoint,               // CE + lambda_ME L_ME + lambda_MC L_MC, everything
  kContext,             // CE, context and density parameters
};

struct TrainingLogEntry {
  std::string stage;
  int epoch = 0;
  LossTerms loss;
};

struct TrainingLog {
  std::vector<TrainingLogEntry> entries;
  std::string toJson() const;
};

// Loss over a batch of samples with a fixed noise seed; deterministic.
LossTerms evaluateLoss(
  const Model& model, std::span<const TrainingSample> samples, double qstep,
  const nn::LossWeights& weights, uint64_t noiseSeed = 7);

// Runs |steps| optimiser steps (one sample each, cycling).  Throws
// DivergenceDetected on a non-finite loss after restoring the parameters
// held at the start of the latest pass whose first loss was finite.
void trainSteps(
  Model& model, std::span<const TrainingSample> samples, TrainScope scope,
  int steps, const TrainConfig& config, TrainingLog* log = nullptr,
  const char* stage = "train");

// Full protocol: pretrain estimation, pretrain compensation, then joint
// training.  On divergence the last good parameters are written to
// |checkpointPath| (if non-empty) before the error propagates.
Model train(
  std::span<const TrainingSample> samples, const TrainConfig& config,
  TrainingLog* log = nullptr, const std::string& checkpointPath = "");

// Mean payload bits of P-frames coded against each sample's reference.
double meanPredictedBits(
  const Model* model, std::span<const TrainingSample> samples, double qstep);

// Mean end-point error of the estimator against the samples' motion.
double meanEndPointError(
  const Model& model, std::span<const TrainingSample> samples);

//============================================================================
// Datasets described by sequence specifications.

struct DatasetSpec {
  std::vector<SequenceSpec> sequences;
  TrainConfig train;
  bool pseudoMotion = false;  // nearest-neighbour targets instead of GT flow
  double colorWeight = 1.0;

  static DatasetSpec fromJson(const std::string& text);
};

std::vector<TrainingSample> makeDataset(const DatasetSpec& spec);

// |count| textured sequences with random translations drawn per sequence;
// integer components when |integerMotion|, otherwise real-valued with a
// small rotation about z.
std::vector<SequenceSpec> randomMotionSuite(
  int count, int pointsPerFrame, uint64_t seed, bool integerMotion,
  int frameCount = 3);

//----------------------------------------------------------------------------
// Context ablation: starting from |model| with trained motion networks,
// trains the context path with no temporal context, then with the explicit
// context enabled, then with the implicit context added.  Each stage runs
// |rounds| x |stepsPerRound| steps and keeps the round with the lowest
// validation bits (the stage entry point counts as round 0).

struct AblationStage {
  ContextSwitches switches;
  double validationBpp = 0;
  double testBpp = 0;
};

std::vector<AblationStage> runContextAblation(
  Model& model, std::span<const TrainingSample> train,
  std::span<const TrainingSample> validation,
  std::span<const TrainingSample> test, const TrainConfig& config,
  int rounds, int stepsPerRound, TrainingLog* log = nullptr);

// Mean bits per point of P-frames (payload bits over point count).
double meanPredictedBpp(
  const Model* model, std::span<const TrainingSample> samples, double qstep);

}  // namespace pcc
