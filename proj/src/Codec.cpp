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

#include "pcc/Codec.h"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "pcc/ByteIO.h"
#include "pcc/Context.h"
#include "pcc/Error.h"
#include "pcc/Morton.h"
#include "pcc/Motion.h"
#include "pcc/RangeCoder.h"
#include "pcc/Rlgr.h"

namespace pcc {

using json = nlohmann::json;

//============================================================================

void
CodecConfig::validate() const
{
  if (depth < 1 || depth > 16)
    raise(ErrorCode::kConfigError, "depth must be in [1, 16]");
  if (!(qstep > 0) || !std::isfinite(qstep))
    raise(ErrorCode::kConfigError, "qstep must be positive");
  if (!(effectiveQstep(qstep) > 0))
    raise(ErrorCode::kConfigError, "qstep underflows binary32");
  if (kNeighbors != kContextNeighbors)
    raise(ErrorCode::kConfigError, "k_neighbors is fixed by the model");
  if (gop < 0)
    raise(ErrorCode::kConfigError, "gop must be >= 0");
}

std::string
CodecConfig::toJson() const
{
  json j;
  j["depth"] = depth;
  j["qstep"] = qstep;
  j["k_neighbors"] = kNeighbors;
  j["density_variant"] = nn::toString(densityVariant);
  j["model_path"] = modelPath;
  j["gop"] = gop;
  return j.dump();
}

CodecConfig
CodecConfig::fromJson(const std::string& text)
{
  CodecConfig c;
  try {
    json j = json::parse(text);
    c.depth = j.value("depth", c.depth);
    c.qstep = j.value("qstep", c.qstep);
    c.kNeighbors = j.value("k_neighbors", c.kNeighbors);
    c.densityVariant = nn::densityVariantFromString(j.value(
      "density_variant", nn::toString(c.densityVariant)));
    c.modelPath = j.value("model_path", c.modelPath);
    c.gop = j.value("gop", c.gop);
  } catch (const json::exception& e) {
    raise(ErrorCode::kConfigError, std::string("codec config: ") + e.what());
  }
  c.validate();
  return c;
}

double
effectiveQstep(double qstep)
{
  return double(float(qstep));
}

//============================================================================

namespace {

  std::vector<Vec3d> clampAttributes(std::vector<Vec3d> a)
  {
    for (auto& v : a)
      for (int c = 0; c < 3; c++)
        v[c] = std::clamp(v[c], 0.0, 255.0);
    return a;
  }

  std::vector<uint8_t> withChecksum(
    std::vector<uint8_t> payload, std::span<const Vec3d> recon)
  {
    ByteWriter w;
    w.bytes(payload);
    w.u32(attributeChecksum(recon));
    return w.take();
  }

  std::span<const uint8_t> stripChecksum(
    std::span<const uint8_t> payload, uint32_t* crc)
  {
    if (payload.size() < 4)
      raise(ErrorCode::kTruncatedPayload, "payload lacks checksum");
    ByteReader r(payload.last(4));
    *crc = r.u32();
    return payload.first(payload.size() - 4);
  }

  // RLGR symbol layout: all Y, then all U, then all V, coding order.
  std::vector<uint8_t> rlgrPayload(const QuantizedCoefficients& q)
  {
    std::vector<int32_t> sym;
    sym.reserve(3 * q.highs.size());
    for (int c = 0; c < 3; c++)
      for (const auto& h : q.highs)
        sym.push_back(h[c]);
    return rlgrEncode(sym);
  }

  std::vector<Vec3<int32_t>> rlgrSymbols(
    std::span<const uint8_t> bytes, size_t highs)
  {
    auto sym = rlgrDecode(bytes, 3 * highs);
    std::vector<Vec3<int32_t>> out(highs);
    for (int c = 0; c < 3; c++)
      for (size_t i = 0; i < highs; i++)
        out[i][c] = sym[c * highs + i];
    return out;
  }

  FrameHeader makeHeader(
    FrameType type, const PointFrame& frame, double qstep,
    const QuantizedCoefficients& q, uint64_t modelHash)
  {
    FrameHeader h;
    h.type = type;
    h.depth = uint8_t(frame.depth);
    h.qstep = float(qstep);
    h.pointCount = uint32_t(frame.size());
    h.modelHash = modelHash;
    h.dc = q.dc;
    return h;
  }

  void checkGeometry(std::span<const Vec3i> geometry, int depth)
  {
    const int32_t limit = int32_t(1) << depth;
    uint64_t last = 0;
    for (size_t i = 0; i < geometry.size(); i++) {
      const auto& p = geometry[i];
      for (int c = 0; c < 3; c++)
        if (p[c] < 0 || p[c] >= limit)
          raise(ErrorCode::kGeometryMismatch, "position outside the grid");
      uint64_t code = mortonCode(p);
      if (i && code <= last)
        raise(
          ErrorCode::kGeometryMismatch,
          "geometry not unique and Morton sorted");
      last = code;
    }
  }

  //--------------------------------------------------------------------------
  // Everything the learned P-frame path derives from decoder-side data.

  struct PredictedFrameSetup {
    PredictionBundle bundle;
    RahtTree tree;
    RahtTree prevTree;
    std::vector<Vec3d> prevCoeffs;
    nn::Matrix predSlog;
    ContextGeometry geom;
  };

  PredictedFrameSetup setupPredicted(
    const Model& model, const PointFrame& prev,
    std::span<const Vec3i> positions, int depth, double qstep,
    std::span<const Vec3d> attributes)
  {
    PredictedFrameSetup s;
    FrameIndex prevIndex(prev);
    s.bundle = predict(model.me, model.mc, prevIndex, positions, attributes);
    s.tree = RahtTree::build(positions, depth);
    s.prevTree = RahtTree::build(prev.positions, prev.depth);
    s.prevCoeffs = rahtForward(s.prevTree, prev.attributes).highs;

    auto cp = rahtForward(s.tree, s.bundle.aP).highs;
    s.predSlog = nn::Matrix(int(cp.size()), 3);
    for (size_t i = 0; i < cp.size(); i++)
      for (int c = 0; c < 3; c++)
        s.predSlog(int(i), c) = slog(cp[i][c] / qstep);

    auto motion = nodeMotion(s.tree, s.bundle.motion);
    s.geom = buildContextGeometry(s.tree, s.prevTree, motion);
    return s;
  }

  // Walks the coded nodes level by level (root first), evaluating the
  // density conditioning for a level once all coarser levels are known.
  template<typename F>
  void forEachSymbol(
    const Model& model, const PredictedFrameSetup& s, double qstep,
    std::vector<Vec3d>& decoded, F&& code)
  {
    const nn::DensityModel& density = model.context.density();
    for (auto [begin, end] : s.geom.levelRanges) {
      nn::Graph g;
      ContextInputs in;
      in.qstep = qstep;
      in.prevCoeffs = s.prevCoeffs;
      in.predSlog = g.constant(s.predSlog);
      in.decoded = decoded;
      nn::Var cond = model.context.conditioning(g, s.geom, in, begin, end);
      const nn::Matrix& head = g.value(density.headOutput(g, cond));
      for (int i = begin; i < end; i++)
        for (int c = 0; c < 3; c++) {
          nn::SymbolDistribution dist(density, head.row(3 * (i - begin) + c));
          decoded[i][c] = double(code(i, c, dist)) * qstep;
        }
    }
  }

}  // namespace

//============================================================================

EncodedFrame
encodeIntra(EncoderState& state, const PointFrame& frame, const CodecConfig& config)
{
  config.validate();
  frame.validate();
  const double qs = effectiveQstep(config.qstep);

  RahtTree tree = RahtTree::build(frame.positions, frame.depth);
  EncodedFrame out;
  out.type = FrameType::kIntra;
  out.coefficients = quantize(rahtForward(tree, frame.attributes), qs);

  out.reconstruction.frameIndex = frame.frameIndex;
  out.reconstruction.depth = frame.depth;
  out.reconstruction.positions = frame.positions;
  out.reconstruction.attributes =
    clampAttributes(rahtInverse(tree, dequantize(out.coefficients)));

  auto payload = withChecksum(
    rlgrPayload(out.coefficients), out.reconstruction.attributes);
  out.bytes = writeFrame(
    makeHeader(FrameType::kIntra, frame, qs, out.coefficients, 0), payload);

  state.previous = out.reconstruction;
  state.framesCoded++;
  state.totalBits += 8 * out.bytes.size();
  return out;
}

EncodedFrame
encodePredicted(
  EncoderState& state, const PointFrame& frame, const CodecConfig& config,
  const Model* model)
{
  config.validate();
  frame.validate();
  if (!state.previous)
    raise(ErrorCode::kMissingReference, "P-frame without a reference");
  const PointFrame& prev = *state.previous;
  const double qs = effectiveQstep(config.qstep);

  EncodedFrame out;
  out.type = FrameType::kPredicted;
  out.reconstruction.frameIndex = frame.frameIndex;
  out.reconstruction.depth = frame.depth;
  out.reconstruction.positions = frame.positions;

  std::vector<uint8_t> payload;
  uint64_t modelHash = 0;

  if (!model) {
    // nearest-neighbour prediction, RLGR-coded residual
    RahtTree tree = RahtTree::build(frame.positions, frame.depth);
    auto aP = nnAttributes(prev, toReal(frame.positions));
    std::vector<Vec3d> residual(frame.size());
    for (size_t i = 0; i < frame.size(); i++)
      residual[i] = frame.attributes[i] - aP[i];
    out.coefficients = quantize(rahtForward(tree, residual), qs);

    auto rec = rahtInverse(tree, dequantize(out.coefficients));
    for (size_t i = 0; i < rec.size(); i++)
      rec[i] += aP[i];
    out.reconstruction.attributes = clampAttributes(std::move(rec));
    payload = rlgrPayload(out.coefficients);
  } else {
    modelHash = model->hash();
    auto s = setupPredicted(
      *model, prev, frame.positions, frame.depth, qs, frame.attributes);
    out.coefficients = quantize(rahtForward(s.tree, s.bundle.residual), qs);
    const auto& q = out.coefficients;

    RangeEncoder enc;
    std::vector<Vec3d> decoded(q.highs.size());
    forEachSymbol(
      *model, s, qs, decoded,
      [&](int i, int c, const nn::SymbolDistribution& dist) {
        encodeValue(enc, q.highs[i][c], dist);
        return q.highs[i][c];
      });
    payload = enc.finish();

    auto rec = rahtInverse(s.tree, dequantize(q));
    for (size_t i = 0; i < rec.size(); i++)
      rec[i] += s.bundle.aP[i];
    out.reconstruction.attributes = clampAttributes(std::move(rec));
  }

  payload = withChecksum(std::move(payload), out.reconstruction.attributes);
  out.bytes = writeFrame(
    makeHeader(FrameType::kPredicted, frame, qs, out.coefficients, modelHash),
    payload);

  state.previous = out.reconstruction;
  state.framesCoded++;
  state.totalBits += 8 * out.bytes.size();
  return out;
}

EncodedFrame
encodeFrame(
  EncoderState& state, const PointFrame& frame, const CodecConfig& config,
  const Model* model)
{
  bool intra = !state.previous
    || (config.gop > 0 && state.framesCoded % uint64_t(config.gop) == 0);
  if (intra)
    return encodeIntra(state, frame, config);
  return encodePredicted(state, frame, config, model);
}

//============================================================================

PointFrame
decodeFrame(
  DecoderState& state, std::span<const uint8_t> bytes,
  std::span<const Vec3i> geometry, const Model* model, int frameIndex)
{
  ParsedFrame f = readFrame(bytes);
  const FrameHeader& h = f.header;
  if (geometry.size() != h.pointCount)
    raise(ErrorCode::kGeometryMismatch, "geometry point count differs");
  checkGeometry(geometry, h.depth);

  const double qs = double(h.qstep);
  const size_t n = geometry.size();

  PointFrame out;
  out.frameIndex = frameIndex >= 0 ? frameIndex : int(state.framesCoded);
  out.depth = h.depth;
  out.positions.assign(geometry.begin(), geometry.end());

  uint32_t crc = 0;
  auto body = stripChecksum(f.payload, &crc);

  QuantizedCoefficients q;
  q.qstep = qs;
  q.dc = h.dc;

  if (h.type == FrameType::kIntra) {
    RahtTree tree = RahtTree::build(geometry, h.depth);
    q.highs = rlgrSymbols(body, n - 1);
    out.attributes = clampAttributes(rahtInverse(tree, dequantize(q)));
  } else {
    if (!state.previous)
      raise(ErrorCode::kMissingReference, "P-frame without a reference");
    const PointFrame& prev = *state.previous;

    if (h.modelHash == 0) {
      RahtTree tree = RahtTree::build(geometry, h.depth);
      auto aP = nnAttributes(prev, toReal(geometry));
      q.highs = rlgrSymbols(body, n - 1);
      auto rec = rahtInverse(tree, dequantize(q));
      for (size_t i = 0; i < n; i++)
        rec[i] += aP[i];
      out.attributes = clampAttributes(std::move(rec));
    } else {
      if (!model)
        raise(ErrorCode::kModelMissing, "frame requires a model file");
      checkModelHash(h, model->hash());

      auto s = setupPredicted(*model, prev, geometry, h.depth, qs, {});
      RangeDecoder dec(body);
      q.highs.resize(n - 1);
      std::vector<Vec3d> decoded(n - 1);
      forEachSymbol(
        *model, s, qs, decoded,
        [&](int i, int c, const nn::SymbolDistribution& dist) {
          q.highs[i][c] = decodeValue(dec, dist);
          return q.highs[i][c];
        });
      if (dec.bytesConsumed() != body.size())
        raise(ErrorCode::kChecksumMismatch, "payload length inconsistent");

      auto rec = rahtInverse(s.tree, dequantize(q));
      for (size_t i = 0; i < n; i++)
        rec[i] += s.bundle.aP[i];
      out.attributes = clampAttributes(std::move(rec));
    }
  }

  if (attributeChecksum(out.attributes) != crc)
    raise(ErrorCode::kChecksumMismatch, "reconstruction checksum mismatch");

  state.previous = out;
  state.framesCoded++;
  state.totalBits += 8 * bytes.size();
  return out;
}

//============================================================================

SequenceResult
encodeSequence(
  std::span<const PointFrame> frames, const CodecConfig& config,
  const Model* model)
{
  EncoderState state;
  SequenceResult r;
  for (const auto& f : frames) {
    auto e = encodeFrame(state, f, config, model);
    r.frames.push_back(std::move(e.bytes));
    r.reconstructions.push_back(std::move(e.reconstruction));
    r.types.push_back(e.type);
  }
  return r;
}

std::vector<PointFrame>
decodeSequence(
  std::span<const std::vector<uint8_t>> frames,
  std::span<const std::vector<Vec3i>> geometry, const Model* model)
{
  if (frames.size() != geometry.size())
    raise(ErrorCode::kGeometryMismatch, "frame and geometry counts differ");
  DecoderState state;
  std::vector<PointFrame> out;
  for (size_t i = 0; i < frames.size(); i++)
    out.push_back(decodeFrame(state, frames[i], geometry[i], model, int(i)));
  return out;
}

}  // namespace pcc
