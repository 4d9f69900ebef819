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

// pcc4d: command-line front end.
//
//   pcc4d encode   --input <dir|manifest> --output <stream> [--config <json>]
//                  [--model <file>] [--report <json>]
//   pcc4d decode   --input <stream> --geometry <dir|manifest> --output <dir>
//                  [--model <file>] [--report <json>]
//   pcc4d eval     --original <dir> --decoded <dir> --bits <stream>
//                  [--report <json>]
//   pcc4d train    --dataset <json> --out <model> [--log <json>]
//   pcc4d synth    --spec <json> --out <dir>
//   pcc4d rd-curve --input <dir> --qsteps 5,10,20,40 --out <prefix>
//                  [--config <json>] [--model <file>]
//
// Failures print one line "error <Category>: <message>" on stderr.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "pcc/Bitstream.h"
#include "pcc/Codec.h"
#include "pcc/Error.h"
#include "pcc/PlyIO.h"
#include "pcc/Sequence.h"
#include "pcc/Training.h"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace pcc;

namespace {

constexpr int kReportSchemaVersion = 1;

constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;
constexpr int kExitLibraryBase = 10;  // + ErrorCode

//============================================================================

std::string
readText(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  if (!in)
    raise(ErrorCode::kIoError, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<uint8_t>
readBinary(const fs::path& p)
{
  auto s = readText(p);
  return {s.begin(), s.end()};
}

void
writeBinary(const fs::path& p, std::span<const uint8_t> bytes)
{
  if (p.has_parent_path())
    fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  if (!out)
    raise(ErrorCode::kIoError, "cannot write " + p.string());
}

void
writeText(const fs::path& p, const std::string& text)
{
  writeBinary(p, {reinterpret_cast<const uint8_t*>(text.data()), text.size()});
}

json
parseJson(const std::string& text, const std::string& what)
{
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::kConfigError, what + ": " + e.what());
  }
}

std::string
hashString(uint64_t h)
{
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double
msSince(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(
           std::chrono::steady_clock::now() - t0)
    .count();
}

CodecConfig
loadConfig(const std::string& path)
{
  return path.empty() ? CodecConfig{} : CodecConfig::fromJson(readText(path));
}

std::optional<Model>
loadModel(const std::string& path)
{
  if (path.empty())
    return std::nullopt;
  return Model::load(path);
}

//----------------------------------------------------------------------------
// Reports.

struct FrameRow {
  int frameIndex = 0;
  std::string type;
  uint64_t bytes = 0;
  double bpp = 0;
  std::optional<double> psnrY;
  std::optional<double> encodeMs;
  std::optional<double> decodeMs;
};

json
optional(const std::optional<double>& v)
{
  return v ? json(*v) : json(nullptr);
}

json
makeReport(
  const std::string& command, const json& config,
  std::optional<uint64_t> modelHash, const std::vector<FrameRow>& rows)
{
  json frames = json::array();
  double bpp = 0, psnr = 0, enc = 0, dec = 0;
  int nPsnr = 0, nEnc = 0, nDec = 0;
  uint64_t totalBits = 0;
  for (const auto& r : rows) {
    frames.push_back(
      {{"frame_index", r.frameIndex},
       {"type", r.type},
       {"bytes", r.bytes},
       {"bpp", r.bpp},
       {"psnr_y", optional(r.psnrY)},
       {"encode_ms", optional(r.encodeMs)},
       {"decode_ms", optional(r.decodeMs)}});
    bpp += r.bpp;
    totalBits += 8 * r.bytes;
    if (r.psnrY)
      psnr += *r.psnrY, nPsnr++;
    if (r.encodeMs)
      enc += *r.encodeMs, nEnc++;
    if (r.decodeMs)
      dec += *r.decodeMs, nDec++;
  }
  auto mean = [](double s, int n) { return n ? json(s / n) : json(nullptr); };
  return {
    {"schema_version", kReportSchemaVersion},
    {"command", command},
    {"config", config},
    {"model_hash", modelHash ? json(hashString(*modelHash)) : json(nullptr)},
    {"frames", frames},
    {"aggregate",
     {{"frame_count", rows.size()},
      {"total_bits", totalBits},
      {"mean_bpp", mean(bpp, int(rows.size()))},
      {"mean_psnr_y", mean(psnr, nPsnr)},
      {"mean_encode_ms", mean(enc, nEnc)},
      {"mean_decode_ms", mean(dec, nDec)}}}};
}

void
emitReport(const json& report, const std::string& path)
{
  if (path.empty())
    std::cout << report.dump(2) << "\n";
  else
    writeText(path, report.dump(2) + "\n");
}

const char*
typeName(FrameType t)
{
  return t == FrameType::kIntra ? "I" : "P";
}

//============================================================================

struct EncodeArgs {
  std::string input, output, config, model, report;
};

int
runEncode(const EncodeArgs& a)
{
  CodecConfig cfg = loadConfig(a.config);
  if (!a.model.empty())
    cfg.modelPath = a.model;
  auto model = loadModel(cfg.modelPath);
  if (model && model->config().density != cfg.densityVariant)
    raise(ErrorCode::kConfigError, "density_variant differs from the model's");

  auto frames = loadSequence(a.input, cfg.depth);
  EncoderState state;
  std::vector<std::vector<uint8_t>> coded;
  std::vector<FrameRow> rows;
  for (const auto& f : frames) {
    auto t0 = std::chrono::steady_clock::now();
    auto e = encodeFrame(state, f, cfg, model ? &*model : nullptr);
    double ms = msSince(t0);
    auto m = computeMetrics(f, e.reconstruction, 8 * e.bytes.size());
    rows.push_back(
      {f.frameIndex, typeName(e.type), e.bytes.size(), m.bpp, m.psnrY, ms, {}});
    coded.push_back(std::move(e.bytes));
  }
  writeBinary(a.output, writeStream(coded));
  emitReport(
    makeReport(
      "encode", json::parse(cfg.toJson()),
      model ? std::optional(model->hash()) : std::nullopt, rows),
    a.report);
  return 0;
}

//----------------------------------------------------------------------------

struct DecodeArgs {
  std::string input, geometry, output, model, report;
};

int
runDecode(const DecodeArgs& a)
{
  auto model = loadModel(a.model);
  auto stream = readStream(readBinary(a.input));
  if (stream.empty())
    raise(ErrorCode::kParseError, "empty stream");
  int depth = readFrame(stream[0]).header.depth;
  auto geometry = loadSequence(a.geometry, depth);
  if (geometry.size() != stream.size())
    raise(ErrorCode::kGeometryMismatch, "frame count differs from geometry");

  fs::create_directories(a.output);
  DecoderState state;
  std::vector<fs::path> written;
  std::vector<FrameRow> rows;
  for (size_t i = 0; i < stream.size(); i++) {
    auto t0 = std::chrono::steady_clock::now();
    auto f = decodeFrame(
      state, stream[i], geometry[i].positions, model ? &*model : nullptr,
      int(i));
    double ms = msSince(t0);
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.ply", i);
    writePly(f, fs::path(a.output) / name);
    written.push_back(fs::path(a.output) / name);
    auto type = readFrame(stream[i]).header.type;
    rows.push_back(
      {int(i), typeName(type), stream[i].size(),
       8.0 * double(stream[i].size()) / double(f.size()), {}, {}, ms});
  }
  writeManifest(fs::path(a.output) / "manifest.json", written);
  emitReport(
    makeReport(
      "decode", json{{"depth", depth}},
      model ? std::optional(model->hash()) : std::nullopt, rows),
    a.report);
  return 0;
}

//----------------------------------------------------------------------------

struct EvalArgs {
  std::string original, decoded, bits, report;
};

int
runEval(const EvalArgs& a)
{
  auto stream = readStream(readBinary(a.bits));
  if (stream.empty())
    raise(ErrorCode::kParseError, "empty stream");
  int depth = readFrame(stream[0]).header.depth;
  auto original = loadSequence(a.original, depth);
  auto decoded = loadSequence(a.decoded, depth);
  if (original.size() != decoded.size() || original.size() != stream.size())
    raise(ErrorCode::kGeometryMismatch, "sequences differ in frame count");

  std::vector<FrameRow> rows;
  std::optional<uint64_t> hash;
  for (size_t i = 0; i < stream.size(); i++) {
    auto h = readFrame(stream[i]).header;
    if (h.modelHash)
      hash = h.modelHash;
    auto m = computeMetrics(original[i], decoded[i], 8 * stream[i].size());
    rows.push_back(
      {int(i), typeName(h.type), stream[i].size(), m.bpp, m.psnrY, {}, {}});
  }
  emitReport(makeReport("eval", json{{"depth", depth}}, hash, rows), a.report);
  return 0;
}

//----------------------------------------------------------------------------

struct TrainArgs {
  std::string dataset, out, log;
};

int
runTrain(const TrainArgs& a)
{
  auto spec = DatasetSpec::fromJson(readText(a.dataset));
  auto samples = makeDataset(spec);
  TrainingLog log;
  Model model = train(samples, spec.train, &log, a.out);
  model.save(a.out);
  if (!a.log.empty())
    writeText(a.log, log.toJson() + "\n");
  json summary = {
    {"schema_version", kReportSchemaVersion},
    {"command", "train"},
    {"config", json::parse(spec.train.toJson())},
    {"model_hash", hashString(model.hash())},
    {"samples", samples.size()},
    {"final_epoch", log.entries.empty()
                      ? json(nullptr)
                      : json::parse(TrainingLog{{log.entries.back()}}.toJson())[0]}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

//----------------------------------------------------------------------------

struct SynthArgs {
  std::string spec, out;
};

int
runSynth(const SynthArgs& a)
{
  auto spec = sequenceSpecFromJson(parseJson(readText(a.spec), "sequence spec"));
  auto seq = generateSequence(spec);
  fs::path dir = a.out;
  fs::create_directories(dir);
  std::vector<fs::path> frames;
  for (size_t t = 0; t < seq.size(); t++) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04zu.ply", t);
    writePly(seq[t].frame, dir / name);
    frames.push_back(dir / name);
    std::snprintf(name, sizeof name, "flow_%04zu.ply", t);
    writeFlowPly(seq[t].frame.positions, seq[t].flow.vectors, dir / name);
  }
  writeManifest(dir / "manifest.json", frames);
  writeText(dir / "spec.json", toJson(spec).dump(2) + "\n");
  return 0;
}

//----------------------------------------------------------------------------

struct RdArgs {
  std::string input, qsteps, out, config, model;
};

int
runRdCurve(const RdArgs& a)
{
  std::vector<double> qsteps;
  {
    std::stringstream ss(a.qsteps);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        qsteps.push_back(std::stod(item));
      } catch (const std::exception&) {
        raise(ErrorCode::kConfigError, "bad qstep '" + item + "'");
      }
    }
  }
  if (qsteps.empty())
    raise(ErrorCode::kConfigError, "no qsteps given");

  CodecConfig base = loadConfig(a.config);
  if (!a.model.empty())
    base.modelPath = a.model;
  auto model = loadModel(base.modelPath);
  auto frames = loadSequence(a.input, base.depth);

  struct Point {
    double qstep, bpp, psnr;
  };
  std::vector<Point> points(qsteps.size());
  std::vector<std::exception_ptr> errors(qsteps.size());
  std::vector<std::thread> pool;
  for (size_t k = 0; k < qsteps.size(); k++)
    pool.emplace_back([&, k] {
      try {
        CodecConfig cfg = base;
        cfg.qstep = qsteps[k];
        auto r = encodeSequence(frames, cfg, model ? &*model : nullptr);
        double bpp = 0, psnr = 0;
        for (size_t i = 0; i < frames.size(); i++) {
          auto m = computeMetrics(
            frames[i], r.reconstructions[i], 8 * r.frames[i].size());
          bpp += m.bpp;
          psnr += m.psnrY;
        }
        double n = double(frames.size());
        points[k] = {qsteps[k], bpp / n, psnr / n};
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  for (auto& t : pool)
    t.join();
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);

  std::sort(points.begin(), points.end(), [](const Point& x, const Point& y) {
    return x.bpp > y.bpp;
  });
  std::ostringstream csv;
  csv << "qstep,bpp,psnr_y\n";
  csv.precision(10);
  json pts = json::array();
  for (const auto& p : points) {
    csv << p.qstep << "," << p.bpp << "," << p.psnr << "\n";
    pts.push_back({{"qstep", p.qstep}, {"bpp", p.bpp}, {"psnr_y", p.psnr}});
  }
  json report = {
    {"schema_version", kReportSchemaVersion},
    {"command", "rd-curve"},
    {"config", json::parse(base.toJson())},
    {"model_hash", model ? json(hashString(model->hash())) : json(nullptr)},
    {"frame_count", frames.size()},
    {"points", pts}};
  writeText(a.out + ".csv", csv.str());
  writeText(a.out + ".json", report.dump(2) + "\n");
  return 0;
}

}  // namespace

//============================================================================

int
main(int argc, char** argv)
{
  CLI::App app{"Learned dynamic point cloud attribute codec"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* cEnc = app.add_subcommand("encode", "encode a sequence");
  cEnc->add_option("--input", enc.input, "frame directory or manifest")->required();
  cEnc->add_option("--output", enc.output, "stream file")->required();
  cEnc->add_option("--config", enc.config, "codec config JSON");
  cEnc->add_option("--model", enc.model, "model file");
  cEnc->add_option("--report", enc.report, "report path (default stdout)");

  DecodeArgs dec;
  auto* cDec = app.add_subcommand("decode", "decode a stream");
  cDec->add_option("--input", dec.input, "stream file")->required();
  cDec->add_option("--geometry", dec.geometry, "frame directory or manifest")
    ->required();
  cDec->add_option("--output", dec.output, "output directory")->required();
  cDec->add_option("--model", dec.model, "model file");
  cDec->add_option("--report", dec.report, "report path (default stdout)");

  EvalArgs ev;
  auto* cEval = app.add_subcommand("eval", "compare decoded frames");
  cEval->add_option("--original", ev.original, "original frames")->required();
  cEval->add_option("--decoded", ev.decoded, "decoded frames")->required();
  cEval->add_option("--bits", ev.bits, "stream file")->required();
  cEval->add_option("--report", ev.report, "report path (default stdout)");

  TrainArgs tr;
  auto* cTrain = app.add_subcommand("train", "train a model");
  cTrain->add_option("--dataset", tr.dataset, "dataset spec JSON")->required();
  cTrain->add_option("--out", tr.out, "model file")->required();
  cTrain->add_option("--log", tr.log, "training log JSON");

  SynthArgs sy;
  auto* cSynth = app.add_subcommand("synth", "generate a synthetic sequence");
  cSynth->add_option("--spec", sy.spec, "sequence spec JSON")->required();
  cSynth->add_option("--out", sy.out, "output directory")->required();

  RdArgs rd;
  auto* cRd = app.add_subcommand("rd-curve", "sweep qstep");
  cRd->add_option("--input", rd.input, "frame directory or manifest")->required();
  cRd->add_option("--qsteps", rd.qsteps, "comma separated steps")
    ->default_val("5,10,20,40");
  cRd->add_option("--out", rd.out, "output prefix (.csv, .json)")->required();
  cRd->add_option("--config", rd.config, "codec config JSON");
  cRd->add_option("--model", rd.model, "model file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error Usage: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*cEnc)
      return runEncode(enc);
    if (*cDec)
      return runDecode(dec);
    if (*cEval)
      return runEval(ev);
    if (*cTrain)
      return runTrain(tr);
    if (*cSynth)
      return runSynth(sy);
    if (*cRd)
      return runRdCurve(rd);
  } catch (const Error& e) {
    std::cerr << "error " << errorCodeName(e.code()) << ": " << e.what() << "\n";
    return kExitLibraryBase + int(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error IoError: " << e.what() << "\n";
    return kExitLibraryBase + int(ErrorCode::kIoError);
  } catch (const std::exception& e) {
    std::cerr << "error Internal: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
