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

#include "pcc/PlyIO.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pcc/Error.h"

namespace pcc {

namespace fs = std::filesystem;

//============================================================================

namespace {

  enum class PlyType
  {
    kInt8,
    kUint8,
    kInt16,
    kUint16,
    kInt32,
    kUint32,
    kFloat32,
    kFloat64,
  };

  PlyType parseType(const std::string& s)
  {
    static const std::map<std::string, PlyType> types = {
      {"char", PlyType::kInt8},      {"int8", PlyType::kInt8},
      {"uchar", PlyType::kUint8},    {"uint8", PlyType::kUint8},
      {"short", PlyType::kInt16},    {"int16", PlyType::kInt16},
      {"ushort", PlyType::kUint16},  {"uint16", PlyType::kUint16},
      {"int", PlyType::kInt32},      {"int32", PlyType::kInt32},
      {"uint", PlyType::kUint32},    {"uint32", PlyType::kUint32},
      {"float", PlyType::kFloat32},  {"float32", PlyType::kFloat32},
      {"double", PlyType::kFloat64}, {"float64", PlyType::kFloat64},
    };
    auto it = types.find(s);
    if (it == types.end())
      raise(ErrorCode::kParseError, "unknown PLY type '" + s + "'");
    return it->second;
  }

  int typeSize(PlyType t)
  {
    switch (t) {
    case PlyType::kInt8:
    case PlyType::kUint8: return 1;
    case PlyType::kInt16:
    case PlyType::kUint16: return 2;
    case PlyType::kInt32:
    case PlyType::kUint32:
    case PlyType::kFloat32: return 4;
    case PlyType::kFloat64: return 8;
    }
    return 0;
  }

  double readBinary(const char* p, PlyType t)
  {
    switch (t) {
    case PlyType::kInt8: return double(int8_t(*p));
    case PlyType::kUint8: return double(uint8_t(*p));
    case PlyType::kInt16: { int16_t v; std::memcpy(&v, p, 2); return v; }
    case PlyType::kUint16: { uint16_t v; std::memcpy(&v, p, 2); return v; }
    case PlyType::kInt32: { int32_t v; std::memcpy(&v, p, 4); return v; }
    case PlyType::kUint32: { uint32_t v; std::memcpy(&v, p, 4); return v; }
    case PlyType::kFloat32: { float v; std::memcpy(&v, p, 4); return v; }
    case PlyType::kFloat64: { double v; std::memcpy(&v, p, 8); return v; }
    }
    return 0;
  }

  struct Property {
    std::string name;
    PlyType type;
  };

  struct Element {
    std::string name;
    size_t count = 0;
    std::vector<Property> props;
    bool hasList = false;
  };

  struct Header {
    bool binary = false;
    std::vector<Element> elements;
    size_t bodyOffset = 0;
  };

  Header parseHeader(const std::string& bytes)
  {
    Header h;
    size_t pos = 0;
    auto nextLine = [&]() -> std::string {
      size_t e = bytes.find('\n', pos);
      if (e == std::string::npos)
        raise(ErrorCode::kParseError, "PLY header not terminated");
      std::string line = bytes.substr(pos, e - pos);
      pos = e + 1;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      return line;
    };

    if (nextLine() != "ply")
      raise(ErrorCode::kParseError, "missing 'ply' magic");

    bool haveFormat = false;
    for (;;) {
      std::string line = nextLine();
      std::istringstream ss(line);
      std::string kw;
      ss >> kw;
      if (kw == "end_header")
        break;
      if (kw == "comment" || kw == "obj_info" || kw.empty())
        continue;
      if (kw == "format") {
        std::string fmt, ver;
        ss >> fmt >> ver;
        if (fmt == "ascii")
          h.binary = false;
        else if (fmt == "binary_little_endian")
          h.binary = true;
        else
          raise(ErrorCode::kParseError, "unsupported PLY format '" + fmt + "'");
        haveFormat = true;
      } else if (kw == "element") {
        Element e;
        long long n = -1;
        ss >> e.name >> n;
        if (!ss || n < 0)
          raise(ErrorCode::kParseError, "bad element line: " + line);
        e.count = size_t(n);
        h.elements.push_back(e);
      } else if (kw == "property") {
        if (h.elements.empty())
          raise(ErrorCode::kParseError, "property before element");
        std::string type;
        ss >> type;
        if (type == "list") {
          h.elements.back().hasList = true;
          std::string a, b, name;
          ss >> a >> b >> name;
          continue;
        }
        std::string name;
        ss >> name;
        if (!ss)
          raise(ErrorCode::kParseError, "bad property line: " + line);
        h.elements.back().props.push_back({name, parseType(type)});
      } else {
        raise(ErrorCode::kParseError, "unexpected header keyword '" + kw + "'");
      }
    }
    if (!haveFormat)
      raise(ErrorCode::kParseError, "missing format line");
    h.bodyOffset = pos;
    return h;
  }

  // Reads the vertex element into one vector of doubles per requested name.
  std::vector<std::vector<double>> readVertexColumns(
    const std::string& bytes, const std::vector<std::string>& wanted,
    const std::vector<bool>& required)
  {
    Header h = parseHeader(bytes);

    size_t vertexElem = h.elements.size();
    for (size_t i = 0; i < h.elements.size(); i++)
      if (h.elements[i].name == "vertex") {
        vertexElem = i;
        break;
      }
    if (vertexElem == h.elements.size())
      raise(ErrorCode::kParseError, "no vertex element");
    const Element& ve = h.elements[vertexElem];
    if (ve.count == 0)
      raise(ErrorCode::kParseError, "empty vertex element");
    if (ve.hasList)
      raise(ErrorCode::kParseError, "list properties on vertex unsupported");

    std::vector<int> column(wanted.size(), -1);
    for (size_t w = 0; w < wanted.size(); w++) {
      for (size_t p = 0; p < ve.props.size(); p++)
        if (ve.props[p].name == wanted[w])
          column[w] = int(p);
      if (column[w] < 0 && required[w]) {
        bool isColor = wanted[w] == "red" || wanted[w] == "green"
          || wanted[w] == "blue";
        raise(
          isColor ? ErrorCode::kMissingProperty : ErrorCode::kParseError,
          "missing vertex property '" + wanted[w] + "'");
      }
    }

    std::vector<std::vector<double>> out(wanted.size());
    for (auto& c : out)
      c.resize(ve.count);

    size_t pos = h.bodyOffset;
    if (h.binary) {
      for (size_t i = 0; i < vertexElem; i++) {
        if (h.elements[i].hasList)
          raise(ErrorCode::kParseError, "list element before vertex");
        size_t stride = 0;
        for (auto& p : h.elements[i].props)
          stride += typeSize(p.type);
        pos += stride * h.elements[i].count;
      }
      std::vector<size_t> offset(ve.props.size());
      size_t stride = 0;
      for (size_t p = 0; p < ve.props.size(); p++) {
        offset[p] = stride;
        stride += typeSize(ve.props[p].type);
      }
      if (pos + stride * ve.count > bytes.size())
        raise(ErrorCode::kParseError, "truncated binary PLY body");
      for (size_t i = 0; i < ve.count; i++) {
        const char* rec = bytes.data() + pos + i * stride;
        for (size_t w = 0; w < wanted.size(); w++)
          if (column[w] >= 0) {
            int c = column[w];
            out[w][i] = readBinary(rec + offset[c], ve.props[c].type);
          }
      }
    } else {
      std::istringstream ss(bytes.substr(pos));
      std::string line;
      for (size_t i = 0; i < vertexElem; i++)
        for (size_t n = 0; n < h.elements[i].count; n++)
          if (!std::getline(ss, line))
            raise(ErrorCode::kParseError, "truncated ascii PLY body");
      std::vector<double> vals(ve.props.size());
      for (size_t i = 0; i < ve.count; i++) {
        if (!std::getline(ss, line))
          raise(ErrorCode::kParseError, "truncated ascii PLY body");
        std::istringstream ls(line);
        for (auto& v : vals)
          if (!(ls >> v))
            raise(ErrorCode::kParseError, "malformed ascii vertex line");
        for (size_t w = 0; w < wanted.size(); w++)
          if (column[w] >= 0)
            out[w][i] = vals[column[w]];
      }
    }
    return out;
  }

  std::string readFile(const fs::path& path)
  {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      raise(ErrorCode::kIoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void writeFile(const fs::path& path, const std::string& bytes)
  {
    std::ofstream out(path, std::ios::binary);
    if (!out)
      raise(ErrorCode::kIoError, "cannot write " + path.string());
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out)
      raise(ErrorCode::kIoError, "write failed for " + path.string());
  }

  template<typename T>
  void appendLE(std::string& out, T v)
  {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
  }

}  // namespace

//============================================================================

RawPointCloud
parsePly(const std::string& bytes)
{
  auto cols = readVertexColumns(
    bytes, {"x", "y", "z", "red", "green", "blue"},
    {true, true, true, true, true, true});

  RawPointCloud cloud;
  size_t n = cols[0].size();
  cloud.positions.resize(n);
  cloud.colors.resize(n);
  for (size_t i = 0; i < n; i++) {
    cloud.positions[i] = Vec3d(cols[0][i], cols[1][i], cols[2][i]);
    for (int k = 0; k < 3; k++) {
      double c = cols[3 + k][i];
      if (!(c >= 0 && c <= 255))
        raise(ErrorCode::kParseError, "color component outside [0, 255]");
      cloud.colors[i][k] = uint8_t(c);
    }
  }
  return cloud;
}

RawPointCloud
readPly(const fs::path& path)
{
  return parsePly(readFile(path));
}

std::string
serializePly(const RawPointCloud& cloud, PlyFormat format)
{
  if (cloud.positions.empty())
    raise(ErrorCode::kShapeMismatch, "cannot write an empty point cloud");

  std::string out;
  out += "ply\n";
  out += format == PlyFormat::kAscii ? "format ascii 1.0\n"
                                     : "format binary_little_endian 1.0\n";
  out += "element vertex " + std::to_string(cloud.size()) + "\n";
  out += "property float x\nproperty float y\nproperty float z\n";
  out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out += "end_header\n";

  for (size_t i = 0; i < cloud.size(); i++) {
    const auto& p = cloud.positions[i];
    const auto& c = cloud.colors[i];
    if (format == PlyFormat::kAscii) {
      std::ostringstream ss;
      ss.precision(9);
      ss << float(p[0]) << ' ' << float(p[1]) << ' ' << float(p[2]) << ' '
         << int(c[0]) << ' ' << int(c[1]) << ' ' << int(c[2]) << '\n';
      out += ss.str();
    } else {
      for (int k = 0; k < 3; k++)
        appendLE(out, float(p[k]));
      for (int k = 0; k < 3; k++)
        out.push_back(char(c[k]));
    }
  }
  return out;
}

RawPointCloud
toRawCloud(const PointFrame& frame)
{
  RawPointCloud cloud;
  for (size_t i = 0; i < frame.size(); i++) {
    cloud.positions.push_back(toReal(frame.positions[i]));
    cloud.colors.push_back(yuvToRgb(frame.attributes[i]));
  }
  return cloud;
}

void
writePly(const PointFrame& frame, const fs::path& path, PlyFormat format)
{
  if (frame.positions.empty())
    raise(ErrorCode::kShapeMismatch, "cannot write an empty frame");
  writeFile(path, serializePly(toRawCloud(frame), format));
}

//============================================================================

void
writeFlowPly(
  std::span<const Vec3i> positions, std::span<const Vec3d> flow,
  const fs::path& path)
{
  if (positions.size() != flow.size())
    raise(ErrorCode::kLengthMismatch, "flow/positions length differ");
  if (positions.empty())
    raise(ErrorCode::kShapeMismatch, "cannot write an empty flow field");

  std::string out;
  out += "ply\nformat binary_little_endian 1.0\n";
  out += "element vertex " + std::to_string(positions.size()) + "\n";
  out += "property float x\nproperty float y\nproperty float z\n";
  out += "property double fx\nproperty double fy\nproperty double fz\n";
  out += "end_header\n";
  for (size_t i = 0; i < positions.size(); i++) {
    for (int k = 0; k < 3; k++)
      appendLE(out, float(positions[i][k]));
    for (int k = 0; k < 3; k++)
      appendLE(out, flow[i][k]);
  }
  writeFile(path, out);
}

std::vector<Vec3d>
readFlowPly(const fs::path& path)
{
  auto cols =
    readVertexColumns(readFile(path), {"fx", "fy", "fz"}, {true, true, true});
  std::vector<Vec3d> flow(cols[0].size());
  for (size_t i = 0; i < flow.size(); i++)
    flow[i] = Vec3d(cols[0][i], cols[1][i], cols[2][i]);
  return flow;
}

//============================================================================

std::vector<fs::path>
listSequence(const fs::path& dirOrManifest)
{
  std::vector<fs::path> frames;
  if (fs::is_directory(dirOrManifest)) {
    for (const auto& e : fs::directory_iterator(dirOrManifest))
      if (e.is_regular_file() && e.path().extension() == ".ply"
          && e.path().filename().string().rfind("flow_", 0) != 0)
        frames.push_back(e.path());
    std::sort(frames.begin(), frames.end());
  } else {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(readFile(dirOrManifest));
      for (const auto& f : j.at("frames"))
        frames.push_back(dirOrManifest.parent_path() / f.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      raise(ErrorCode::kParseError, std::string("bad manifest: ") + e.what());
    }
  }
  if (frames.empty())
    raise(ErrorCode::kIoError, "no frames in " + dirOrManifest.string());
  return frames;
}

void
writeManifest(const fs::path& manifest, std::span<const fs::path> frames)
{
  nlohmann::json j;
  j["frames"] = nlohmann::json::array();
  for (const auto& f : frames)
    j["frames"].push_back(f.lexically_relative(manifest.parent_path()).string());
  writeFile(manifest, j.dump(2) + "\n");
}

std::vector<PointFrame>
loadSequence(const fs::path& dirOrManifest, int depth)
{
  std::vector<RawPointCloud> clouds;
  bool voxelized = true;
  for (const auto& p : listSequence(dirOrManifest)) {
    clouds.push_back(readPly(p));
    voxelized = voxelized && isVoxelized(clouds.back(), depth);
  }

  if (!voxelized)
    return voxelizeSequence(clouds, depth);

  std::vector<PointFrame> frames;
  for (size_t i = 0; i < clouds.size(); i++) {
    frames.push_back(frameFromVoxels(clouds[i], depth));
    frames.back().frameIndex = int(i);
  }
  return frames;
}

}  // namespace pcc
