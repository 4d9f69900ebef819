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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "PointFrame.h"

namespace pcc {

//============================================================================
// PLY support: ascii and binary_little_endian, vertex element with x y z and
// red green blue.  Other vertex properties are skipped.

enum class PlyFormat
{
  kAscii,
  kBinaryLittleEndian,
};

RawPointCloud readPly(const std::filesystem::path& path);
RawPointCloud parsePly(const std::string& bytes);

void writePly(
  const PointFrame& frame, const std::filesystem::path& path,
  PlyFormat format = PlyFormat::kBinaryLittleEndian);

std::string
serializePly(const RawPointCloud& cloud, PlyFormat format);

RawPointCloud toRawCloud(const PointFrame& frame);

//----------------------------------------------------------------------------
// Per-point motion vectors stored alongside frames: vertex x y z fx fy fz.

void writeFlowPly(
  std::span<const Vec3i> positions, std::span<const Vec3d> flow,
  const std::filesystem::path& path);

std::vector<Vec3d> readFlowPly(const std::filesystem::path& path);

//----------------------------------------------------------------------------
// A sequence is either a directory of .ply files (lexicographic order) or a
// JSON manifest {"frames": ["a.ply", ...]} with paths relative to it.

std::vector<std::filesystem::path>
listSequence(const std::filesystem::path& dirOrManifest);

void writeManifest(
  const std::filesystem::path& manifest,
  std::span<const std::filesystem::path> frames);

// Loads a sequence: clouds already voxelized at |depth| are used as is,
// otherwise all frames are voxelized with one shared bounding box.
std::vector<PointFrame>
loadSequence(const std::filesystem::path& dirOrManifest, int depth);

}  // namespace pcc
