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
#include <string>
#include <vector>

#include "Context.h"
#include "Motion.h"

namespace pcc {

struct ModelConfig {
  nn::DensityVariant density = nn::DensityVariant::kConditionalLaplace;
  ContextSwitches switches;
  uint64_t seed = 1;

  std::string toJson() const;
  static ModelConfig fromJson(const std::string& text);
};

//============================================================================
// All learned components used for predicted frames.

class Model {
public:
  explicit Model(const ModelConfig& config = {});

  const ModelConfig& config() const { return config_; }

  MotionEstimator me;
  MotionCompensator mc;
  ContextModel context;

  void setSwitches(ContextSwitches sw);

  std::vector<nn::Parameter*> parameters();
  std::vector<const nn::Parameter*> parameters() const;

  std::vector<uint8_t> serialize() const;
  static Model parse(std::span<const uint8_t> bytes);

  void save(const std::string& path) const;
  static Model load(const std::string& path);

  // Content hash of the serialised parameters; echoed in frame headers.
  uint64_t hash() const;

private:
  ModelConfig config_;
};

}  // namespace pcc
