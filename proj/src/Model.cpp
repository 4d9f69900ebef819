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

#include "pcc/Model.h"

#include <nlohmann/json.hpp>

#include "pcc/Error.h"
#include "pcc/nn/ParameterFile.h"

namespace pcc {

using json = nlohmann::json;

std::string
ModelConfig::toJson() const
{
  json j;
  j["density"] = nn::toString(density);
  j["explicit_context"] = switches.explicitContext;
  j["implicit_context"] = switches.implicitContext;
  j["seed"] = seed;
  return j.dump();
}

ModelConfig
ModelConfig::fromJson(const std::string& text)
{
  ModelConfig c;
  try {
    json j = json::parse(text);
    c.density = nn::densityVariantFromString(
      j.value("density", std::string("conditional_laplace")));
    c.switches.explicitContext = j.value("explicit_context", true);
    c.switches.implicitContext = j.value("implicit_context", true);
    c.seed = j.value("seed", uint64_t(1));
  } catch (const json::exception& e) {
    raise(ErrorCode::kConfigError, std::string("model config: ") + e.what());
  }
  return c;
}

//============================================================================

Model::Model(const ModelConfig& config) : config_(config)
{
  Rng rng(config.seed);
  me = MotionEstimator(rng);
  mc = MotionCompensator(rng);
  context = ContextModel(rng, config.density, config.switches);
}

void
Model::setSwitches(ContextSwitches sw)
{
  context.setSwitches(sw);
  config_.switches = sw;
}

std::vector<nn::Parameter*>
Model::parameters()
{
  auto p = me.parameters();
  for (auto* q : mc.parameters())
    p.push_back(q);
  for (auto* q : context.parameters())
    p.push_back(q);
  return p;
}

std::vector<const nn::Parameter*>
Model::parameters() const
{
  auto p = me.parameters();
  for (const auto* q : mc.parameters())
    p.push_back(q);
  for (const auto* q : context.parameters())
    p.push_back(q);
  return p;
}

std::vector<uint8_t>
Model::serialize() const
{
  auto params = parameters();
  return nn::serializeParameters(config_.toJson(), params);
}

Model
Model::parse(std::span<const uint8_t> bytes)
{
  nn::ParameterFile f = nn::parseParameters(bytes);
  Model m(ModelConfig::fromJson(f.config));
  auto params = m.parameters();
  nn::assignParameters(f, params);
  return m;
}

void
Model::save(const std::string& path) const
{
  nn::writeFileBytes(path, serialize());
}

Model
Model::load(const std::string& path)
{
  return parse(nn::readFileBytes(path));
}

uint64_t
Model::hash() const
{
  auto bytes = serialize();
  return nn::fnv1a64(std::span<const uint8_t>(bytes).first(bytes.size() - 8));
}

}  // namespace pcc
