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

#include "pcc/Error.h"

namespace pcc {

std::string_view
errorCodeName(ErrorCode code)
{
  switch (code) {
  case ErrorCode::kParseError: return "ParseError";
  case ErrorCode::kMissingProperty: return "MissingProperty";
  case ErrorCode::kDegenerateCloud: return "DegenerateCloud";
  case ErrorCode::kGeometryMismatch: return "GeometryMismatch";
  case ErrorCode::kShapeMismatch: return "ShapeMismatch";
  case ErrorCode::kOverflow: return "Overflow";
  case ErrorCode::kModelMissing: return "ModelMissing";
  case ErrorCode::kModelMismatch: return "ModelMismatch";
  case ErrorCode::kEmptyNeighborhood: return "EmptyNeighborhood";
  case ErrorCode::kLengthMismatch: return "LengthMismatch";
  case ErrorCode::kSymbolOutOfAlphabet: return "SymbolOutOfAlphabet";
  case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
  case ErrorCode::kBadMagic: return "BadMagic";
  case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
  case ErrorCode::kMissingReference: return "MissingReference";
  case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
  case ErrorCode::kDivergenceDetected: return "DivergenceDetected";
  case ErrorCode::kConfigError: return "ConfigError";
  case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pcc
