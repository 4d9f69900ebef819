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

#include "pcc/nn/Adam.h"

#include <cmath>

namespace pcc::nn {

Adam::Adam(std::vector<Parameter*> params, AdamConfig config)
  : params_(std::move(params)), config_(config)
{
  for (auto* p : params_) {
    m_.emplace_back(p->value.rows, p->value.cols);
    v_.emplace_back(p->value.rows, p->value.cols);
    if (p->grad.size() != p->value.size())
      p->grad = Matrix(p->value.rows, p->value.cols);
  }
}

void
Adam::step()
{
  t_++;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, t_);
  const double c2 = 1.0 - std::pow(b2, t_);

  for (size_t k = 0; k < params_.size(); k++) {
    Parameter& p = *params_[k];
    Matrix& m = m_[k];
    Matrix& v = v_[k];
    for (size_t i = 0; i < p.value.size(); i++) {
      double gr = p.grad.data[i];
      m.data[i] = b1 * m.data[i] + (1 - b1) * gr;
      v.data[i] = b2 * v.data[i] + (1 - b2) * gr * gr;
      double mh = m.data[i] / c1;
      double vh = v.data[i] / c2;
      p.value.data[i] -= config_.lr * mh / (std::sqrt(vh) + config_.eps);
    }
  }
}

void
Adam::zeroGrad()
{
  for (auto* p : params_)
    p->grad.setZero();
}

}  // namespace pcc::nn
