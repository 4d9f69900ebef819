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

#include <cmath>
#include <cstdint>

namespace pcc {

//============================================================================

template<typename T>
struct Vec3 {
  T v[3]{};

  constexpr Vec3() = default;
  constexpr Vec3(T x, T y, T z) : v{x, y, z} {}

  template<typename U>
  explicit constexpr Vec3(const Vec3<U>& o)
    : v{T(o.v[0]), T(o.v[1]), T(o.v[2])}
  {}

  constexpr T& operator[](int i) { return v[i]; }
  constexpr const T& operator[](int i) const { return v[i]; }

  constexpr Vec3& operator+=(const Vec3& o)
  {
    for (int k = 0; k < 3; k++)
      v[k] += o.v[k];
    return *this;
  }

  constexpr Vec3& operator-=(const Vec3& o)
  {
    for (int k = 0; k < 3; k++)
      v[k] -= o.v[k];
    return *this;
  }

  constexpr Vec3& operator*=(T s)
  {
    for (int k = 0; k < 3; k++)
      v[k] *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, T s) { return a *= s; }
  friend constexpr Vec3 operator*(T s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator-(Vec3 a) { return a *= T(-1); }

  friend constexpr bool operator==(const Vec3& a, const Vec3& b)
  {
    return a.v[0] == b.v[0] && a.v[1] == b.v[1] && a.v[2] == b.v[2];
  }

  constexpr T dot(const Vec3& o) const
  {
    return v[0] * o.v[0] + v[1] * o.v[1] + v[2] * o.v[2];
  }

  constexpr T norm2() const { return dot(*this); }
};

using Vec3i = Vec3<int32_t>;
using Vec3d = Vec3<double>;

inline Vec3d
toReal(const Vec3i& p)
{
  return Vec3d(p[0], p[1], p[2]);
}

}  // namespace pcc
