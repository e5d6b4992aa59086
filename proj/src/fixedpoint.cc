// Copyright 2026 The ppimpute Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppimpute/fixedpoint.h"

#include <cmath>

namespace ppimpute {

void FxConfig::validate() const {
  if (frac_bits < 1 || frac_bits > 30) {
    throw std::invalid_argument("frac_bits must be in [1, 30], got " +
                                std::to_string(frac_bits));
  }
}

double FxConfig::max_magnitude() const {
  return std::ldexp(1.0, kRingBits - 1 - frac_bits);
}

RingElement encode(double x, const FxConfig& cfg) {
  if (!std::isfinite(x) || std::fabs(x) >= cfg.max_magnitude()) {
    throw OverflowError("value " + std::to_string(x) +
                        " is not representable with " +
                        std::to_string(cfg.frac_bits) + " fractional bits");
  }
  // std::round rounds half away from zero.
  const double scaled = std::round(std::ldexp(x, cfg.frac_bits));
  return static_cast<RingElement>(static_cast<std::int64_t>(scaled));
}

double decode(RingElement v, const FxConfig& cfg) {
  return std::ldexp(static_cast<double>(as_signed(v)), -cfg.frac_bits);
}


}  // namespace ppimpute
