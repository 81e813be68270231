// Copyright 2026 The eitspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <numbers>

namespace eitspec::units {

// External interfaces quote linear frequencies in kHz ("2pi x 100 kHz" is
// written as 100); the library works in angular units (rad/s) throughout.
inline constexpr double kAngularPerKhz = 2.0 * std::numbers::pi * 1.0e3;

constexpr double khz_to_angular(double khz) { return khz * kAngularPerKhz; }
constexpr double angular_to_khz(double angular) {
  return angular / kAngularPerKhz;
}
constexpr double angular_to_hz(double angular) {
  return angular / (2.0 * std::numbers::pi);
}
constexpr double hz_to_angular(double hz) {
  return hz * 2.0 * std::numbers::pi;
}

}  // namespace eitspec::units
