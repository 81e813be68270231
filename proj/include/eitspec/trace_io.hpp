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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "eitspec/fitting.hpp"
#include "eitspec/spectrum.hpp"

namespace eitspec {

// "# key = value" comment lines at the top of a trace file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

struct ReadOptions {
  std::vector<std::string>* warnings = nullptr;  // receives non-fatal notes
  Metadata* metadata = nullptr;                  // receives the '#' block
};

// CSV with header `delta_khz,rho_ee[,sigma]`. Rows are sorted on load (with a
// warning); NaN or malformed rows raise ParseError carrying the line number.
SpectrumTrace read_spectrum_trace(const std::filesystem::path& path,
                                  const ReadOptions& options = {});

// CSV with header `freq_khz,reflection_mag[,sigma]`.
ReflectionTrace read_reflection_trace(const std::filesystem::path& path,
                                      const ReadOptions& options = {});

// Detunings are written in kHz with 15 significant digits; populations and
// sigma are written in shortest round-trip form. Files are written to a temporary sibling and renamed into place.
void write_spectrum_trace(const std::filesystem::path& path,
                          const SpectrumTrace& trace,
                          const Metadata& metadata = {});
void write_reflection_trace(const std::filesystem::path& path,
                            const ReflectionTrace& trace,
                            const Metadata& metadata = {});

// Writes text to path via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

// Shortest decimal form that reads back to the same double.
std::string format_number(double v);
// 15 significant digits, for values that went through a unit conversion.
std::string format_converted(double v);

// Metadata entries describing ModelParams in linear kHz and the truncation.
Metadata params_metadata(const ModelParams& p, const HilbertConfig& h);

// Reads ModelParams fields written by params_metadata back from metadata;
// keys that are absent leave the corresponding field unchanged.
ModelParams params_from_metadata(const Metadata& metadata, ModelParams base);

}  // namespace eitspec
