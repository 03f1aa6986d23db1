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

#ifndef GAMSOM_CONFIG_HPP
#define GAMSOM_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "gamsom/som.hpp"
#include "gamsom/spectral.hpp"
#include "gamsom/synth.hpp"

namespace gamsom {

/// Effective pipeline configuration. The frame geometry (frame_len 16384,
/// hop 8192, Hann window) is immutable; a config file naming different
/// values is rejected.
struct PipelineConfig {
  // [extract]
  TuningAxis tuning_axis = TuningAxis::Linear;
  int jobs = 0;  // 0 -> hardware concurrency

  // [som]
  SomParams som;
  std::uint64_t seed = 1;

  // [synth]
  SynthCorpusSpec synth;

  // [output]
  std::string out_dir = "out";
};

/// Parses a TOML-style config file ([section], key = value, # comments).
/// Unknown sections/keys raise ParseError; frame geometry overrides raise
/// InvalidParams. Starts from defaults (or `base` when given).
PipelineConfig load_config(const std::filesystem::path& path,
                           const PipelineConfig& base = {});
PipelineConfig parse_config(const std::string& text,
                            const PipelineConfig& base = {});

/// Canonical serialization of the effective config; hashed into every
/// artifact's provenance block.
std::string effective_config_json(const PipelineConfig& config);
std::string config_hash(const PipelineConfig& config);

}  // namespace gamsom

#endif  // GAMSOM_CONFIG_HPP
