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

#ifndef GAMSOM_CORPUS_HPP
#define GAMSOM_CORPUS_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace gamsom {

enum class Region { Indonesian, Western };

std::string to_string(Region region);
Region region_from_string(const std::string& s);  // throws ValidationError

struct RecordingEntry {
  std::string id;
  std::string path;           // as written in the manifest (relative allowed)
  std::filesystem::path resolved_path;  // absolute, filled by load_manifest
  std::string title;
  std::string ensemble;
  Region region = Region::Indonesian;
};

struct CorpusManifest {
  std::string corpus_name;
  std::vector<RecordingEntry> entries;

  const RecordingEntry* find(const std::string& id) const;
};

/// Normalized mono signal attached to a manifest entry.
struct AudioClip {
  std::vector<double> samples;  // dimensionless, |x| <= 1 after decode
  int sample_rate = 0;
  std::string source_id;

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// Loads and validates a manifest JSON file. Relative entry paths are
/// resolved against the manifest's directory; every path must exist.
/// Throws ParseError on malformed JSON, ValidationError on duplicate ids,
/// unknown regions, empty entry lists, or unresolvable paths.
CorpusManifest load_manifest(const std::filesystem::path& path);

/// Writes a manifest JSON file. Entry `path` fields are emitted verbatim.
void save_manifest(const CorpusManifest& manifest,
                   const std::filesystem::path& path,
                   const std::string& provenance_json = "");

/// Decodes the entry's WAV file and downmixes to mono (channel mean).
AudioClip decode_audio(const RecordingEntry& entry);

/// Writes the clip as mono 32-bit float WAV (see write_wav_f32_mono).
void encode_audio(const AudioClip& clip, const std::filesystem::path& path);

}  // namespace gamsom

#endif  // GAMSOM_CORPUS_HPP
