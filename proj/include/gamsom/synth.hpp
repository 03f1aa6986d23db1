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

#ifndef GAMSOM_SYNTH_HPP
#define GAMSOM_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gamsom/corpus.hpp"

namespace gamsom {

/// Scale as ascending cents offsets, starting at 0 and ending at 1200.
struct ScaleSpec {
  std::string name;
  std::vector<double> steps_cents;

  static ScaleSpec tirus();
  static ScaleSpec begbeg();
  static ScaleSpec sedeng();
  /// Near-equidistant five-tone scale used as the fourth tonal identity.
  static ScaleSpec slendro6();
  static ScaleSpec custom(std::string name, std::vector<double> steps_cents);

  std::size_t degrees() const { return steps_cents.size(); }
  void validate() const;  // throws InvalidSpec
};

enum class ArticulationProfile { Flat, Articulated, LargeForm };

std::string to_string(ArticulationProfile p);
ArticulationProfile profile_from_string(const std::string& s);

struct Partial {
  double ratio = 1.0;  // frequency ratio to the note fundamental
  double amp = 1.0;    // base relative amplitude
};

/// Free-bar-like inharmonic partial set used by default.
std::vector<Partial> default_partials();

struct SynthPieceSpec {
  ScaleSpec scale = ScaleSpec::tirus();
  double tonic_hz = 220.0;
  double duration_s = 30.0;
  std::optional<double> ombak_hz;  // [2, 4] when present
  std::vector<Partial> partials = default_partials();
  ArticulationProfile profile = ArticulationProfile::Flat;
  double mod_hz = 0.0;  // 0 -> profile default (0.5 articulated, 0.01 large form)
  double note_rate_hz = 1.2;  // per voice
  int voices = 3;
  double decay_s = 0.8;
  std::uint64_t seed = 1;
  int sample_rate = 44100;

  double effective_mod_hz() const;
  void validate() const;  // throws InvalidSpec
};

/// One struck tone: exponentially decaying inharmonic partials at
/// tonic * 2^(cents/1200) * ratio_k. With ombak the fundamental is
/// realized as two detuned partials ombak_hz apart, beating at ombak_hz.
/// Throws InvalidDegree for out-of-range scale degrees.
std::vector<double> synth_tone(const SynthPieceSpec& spec, std::size_t degree,
                               double length_s);

/// Full piece: several voices running seeded note walks anchored at
/// spread scale degrees; the articulated/large-form profiles cross-fade
/// the partial balance sinusoidally at the profile's modulation rate, so
/// the spectral centroid (not the tuning) is modulated. Output is peak
/// normalized and quantized to float32 values. Deterministic given seed.
AudioClip synth_piece(const SynthPieceSpec& spec, const std::string& id = "");

/// One tone per non-octave scale degree, played back to back; used for
/// scale-fidelity measurements.
AudioClip render_scale(const SynthPieceSpec& spec, double tone_s = 4.0,
                       const std::string& id = "scale");

enum class RegionAssignment {
  ByEnsembleAlternate,       // ensemble 0 Indonesian, 1 Western, ...
  AlternateWithinEnsemble,   // piece 0 Indonesian, 1 Western, ... per ensemble
  AllIndonesian,
  AllWestern,
};

std::string to_string(RegionAssignment a);
RegionAssignment region_assignment_from_string(const std::string& s);

struct EnsembleSpec {
  std::string name;
  ScaleSpec scale;
  double tonic_hz = 220.0;
  std::optional<double> ombak_hz;
  /// Profiles cycled per piece for Indonesian-labeled pieces; Western
  /// pieces are always Flat.
  std::vector<ArticulationProfile> indonesian_profiles = {
      ArticulationProfile::Articulated, ArticulationProfile::LargeForm};
};

struct SynthCorpusSpec {
  std::string corpus_name = "synthetic";
  std::size_t n_ensembles = 3;
  std::size_t pieces_per_ensemble = 5;
  RegionAssignment region_assignment = RegionAssignment::ByEnsembleAlternate;
  std::uint64_t seed = 1;
  double duration_s = 30.0;             // flat / articulated pieces
  double duration_large_form_s = 210.0; // >= 2 periods of 0.01 Hz
  double note_rate_hz = 1.2;
  int voices = 3;
  /// When empty, ensembles are generated by cycling the named scales with
  /// staggered tonics and ombak rates.
  std::vector<EnsembleSpec> ensembles;
};

/// Materializes the ensemble list (applies defaults when empty).
std::vector<EnsembleSpec> resolve_ensembles(const SynthCorpusSpec& spec);

/// Renders the corpus: WAV files under out_dir/audio plus
/// out_dir/manifest.json with ensemble/region labels. Indonesian-labeled
/// pieces cycle the ensemble's profile list; Western pieces are flat.
/// Returns the manifest (paths resolved). Throws IoError on write
/// failures, InvalidSpec on inconsistent parameters.
CorpusManifest synth_corpus(const SynthCorpusSpec& spec,
                            const std::filesystem::path& out_dir);

}  // namespace gamsom

#endif  // GAMSOM_SYNTH_HPP
