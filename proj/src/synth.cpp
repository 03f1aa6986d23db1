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

#include "gamsom/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gamsom/errors.hpp"
#include "gamsom/rng.hpp"
#include "gamsom/wav.hpp"

namespace gamsom {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Brightness weight per partial for the articulation cross-fade: the
// fundamental is attenuated and upper partials boosted as the balance
// parameter rises, which moves the spectral centroid without touching
// the tuning.
double bright_weight(std::size_t partial_index, double ratio) {
  if (partial_index == 0) return 0.15;
  return std::clamp(0.75 * ratio, 1.0, 6.0);
}

// Adds one exponentially decaying partial via a complex phasor
// recurrence. beta (per-sample balance in [0,1]) may be null.
void add_partial(double* buf, const double* beta, std::size_t len, double freq_hz,
                 double amp, double w_minus_1, double decay_per_sample,
                 double sample_rate) {
  const double dphi = kTwoPi * freq_hz / sample_rate;
  const double sr = decay_per_sample * std::cos(dphi);
  const double si = decay_per_sample * std::sin(dphi);
  double zr = amp;
  double zi = 0.0;
  if (beta != nullptr) {
    for (std::size_t i = 0; i < len; ++i) {
      buf[i] += zi * (1.0 + beta[i] * w_minus_1);
      const double nr = zr * sr - zi * si;
      zi = zr * si + zi * sr;
      zr = nr;
    }
  } else {
    for (std::size_t i = 0; i < len; ++i) {
      buf[i] += zi;
      const double nr = zr * sr - zi * si;
      zi = zr * si + zi * sr;
      zr = nr;
    }
  }
}

// Renders one struck note into buf at offset, with optional ombak pair on
// the fundamental and optional per-sample balance modulation.
void add_note(std::vector<double>& buf, const std::vector<double>* beta,
              const SynthPieceSpec& spec, double f0, double note_amp,
              std::size_t offset, std::size_t len) {
  if (offset >= buf.size()) return;
  len = std::min(len, buf.size() - offset);
  if (len == 0) return;
  const double fs = spec.sample_rate;
  const double decay = std::exp(-1.0 / (spec.decay_s * fs));
  double* out = buf.data() + offset;
  const double* b = beta ? beta->data() + offset : nullptr;

  for (std::size_t k = 0; k < spec.partials.size(); ++k) {
    const Partial& partial = spec.partials[k];
    const double f = f0 * partial.ratio;
    if (f <= 0.0 || f >= 0.45 * fs) continue;
    const double amp = note_amp * partial.amp;
    const double w1 = bright_weight(k, partial.ratio) - 1.0;
    if (k == 0 && spec.ombak_hz) {
      const double half = *spec.ombak_hz / 2.0;
      add_partial(out, b, len, f - half, amp / 2.0, w1, decay, fs);
      add_partial(out, b, len, f + half, amp / 2.0, w1, decay, fs);
    } else {
      add_partial(out, b, len, f, amp, w1, decay, fs);
    }
  }
}

// Peak-normalizes to 0.95 and quantizes through float32 so that a WAV
// round trip reproduces the clip bit-exactly.
AudioClip finalize_clip(std::vector<double> buf, int sample_rate,
                        const std::string& id) {
  double peak = 0.0;
  for (const double x : buf) peak = std::max(peak, std::abs(x));
  const double scale = peak > 0.0 ? 0.95 / peak : 1.0;
  for (double& x : buf) {
    x = static_cast<double>(static_cast<float>(x * scale));
  }
  AudioClip clip;
  clip.samples = std::move(buf);
  clip.sample_rate = sample_rate;
  clip.source_id = id;
  return clip;
}

}  // namespace

ScaleSpec ScaleSpec::tirus() {
  return {"tirus", {0, 197, 377, 724, 828, 1200}};
}
ScaleSpec ScaleSpec::begbeg() {
  return {"begbeg", {0, 120, 234, 666, 747, 1200}};
}
ScaleSpec ScaleSpec::sedeng() {
  return {"sedeng", {0, 136, 291, 670, 804, 1200}};
}
ScaleSpec ScaleSpec::slendro6() {
  return {"slendro6", {0, 240, 480, 720, 960, 1200}};
}
ScaleSpec ScaleSpec::custom(std::string name, std::vector<double> steps_cents) {
  ScaleSpec s{std::move(name), std::move(steps_cents)};
  s.validate();
  return s;
}

void ScaleSpec::validate() const {
  if (steps_cents.size() < 2 || steps_cents.front() != 0.0 ||
      steps_cents.back() != 1200.0) {
    throw InvalidSpec("scale steps must start at 0 and end at 1200 cents");
  }
  for (std::size_t i = 1; i < steps_cents.size(); ++i) {
    if (steps_cents[i] <= steps_cents[i - 1]) {
      throw InvalidSpec("scale steps must be strictly ascending");
    }
  }
}

std::string to_string(ArticulationProfile p) {
  switch (p) {
    case ArticulationProfile::Flat: return "flat";
    case ArticulationProfile::Articulated: return "articulated";
    case ArticulationProfile::LargeForm: return "large_form";
  }
  return "flat";
}

ArticulationProfile profile_from_string(const std::string& s) {
  if (s == "flat") return ArticulationProfile::Flat;
  if (s == "articulated") return ArticulationProfile::Articulated;
  if (s == "large_form") return ArticulationProfile::LargeForm;
  throw ValidationError("unknown articulation profile \"" + s + "\"");
}

std::vector<Partial> default_partials() {
  return {{1.0, 1.0}, {2.76, 0.45}, {5.40, 0.2}, {8.93, 0.08}};
}

double SynthPieceSpec::effective_mod_hz() const {
  if (mod_hz > 0.0) return mod_hz;
  switch (profile) {
    case ArticulationProfile::Articulated: return 0.5;
    case ArticulationProfile::LargeForm: return 0.01;
    case ArticulationProfile::Flat: return 0.0;
  }
  return 0.0;
}

void SynthPieceSpec::validate() const {
  scale.validate();
  if (tonic_hz <= 0.0) throw InvalidSpec("tonic must be positive");
  if (duration_s <= 0.0) throw InvalidSpec("duration must be positive");
  if (sample_rate <= 0) throw InvalidSpec("sample rate must be positive");
  if (note_rate_hz <= 0.0) throw InvalidSpec("note rate must be positive");
  if (voices < 1) throw InvalidSpec("need at least one voice");
  if (decay_s <= 0.0) throw InvalidSpec("decay must be positive");
  if (partials.empty()) throw InvalidSpec("need at least one partial");
  if (ombak_hz && (*ombak_hz < 2.0 || *ombak_hz > 4.0)) {
    throw InvalidSpec("ombak rate must lie in [2, 4] Hz");
  }
  const double mod = effective_mod_hz();
  if (mod > 0.0 && duration_s * mod < 2.0) {
    throw InvalidSpec("duration too short for two periods of the " +
                      std::to_string(mod) + " Hz form modulation");
  }
}

std::vector<double> synth_tone(const SynthPieceSpec& spec, std::size_t degree,
                               double length_s) {
  spec.validate();
  if (degree >= spec.scale.degrees()) {
    throw InvalidDegree("scale degree " + std::to_string(degree) +
                        " out of range (scale has " +
                        std::to_string(spec.scale.degrees()) + " degrees)");
  }
  if (length_s <= 0.0) throw InvalidSpec("tone length must be positive");
  const auto n = static_cast<std::size_t>(std::llround(length_s * spec.sample_rate));
  std::vector<double> buf(n, 0.0);
  const double f0 =
      spec.tonic_hz * std::pow(2.0, spec.scale.steps_cents[degree] / 1200.0);
  add_note(buf, nullptr, spec, f0, 1.0, 0, n);
  return buf;
}

AudioClip synth_piece(const SynthPieceSpec& spec, const std::string& id) {
  spec.validate();
  const double fs = spec.sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * fs));
  std::vector<double> buf(n, 0.0);

  // Per-sample partial-balance curve; raised-cosine so modulation starts
  // smoothly from the dark balance.
  std::vector<double> beta;
  const std::vector<double>* beta_ptr = nullptr;
  const double mod = spec.effective_mod_hz();
  if (spec.profile != ArticulationProfile::Flat && mod > 0.0) {
    beta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      beta[i] = 0.5 * (1.0 - std::cos(kTwoPi * mod * static_cast<double>(i) / fs));
    }
    beta_ptr = &beta;
  }

  const auto n_degrees = spec.scale.degrees();
  const double note_period = 1.0 / spec.note_rate_hz;
  const double note_len_s = 4.6 * spec.decay_s;  // cut the tail at -40 dB

  for (int v = 0; v < spec.voices; ++v) {
    // Voices anchor at spread scale degrees and wander one step around
    // the anchor, so the ensemble covers the scale while per-voice pitch
    // variance stays small.
    std::size_t anchor;
    if (spec.voices == 1) {
      anchor = (n_degrees - 1) / 2;
    } else {
      anchor = static_cast<std::size_t>(std::llround(
          static_cast<double>(v) * static_cast<double>(n_degrees - 1) /
          static_cast<double>(spec.voices - 1)));
    }

    Rng rng(splitmix64(spec.seed + 0x1000ull * (v + 1)));
    for (std::size_t i = 0;; ++i) {
      const double jitter = 0.3 * (rng.uniform() - 0.5);
      const double t = (static_cast<double>(i) + jitter) * note_period;
      if (t >= spec.duration_s) break;
      const auto offset = static_cast<std::size_t>(std::llround(std::max(t, 0.0) * fs));
      const int step = static_cast<int>(rng.bounded(3)) - 1;
      const auto degree = static_cast<std::size_t>(std::clamp(
          static_cast<int>(anchor) + step, 0, static_cast<int>(n_degrees) - 1));
      const double amp = 0.75 + 0.5 * rng.uniform();
      const double f0 =
          spec.tonic_hz * std::pow(2.0, spec.scale.steps_cents[degree] / 1200.0);
      const auto len = static_cast<std::size_t>(std::llround(note_len_s * fs));
      add_note(buf, beta_ptr, spec, f0, amp, offset, len);
    }
  }

  return finalize_clip(std::move(buf), spec.sample_rate, id);
}

AudioClip render_scale(const SynthPieceSpec& spec, double tone_s,
                       const std::string& id) {
  spec.validate();
  if (tone_s <= 0.0) throw InvalidSpec("tone length must be positive");
  const double fs = spec.sample_rate;
  const std::size_t n_tones = spec.scale.degrees() - 1;  // skip the octave repeat
  const auto n = static_cast<std::size_t>(std::llround(tone_s * fs)) * n_tones;
  std::vector<double> buf(n, 0.0);
  for (std::size_t d = 0; d < n_tones; ++d) {
    const double f0 =
        spec.tonic_hz * std::pow(2.0, spec.scale.steps_cents[d] / 1200.0);
    const auto offset = static_cast<std::size_t>(std::llround(tone_s * fs)) * d;
    const auto len = static_cast<std::size_t>(std::llround(tone_s * fs));
    add_note(buf, nullptr, spec, f0, 1.0, offset, len);
  }
  return finalize_clip(std::move(buf), spec.sample_rate, id);
}

std::string to_string(RegionAssignment a) {
  switch (a) {
    case RegionAssignment::ByEnsembleAlternate: return "by_ensemble";
    case RegionAssignment::AlternateWithinEnsemble: return "alternate";
    case RegionAssignment::AllIndonesian: return "all_indonesian";
    case RegionAssignment::AllWestern: return "all_western";
  }
  return "by_ensemble";
}

RegionAssignment region_assignment_from_string(const std::string& s) {
  if (s == "by_ensemble") return RegionAssignment::ByEnsembleAlternate;
  if (s == "alternate") return RegionAssignment::AlternateWithinEnsemble;
  if (s == "all_indonesian") return RegionAssignment::AllIndonesian;
  if (s == "all_western") return RegionAssignment::AllWestern;
  throw ValidationError("unknown region assignment \"" + s + "\"");
}

std::vector<EnsembleSpec> resolve_ensembles(const SynthCorpusSpec& spec) {
  if (!spec.ensembles.empty()) return spec.ensembles;
  const std::vector<ScaleSpec> scales = {ScaleSpec::tirus(), ScaleSpec::begbeg(),
                                         ScaleSpec::sedeng(), ScaleSpec::slendro6()};
  std::vector<EnsembleSpec> out;
  for (std::size_t e = 0; e < spec.n_ensembles; ++e) {
    EnsembleSpec ens;
    ens.scale = scales[e % scales.size()];
    // Stagger tonics by 110 cents per ensemble so tonal identities stay
    // distinct even when a scale repeats.
    ens.tonic_hz = 220.0 * std::pow(2.0, static_cast<double>(e) * 110.0 / 1200.0);
    ens.ombak_hz = 2.5 + 0.5 * static_cast<double>(e % 4);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "ens%02zu_%s", e, ens.scale.name.c_str());
    ens.name = buf;
    out.push_back(std::move(ens));
  }
  return out;
}

CorpusManifest synth_corpus(const SynthCorpusSpec& spec,
                            const std::filesystem::path& out_dir) {
  if (spec.n_ensembles < 2) {
    throw InvalidSpec("synthetic corpus needs at least 2 ensembles");
  }
  if (spec.pieces_per_ensemble < 1) {
    throw InvalidSpec("need at least one piece per ensemble");
  }
  const auto ensembles = resolve_ensembles(spec);

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "audio", ec);
  if (ec) {
    throw IoError("cannot create output directory " + (out_dir / "audio").string() +
                  ": " + ec.message());
  }

  CorpusManifest manifest;
  manifest.corpus_name = spec.corpus_name;

  for (std::size_t e = 0; e < ensembles.size(); ++e) {
    const auto& ens = ensembles[e];
    for (std::size_t p = 0; p < spec.pieces_per_ensemble; ++p) {
      Region region = Region::Indonesian;
      switch (spec.region_assignment) {
        case RegionAssignment::ByEnsembleAlternate:
          region = (e % 2 == 0) ? Region::Indonesian : Region::Western;
          break;
        case RegionAssignment::AlternateWithinEnsemble:
          region = (p % 2 == 0) ? Region::Indonesian : Region::Western;
          break;
        case RegionAssignment::AllIndonesian:
          region = Region::Indonesian;
          break;
        case RegionAssignment::AllWestern:
          region = Region::Western;
          break;
      }

      SynthPieceSpec piece;
      piece.scale = ens.scale;
      piece.tonic_hz = ens.tonic_hz;
      piece.ombak_hz = ens.ombak_hz;
      piece.note_rate_hz = spec.note_rate_hz;
      piece.voices = spec.voices;
      piece.profile = region == Region::Indonesian && !ens.indonesian_profiles.empty()
                          ? ens.indonesian_profiles[p % ens.indonesian_profiles.size()]
                          : ArticulationProfile::Flat;
      piece.duration_s = piece.profile == ArticulationProfile::LargeForm
                             ? spec.duration_large_form_s
                             : spec.duration_s;
      piece.seed = splitmix64(splitmix64(spec.seed + e) + p);

      char idbuf[64];
      std::snprintf(idbuf, sizeof(idbuf), "e%02zup%02zu", e, p);
      const std::string id = idbuf;
      const std::string rel_path = "audio/" + id + ".wav";

      const AudioClip clip = synth_piece(piece, id);
      write_wav_f32_mono(out_dir / rel_path, clip.samples, clip.sample_rate);

      RecordingEntry entry;
      entry.id = id;
      entry.path = rel_path;
      entry.resolved_path = std::filesystem::absolute(out_dir / rel_path);
      char title[96];
      std::snprintf(title, sizeof(title), "piece %02zu (%s, %s)", p,
                    ens.scale.name.c_str(), to_string(piece.profile).c_str());
      entry.title = title;
      entry.ensemble = ens.name;
      entry.region = region;
      manifest.entries.push_back(std::move(entry));
    }
  }

  char prov[128];
  std::snprintf(prov, sizeof(prov), "{\"generator\":\"synth\",\"seed\":%llu}",
                static_cast<unsigned long long>(spec.seed));
  save_manifest(manifest, out_dir / "manifest.json", prov);
  return manifest;
}

}  // namespace gamsom
