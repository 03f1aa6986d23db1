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

#ifndef GAMSOM_VIZ_HPP
#define GAMSOM_VIZ_HPP

#include <string>
#include <utility>
#include <vector>

#include "gamsom/corpus.hpp"
#include "gamsom/som.hpp"

namespace gamsom {

/// Fixed rendering conventions: Indonesian pieces draw as circles,
/// Western as diamonds; ensemble colors are assigned deterministically by
/// sorted ensemble name; the u-matrix colormap runs dark (similar) to
/// light (dissimilar).
struct PlotStyle {
  double cell_px = 26.0;
  double margin_px = 46.0;
  double marker_r = 5.0;
  std::string provenance;  // emitted as an XML comment when non-empty
};

/// Color for normalized t in [0, 1]: dark blue -> pale yellow.
std::string umatrix_color(double t);

/// Deterministic ensemble -> color mapping over the manifest's ensembles.
std::vector<std::pair<std::string, std::string>> ensemble_colors(
    const CorpusManifest& manifest);

/// Best-match map over the u-matrix background: one marker per placement,
/// co-located markers jittered on a deterministic golden-angle spiral
/// inside the cell. Throws InconsistentInputs when placements reference
/// unknown ids or out-of-grid cells.
std::string plot_som_map(const SomModel& model, const UMatrix& umatrix,
                         const std::vector<Placement>& placements,
                         const CorpusManifest& manifest,
                         const PlotStyle& style = {});

/// One heatmap per weight dimension, independently color-scaled with a
/// per-plane colorbar.
std::string plot_component_planes(const SomModel& model,
                                  const PlotStyle& style = {});

/// Strip plot of one scalar per recording, grouped by ensemble, with an
/// optional corpus-median line (mean-of-middle convention for even
/// counts). Throws MissingValue on an empty value set, InconsistentInputs
/// on ids missing from the manifest.
std::string plot_scalar_by_ensemble(
    const std::vector<std::pair<std::string, double>>& values,
    const CorpusManifest& manifest, const std::string& label,
    bool median_line = true, bool log_y = false, const PlotStyle& style = {});

/// Median with the mean-of-middle convention. Throws MissingValue on
/// empty input.
double median(std::vector<double> values);

}  // namespace gamsom

#endif  // GAMSOM_VIZ_HPP
