// Copyright 2026 The rbmk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rbmk/decoupler.hpp"
#include "rbmk/fit.hpp"
#include "rbmk/rb_engine.hpp"
#include "rbmk/twirl_experiments.hpp"

namespace rbmk {

// Shortest round-trip decimal form (%.17g), locale independent.
std::string format_number(double x);

// m,mean,variance,stderr,n,analytical,first_order; unsampled or absent fields
// are left blank.
void write_series_csv(std::ostream& out, const DecaySeries& series);
void write_means_csv(std::ostream& out, const std::vector<int>& m_list, const std::vector<ComboSeries>& combos);
void write_variances_csv(std::ostream& out, const std::vector<VarianceRow>& rows);
void write_delta_scan_csv(std::ostream& out, const DeltaScan& scan);

nlohmann::ordered_json fit_to_json(const FitResult& fit);
nlohmann::ordered_json diagnostic_to_json(const Diagnostic& diag);

struct PlotCurve {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
};

struct PlotBand {
  std::vector<double> x;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct Plot {
  std::string title;
  std::string x_label = "m";
  std::string y_label = "F_m";
  std::vector<PlotCurve> curves;
  std::optional<PlotBand> band;
  // y-range; computed from the data when unset.
  std::optional<double> y_min;
  std::optional<double> y_max;
};

// SVG 1.1 line chart, one polyline per curve and a polygon for the band.
void write_plot_svg(std::ostream& out, const Plot& plot);

// Collects named files and writes them to a staging directory next to the
// target, then moves them into place, so a failed run leaves no partial
// bundle behind. Throws IoError with the offending path on I/O
// failures.
class ArtifactBundle {
 public:
  void add(const std::string& name, std::string contents);
  const std::map<std::string, std::string>& files() const { return files_; }
  void commit(const std::filesystem::path& out_dir) const;

 private:
  std::map<std::string, std::string> files_;
};

}  // namespace rbmk
