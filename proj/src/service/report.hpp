// Copyright 2026 The safestop Authors
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

#ifndef SAFESTOP__SERVICE__REPORT_HPP_
#define SAFESTOP__SERVICE__REPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

namespace safestop
{

struct LabelledPoint
{
  double distance{0.0};
  double angle{0.0};
  bool positive{false};
};

/// Predicts "positive" when w_distance * distance + w_angle * angle + bias < 0.
struct LinearClassifier
{
  double w_distance{0.0};
  double w_angle{0.0};
  double bias{0.0};

  bool predict(double distance, double angle) const
  {
    return w_distance * distance + w_angle * angle + bias < 0.0;
  }
};

struct ClassifierFit
{
  LinearClassifier classifier;
  double accuracy{0.0};
};

/**
 * Best linear split of the two classes found by sweeping `directions` unit normals over the full
 * circle (in standardised feature space) and, per normal, the optimal threshold. nullopt when
 * either class is empty.
 */
std::optional<ClassifierFit> fit_linear_classifier(
  const std::vector<LabelledPoint> & points, std::size_t directions = 720);

struct ReportSummary
{
  std::size_t traces{0};
  std::size_t monitor_ticks{0};
  std::size_t triggers{0};
  double band_low{1.0};  // m/s
  double band_high{2.0};  // m/s
  std::size_t band_samples{0};
  std::size_t band_positives{0};
  std::optional<ClassifierFit> fit;  // absent: separability undefined
  std::size_t triggers_below_min_speed{0};
  bool empty() const { return traces == 0; }
};

/**
 * Reads every trace_*.csv in in_dir and writes scatter.csv, stop_cost_series.csv and
 * separability.json to out_dir. A directory without traces yields an empty summary and no files.
 */
ReportSummary generate_report(const std::filesystem::path & in_dir,
                              const std::filesystem::path & out_dir);

}  // namespace safestop

#endif  // SAFESTOP__SERVICE__REPORT_HPP_
