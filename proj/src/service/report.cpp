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

#include "service/report.hpp"

#include "geometry/errors.hpp"
#include "service/batch.hpp"
#include "sim/trial.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

namespace safestop
{
namespace
{

std::string num(double v)
{
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string opt(const std::optional<double> & v) { return v ? num(*v) : std::string(); }

std::ofstream open_output(const std::filesystem::path & path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  return out;
}

double metadata_number(const TraceMetadata & m, const char * key, double fallback)
{
  auto it = m.find(key);
  if (it == m.end()) {
    return fallback;
  }
  double v = fallback;
  std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  return v;
}

}  // namespace

std::optional<ClassifierFit> fit_linear_classifier(
  const std::vector<LabelledPoint> & points, std::size_t directions)
{
  const std::size_t n = points.size();
  const std::size_t positives = static_cast<std::size_t>(
    std::count_if(points.begin(), points.end(), [](const auto & p) { return p.positive; }));
  if (positives == 0 || positives == n || directions == 0) {
    return std::nullopt;
  }

  double mean[2] = {0.0, 0.0};
  for (const auto & p : points) {
    mean[0] += p.distance;
    mean[1] += p.angle;
  }
  mean[0] /= static_cast<double>(n);
  mean[1] /= static_cast<double>(n);
  double scale[2] = {0.0, 0.0};
  for (const auto & p : points) {
    scale[0] += (p.distance - mean[0]) * (p.distance - mean[0]);
    scale[1] += (p.angle - mean[1]) * (p.angle - mean[1]);
  }
  for (double & s : scale) {
    s = std::sqrt(s / static_cast<double>(n));
    if (!(s > 0.0)) {
      s = 1.0;
    }
  }

  std::vector<double> proj(n);
  std::vector<std::size_t> order(n);
  std::size_t best_correct = 0;
  LinearClassifier best;
  for (std::size_t k = 0; k < directions; ++k) {
    const double theta = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(directions);
    const double u0 = std::cos(theta) / scale[0];
    const double u1 = std::sin(theta) / scale[1];
    const double offset = u0 * mean[0] + u1 * mean[1];
    for (std::size_t i = 0; i < n; ++i) {
      proj[i] = u0 * points[i].distance + u1 * points[i].angle - offset;
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return proj[a] < proj[b] || (proj[a] == proj[b] && a < b);
    });

    // Threshold below everything: all predicted negative.
    std::size_t correct = n - positives;
    std::size_t local_best = correct;
    double local_threshold = proj[order.front()] - 1.0;
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j < n && proj[order[j]] == proj[order[i]]) {
        correct += points[order[j]].positive ? 1 : 0;
        correct -= points[order[j]].positive ? 0 : 1;
        ++j;
      }
      if (correct > local_best) {
        local_best = correct;
        local_threshold = j < n ? 0.5 * (proj[order[i]] + proj[order[j]]) : proj[order[i]] + 1.0;
      }
      i = j;
    }
    if (local_best > best_correct) {
      best_correct = local_best;
      best = LinearClassifier{u0, u1, -offset - local_threshold};
    }
  }

  std::size_t correct = 0;
  for (const auto & p : points) {
    correct += best.predict(p.distance, p.angle) == p.positive ? 1 : 0;
  }
  return ClassifierFit{best, static_cast<double>(correct) / static_cast<double>(n)};
}

ReportSummary generate_report(const std::filesystem::path & in_dir,
                              const std::filesystem::path & out_dir)
{
  ReportSummary summary;
  const auto files = list_trace_files(in_dir);
  if (files.empty()) {
    return summary;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  }

  auto scatter = open_output(out_dir / "scatter.csv");
  auto series = open_output(out_dir / "stop_cost_series.csv");
  scatter << "trace,t,obstacle_distance,offset_angle,speed,triggered\n";
  series << "trace,t,stop_cost_min,beta,triggered\n";

  std::vector<LabelledPoint> band;
  double beta = 0.3;
  double min_speed = 0.05;
  for (const auto & file : files) {
    std::ifstream in(file, std::ios::binary);
    ParsedTrace parsed;
    try {
      parsed = read_trace(in);
    } catch (const InvalidInput & e) {
      throw InvalidInput(file.filename().string() + ": " + e.what());
    }
    ++summary.traces;
    beta = metadata_number(parsed.metadata, "beta", beta);
    min_speed = metadata_number(parsed.metadata, "min_speed", min_speed);
    const std::string name = file.stem().string();
    for (const auto & r : parsed.trace) {
      if (!r.monitor_tick) {
        continue;
      }
      ++summary.monitor_ticks;
      const double speed = r.state.speed();
      if (r.triggered) {
        ++summary.triggers;
        if (speed < min_speed) {
          ++summary.triggers_below_min_speed;
        }
      }
      scatter << name << ',' << num(r.t) << ',' << opt(r.worst_distance) << ','
              << opt(r.worst_angle) << ',' << num(speed) << ',' << (r.triggered ? 1 : 0) << '\n';
      if (r.stop_cost_min) {
        series << name << ',' << num(r.t) << ',' << num(*r.stop_cost_min) << ',' << num(beta)
               << ',' << (r.triggered ? 1 : 0) << '\n';
      }
      if (r.worst_distance && r.worst_angle && speed >= summary.band_low &&
          speed <= summary.band_high)
      {
        band.push_back(LabelledPoint{*r.worst_distance, *r.worst_angle, r.triggered});
      }
    }
  }
  summary.band_samples = band.size();
  summary.band_positives = static_cast<std::size_t>(
    std::count_if(band.begin(), band.end(), [](const auto & p) { return p.positive; }));
  summary.fit = fit_linear_classifier(band);

  nlohmann::ordered_json j;
  j["traces"] = summary.traces;
  j["monitor_ticks"] = summary.monitor_ticks;
  j["triggers"] = summary.triggers;
  j["speed_band"] = {summary.band_low, summary.band_high};
  j["band_samples"] = summary.band_samples;
  j["band_positives"] = summary.band_positives;
  if (summary.fit) {
    j["status"] = "ok";
    j["accuracy"] = summary.fit->accuracy;
    j["classifier"] = {
      {"w_distance", summary.fit->classifier.w_distance},
      {"w_angle", summary.fit->classifier.w_angle},
      {"bias", summary.fit->classifier.bias}};
  } else {
    j["status"] = "undefined";
    j["accuracy"] = nullptr;
    j["classifier"] = nullptr;
  }
  j["min_speed"] = min_speed;
  j["triggers_below_min_speed"] = summary.triggers_below_min_speed;
  auto out = open_output(out_dir / "separability.json");
  out << j.dump(2) << '\n';
  return summary;
}

}  // namespace safestop
