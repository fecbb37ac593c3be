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

#include "rbmk/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <system_error>

#include "rbmk/errors.hpp"

namespace rbmk {

namespace fs = std::filesystem;

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

void write_series_csv(std::ostream& out, const DecaySeries& series) {
  out << "m,mean,variance,stderr,n,analytical,first_order\n";
  for (const auto& p : series.points) {
    out << p.m << ",";
    if (p.n > 0) {
      out << format_number(p.mean) << "," << format_number(p.variance) << "," << format_number(p.stderr_mean)
          << "," << p.n;
    } else {
      out << ",,,";
    }
    out << "," << opt(p.analytical) << "," << opt(p.first_order) << "\n";
  }
}

void write_means_csv(std::ostream& out, const std::vector<int>& m_list, const std::vector<ComboSeries>& combos) {
  out << "m,combo,value\n";
  for (size_t i = 0; i < m_list.size(); ++i) {
    for (const auto& c : combos) {
      out << m_list[i] << "," << to_string(c.combo) << "," << format_number(c.values[i]) << "\n";
    }
  }
}

void write_variances_csv(std::ostream& out, const std::vector<VarianceRow>& rows) {
  out << "m,var_bare,var_twirled,var_exact_bare,var_exact_twirled\n";
  for (const auto& r : rows) {
    out << r.m << "," << format_number(r.var_bare) << "," << format_number(r.var_twirled) << ","
        << opt(r.var_exact_bare) << "," << opt(r.var_exact_twirled) << "\n";
  }
}

void write_delta_scan_csv(std::ostream& out, const DeltaScan& scan) {
  out << "tau_dd,m,delta_f,slope\n";
  for (const auto& r : scan.rows) {
    out << format_number(r.tau_dd) << "," << r.m << "," << format_number(r.delta_f) << ","
        << format_number(r.slope) << "\n";
  }
}

nlohmann::ordered_json fit_to_json(const FitResult& fit) {
  nlohmann::ordered_json j;
  j["A"] = fit.a;
  j["B"] = fit.b;
  j["p"] = fit.p;
  j["residual_norm"] = fit.residual_norm;
  j["residuals"] = fit.residuals;
  j["identifiable"] = fit.identifiable;
  j["weighted"] = fit.weighted;
  return j;
}

nlohmann::ordered_json diagnostic_to_json(const Diagnostic& diag) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(diag.verdict);
  j["max_abs_z"] = diag.max_abs_z;
  j["n_significant"] = diag.n_significant;
  j["z"] = diag.z;
  return j;
}

void write_plot_svg(std::ostream& out, const Plot& plot) {
  constexpr double kWidth = 720, kHeight = 480;
  constexpr double kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;

  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any = false;
  auto extend = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
    for (size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
      if (!any) {
        x0 = x1 = xs[i];
        y0 = y1 = ys[i];
        any = true;
      }
      x0 = std::min(x0, xs[i]);
      x1 = std::max(x1, xs[i]);
      y0 = std::min(y0, ys[i]);
      y1 = std::max(y1, ys[i]);
    }
  };
  for (const auto& c : plot.curves) extend(c.x, c.y);
  if (plot.band) {
    extend(plot.band->x, plot.band->lower);
    extend(plot.band->x, plot.band->upper);
  }
  if (plot.y_min) y0 = *plot.y_min;
  if (plot.y_max) y1 = *plot.y_max;
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double margin = 0.05 * (y1 - y0);
  if (!plot.y_min) y0 -= margin;
  if (!plot.y_max) y1 += margin;

  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  out << "  <title>" << escape_xml(plot.title) << "</title>\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "  <rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks.
  out << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x0 + (x1 - x0) * k / 5.0;
    const double yv = y0 + (y1 - y0) * k / 5.0;
    char xl[32], yl[32];
    std::snprintf(xl, sizeof xl, "%.4g", xv);
    std::snprintf(yl, sizeof yl, "%.4g", yv);
    out << "    <text x=\"" << coord(sx(xv)) << "\" y=\"" << coord(kTop + ph + 16)
        << "\" text-anchor=\"middle\">" << xl << "</text>\n";
    out << "    <text x=\"" << coord(kLeft - 6) << "\" y=\"" << coord(sy(yv) + 4) << "\" text-anchor=\"end\">" << yl
        << "</text>\n";
  }
  out << "    <text x=\"" << coord(kLeft + pw / 2) << "\" y=\"" << coord(kHeight - 10)
      << "\" text-anchor=\"middle\">" << escape_xml(plot.x_label) << "</text>\n";
  out << "    <text x=\"16\" y=\"" << coord(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << coord(kTop + ph / 2) << ")\">" << escape_xml(plot.y_label) << "</text>\n";
  out << "    <text x=\"" << coord(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << escape_xml(plot.title) << "</text>\n";
  out << "  </g>\n";

  if (plot.band && !plot.band->x.empty()) {
    const auto& b = *plot.band;
    out << "  <polygon class=\"band\" fill=\"#d62728\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
    for (size_t i = 0; i < b.x.size(); ++i) {
      out << (i ? " " : "") << coord(sx(b.x[i])) << "," << coord(sy(b.upper[i]));
    }
    for (size_t i = b.x.size(); i-- > 0;) {
      out << " " << coord(sx(b.x[i])) << "," << coord(sy(b.lower[i]));
    }
    out << "\"/>\n";
  }

  for (size_t c = 0; c < plot.curves.size(); ++c) {
    const auto& cv = plot.curves[c];
    out << "  <polyline class=\"curve\" fill=\"none\" stroke=\"" << cv.color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < cv.x.size(); ++i) {
      out << (i ? " " : "") << coord(sx(cv.x[i])) << "," << coord(sy(cv.y[i]));
    }
    out << "\"/>\n";
    if (cv.markers) {
      out << "  <g fill=\"" << cv.color << "\">\n";
      for (size_t i = 0; i < cv.x.size(); ++i) {
        out << "    <circle cx=\"" << coord(sx(cv.x[i])) << "\" cy=\"" << coord(sy(cv.y[i])) << "\" r=\"2.5\"/>\n";
      }
      out << "  </g>\n";
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(c);
    out << "  <line x1=\"" << coord(kLeft + pw + 10) << "\" y1=\"" << coord(ly) << "\" x2=\"" << coord(kLeft + pw + 30)
        << "\" y2=\"" << coord(ly) << "\" stroke=\"" << cv.color << "\" stroke-width=\"2\"/>\n";
    out << "  <text x=\"" << coord(kLeft + pw + 36) << "\" y=\"" << coord(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(cv.name) << "</text>\n";
  }
  out << "</svg>\n";
}

void ArtifactBundle::add(const std::string& name, std::string contents) { files_[name] = std::move(contents); }

void ArtifactBundle::commit(const fs::path& out_dir) const {
  std::error_code ec;
  const fs::path target = fs::absolute(out_dir, ec);
  if (ec) throw IoError("cannot resolve output path '" + out_dir.string() + "': " + ec.message());
  const fs::path parent = target.parent_path();
  fs::create_directories(parent, ec);
  if (ec) throw IoError("cannot create '" + parent.string() + "': " + ec.message());

  std::random_device rd;
  const fs::path staging = parent / (".rbmk-staging-" + target.filename().string() + "-" + std::to_string(rd()));
  fs::create_directory(staging, ec);
  if (ec) throw IoError("cannot create staging directory '" + staging.string() + "': " + ec.message());

  auto cleanup = [&] {
    std::error_code ignored;
    fs::remove_all(staging, ignored);
  };
  for (const auto& [name, contents] : files_) {
    const fs::path p = staging / name;
    std::ofstream f(p, std::ios::binary);
    f << contents;
    f.close();
    if (!f) {
      cleanup();
      throw IoError("failed writing '" + p.string() + "'");
    }
  }

  if (!fs::exists(target)) {
    fs::rename(staging, target, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot move bundle into '" + target.string() + "': " + ec.message());
    }
    return;
  }
  if (!fs::is_directory(target)) {
    cleanup();
    throw IoError("output path '" + target.string() + "' exists and is not a directory");
  }
  for (const auto& [name, contents] : files_) {
    fs::rename(staging / name, target / name, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot move '" + name + "' into '" + target.string() + "': " + ec.message());
    }
  }
  cleanup();
}

}  // namespace rbmk
