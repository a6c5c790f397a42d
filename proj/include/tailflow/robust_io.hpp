#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tailflow/robust.hpp"
#include "tailflow/svg.hpp"
#include "tailflow/types.hpp"

namespace tailflow {

/// One CSV per family: epsilon,density,penalty,influence.
inline void write_curve_csv(const std::string& path, const PenaltyCurve& c) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write curve CSV: " + path);
  f << "epsilon,density,penalty,influence\n";
  char line[160];
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g,%.12g\n", c.grid[i],
                  c.density[i], c.rho[i], c.psi[i]);
    f << line;
  }
}

struct Fig1Result {
  std::vector<PenaltyCurve> curves;  // gaussian, laplace, student_t
  std::vector<std::string> csv_paths;
  std::string svg_path;
};

/// Variance-standardized density / penalty / influence curves of the three
/// base families, written as one CSV per family plus a three-panel SVG.
/// The SVG shows the [-plot_range, plot_range] window of the full grid.
inline Fig1Result emit_fig1_curves(const std::string& out_dir, double nu,
                                   const CurveGridSpec& grid = {},
                                   double plot_range = 6.0) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  Fig1Result result;
  const BaseKind kinds[3] = {BaseKind::Gaussian, BaseKind::Laplace,
                             BaseKind::StudentT};
  const char* names[3] = {"gaussian", "laplace", "student_t"};
  const char* colors[3] = {"#1f2fa0", "#a05a1f", "#167a2a"};
  const char* dashes[3] = {"6,4", "1.5,3", ""};  // dashed, dotted, solid

  for (int i = 0; i < 3; ++i)
    result.curves.push_back(tabulate_curve(kinds[i], nu, grid, true));

  for (int i = 0; i < 3; ++i) {
    std::string name = names[i];
    if (kinds[i] == BaseKind::StudentT) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "_nu%g", nu);
      name += buf;
    }
    const std::string path = (fs::path(out_dir) / (name + ".csv")).string();
    write_curve_csv(path, result.curves[static_cast<std::size_t>(i)]);
    result.csv_paths.push_back(path);
  }

  const char* panel_titles[3] = {"density p(x)", "penalty rho(eps)",
                                 "influence psi(eps)"};
  std::vector<SvgLineChart> panels;
  for (int panel = 0; panel < 3; ++panel) {
    SvgLineChart chart(panel_titles[panel]);
    chart.set_x_limits(-plot_range, plot_range);
    chart.set_axis_labels(panel == 0 ? "x" : "eps", "");
    for (int i = 0; i < 3; ++i) {
      const auto& c = result.curves[static_cast<std::size_t>(i)];
      SvgSeries s;
      s.label = names[i];
      s.color = colors[i];
      s.dash = dashes[i];
      s.x = c.grid;
      s.y = panel == 0 ? c.density : (panel == 1 ? c.rho : c.psi);
      chart.add_series(std::move(s));
    }
    panels.push_back(std::move(chart));
  }
  result.svg_path = (fs::path(out_dir) / "fig1.svg").string();
  write_svg_row(result.svg_path, panels);
  return result;
}

}  // namespace tailflow
