#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "plc/diagnostics.hpp"
#include "plc/phys_grid.hpp"

namespace plc::out {

/// A float with 17 significant digits ("%.17g").
std::string fmt(double v);

/// Columns t,x,theta,theta_t,theta_x,u,J.
void write_fields_csv(const std::string& path, const PhysGrid& g);
/// Columns t,E,B0,Bpi,D,residual.
void write_energy_csv(const std::string& path, const diag::EnergyTrace& tr);
void write_json(const std::string& path, const nlohmann::json& j);
void write_text(const std::string& path, const std::string& text);

struct Series {
  std::string name;
  std::vector<double> x, y;
};

/// Polyline chart with axes, tick labels and a legend.
std::string svg_lines(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series);
/// Heat map of a grid field over (x, t), t upwards.
std::string svg_heatmap(const std::string& title, const PhysGrid& g, const std::vector<double>& f);

/// Creates the directory and its parents. Throws IoError.
void ensure_dir(const std::string& dir);

}  // namespace plc::out
