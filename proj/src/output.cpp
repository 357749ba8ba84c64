#include "plc/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "plc/errors.hpp"

namespace plc::out {

namespace {

std::ofstream open(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cli", "cannot write " + path);
  return f;
}

std::string num_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

// Blue-white-red for signed data.
std::string diverging(double s) {
  s = std::clamp(s, -1.0, 1.0);
  int r, g, b;
  if (s < 0) {
    r = g = static_cast<int>(255 * (1 + s));
    b = 255;
  } else {
    r = 255;
    g = b = static_cast<int>(255 * (1 - s));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cli", "cannot create " + dir + ": " + ec.message());
}

void write_fields_csv(const std::string& path, const PhysGrid& g) {
  std::ofstream f = open(path);
  f << "t,x,theta,theta_t,theta_x,u,J\n";
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i) {
      const std::size_t id = g.index(k, i);
      f << fmt(g.t(k)) << ',' << fmt(g.x(i)) << ',' << fmt(g.theta[id]) << ',' << fmt(g.theta_t[id]) << ','
        << fmt(g.theta_x[id]) << ',' << fmt(g.u[id]) << ',' << fmt(g.J[id]) << '\n';
    }
}

void write_energy_csv(const std::string& path, const diag::EnergyTrace& tr) {
  std::ofstream f = open(path);
  f << "t,E,B0,Bpi,D,residual\n";
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    f << fmt(tr.times[k]) << ',' << fmt(tr.E[k]) << ',' << fmt(tr.B0[k]) << ',' << fmt(tr.Bpi[k]) << ','
      << fmt(tr.D[k]) << ',' << fmt(tr.residual[k]) << '\n';
}

void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f = open(path);
  f << text;
}

std::string svg_lines(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series) {
  const double W = 640, H = 400, L = 70, R = 150, T = 40, B = 50;
  double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + i * (x1 - x0) / 4, yv = y0 + i * (y1 - y0) / 4;
    o << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << num_label(xv)
      << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << num_label(yv)
      << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xlabel
    << "</text>\n";
  o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\">" << ylabel << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* col = kColors[s % 7];
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      if (std::isfinite(series[s].y[i])) o << num_label(px(series[s].x[i])) << ',' << num_label(py(series[s].y[i])) << ' ';
    o << "\"/>\n";
    const double ly = T + 14 + 18 * s;
    o << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
      << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << W - R + 35 << "\" y=\"" << ly + 4 << "\">" << series[s].name << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_heatmap(const std::string& title, const PhysGrid& g, const std::vector<double>& f) {
  const double W = 640, H = 420, L = 60, R = 30, T = 40, B = 50;
  double m = 0.0;
  for (double v : f)
    if (std::isfinite(v)) m = std::max(m, std::fabs(v));
  if (m == 0.0) m = 1.0;
  const double cw = (W - L - R) / (g.nx + 1), ch = (H - T - B) / (g.nt + 1);
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
    << " (|max| = " << num_label(m) << ")</text>\n";
  for (int k = 0; k <= g.nt; ++k)
    for (int i = 0; i <= g.nx; ++i) {
      o << "<rect x=\"" << num_label(L + i * cw) << "\" y=\"" << num_label(H - B - (k + 1) * ch) << "\" width=\""
        << num_label(cw + 0.5) << "\" height=\"" << num_label(ch + 0.5) << "\" fill=\""
        << diverging(f[g.index(k, i)] / m) << "\"/>\n";
    }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">x in [0, pi]</text>\n";
  o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\">t in [0, " << num_label(g.horizon()) << "]</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace plc::out
