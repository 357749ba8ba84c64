#include "plc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plc/errors.hpp"

namespace plc {

Sampler::Sampler() : kind_(Kind::Polynomial), coeffs_{0.0} {}

Sampler Sampler::constant(double v) { return polynomial({v}); }

Sampler Sampler::sine_series(std::vector<Term> terms, double offset) {
  Sampler s;
  s.kind_ = Kind::SineSeries;
  s.terms_ = std::move(terms);
  s.offset_ = offset;
  s.coeffs_.clear();
  return s;
}

Sampler Sampler::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  Sampler s;
  s.kind_ = Kind::Polynomial;
  s.coeffs_ = std::move(coeffs);
  return s;
}

Sampler Sampler::piecewise_linear(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "model", "piecewise-linear table needs >= 2 points");
  for (size_t i = 1; i < points.size(); ++i)
    if (!(points[i].first > points[i - 1].first))
      throw Error(ErrorCode::InvalidArgument, "model",
                  "piecewise-linear abscissae must be strictly increasing");
  const double eps = 1e-12;
  if (points.front().first > eps || points.back().first < M_PI - eps)
    throw Error(ErrorCode::InvalidArgument, "model", "piecewise-linear table must cover [0, pi]");
  Sampler s;
  s.kind_ = Kind::PiecewiseLinear;
  s.points_ = std::move(points);
  s.coeffs_.clear();
  return s;
}

namespace {
size_t segment_of(const std::vector<std::pair<double, double>>& pts, double x) {
  auto it = std::upper_bound(pts.begin(), pts.end(), x,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  size_t k = static_cast<size_t>(it - pts.begin());
  if (k == 0) return 0;
  if (k >= pts.size()) return pts.size() - 2;
  return k - 1;
}
}  // namespace

double Sampler::value(double x) const {
  switch (kind_) {
    case Kind::SineSeries: {
      double v = offset_;
      for (const auto& t : terms_) v += t.amplitude * (t.cosine ? std::cos(t.k * x) : std::sin(t.k * x));
      return v;
    }
    case Kind::Polynomial: {
      double v = 0.0;
      for (size_t i = coeffs_.size(); i-- > 0;) v = v * x + coeffs_[i];
      return v;
    }
    case Kind::PiecewiseLinear: {
      size_t k = segment_of(points_, x);
      const auto& a = points_[k];
      const auto& b = points_[k + 1];
      double s = (x - a.first) / (b.first - a.first);
      return a.second + s * (b.second - a.second);
    }
  }
  return 0.0;
}

double Sampler::derivative(double x) const {
  switch (kind_) {
    case Kind::SineSeries: {
      double v = 0.0;
      for (const auto& t : terms_)
        v += t.amplitude * t.k * (t.cosine ? -std::sin(t.k * x) : std::cos(t.k * x));
      return v;
    }
    case Kind::Polynomial: {
      double v = 0.0;
      for (size_t i = coeffs_.size(); i-- > 1;) v = v * x + static_cast<double>(i) * coeffs_[i];
      return v;
    }
    case Kind::PiecewiseLinear: {
      size_t k = segment_of(points_, x);
      const auto& a = points_[k];
      const auto& b = points_[k + 1];
      return (b.second - a.second) / (b.first - a.first);
    }
  }
  return 0.0;
}

std::string Sampler::describe() const {
  std::ostringstream os;
  os.precision(6);
  switch (kind_) {
    case Kind::SineSeries:
      os << "series(" << offset_;
      for (const auto& t : terms_) os << (t.amplitude < 0 ? " - " : " + ") << std::fabs(t.amplitude)
                                      << (t.cosine ? " cos(" : " sin(") << t.k << "x)";
      os << ")";
      break;
    case Kind::Polynomial:
      os << "poly(";
      for (size_t i = 0; i < coeffs_.size(); ++i) os << (i ? ", " : "") << coeffs_[i];
      os << ")";
      break;
    case Kind::PiecewiseLinear:
      os << "pwl(" << points_.size() << " points)";
      break;
  }
  return os.str();
}

}  // namespace plc
