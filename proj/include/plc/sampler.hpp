#pragma once

#include <string>
#include <utility>
#include <vector>

namespace plc {

/// Parameterized function on [0, pi] with an exact derivative.
///
/// Three preset families are supported: finite sine/cosine series
/// (arbitrary real frequencies), polynomials, and piecewise-linear tables.
class Sampler {
 public:
  enum class Kind { SineSeries, Polynomial, PiecewiseLinear };

  struct Term {
    bool cosine = false;  ///< cos(k x) when true, sin(k x) otherwise
    double k = 1.0;
    double amplitude = 0.0;
  };

  Sampler();  ///< identically zero

  static Sampler zero() { return Sampler(); }
  static Sampler constant(double v);
  static Sampler sine_series(std::vector<Term> terms, double offset = 0.0);
  static Sampler polynomial(std::vector<double> coeffs);
  /// Points must have strictly increasing abscissae covering [0, pi].
  static Sampler piecewise_linear(std::vector<std::pair<double, double>> points);

  double value(double x) const;
  double derivative(double x) const;

  Kind kind() const { return kind_; }
  const std::vector<Term>& terms() const { return terms_; }
  double offset() const { return offset_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

  /// Short human-readable description, used in summaries.
  std::string describe() const;

 private:
  Kind kind_ = Kind::Polynomial;
  std::vector<Term> terms_;
  double offset_ = 0.0;
  std::vector<double> coeffs_;
  std::vector<std::pair<double, double>> points_;
};

}  // namespace plc
