#pragma once

#include <vector>

namespace blowuplab::elliptic {

/// One quarter period of the lemniscatic sine sl, i.e. the first maximum
/// location: the integral of 1/sqrt(1 - y^4) over [0, 1].
double lemniscate_quarter_period();

/// Complete elliptic integral of the first kind K(k) by the arithmetic-
/// geometric mean. Throws DomainError unless 0 <= k < 1.
double K_agm(double k);

struct SlValue {
  double value = 0.0;
  double derivative = 0.0;
};

/// Dense reference table of sl on [0, quarter_period], built once by
/// fixed-step Gauss6 integration of y'' = -2y^3, y(0) = 0, y'(0) = 1.
class LemniscaticTable {
 public:
  struct Sample {
    double t, y, dy;
  };

  static const LemniscaticTable& instance();

  double quarter_period() const { return quarter_period_; }
  const std::vector<Sample>& samples() const { return samples_; }

  /// Cubic Hermite interpolation inside [0, quarter_period].
  SlValue interpolate(double t) const;

 private:
  explicit LemniscaticTable(int intervals);

  double quarter_period_ = 0.0;
  double step_ = 0.0;
  std::vector<Sample> samples_;
};

/// Lemniscatic sine on the whole real line: odd, reflection-symmetric about
/// the quarter period, period 4*quarter_period.
SlValue sl(double t);

}  // namespace blowuplab::elliptic
