#include "xsect/criterion/honda.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "xsect/error.hpp"
#include "xsect/forms/spectral.hpp"

namespace xsect::criterion {

HondaReport hondaCheck(const std::vector<SectionSample>& samples, const forms::Scenario& s) {
  if (samples.empty()) throw Error("empty sample set");
  const int n = s.dim();
  std::vector<forms::TrigInterpolant> x;
  for (int i = 0; i < n; ++i) x.emplace_back(s.x[i]);
  const forms::TrigInterpolant volume(s.omega.component(0));

  HondaReport r;
  r.sampleCount = samples.size();
  r.threshold = s.tol.positivityMargin;
  r.minValue = std::numeric_limits<double>::infinity();
  r.maxValue = -std::numeric_limits<double>::infinity();
  r.minAbsValue = std::numeric_limits<double>::infinity();
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  for (const auto& sample : samples) {
    for (int i = 0; i < n; ++i) {
      m(i, 0) = x[i].value(sample.point);
      for (int j = 0; j < n - 1; ++j) m(i, j + 1) = sample.tangents[j][i];
    }
    const double det = n == 2 ? m.topLeftCorner<2, 2>().determinant() : m.determinant();
    const double value = volume.value(sample.point) * det;
    r.minValue = std::min(r.minValue, value);
    r.maxValue = std::max(r.maxValue, value);
    r.minAbsValue = std::min(r.minAbsValue, std::abs(value));
  }
  r.uniformSign = r.minValue > 0.0 || r.maxValue < 0.0;
  r.passed = r.uniformSign && r.minAbsValue > r.threshold;
  return r;
}

}  // namespace xsect::criterion
