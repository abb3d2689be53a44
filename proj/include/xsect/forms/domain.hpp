#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace xsect::forms {

/// Periodic grid on the flat torus T^n = R^n / Z^n, n in {2, 3}.
///
/// Grid point j along axis a sits at coordinate j / N_a. Storage is row-major
/// with axis 0 slowest, which matches the FFTW r2c layout (last axis halved).
class TorusDomain {
 public:
  TorusDomain(int dim, std::array<int, 3> resolution);

  static TorusDomain square(int n) { return TorusDomain(2, {n, n, 1}); }
  static TorusDomain cube(int n) { return TorusDomain(3, {n, n, n}); }

  int dim() const { return dim_; }
  int resolution(int axis) const { return resolution_[axis]; }
  const std::array<int, 3>& resolution() const { return resolution_; }
  std::size_t size() const { return size_; }
  double spacing(int axis) const { return 1.0 / resolution_[axis]; }
  int maxResolution() const;

  /// Per-axis grid indices of a flat index.
  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<int, 3>& idx) const;
  /// Coordinates of a grid point in [0, 1)^n; unused trailing entries are 0.
  std::array<double, 3> point(std::size_t flat) const;

  bool operator==(const TorusDomain& other) const {
    return dim_ == other.dim_ && resolution_ == other.resolution_;
  }

 private:
  int dim_;
  std::array<int, 3> resolution_;
  std::size_t size_;
};

using Point = std::array<double, 3>;

/// Strictly increasing multi-indices of length k drawn from {0..n-1}, in
/// lexicographic order. This is the canonical component order of a k-form.
const std::vector<std::vector<int>>& multiIndices(int n, int k);

/// Position of a strictly increasing multi-index within multiIndices(n, k).
int multiIndexPosition(int n, const std::vector<int>& index);

/// Sorts `index` in place and returns the permutation sign, or 0 if it has a
/// repeated entry.
int sortWithSign(std::vector<int>& index);

/// Binomial coefficient C(n, k) for the small values used here.
int binomial(int n, int k);

/// Wraps a coordinate into [0, 1).
double wrapUnit(double x);

}  // namespace xsect::forms
