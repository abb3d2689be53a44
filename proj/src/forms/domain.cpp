#include "xsect/forms/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "xsect/error.hpp"

namespace xsect::forms {

TorusDomain::TorusDomain(int dim, std::array<int, 3> resolution)
    : dim_(dim), resolution_(resolution), size_(1) {
  if (dim != 2 && dim != 3) {
    throw Error("torus dimension must be 2 or 3, got " + std::to_string(dim));
  }
  for (int a = 0; a < 3; ++a) {
    if (a >= dim) {
      resolution_[a] = 1;
      continue;
    }
    const int n = resolution_[a];
    if (n < 8 || n % 2 != 0) {
      throw Error("grid resolution must be even and >= 8 on axis " + std::to_string(a) +
                  ", got " + std::to_string(n));
    }
    size_ *= static_cast<std::size_t>(n);
  }
}

int TorusDomain::maxResolution() const {
  return *std::max_element(resolution_.begin(), resolution_.begin() + dim_);
}

std::array<int, 3> TorusDomain::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % resolution_[a]);
    flat /= resolution_[a];
  }
  return idx;
}

std::size_t TorusDomain::flatten(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    const int n = resolution_[a];
    const int j = ((idx[a] % n) + n) % n;
    flat = flat * n + j;
  }
  return flat;
}

Point TorusDomain::point(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = static_cast<double>(idx[a]) / resolution_[a];
  return p;
}

namespace {

void enumerate(int n, int k, int start, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == k) {
    out.push_back(current);
    return;
  }
  for (int i = start; i < n; ++i) {
    current.push_back(i);
    enumerate(n, k, i + 1, current, out);
    current.pop_back();
  }
}

}  // namespace

const std::vector<std::vector<int>>& multiIndices(int n, int k) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace({n, k});
  if (inserted && k >= 0 && k <= n) {
    std::vector<int> current;
    enumerate(n, k, 0, current, it->second);
  }
  return it->second;
}

int multiIndexPosition(int n, const std::vector<int>& index) {
  const auto& all = multiIndices(n, static_cast<int>(index.size()));
  const auto it = std::find(all.begin(), all.end(), index);
  if (it == all.end()) throw Error("multi-index is not strictly increasing");
  return static_cast<int>(it - all.begin());
}

int sortWithSign(std::vector<int>& index) {
  int sign = 1;
  for (std::size_t i = 0; i < index.size(); ++i) {
    for (std::size_t j = 0; j + 1 < index.size() - i; ++j) {
      if (index[j] == index[j + 1]) return 0;
      if (index[j] > index[j + 1]) {
        std::swap(index[j], index[j + 1]);
        sign = -sign;
      }
    }
  }
  for (std::size_t j = 0; j + 1 < index.size(); ++j) {
    if (index[j] == index[j + 1]) return 0;
  }
  return sign;
}

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double wrapUnit(double x) {
  double w = x - std::floor(x);
  if (w >= 1.0) w -= 1.0;
  return w;
}

}  // namespace xsect::forms
