#include "xsect/forms/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "xsect/error.hpp"

namespace xsect::forms {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <typename T>
FftwBuffer<T> allocate(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (p == nullptr) throw Error("fftw_malloc failed");
  return FftwBuffer<T>(p);
}

std::size_t halfSize(const TorusDomain& d) {
  std::size_t n = 1;
  for (int a = 0; a + 1 < d.dim(); ++a) n *= d.resolution(a);
  return n * (d.resolution(d.dim() - 1) / 2 + 1);
}

// FFTW's planner is not thread-safe; plans are created once per grid shape
// under a lock and executed through the new-array interface afterwards.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  std::pair<fftw_plan, fftw_plan> plans(const TorusDomain& d) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(d.dim(), d.resolution());
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    auto real = allocate<double>(d.size());
    auto cplx = allocate<fftw_complex>(halfSize(d));
    int dims[3] = {d.resolution(0), d.resolution(1), d.resolution(2)};
    fftw_plan fwd = fftw_plan_dft_r2c(d.dim(), dims, real.get(), cplx.get(), FFTW_ESTIMATE);
    fftw_plan inv = fftw_plan_dft_c2r(d.dim(), dims, cplx.get(), real.get(), FFTW_ESTIMATE);
    if (fwd == nullptr || inv == nullptr) throw Error("FFTW planning failed");
    plans_.emplace(key, std::make_pair(fwd, inv));
    return {fwd, inv};
  }

  ~PlanCache() {
    for (auto& [key, p] : plans_) {
      fftw_destroy_plan(p.first);
      fftw_destroy_plan(p.second);
    }
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, std::array<int, 3>>, std::pair<fftw_plan, fftw_plan>> plans_;
};

}  // namespace

std::array<int, 3> Spectrum::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  const int n = domain.dim();
  idx[n - 1] = static_cast<int>(flat % halfLength());
  flat /= halfLength();
  for (int a = n - 2; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % domain.resolution(a));
    flat /= domain.resolution(a);
  }
  return idx;
}

Spectrum forwardTransform(const ScalarField& f) {
  const auto& d = f.domain();
  const auto [fwd, inv] = PlanCache::instance().plans(d);
  auto real = allocate<double>(d.size());
  auto cplx = allocate<fftw_complex>(halfSize(d));
  std::memcpy(real.get(), f.values().data(), sizeof(double) * d.size());
  fftw_execute_dft_r2c(fwd, real.get(), cplx.get());
  Spectrum s{d, std::vector<std::complex<double>>(halfSize(d))};
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) s.coeffs[i] = {cplx[i][0], cplx[i][1]};
  return s;
}

ScalarField inverseTransform(const Spectrum& s) {
  const auto& d = s.domain;
  const auto [fwd, inv] = PlanCache::instance().plans(d);
  auto real = allocate<double>(d.size());
  auto cplx = allocate<fftw_complex>(halfSize(d));
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    cplx[i][0] = s.coeffs[i].real();
    cplx[i][1] = s.coeffs[i].imag();
  }
  fftw_execute_dft_c2r(inv, cplx.get(), real.get());
  const double scale = 1.0 / static_cast<double>(d.size());
  std::vector<double> values(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) values[i] = real[i] * scale;
  return ScalarField(d, std::move(values));
}

int signedWavenumber(const TorusDomain& domain, int axis, int j) {
  const int n = domain.resolution(axis);
  return j < n / 2 ? j : j - n;
}

bool isNyquist(const TorusDomain& domain, int axis, int j) {
  return j == domain.resolution(axis) / 2;
}

std::complex<double> derivativeSymbol(const TorusDomain& domain, int axis, int j) {
  if (isNyquist(domain, axis, j)) return {0.0, 0.0};
  return {0.0, kTwoPi * signedWavenumber(domain, axis, j)};
}

ScalarField derivative(const ScalarField& f, int axis) {
  Spectrum s = forwardTransform(f);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    s.coeffs[i] *= derivativeSymbol(s.domain, axis, s.unflatten(i)[axis]);
  }
  return inverseTransform(s);
}

std::vector<ScalarField> gradient(const ScalarField& f) {
  const Spectrum s = forwardTransform(f);
  std::vector<ScalarField> out;
  for (int axis = 0; axis < f.domain().dim(); ++axis) {
    Spectrum ds = s;
    for (std::size_t i = 0; i < ds.coeffs.size(); ++i) {
      ds.coeffs[i] *= derivativeSymbol(ds.domain, axis, ds.unflatten(i)[axis]);
    }
    out.push_back(inverseTransform(ds));
  }
  return out;
}

TrigInterpolant::TrigInterpolant(const ScalarField& f)
    : dim_(f.domain().dim()), resolution_(f.domain().resolution()) {
  const Spectrum s = forwardTransform(f);
  const auto& d = s.domain;
  const int last = dim_ - 1;
  const double norm = 1.0 / static_cast<double>(d.size());

  std::vector<Mode> all;
  all.reserve(s.coeffs.size());
  double maxAmp = 0.0;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    const auto idx = s.unflatten(i);
    Mode m{{0, 0, 0}, {false, false, false}, s.coeffs[i] * norm};
    for (int a = 0; a < dim_; ++a) {
      m.nyquist[a] = isNyquist(d, a, idx[a]);
      m.k[a] = a == last ? idx[a] : signedWavenumber(d, a, idx[a]);
    }
    // Interior columns of the half spectrum stand for a conjugate pair.
    if (!m.nyquist[last] && idx[last] != 0) m.c *= 2.0;
    maxAmp = std::max(maxAmp, std::abs(m.c));
    all.push_back(m);
  }
  const double threshold = std::max(1e-15, 1e-14 * maxAmp);
  for (const auto& m : all) {
    if (std::abs(m.c) <= threshold) continue;
    for (int a = 0; a < dim_; ++a) {
      if (!m.nyquist[a]) maxWave_[a] = std::max(maxWave_[a], std::abs(m.k[a]));
    }
    modes_.push_back(m);
  }
}

double TrigInterpolant::value(const Point& x) const {
  std::array<double, 3> grad{};
  return valueAndGradient(x, grad);
}

double TrigInterpolant::valueAndGradient(const Point& x, std::array<double, 3>& grad) const {
  grad = {0.0, 0.0, 0.0};
  if (modes_.empty()) return 0.0;

  // Per-axis tables of exp(2 pi i k x) for |k| <= maxWave.
  std::array<std::vector<std::complex<double>>, 3> phase;
  std::array<double, 3> nyqCos{}, nyqSin{};
  for (int a = 0; a < dim_; ++a) {
    const int kmax = maxWave_[a];
    phase[a].resize(2 * kmax + 1);
    for (int k = -kmax; k <= kmax; ++k) phase[a][k + kmax] = std::polar(1.0, kTwoPi * k * x[a]);
    const double arg = std::numbers::pi * resolution_[a] * x[a];
    nyqCos[a] = std::cos(arg);
    nyqSin[a] = std::sin(arg);
  }

  double value = 0.0;
  for (const auto& m : modes_) {
    std::array<std::complex<double>, 3> factor;
    std::array<std::complex<double>, 3> dfactor;
    for (int a = 0; a < dim_; ++a) {
      if (m.nyquist[a]) {
        factor[a] = nyqCos[a];
        dfactor[a] = -std::numbers::pi * resolution_[a] * nyqSin[a];
      } else {
        factor[a] = phase[a][m.k[a] + maxWave_[a]];
        dfactor[a] = std::complex<double>(0.0, kTwoPi * m.k[a]) * factor[a];
      }
    }
    std::complex<double> prod = m.c;
    for (int a = 0; a < dim_; ++a) prod *= factor[a];
    value += prod.real();
    for (int a = 0; a < dim_; ++a) {
      std::complex<double> g = m.c * dfactor[a];
      for (int b = 0; b < dim_; ++b) {
        if (b != a) g *= factor[b];
      }
      grad[a] += g.real();
    }
  }
  return value;
}

}  // namespace xsect::forms
