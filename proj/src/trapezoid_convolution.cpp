#include "trapezoid_convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "padic/special_functions.hpp"

namespace padic::detail {

namespace {

// The FFTW planner is not reentrant; plan execution on fresh arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double, FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex, FftwFree>;

std::size_t padded_length(std::size_t points) {
  std::size_t m = 1;
  while (m < 2 * points) m <<= 1;
  return m;
}

}  // namespace

class FftPlan {
 public:
  explicit FftPlan(std::size_t length) : length_(length) {
    RealBuffer real(fftw_alloc_real(length));
    ComplexBuffer spectrum(fftw_alloc_complex(length / 2 + 1));
    std::lock_guard lock(planner_mutex());
    const int n = static_cast<int>(length);
    forward_ = fftw_plan_dft_r2c_1d(n, real.get(), spectrum.get(), FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(n, spectrum.get(), real.get(), FFTW_ESTIMATE);
    if (forward_ == nullptr || backward_ == nullptr) {
      throw std::runtime_error("FftPlan: FFTW planning failed");
    }
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t length() const { return length_; }
  void forward(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(forward_, in, out); }
  void backward(fftw_complex* in, double* out) const { fftw_execute_dft_c2r(backward_, in, out); }

 private:
  std::size_t length_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

KernelTable::KernelTable(double variance, double spacing, std::size_t max_index)
    : variance_(variance), spacing_(spacing) {
  const double sigma = std::sqrt(variance);
  // exp(-72) is below double resolution relative to the central mass.
  const auto extra = static_cast<std::size_t>(std::ceil(12.0 * sigma / spacing)) + 2;
  const std::size_t count = max_index + extra + 1;
  samples_.resize(count);
  const double norm = spacing / (sigma * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t m = 0; m < count; ++m) {
    const double u = static_cast<double>(m) * spacing;
    samples_[m] = norm * std::exp(-u * u / (2.0 * variance));
  }
  // Accumulate from the smallest terms.
  suffix_.assign(count + 1, 0.0);
  for (std::size_t m = count; m-- > 0;) suffix_[m] = suffix_[m + 1] + samples_[m];
}

double KernelTable::tail(std::size_t m) const {
  if (m >= samples_.size()) return 0.0;
  return 0.5 * samples_[m] + suffix_[m + 1];
}

bool use_dense_storage(Storage storage, std::size_t points) {
  switch (storage) {
    case Storage::dense:
      return true;
    case Storage::matrix_free:
      return false;
    case Storage::automatic:
      break;
  }
  return points <= dense_storage_limit;
}

TrapezoidConvolution::TrapezoidConvolution(double variance, double spacing,
                                           std::size_t points, Storage storage)
    : variance_(variance),
      spacing_(spacing),
      points_(points),
      table_(variance, spacing, points),
      fft_(std::make_unique<FftPlan>(padded_length(points))) {
  if (use_dense_storage(storage, points)) {
    matrix_.resize(points * points);
    for (std::size_t i = 0; i < points; ++i) {
      for (std::size_t j = 0; j < points; ++j) {
        const std::size_t m = i > j ? i - j : j - i;
        matrix_[i * points + j] = weight(j) * table_.sample(m);
      }
    }
  }

  const double half_width = 0.5 * spacing * static_cast<double>(points - 1);
  step_width_ = std::min(std::sqrt(2.0 * variance), half_width / 8.0);

  const std::size_t length = fft_->length();
  symbol_.resize(length / 2 + 1);
  const double dxi = 2.0 * std::numbers::pi / (static_cast<double>(length) * spacing);
  for (std::size_t k = 0; k < symbol_.size(); ++k) {
    const double xi = dxi * static_cast<double>(k);
    symbol_[k] = std::exp(-0.5 * xi * xi * variance) / static_cast<double>(length);
  }
}

TrapezoidConvolution::~TrapezoidConvolution() = default;
TrapezoidConvolution::TrapezoidConvolution(TrapezoidConvolution&&) noexcept = default;
TrapezoidConvolution& TrapezoidConvolution::operator=(TrapezoidConvolution&&) noexcept = default;

double TrapezoidConvolution::node(std::size_t i) const {
  return (static_cast<double>(i) - 0.5 * static_cast<double>(points_ - 1)) * spacing_;
}

void TrapezoidConvolution::apply_direct(std::span<const double> v, double left, double right,
                                        std::span<double> out) const {
  const std::size_t n = points_;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    if (!matrix_.empty()) {
      const double* row = matrix_.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) sum += row[j] * v[j];
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t m = i > j ? i - j : j - i;
        sum += (weight(j) * table_.sample(m)) * v[j];
      }
    }
    out[i] = sum + tail_left(i) * left + tail_right(i) * right;
  }
}

void TrapezoidConvolution::apply_fft(std::span<const double> v, double left, double right,
                                     std::span<double> out) const {
  const std::size_t n = points_;
  const std::size_t length = fft_->length();
  const double mid = 0.5 * (left + right);
  const double jump = 0.5 * (right - left);
  const double a = step_width_;
  const double smoothed = std::sqrt(a * a + 2.0 * variance_);

  RealBuffer real(fftw_alloc_real(length));
  ComplexBuffer spectrum(fftw_alloc_complex(length / 2 + 1));
  double* x = real.get();
  for (std::size_t j = 0; j < n; ++j) {
    const double step = mid + jump * padic::erf(node(j) / a);
    x[j] = weight(j) * (v[j] - step);
  }
  std::fill(x + n, x + length, 0.0);

  fft_->forward(x, spectrum.get());
  fftw_complex* c = spectrum.get();
  for (std::size_t k = 0; k < symbol_.size(); ++k) {
    c[k][0] *= symbol_[k];
    c[k][1] *= symbol_[k];
  }
  fft_->backward(c, x);

  for (std::size_t i = 0; i < n; ++i) {
    out[i] = x[i] + mid + jump * padic::erf(node(i) / smoothed);
  }
}

}  // namespace padic::detail
