#include "welch.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "optomech/error.hpp"

namespace optomech::detail {

namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

WelchAccumulator::WelchAccumulator(double dt, std::size_t segment_len, double overlap_frac)
    : dt_(dt), segment_len_(segment_len) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "welch: dt must be positive");
  if (segment_len < 2) throw Error(ErrorCode::TooShort, "welch: segment length must be >= 2");
  if (!(overlap_frac >= 0.0 && overlap_frac < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "welch: overlap fraction must be in [0, 1)");
  }
  const auto overlap = static_cast<std::size_t>(std::floor(overlap_frac * segment_len));
  hop_ = segment_len - overlap;
  if (hop_ == 0) hop_ = 1;

  // Periodic Hann window.
  window_.resize(segment_len);
  for (std::size_t n = 0; n < segment_len; ++n) {
    window_[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                      static_cast<double>(segment_len));
    window_power_ += window_[n] * window_[n];
  }
  sum_.assign(segment_len / 2 + 1, 0.0);

  std::lock_guard lock(planner_mutex());
  in_ = fftw_alloc_real(segment_len);
  out_ = fftw_alloc_complex(segment_len / 2 + 1);
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(segment_len), in_, out_, FFTW_ESTIMATE);
  if (!plan_) throw Error(ErrorCode::NumericalFailure, "welch: FFTW planning failed");
}

WelchAccumulator::~WelchAccumulator() {
  std::lock_guard lock(planner_mutex());
  if (plan_) fftw_destroy_plan(plan_);
  fftw_free(in_);
  fftw_free(out_);
}

double WelchAccumulator::bin_width() const {
  return 2.0 * std::numbers::pi / (static_cast<double>(segment_len_) * dt_);
}

void WelchAccumulator::push(std::span<const double> samples) {
  pending_.insert(pending_.end(), samples.begin(), samples.end());
  std::size_t start = 0;
  while (pending_.size() - start >= segment_len_) {
    double mean = 0.0;
    for (std::size_t n = 0; n < segment_len_; ++n) mean += pending_[start + n];
    mean /= static_cast<double>(segment_len_);
    for (std::size_t n = 0; n < segment_len_; ++n) {
      in_[n] = (pending_[start + n] - mean) * window_[n];
    }
    fftw_execute(plan_);
    const double scale = dt_ / window_power_;
    for (std::size_t k = 0; k < sum_.size(); ++k) {
      sum_[k] += scale * (out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1]);
    }
    ++segments_;
    start += hop_;
  }
  pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(start));
}

}  // namespace optomech::detail
