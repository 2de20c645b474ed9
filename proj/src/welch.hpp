#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <fftw3.h>

namespace optomech::detail {

/// Streaming Welch estimator: feed samples in arbitrary chunks, every full
/// segment is windowed, transformed and accumulated as it completes.
class WelchAccumulator {
 public:
  WelchAccumulator(double dt, std::size_t segment_len, double overlap_frac);
  ~WelchAccumulator();
  WelchAccumulator(const WelchAccumulator&) = delete;
  WelchAccumulator& operator=(const WelchAccumulator&) = delete;

  void push(std::span<const double> samples);

  std::size_t segments() const { return segments_; }
  std::size_t bins() const { return sum_.size(); }
  /// Sum (not mean) of the segment periodograms.
  const std::vector<double>& sum() const { return sum_; }
  double bin_width() const;

 private:
  double dt_;
  std::size_t segment_len_;
  std::size_t hop_;
  std::vector<double> window_;
  double window_power_ = 0.0;
  std::vector<double> pending_;
  std::vector<double> sum_;
  std::size_t segments_ = 0;
  double* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

}  // namespace optomech::detail
