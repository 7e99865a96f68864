#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "forest/rng.hpp"
#include "forest/tree_sampler.hpp"

namespace forest {

/// Monte Carlo estimate: per-component sample mean and standard error of the
/// mean, both from one sample stream. Scalars are 1x1, vectors n x 1.
struct EstimateReport {
  Eigen::MatrixXd value;
  Eigen::MatrixXd std_error;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;

  double scalar() const { return value(0, 0); }
  double scalar_error() const { return std_error(0, 0); }
};

struct EstimateOptions {
  std::size_t samples = 10'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::uint64_t max_walk_steps = SamplerConfig{}.max_walk_steps;
};

/// Welford accumulator over matrix-valued draws.
class RunningMoments {
 public:
  void add(const Eigen::MatrixXd& x);
  /// Pools another accumulator (Chan's parallel update).
  void merge(const RunningMoments& other);

  std::size_t count() const noexcept { return count_; }
  const Eigen::MatrixXd& mean() const noexcept { return mean_; }
  /// Unbiased sample variance; zero with fewer than two draws.
  Eigen::MatrixXd variance() const;
  /// sqrt(variance / count).
  Eigen::MatrixXd std_error() const;

 private:
  std::size_t count_ = 0;
  Eigen::MatrixXd mean_;
  Eigen::MatrixXd m2_;
};

using Draw = std::function<Eigen::MatrixXd(Rng&)>;

/// Runs `options.samples` draws split statically over `options.workers`
/// threads. Worker w gets its own draw from `make_draw()` and the stream
/// Rng(seed, w); the first samples % workers workers take one extra draw.
/// Partial results merge in worker order, so output is a pure function of
/// (seed, workers, samples). Throws InvalidSampleCount for zero samples.
EstimateReport run_estimate(const EstimateOptions& options,
                            const std::function<Draw()>& make_draw);

}  // namespace forest
