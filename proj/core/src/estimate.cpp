#include "forest/estimate.hpp"

#include <exception>
#include <thread>
#include <vector>

#include "forest/error.hpp"

namespace forest {

void RunningMoments::add(const Eigen::MatrixXd& x) {
  if (count_ == 0) {
    count_ = 1;
    mean_ = x;
    m2_ = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    return;
  }
  ++count_;
  const Eigen::MatrixXd delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta.cwiseProduct(x - mean_);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const Eigen::MatrixXd delta = other.mean_ - mean_;
  mean_ += delta * (nb / n);
  m2_ += other.m2_ + delta.cwiseProduct(delta) * (na * nb / n);
  count_ += other.count_;
}

Eigen::MatrixXd RunningMoments::variance() const {
  if (count_ < 2) return Eigen::MatrixXd::Zero(mean_.rows(), mean_.cols());
  return m2_ / static_cast<double>(count_ - 1);
}

Eigen::MatrixXd RunningMoments::std_error() const {
  if (count_ == 0) return {};
  return (variance() / static_cast<double>(count_)).cwiseSqrt();
}

EstimateReport run_estimate(const EstimateOptions& options,
                            const std::function<Draw()>& make_draw) {
  if (options.samples == 0)
    fail(ErrorCode::InvalidSampleCount, "at least one sample is required");
  const unsigned workers = options.workers == 0 ? 1 : options.workers;

  std::vector<RunningMoments> partial(workers);
  auto work = [&](unsigned w) {
    const std::size_t batch =
        options.samples / workers + (w < options.samples % workers ? 1 : 0);
    Rng rng(options.seed, w);
    Draw draw = make_draw();
    for (std::size_t i = 0; i < batch; ++i) partial[w].add(draw(rng));
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w)
      threads.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  RunningMoments total;
  for (const auto& p : partial) total.merge(p);
  return EstimateReport{total.mean(), total.std_error(), total.count(), options.seed,
                        workers};
}

}  // namespace forest
