#include "bayescp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "bayescp/errors.hpp"
#include "bayescp/log_sum_exp.hpp"

namespace bayescp {

namespace detail {

std::size_t draw_log_categorical(std::span<const double> log_weights, double u) {
  const double total = log_sum_exp(log_weights);
  if (!std::isfinite(total)) throw ModelError("categorical draw with no positive weight");
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    if (log_weights[i] == kLogZero) continue;
    cumulative += std::exp(log_weights[i] - total);
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

}  // namespace detail

namespace {

// SplitMix64 keyed by (seed, index): sample s gets its own stream no matter
// how the samples are partitioned.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index) : state_(mix(seed ^ mix(index + 0x632BE59BD9B4E019ULL))) {}

  double uniform() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return static_cast<double>(mix(state_) >> 11) * 0x1.0p-53;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace

SampleSet sample_segmentations(const ForwardTable& table, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ConfigError("sample count must be at least 1");

  const std::vector<double> log_pk = log_posterior_num_segments(table);
  const SegPrior& prior = table.prior();
  const std::size_t n = table.n();

  SampleSet out;
  out.seed = seed;
  out.samples.reserve(count);
  std::vector<double> weights;
  weights.reserve(n);

  for (std::size_t s = 0; s < count; ++s) {
    SampleStream rng(seed, s);
    const std::size_t k = detail::draw_log_categorical(log_pk, rng.uniform()) + 1;

    std::vector<std::size_t> cps(k);
    std::size_t i = n;
    cps[k - 1] = n;
    for (std::size_t t = k; t >= 2; --t) {
      const std::size_t j_lo = i > prior.max_length() ? i - prior.max_length() : 0;
      const std::size_t j_hi = i - std::min(i, prior.min_length());
      weights.clear();
      for (std::size_t j = j_lo; j <= j_hi; ++j) {
        const double prefix = table.lp_hat(j, t - 1);
        weights.push_back(prefix == kLogZero || j == i ? kLogZero
                                                       : prefix + table.log_seg1(j, i));
      }
      i = j_lo + detail::draw_log_categorical(weights, rng.uniform());
      cps[t - 2] = i;
    }
    out.samples.push_back(Segmentation{std::move(cps)});
  }
  return out;
}

}  // namespace bayescp
