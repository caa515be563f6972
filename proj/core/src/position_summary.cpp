#include "bayescp/errors.hpp"
#include "bayescp/inference.hpp"

namespace bayescp {

std::vector<PosteriorParams> segment_posteriors(const Segmentation& a,
                                                const EvidenceKernel& kernel,
                                                std::size_t track) {
  if (kernel.variant() != ModelVariant::kIidNormal)
    throw DomainError("segment posteriors are defined for the iid normal model only");
  if (!a.is_valid(kernel.size())) throw DomainError("segmentation does not fit the sequence");
  const Hyperparams& theta = kernel.thetas().at(track);
  std::vector<PosteriorParams> out;
  out.reserve(a.num_segments());
  for (std::size_t t = 0; t < a.num_segments(); ++t) {
    const auto [begin, end] = a.segment(t);
    out.push_back(posterior_update(theta, kernel.stats(track, begin, end)));
  }
  return out;
}

PositionSummary posterior_position_summary(const SampleSet& samples,
                                           const EvidenceKernel& kernel, std::size_t track) {
  if (samples.samples.empty()) throw ConfigError("need at least one sample");
  const std::size_t n = kernel.size();
  std::vector<double> mu_sum(n, 0.0);
  std::vector<double> sigma_sum(n, 0.0);
  std::vector<bool> undefined(n, false);

  for (const auto& a : samples.samples) {
    const auto posts = segment_posteriors(a, kernel, track);
    for (std::size_t t = 0; t < posts.size(); ++t) {
      const auto [begin, end] = a.segment(t);
      const PosteriorParams& p = posts[t];
      const bool has_mean = p.nu_n > 2.0;
      const double sigma_mean = has_mean ? p.nu_sigma_sq_n / (p.nu_n - 2.0) : 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        mu_sum[i] += p.mu_n;
        if (has_mean) {
          sigma_sum[i] += sigma_mean;
        } else {
          undefined[i] = true;
        }
      }
    }
  }

  const double count = static_cast<double>(samples.samples.size());
  PositionSummary out;
  out.mean_mu.resize(n);
  out.mean_sigma_sq.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.mean_mu[i] = mu_sum[i] / count;
    if (!undefined[i]) out.mean_sigma_sq[i] = sigma_sum[i] / count;
  }
  return out;
}

PositionSummary posterior_position_summary(const SampleSet& samples,
                                           const ObservedSequence& seq,
                                           const Hyperparams& theta) {
  return posterior_position_summary(samples, EvidenceKernel(seq, theta), 0);
}

}  // namespace bayescp
