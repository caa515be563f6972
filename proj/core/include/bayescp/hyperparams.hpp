#pragma once

#include <span>
#include <string>
#include <string_view>

namespace bayescp {

enum class ModelVariant {
  kIidNormal,  // piecewise-constant mean and variance, iid normal noise
  kAr1,        // zero-mean AR(1) within each segment
};

std::string to_string(ModelVariant variant);
ModelVariant parse_model_variant(std::string_view text);

// Normal-inverse-chi-squared prior constants shared by every segment.
// For kAr1, mu0 is the prior location of the autoregression coefficient.
struct Hyperparams {
  double mu0 = 0.0;
  double k0 = 1.0;
  double nu0 = 1.0;
  double sigma0_sq = 1.0;
  ModelVariant variant = ModelVariant::kIidNormal;

  // Throws DomainError unless mu0 is finite and k0, nu0, sigma0_sq > 0.
  void validate() const;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// Data-dependent prior used when hyperparameters cannot be estimated:
// mean and sample variance of the observed values, k0 = 0.01, nu0 = 3.
// For kAr1 the coefficient prior is centred at zero.
// Missing values (NaN) are skipped. Throws InsufficientData below two
// observations and DegenerateVariance when every observation is equal.
Hyperparams default_hyperparams(std::span<const double> track,
                                ModelVariant variant = ModelVariant::kIidNormal);

}  // namespace bayescp
