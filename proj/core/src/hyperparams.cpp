#include "bayescp/hyperparams.hpp"

#include <cmath>

#include "bayescp/errors.hpp"
#include "bayescp/sequence.hpp"

namespace bayescp {

std::string to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::kIidNormal:
      return "iid";
    case ModelVariant::kAr1:
      return "ar1";
  }
  return "unknown";
}

ModelVariant parse_model_variant(std::string_view text) {
  if (text == "iid") return ModelVariant::kIidNormal;
  if (text == "ar1") return ModelVariant::kAr1;
  throw ConfigError("unknown model variant '" + std::string(text) + "' (expected iid or ar1)");
}

void Hyperparams::validate() const {
  if (!std::isfinite(mu0)) throw DomainError("hyperparameter mu0 must be finite");
  if (!(k0 > 0.0) || !std::isfinite(k0)) throw DomainError("hyperparameter k0 must be positive");
  if (!(nu0 > 0.0) || !std::isfinite(nu0)) throw DomainError("hyperparameter nu0 must be positive");
  if (!(sigma0_sq > 0.0) || !std::isfinite(sigma0_sq))
    throw DomainError("hyperparameter sigma0_sq must be positive");
}

Hyperparams default_hyperparams(std::span<const double> track, ModelVariant variant) {
  double sum = 0.0;
  std::size_t m = 0;
  for (double y : track) {
    if (is_missing(y)) continue;
    sum += y;
    ++m;
  }
  if (m < 2) throw InsufficientData("default hyperparameters need at least two observed values");
  const double mean = sum / static_cast<double>(m);
  double sq_dev = 0.0;
  for (double y : track) {
    if (is_missing(y)) continue;
    sq_dev += (y - mean) * (y - mean);
  }
  const double variance = sq_dev / static_cast<double>(m - 1);
  if (!(variance > 0.0)) throw DegenerateVariance("observed values have zero sample variance");

  Hyperparams theta;
  theta.mu0 = variant == ModelVariant::kAr1 ? 0.0 : mean;
  theta.k0 = 0.01;
  theta.nu0 = 3.0;
  theta.sigma0_sq = variance;
  theta.variant = variant;
  return theta;
}

}  // namespace bayescp
