#pragma once

#include <cstddef>
#include <vector>

#include "bayescp/evidence.hpp"
#include "bayescp/hyperparams.hpp"
#include "bayescp/sequence.hpp"

namespace bayescp {

// O(1)-per-window segment evidence for a fixed sequence and fixed
// per-track hyperparameters, backed by prefix sums over positions.
//
// Windows are half-open index ranges [begin, end), i.e. 1-based positions
// begin+1..end. Immutable after construction.
class EvidenceKernel {
 public:
  EvidenceKernel(const ObservedSequence& seq, std::vector<Hyperparams> thetas);
  EvidenceKernel(const ObservedSequence& seq, const Hyperparams& theta);

  std::size_t size() const noexcept { return n_; }
  std::size_t num_tracks() const noexcept { return tracks_.size(); }
  ModelVariant variant() const noexcept { return thetas_.front().variant; }
  const std::vector<Hyperparams>& thetas() const noexcept { return thetas_; }
  const ObservedSequence& sequence() const noexcept { return seq_; }

  // Sum over tracks of log p(window | one segment). Throws WindowError
  // unless begin < end <= size().
  double log_evidence(std::size_t begin, std::size_t end) const;
  double log_evidence(std::size_t track, std::size_t begin, std::size_t end) const;

  SufficientStats stats(std::size_t track, std::size_t begin, std::size_t end) const;

 private:
  struct TrackTables {
    std::size_t index = 0;
    Hyperparams theta;
    double shift = 0.0;       // iid values are stored relative to this
    double mu0_shifted = 0.0;
    double prior_scale = 0.0; // nu0 * sigma0^2
    std::vector<double> count, sum, sum_sq;
    std::vector<double> noise_sq, pair_xx, pair_xy, pair_yy;  // raw values, for AR(1)
    std::vector<double> log_const;  // per observed count m, all but the scale term
    std::vector<double> half_nu;    // (nu0 + m) / 2
    std::vector<double> shrink;     // k0 m / (k0 + m)
  };

  void check_window(std::size_t begin, std::size_t end) const;
  double track_evidence(const TrackTables& t, std::size_t begin, std::size_t end) const;

  ObservedSequence seq_;
  std::vector<Hyperparams> thetas_;
  std::size_t n_;
  std::vector<TrackTables> tracks_;
};

}  // namespace bayescp
