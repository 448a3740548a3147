#pragma once

#include <span>

#include "lftm/count_state.hpp"

namespace lftm {

// Unnormalized topic weights for one token whose counts are already removed.
// Kept in the same evaluation shape as the latent-feature conditional so the
// lambda = 0 reduction is exact.
void lda_conditional(const CountState& state, const Hyperparams& hp, int d, int word,
                     std::span<double> weights_out);

// Log topic weights for one document whose counts are already removed,
// evaluated through log-Gamma; Gamma ratios overflow for realistic counts.
void dmm_log_weights(const CountState& state, const Corpus& corpus, const Hyperparams& hp, int d,
                     std::span<double> log_weights_out);

void lda_sweep(CountState& state, const Corpus& corpus, const Hyperparams& hp, Rng& rng);
void dmm_sweep(CountState& state, const Corpus& corpus, const Hyperparams& hp, Rng& rng);

// init_assignments followed by `iters` sweeps of the kind's family sampler.
CountState train_baseline(const Corpus& corpus, const Hyperparams& hp, ModelKind kind, int iters,
                          Rng& rng);

}  // namespace lftm
