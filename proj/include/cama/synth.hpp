#pragma once

#include <cstdint>

#include "cama/cohort.hpp"

namespace cama {

// Seeded synthetic cohort generator standing in for a real score-producing
// pipeline. Class-conditional Gaussian logits: signal_* sets the class
// separation before and after acquisition, noise_scale the per-sample
// spread, and imp_fidelity in [0,1] how tightly the imputed scores
// concentrate on the acquired one (1 = perfect imputer, 0 = useless).
struct SynthConfig {
    std::size_t n = 1000;
    std::size_t k = 100;
    double prevalence = 0.3;
    double signal_avail = 0.5;
    double signal_acquired = 1.5;
    double imp_fidelity = 0.8;
    double noise_scale = 1.0;
    std::uint64_t seed = 1;
};

// Fully determined by config.seed. Throws PreconditionError on invalid
// configuration (prevalence outside (0,1), signal_acquired < signal_avail,
// non-positive noise scale, fidelity outside [0,1]).
Cohort generate(const SynthConfig& config);

}  // namespace cama
