#include "cama/synth.hpp"

#include <string>

#include "cama/errors.hpp"
#include "cama/rng.hpp"

namespace cama {

Cohort generate(const SynthConfig& config) {
    if (config.n < 1) {
        throw PreconditionError("generate: cohort size must be at least 1");
    }
    if (!(config.prevalence > 0.0) || !(config.prevalence < 1.0)) {
        throw PreconditionError("generate: prevalence must lie strictly inside (0,1)");
    }
    if (config.signal_avail < 0.0 || config.signal_acquired < config.signal_avail) {
        throw PreconditionError(
            "generate: requires 0 <= signal_avail <= signal_acquired");
    }
    if (!(config.noise_scale > 0.0)) {
        throw PreconditionError("generate: noise_scale must be positive");
    }
    if (config.imp_fidelity < 0.0 || config.imp_fidelity > 1.0) {
        throw PreconditionError("generate: imp_fidelity must lie in [0,1]");
    }

    Rng rng(config.seed);
    std::vector<ScoreRecord> records;
    records.reserve(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
        ScoreRecord r;
        r.id = static_cast<std::int64_t>(i);
        r.label = rng.bernoulli(config.prevalence) ? 1 : 0;
        const double direction = r.label == 1 ? 1.0 : -1.0;
        r.s_acquired = config.signal_acquired * direction + config.noise_scale * rng.normal();
        r.s_avail = config.signal_avail * direction + config.noise_scale * rng.normal();
        // Imputations center between the two scores per fidelity; their
        // spread shrinks with fidelity so a perfect imputer reproduces
        // the acquired score exactly.
        r.s_imp.reserve(config.k);
        const double center = config.imp_fidelity * r.s_acquired +
                              (1.0 - config.imp_fidelity) * r.s_avail;
        const double spread = (1.0 - config.imp_fidelity) * config.noise_scale;
        for (std::size_t k = 0; k < config.k; ++k) {
            r.s_imp.push_back(center + spread * rng.normal());
        }
        records.push_back(std::move(r));
    }
    return Cohort(std::move(records));
}

}  // namespace cama
