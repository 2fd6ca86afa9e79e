#include "irv/models.h"

#include <cmath>

#include "irv/errors.h"

namespace irv {

ElectionModel recount_model(const TallyMap& tally, const std::vector<int>& candidates,
                            const RecountParams& p) {
    if (p.sd_shift < 0.0 || p.trunc_z <= 0.0)
        throw ValidationError("recount parameters out of range");
    ElectionModel m;
    m.candidates = candidates;
    m.bucket_size = 1;
    TallyMap folded = collapse_full_rankings(tally, static_cast<int>(candidates.size()));
    for (const auto& [r, c] : folded) {
        if (c < 0) throw ValidationError("negative tally count");
        if (c == 0) {
            m.dists[r] = point_mass(1, 0);
            continue;
        }
        double mean = static_cast<double>(c) * (1.0 + p.mean_shift);
        double sd = static_cast<double>(c) * p.sd_shift;
        m.dists[r] = discretized_normal(mean, sd, 1, p.trunc_z);
    }
    validate_model(m);
    return m;
}

ElectionModel partial_count_model(const TallyMap& counted, const std::vector<int>& candidates,
                                  const PartialCountParams& p) {
    if (p.fraction_counted <= 0.0 || p.fraction_counted > 1.0)
        throw ValidationError("fraction counted must be in (0, 1]");
    if (p.dispersion < 0.0 || p.bucket_size < 1 || p.trunc_z <= 0.0)
        throw ValidationError("partial count parameters out of range");
    ElectionModel m;
    m.candidates = candidates;
    m.bucket_size = p.bucket_size;
    TallyMap folded = collapse_full_rankings(counted, static_cast<int>(candidates.size()));
    for (const auto& [r, c] : folded) {
        if (c < 0) throw ValidationError("negative tally count");
        if (c == 0 || p.fraction_counted == 1.0) {
            m.dists[r] = point_mass(p.bucket_size, c);
            continue;
        }
        double mean = static_cast<double>(c) / p.fraction_counted;
        double sd = p.dispersion * mean * (1.0 - p.fraction_counted);
        if (sd < static_cast<double>(p.bucket_size) / 2.0) {
            m.dists[r] = point_mass(p.bucket_size, static_cast<long long>(std::floor(mean)));
            continue;
        }
        DiscreteDist f = discretized_normal(mean, sd, p.bucket_size, p.trunc_z);
        // The final total cannot fall below what has already been counted.
        int floor_bucket = static_cast<int>(c / p.bucket_size);
        bool any = false;
        for (int k = 0; k < f.buckets(); ++k) {
            if (k < floor_bucket)
                f.mass[k] = 0.0;
            else if (f.mass[k] > 0.0)
                any = true;
        }
        if (!any) {
            m.dists[r] = point_mass(p.bucket_size, c);
            continue;
        }
        renormalize(f);
        trim_trailing_zeros(f);
        m.dists[r] = std::move(f);
    }
    validate_model(m);
    return m;
}

}  // namespace irv
