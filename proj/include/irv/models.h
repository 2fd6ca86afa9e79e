#pragma once

#include "irv/engine.h"
#include "irv/tabulator.h"

namespace irv {

// Recount prediction: each ranking's post-recount total is normal with mean
// c*(1+mean_shift) and standard deviation c*sd_shift, where c is the
// ranking's certified count. The defaults come from historical US state
// recounts (mean shift 0.077%, shift spread 0.146% of the count).
struct RecountParams {
    double mean_shift = 0.00077;
    double sd_shift = 0.00146;
    double trunc_z = 5.0;
};

// Bucket size is 1 vote: recount shifts are a handful of votes, so coarser
// buckets would erase the signal. Zero-count rankings stay at zero with
// certainty; with both shifts zero the tally comes back as exact point
// masses. Full-length rankings are folded before modeling.
ElectionModel recount_model(const TallyMap& tally, const std::vector<int>& candidates,
                            const RecountParams& p = {});

// Election-night extrapolation from a partial count: with fraction x of all
// ballots counted and c of them for a ranking, the ranking's final total is
// modeled as normal with mean c/x and standard deviation
// dispersion*(c/x)*(1-x), cut off below the bucket holding the counted total
// (the final total cannot be less than what is already counted).
struct PartialCountParams {
    double fraction_counted = 1.0;
    double dispersion = 0.5;
    int bucket_size = 1;
    double trunc_z = 5.0;
};

// When the predicted deviation rounds below one bucket (sd < bucket_size/2)
// the mass collapses to the single bucket holding the mean. fraction 1
// reproduces the tally as point masses: there is nothing left to predict.
ElectionModel partial_count_model(const TallyMap& counted, const std::vector<int>& candidates,
                                  const PartialCountParams& p);

}  // namespace irv
