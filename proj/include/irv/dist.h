#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace irv {

inline constexpr double kMassTol = 1e-9;
inline constexpr int kFftThresholdBuckets = 256;

// Probability mass over vote-count buckets: mass[i] is the probability of a
// total in [i*bucket_size, (i+1)*bucket_size). Mass sums to 1 within 1e-9;
// trailing zeros may be trimmed.
struct DiscreteDist {
    int bucket_size = 1;
    std::vector<double> mass;

    int buckets() const { return static_cast<int>(mass.size()); }
    double at(int i) const {
        return (i >= 0 && i < buckets()) ? mass[i] : 0.0;
    }
};

// All probability at the bucket containing `votes`.
DiscreteDist point_mass(int bucket_size, long long votes);

// True when exactly one bucket carries all the mass; *bucket gets its index.
bool is_point_mass(const DiscreteDist& f, int* bucket = nullptr);

void renormalize(DiscreteDist& f);
void trim_trailing_zeros(DiscreteDist& f);

// Expected vote count, with each bucket represented by its lower edge.
double mean_votes(const DiscreteDist& f);

enum class Conv { Naive, Fft, Auto };

// Plain summation on one thread. Reference implementation for the kernels
// below; kept so the parallel path has something to be checked against.
DiscreteDist convolve_naive_serial(const DiscreteDist& f, const DiscreteDist& g);

// Same gather loop parallelized over output entries. Each entry is summed in
// the same order as the serial version, so results are bitwise identical for
// any thread count.
DiscreteDist convolve_naive(const DiscreteDist& f, const DiscreteDist& g);

// Radix-2 FFT convolution, zero-padded to the next power of two. Agrees with
// convolve_naive within 1e-9 per entry. Round-off entries in (-1e-12, 0) are
// clamped to zero and the result renormalized; anything below -1e-12 raises
// NumericalError.
DiscreteDist convolve_fft(const DiscreteDist& f, const DiscreteDist& g);

// Convolution of the whole sequence. Point masses are applied as exact index
// shifts. Auto uses the FFT route once the result would exceed
// kFftThresholdBuckets. The Fft route transforms all factors at the final
// size and multiplies the spectra pointwise, which is associativity-free by
// construction; Naive folds left to right.
DiscreteDist convolve_many(const std::vector<DiscreteDist>& fs, Conv strategy = Conv::Auto);
DiscreteDist convolve_many(const std::vector<const DiscreteDist*>& fs, Conv strategy = Conv::Auto);

// Running totals: entry k is the probability of a total at or below bucket k.
std::vector<double> cdf(const DiscreteDist& f);

enum class Discretization { PdfSample, IntervalIntegral };

// Normal curve snapped to the bucket grid. PdfSample evaluates the density at
// bucket lower edges; IntervalIntegral integrates the density across each
// bucket. Either way the support is limited to non-negative buckets within
// trunc_z standard deviations and the result is normalized. sd = 0 gives a
// point mass at the bucket containing the mean, as does a truncation window
// so narrow that it contains no bucket edge.
DiscreteDist discretized_normal(double mean, double sd, int bucket_size,
                                double trunc_z = 5.0,
                                Discretization method = Discretization::PdfSample);

// Distribution table files: header "votes,<ranking>,<ranking>,...", one row
// per bucket lower edge (multiples of bucket_size), "." or an empty cell for
// zero. Columns whose mass is off 1 by more than 0.05 are rejected; smaller
// deviations are renormalized and noted in warnings.
struct DistTable {
    int bucket_size = 1;
    std::vector<std::string> names;     // column headers, in file order
    std::vector<DiscreteDist> columns;
    std::vector<std::string> warnings;
};

DistTable load_dist_table(std::istream& in, int bucket_size);
void write_dist_table(std::ostream& out, const DistTable& t);

}  // namespace irv
