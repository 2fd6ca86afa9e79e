#include "irv/dist.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

#include "irv/errors.h"
#include "text_util.h"

namespace irv {

namespace {

constexpr double kNegClamp = -1e-12;

void check_same_bucket(const DiscreteDist& f, const DiscreteDist& g) {
    if (f.bucket_size != g.bucket_size)
        throw ValidationError("bucket size mismatch: " + std::to_string(f.bucket_size) +
                              " vs " + std::to_string(g.bucket_size));
}

void check_nonempty(const DiscreteDist& f) {
    if (f.mass.empty()) throw ValidationError("empty distribution");
    if (f.bucket_size < 1) throw ValidationError("bucket size must be at least 1");
}

}  // namespace

DiscreteDist point_mass(int bucket_size, long long votes) {
    if (bucket_size < 1) throw ValidationError("bucket size must be at least 1");
    if (votes < 0) throw ValidationError("negative vote count");
    DiscreteDist f;
    f.bucket_size = bucket_size;
    f.mass.assign(static_cast<size_t>(votes / bucket_size) + 1, 0.0);
    f.mass.back() = 1.0;
    return f;
}

bool is_point_mass(const DiscreteDist& f, int* bucket) {
    int hit = -1;
    for (int i = 0; i < f.buckets(); ++i) {
        if (f.mass[i] == 0.0) continue;
        if (hit >= 0) return false;
        hit = i;
    }
    if (hit < 0) return false;
    if (bucket) *bucket = hit;
    return true;
}

void renormalize(DiscreteDist& f) {
    double total = 0.0;
    for (double m : f.mass) total += m;
    if (!(total > 0.0)) throw NumericalError("distribution has no mass");
    for (double& m : f.mass) m /= total;
}

void trim_trailing_zeros(DiscreteDist& f) {
    while (f.mass.size() > 1 && f.mass.back() == 0.0) f.mass.pop_back();
}

double mean_votes(const DiscreteDist& f) {
    double m = 0.0;
    for (int i = 0; i < f.buckets(); ++i) m += f.mass[i] * static_cast<double>(i) * f.bucket_size;
    return m;
}

DiscreteDist convolve_naive_serial(const DiscreteDist& f, const DiscreteDist& g) {
    check_same_bucket(f, g);
    check_nonempty(f);
    check_nonempty(g);
    const int la = f.buckets(), lb = g.buckets();
    DiscreteDist out;
    out.bucket_size = f.bucket_size;
    out.mass.assign(la + lb - 1, 0.0);
    for (int k = 0; k < la + lb - 1; ++k) {
        const int ilo = std::max(0, k - lb + 1);
        const int ihi = std::min(k, la - 1);
        double s = 0.0;
        for (int i = ilo; i <= ihi; ++i) s += f.mass[i] * g.mass[k - i];
        out.mass[k] = s;
    }
    renormalize(out);
    return out;
}

DiscreteDist convolve_naive(const DiscreteDist& f, const DiscreteDist& g) {
    check_same_bucket(f, g);
    check_nonempty(f);
    check_nonempty(g);
    const int la = f.buckets(), lb = g.buckets();
    const int lo = la + lb - 1;
    DiscreteDist out;
    out.bucket_size = f.bucket_size;
    out.mass.assign(lo, 0.0);
    const double* fm = f.mass.data();
    const double* gm = g.mass.data();
    double* om = out.mass.data();
    // Gather form: each output entry is summed in ascending i, so the split
    // across threads cannot change any sum.
#pragma omp parallel for schedule(static) if (static_cast<long long>(la) * lb > 1 << 15)
    for (int k = 0; k < lo; ++k) {
        const int ilo = std::max(0, k - lb + 1);
        const int ihi = std::min(k, la - 1);
        double s = 0.0;
        for (int i = ilo; i <= ihi; ++i) s += fm[i] * gm[k - i];
        om[k] = s;
    }
    renormalize(out);
    return out;
}

namespace {

// Iterative radix-2 transform with bit-reversal reordering.
void fft(std::vector<std::complex<double>>& a, bool invert) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * M_PI / static_cast<double>(len) * (invert ? -1.0 : 1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t j = 0; j < len / 2; ++j) {
                std::complex<double> u = a[i + j];
                std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (invert)
        for (auto& x : a) x /= static_cast<double>(n);
}

size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Shared tail of every FFT-based convolution: take real parts, clamp
// round-off, renormalize.
DiscreteDist finish_fft_result(std::vector<std::complex<double>>& spec, int out_len,
                               int bucket_size) {
    DiscreteDist out;
    out.bucket_size = bucket_size;
    out.mass.resize(out_len);
    for (int k = 0; k < out_len; ++k) {
        double v = spec[k].real();
        if (v < 0.0) {
            if (v < kNegClamp)
                throw NumericalError("FFT convolution produced " + std::to_string(v) +
                                     " at bucket " + std::to_string(k));
            v = 0.0;
        }
        out.mass[k] = v;
    }
    renormalize(out);
    return out;
}

}  // namespace

DiscreteDist convolve_fft(const DiscreteDist& f, const DiscreteDist& g) {
    check_same_bucket(f, g);
    check_nonempty(f);
    check_nonempty(g);
    const int la = f.buckets(), lb = g.buckets();
    const int lo = la + lb - 1;
    const size_t n = next_pow2(static_cast<size_t>(lo));

    std::vector<std::complex<double>> fa(n), fb(n);
    for (int i = 0; i < la; ++i) fa[i] = f.mass[i];
    for (int i = 0; i < lb; ++i) fb[i] = g.mass[i];
    fft(fa, false);
    fft(fb, false);
    for (size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft(fa, true);
    return finish_fft_result(fa, lo, f.bucket_size);
}

namespace {

DiscreteDist convolve_many_impl(const std::vector<const DiscreteDist*>& fs, Conv strategy) {
    if (fs.empty()) throw ValidationError("convolve_many: empty sequence");
    for (const DiscreteDist* f : fs) {
        check_nonempty(*f);
        check_same_bucket(*fs.front(), *f);
    }
    const int bucket = fs.front()->bucket_size;

    // Point masses shift indices; no arithmetic needed and no round-off paid.
    long long shift = 0;
    std::vector<const DiscreteDist*> rest;
    for (const DiscreteDist* f : fs) {
        int b = 0;
        if (is_point_mass(*f, &b))
            shift += b;
        else
            rest.push_back(f);
    }

    long long out_len = shift + 1;
    for (const DiscreteDist* f : rest) out_len += f->buckets() - 1;

    DiscreteDist acc;
    if (rest.empty()) {
        acc.mass.assign(1, 1.0);  // identity; the shift below places it
    } else if (rest.size() == 1) {
        acc = *rest.front();
    } else {
        Conv mode = strategy;
        if (mode == Conv::Auto)
            mode = (out_len - shift > kFftThresholdBuckets) ? Conv::Fft : Conv::Naive;
        if (mode == Conv::Naive) {
            acc = *rest.front();
            for (size_t i = 1; i < rest.size(); ++i) acc = convolve_naive(acc, *rest[i]);
        } else {
            // One transform per factor at the final size, one inverse at the
            // end. Fewer passes than folding pairwise, and there is no
            // association order to worry about.
            const size_t lo = static_cast<size_t>(out_len - shift);
            const size_t n = next_pow2(lo);
            std::vector<std::complex<double>> prod(n, std::complex<double>(1.0, 0.0));
            std::vector<std::complex<double>> tmp(n);
            for (const DiscreteDist* f : rest) {
                std::fill(tmp.begin(), tmp.end(), std::complex<double>(0.0, 0.0));
                for (int i = 0; i < f->buckets(); ++i) tmp[i] = f->mass[i];
                fft(tmp, false);
                for (size_t i = 0; i < n; ++i) prod[i] *= tmp[i];
            }
            fft(prod, true);
            acc = finish_fft_result(prod, static_cast<int>(lo), bucket);
        }
    }
    acc.bucket_size = bucket;

    if (shift > 0) acc.mass.insert(acc.mass.begin(), static_cast<size_t>(shift), 0.0);
    return acc;
}

}  // namespace

DiscreteDist convolve_many(const std::vector<const DiscreteDist*>& fs, Conv strategy) {
    return convolve_many_impl(fs, strategy);
}

DiscreteDist convolve_many(const std::vector<DiscreteDist>& fs, Conv strategy) {
    std::vector<const DiscreteDist*> ptrs;
    ptrs.reserve(fs.size());
    for (const auto& f : fs) ptrs.push_back(&f);
    return convolve_many_impl(ptrs, strategy);
}

std::vector<double> cdf(const DiscreteDist& f) {
    std::vector<double> out(f.mass.size());
    double acc = 0.0;
    for (size_t i = 0; i < f.mass.size(); ++i) {
        acc += f.mass[i];
        out[i] = acc;
    }
    return out;
}

DiscreteDist discretized_normal(double mean, double sd, int bucket_size, double trunc_z,
                                Discretization method) {
    if (bucket_size < 1) throw ValidationError("bucket size must be at least 1");
    if (sd < 0.0) throw ValidationError("negative standard deviation");
    if (!(trunc_z > 0.0)) throw ValidationError("truncation width must be positive");

    const double b = static_cast<double>(bucket_size);
    if (sd == 0.0)
        return point_mass(bucket_size, std::max(0LL, static_cast<long long>(std::floor(mean / b)) *
                                                          bucket_size));

    long long klo = static_cast<long long>(std::ceil((mean - trunc_z * sd) / b));
    long long khi = static_cast<long long>(std::floor((mean + trunc_z * sd) / b));
    if (klo < 0) klo = 0;
    if (khi < klo) {
        // The window is narrower than the grid; the whole curve sits inside
        // one bucket.
        return point_mass(bucket_size,
                          std::max(0LL, static_cast<long long>(std::floor(std::max(mean, 0.0) / b)) *
                                            bucket_size));
    }

    DiscreteDist out;
    out.bucket_size = bucket_size;
    out.mass.assign(static_cast<size_t>(khi) + 1, 0.0);
    if (method == Discretization::PdfSample) {
        for (long long k = klo; k <= khi; ++k) {
            const double z = (static_cast<double>(k) * b - mean) / sd;
            out.mass[static_cast<size_t>(k)] = std::exp(-0.5 * z * z);
        }
    } else {
        const double inv = 1.0 / (sd * std::sqrt(2.0));
        for (long long k = klo; k <= khi; ++k) {
            const double z0 = (static_cast<double>(k) * b - mean) * inv;
            const double z1 = (static_cast<double>(k + 1) * b - mean) * inv;
            out.mass[static_cast<size_t>(k)] = 0.5 * (std::erf(z1) - std::erf(z0));
        }
    }
    renormalize(out);
    return out;
}

namespace {

std::string format_prob(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

DistTable load_dist_table(std::istream& in, int bucket_size) {
    if (bucket_size < 1) throw ValidationError("bucket size must be at least 1");
    DistTable t;
    t.bucket_size = bucket_size;

    std::string line;
    int line_no = 0;

    // Header.
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        break;
    }
    auto header = text::split_csv(line);
    if (header.size() < 2 || !text::iequals(header[0], "votes"))
        throw ParseError("distribution table must start with a 'votes,<ranking>,...' header");
    t.names.assign(header.begin() + 1, header.end());
    const size_t ncols = t.names.size();
    t.columns.assign(ncols, DiscreteDist{bucket_size, {}});

    std::map<long long, int> seen_edges;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        auto cells = text::split_csv(line);
        if (cells.size() != ncols + 1)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(ncols + 1) + " fields, got " +
                             std::to_string(cells.size()));
        long long edge = text::parse_ll(cells[0], "line " + std::to_string(line_no));
        if (edge < 0)
            throw ValidationError("line " + std::to_string(line_no) + ": negative bucket edge");
        if (edge % bucket_size != 0)
            throw ValidationError("line " + std::to_string(line_no) + ": edge " +
                                  std::to_string(edge) + " is not a multiple of bucket size " +
                                  std::to_string(bucket_size));
        if (!seen_edges.emplace(edge, line_no).second)
            throw ParseError("line " + std::to_string(line_no) + ": duplicate edge " +
                             std::to_string(edge));
        const size_t idx = static_cast<size_t>(edge / bucket_size);
        for (size_t c = 0; c < ncols; ++c) {
            const std::string& cell = cells[c + 1];
            double v = (cell.empty() || cell == ".")
                           ? 0.0
                           : text::parse_double(cell, "line " + std::to_string(line_no));
            if (v < 0.0)
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": negative probability in column " + t.names[c]);
            if (v == 0.0) continue;
            auto& mass = t.columns[c].mass;
            if (mass.size() <= idx) mass.resize(idx + 1, 0.0);
            mass[idx] = v;
        }
    }

    for (size_t c = 0; c < ncols; ++c) {
        auto& col = t.columns[c];
        double total = 0.0;
        for (double v : col.mass) total += v;
        if (std::abs(total - 1.0) > 0.05)
            throw ValidationError("column " + t.names[c] + " mass sums to " +
                                  std::to_string(total) + ", off by more than 0.05");
        if (col.mass.empty())
            throw ValidationError("column " + t.names[c] + " is empty");
        if (std::abs(total - 1.0) > kMassTol) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6f", total);
            t.warnings.push_back("column " + t.names[c] + " renormalized (sum was " + buf + ")");
        }
        renormalize(col);
        trim_trailing_zeros(col);
    }
    return t;
}

void write_dist_table(std::ostream& out, const DistTable& t) {
    out << "votes";
    for (const auto& n : t.names) out << ',' << n;
    out << '\n';
    size_t max_len = 0;
    for (const auto& c : t.columns) max_len = std::max(max_len, c.mass.size());
    for (size_t i = 0; i < max_len; ++i) {
        bool any = false;
        for (const auto& c : t.columns)
            if (i < c.mass.size() && c.mass[i] != 0.0) any = true;
        if (!any) continue;
        out << static_cast<long long>(i) * t.bucket_size;
        for (const auto& c : t.columns) {
            double v = i < c.mass.size() ? c.mass[i] : 0.0;
            out << ',';
            if (v == 0.0)
                out << '.';
            else
                out << format_prob(v);
        }
        out << '\n';
    }
}

}  // namespace irv
