#include "esola/pitch_scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "esola/errors.hpp"

namespace esola {

namespace {

// Modified Bessel function of the first kind, order zero (power series).
double bessel_i0(double x) {
    const double half_sq = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= half_sq / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-16 * sum) {
            break;
        }
    }
    return sum;
}

double sinc(double x) {
    if (std::abs(x) < 1e-12) {
        return 1.0;
    }
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

// Tabulated right half of the symmetric interpolation kernel
// h(t) = fc * sinc(fc t) * kaiser(t / half_width), sampled on a fine grid.
struct KernelTable {
    std::vector<double> values;
    double half_width = 0.0;
    double samples_per_unit = 0.0;

    double at(double t) const {
        const double a = std::abs(t) * samples_per_unit;
        const auto i = static_cast<std::size_t>(a);
        if (i + 1 >= values.size()) {
            return 0.0;
        }
        const double frac = a - static_cast<double>(i);
        return values[i] + frac * (values[i + 1] - values[i]);
    }
};

KernelTable build_kernel(double cutoff, double half_width, double kaiser_beta) {
    constexpr double kSamplesPerUnit = 128.0;
    KernelTable table;
    table.half_width = half_width;
    table.samples_per_unit = kSamplesPerUnit;
    const auto n = static_cast<std::size_t>(std::ceil(half_width * kSamplesPerUnit)) + 2;
    table.values.resize(n);
    const double i0_beta = bessel_i0(kaiser_beta);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / kSamplesPerUnit;
        const double frac = t / half_width;
        if (frac >= 1.0) {
            table.values[i] = 0.0;
            continue;
        }
        const double window = bessel_i0(kaiser_beta * std::sqrt(1.0 - frac * frac)) / i0_beta;
        table.values[i] = cutoff * sinc(cutoff * t) * window;
    }
    return table;
}

} // namespace

AudioBuffer resample(const AudioBuffer& buffer, const ResampleSpec& spec) {
    if (!(spec.ratio >= 0.25 && spec.ratio <= 4.0)) {
        throw ArgumentError("resample ratio " + std::to_string(spec.ratio) +
                            " outside [0.25, 4]");
    }
    if (spec.filter_taps_per_phase < 1) {
        throw ArgumentError("filter_taps_per_phase must be positive");
    }
    const auto len = static_cast<std::int64_t>(buffer.samples.size());
    if (len <= 2 * spec.filter_taps_per_phase) {
        throw SignalTooShort("input must exceed twice the filter half-width");
    }

    // When slowing the sample grid down (ratio > 1) the kernel stretches to
    // keep the cutoff below the output Nyquist.
    const double cutoff = std::min(1.0, 1.0 / spec.ratio);
    const double half_width = spec.filter_taps_per_phase / cutoff;
    const KernelTable kernel = build_kernel(cutoff, half_width, spec.kaiser_beta);

    const auto out_len = std::llround(static_cast<double>(len) / spec.ratio);
    AudioBuffer out;
    out.sample_rate = buffer.sample_rate;
    out.samples.resize(static_cast<std::size_t>(out_len));

    for (std::int64_t k = 0; k < out_len; ++k) {
        const double center = static_cast<double>(k) * spec.ratio;
        const auto j_lo =
            std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(center - half_width)));
        const auto j_hi = std::min<std::int64_t>(
            len - 1, static_cast<std::int64_t>(std::floor(center + half_width)));
        double acc = 0.0;
        for (std::int64_t j = j_lo; j <= j_hi; ++j) {
            acc += buffer.samples[static_cast<std::size_t>(j)] *
                   kernel.at(static_cast<double>(j) - center);
        }
        out.samples[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

AudioBuffer pitch_scale(const AudioBuffer& buffer, const EpochMarks& marks, double beta,
                        const TsmConfig& cfg, const ResampleSpec& spec) {
    ResampleSpec rs = spec;
    rs.ratio = beta;
    const AudioBuffer stretched = time_scale(buffer, marks, beta, cfg).audio;
    return resample(stretched, rs);
}

} // namespace esola
