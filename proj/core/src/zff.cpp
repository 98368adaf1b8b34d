#include "esola/zff.hpp"

#include <algorithm>
#include <cmath>

#include "esola/errors.hpp"

namespace esola {

namespace {

// Normalized autocorrelation of the signal against its own shift, evaluated
// for every lag in [lag_lo, lag_hi]: sum x[n] x[n+lag] over the overlap,
// normalized by the windowed energies. The numerators for all lags come from
// one pass over the signal (the inner lag loop has no loop-carried dependency
// and vectorizes); the energies come from a prefix sum of squares.
std::vector<double> normalized_autocorr_band(const std::vector<double>& x, std::int64_t lag_lo,
                                             std::int64_t lag_hi) {
    const auto n = static_cast<std::int64_t>(x.size());
    lag_lo = std::max<std::int64_t>(1, lag_lo);
    lag_hi = std::min(lag_hi, n - 1);
    if (lag_hi < lag_lo) {
        return {};
    }
    const auto lags = static_cast<std::size_t>(lag_hi - lag_lo + 1);

    std::vector<double> num(lags, 0.0);
    {
        const double* __restrict xs = x.data();
        for (std::size_t t = 0; t < lags; ++t) {
            const auto lag = lag_lo + static_cast<std::int64_t>(t);
            const std::int64_t overlap = n - lag;
            const double* __restrict a = xs;
            const double* __restrict b = xs + lag;
            // Four accumulators break the addition dependency chain.
            double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
            std::int64_t i = 0;
            for (; i + 4 <= overlap; i += 4) {
                s0 += a[i] * b[i];
                s1 += a[i + 1] * b[i + 1];
                s2 += a[i + 2] * b[i + 2];
                s3 += a[i + 3] * b[i + 3];
            }
            for (; i < overlap; ++i) {
                s0 += a[i] * b[i];
            }
            num[t] = (s0 + s1) + (s2 + s3);
        }
    }

    std::vector<double> sq_prefix(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t i = 0; i < n; ++i) {
        sq_prefix[static_cast<std::size_t>(i) + 1] =
            sq_prefix[static_cast<std::size_t>(i)] +
            x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    }

    std::vector<double> r(lags, 0.0);
    for (std::size_t t = 0; t < lags; ++t) {
        const auto lag = lag_lo + static_cast<std::int64_t>(t);
        const double e0 = sq_prefix[static_cast<std::size_t>(n - lag)];
        const double e1 = sq_prefix[static_cast<std::size_t>(n)] -
                          sq_prefix[static_cast<std::size_t>(lag)];
        r[t] = (e0 > 0.0 && e1 > 0.0) ? num[t] / std::sqrt(e0 * e1) : 0.0;
    }
    return r;
}

// Average pooling by `factor`; cheap low-pass good enough for an f0 band that
// lives far below the decimated Nyquist.
std::vector<double> decimate_mean(const std::vector<double>& x, std::int64_t factor) {
    std::vector<double> out(x.size() / static_cast<std::size_t>(factor));
    for (std::size_t i = 0; i < out.size(); ++i) {
        double acc = 0.0;
        for (std::int64_t j = 0; j < factor; ++j) {
            acc += x[i * static_cast<std::size_t>(factor) + static_cast<std::size_t>(j)];
        }
        out[i] = acc / static_cast<double>(factor);
    }
    return out;
}

} // namespace

std::vector<double> first_difference(const std::vector<double>& signal) {
    if (signal.size() < 2) {
        throw SignalTooShort("first difference needs at least 2 samples");
    }
    std::vector<double> out(signal.size());
    out[0] = signal[0];
    for (std::size_t n = 1; n < signal.size(); ++n) {
        out[n] = signal[n] - signal[n - 1];
    }
    return out;
}

std::vector<double> zero_frequency_resonate(const std::vector<double>& signal, int stages) {
    if (signal.empty()) {
        throw SignalTooShort("empty signal");
    }
    if (stages < 1) {
        throw ArgumentError("resonator needs at least one stage");
    }
    std::vector<double> y(signal);
    if (stages == 2) {
        // The common cascade in one pass.
        double a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;
        for (double& v : y) {
            const double s1 = 2.0 * a1 - a2 + v;
            a2 = a1;
            a1 = s1;
            const double s2 = 2.0 * b1 - b2 + s1;
            b2 = b1;
            b1 = s2;
            v = s2;
        }
        return y;
    }
    for (int s = 0; s < stages; ++s) {
        double y1 = 0.0, y2 = 0.0;
        for (double& v : y) {
            const double cur = 2.0 * y1 - y2 + v;
            v = cur;
            y2 = y1;
            y1 = cur;
        }
    }
    return y;
}

std::int64_t estimate_avg_pitch_period(const std::vector<double>& signal, int sample_rate,
                                       const ZffConfig& cfg) {
    if (cfg.avg_pitch_period_samples) {
        return *cfg.avg_pitch_period_samples;
    }
    if (sample_rate <= 0) {
        throw ArgumentError("sample rate must be positive");
    }
    if (cfg.f0_search_min_hz <= 0.0 || cfg.f0_search_min_hz >= cfg.f0_search_max_hz) {
        throw ArgumentError("bad f0 search band");
    }
    const auto n = static_cast<std::int64_t>(signal.size());
    const auto lag_max = static_cast<std::int64_t>(std::floor(sample_rate / cfg.f0_search_min_hz));
    const auto lag_min =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(sample_rate / cfg.f0_search_max_hz)));
    if (n <= 2 * lag_max) {
        throw SignalTooShort("need more than two maximum pitch periods of signal");
    }

    // Coarse search on a decimated copy, then an exact search on the full
    // signal in a window around the coarse peak. Voiced autocorrelation is
    // smooth at that scale, so the bracket holds the true peak.
    const std::int64_t decim = std::max<std::int64_t>(1, lag_min / 4);
    const std::vector<double> coarse_sig = decim > 1 ? decimate_mean(signal, decim) : signal;
    const std::int64_t c_lo = std::max<std::int64_t>(1, lag_min / decim);
    const std::int64_t c_hi =
        std::min<std::int64_t>(static_cast<std::int64_t>(coarse_sig.size()) - 1,
                               (lag_max + decim - 1) / decim);
    const std::vector<double> coarse_r = normalized_autocorr_band(coarse_sig, c_lo, c_hi);
    if (coarse_r.empty()) {
        throw SignalTooShort("degenerate coarse search range");
    }
    std::int64_t c_best = c_lo;
    double c_best_r = -2.0;
    for (std::size_t t = 0; t < coarse_r.size(); ++t) {
        if (coarse_r[t] > c_best_r) {
            c_best_r = coarse_r[t];
            c_best = c_lo + static_cast<std::int64_t>(t);
        }
    }

    // The coarse argmax brackets the smooth peak to within one decimated step.
    const std::int64_t r_lo = std::max(lag_min, c_best * decim - decim);
    const std::int64_t r_hi = std::min(lag_max, c_best * decim + decim);
    const std::vector<double> fine_r = normalized_autocorr_band(signal, r_lo, r_hi);
    std::int64_t best = r_lo;
    double best_r = -2.0;
    for (std::size_t t = 0; t < fine_r.size(); ++t) {
        if (fine_r[t] > best_r) {
            best_r = fine_r[t];
            best = r_lo + static_cast<std::int64_t>(t);
        }
    }

    if (best_r < 0.1) {
        throw NoPeriodicityFound("peak normalized autocorrelation " + std::to_string(best_r) +
                                 " below 0.1");
    }
    return best;
}

std::vector<double> remove_trend(const std::vector<double>& signal, std::int64_t half_window,
                                 int iterations) {
    const auto n = static_cast<std::int64_t>(signal.size());
    if (half_window < 0 || 2 * half_window + 1 > n) {
        throw ArgumentError("trend window of " + std::to_string(2 * half_window + 1) +
                            " exceeds signal of " + std::to_string(n));
    }
    if (iterations < 1) {
        throw ArgumentError("need at least one trend-removal iteration");
    }

    std::vector<double> cur(signal);
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1);
    std::vector<double> next(signal.size());
    const std::int64_t window = 2 * half_window + 1;
    const double inv_window = 1.0 / static_cast<double>(window);
    for (int it = 0; it < iterations; ++it) {
        prefix[0] = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            prefix[static_cast<std::size_t>(i) + 1] =
                prefix[static_cast<std::size_t>(i)] + cur[static_cast<std::size_t>(i)];
        }
        const auto truncated = [&](std::int64_t i) {
            const std::int64_t lo = std::max<std::int64_t>(0, i - half_window);
            const std::int64_t hi = std::min<std::int64_t>(n - 1, i + half_window);
            const double mean =
                (prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)]) /
                static_cast<double>(hi - lo + 1);
            next[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i)] - mean;
        };
        for (std::int64_t i = 0; i < std::min(half_window, n); ++i) {
            truncated(i);
        }
        // Interior: full windows, no clamping.
        {
            const double* __restrict p = prefix.data();
            const double* __restrict c = cur.data();
            double* __restrict o = next.data();
            for (std::int64_t i = half_window; i + half_window < n; ++i) {
                o[i] = c[i] - (p[i + half_window + 1] - p[i - half_window]) * inv_window;
            }
        }
        for (std::int64_t i = std::max(half_window, n - half_window); i < n; ++i) {
            truncated(i);
        }
        cur.swap(next);
    }
    return cur;
}

std::vector<std::int64_t> detect_positive_zero_crossings(const std::vector<double>& signal) {
    std::vector<std::int64_t> crossings;
    for (std::size_t n = 1; n < signal.size(); ++n) {
        if (signal[n - 1] < 0.0 && signal[n] >= 0.0) {
            crossings.push_back(static_cast<std::int64_t>(n));
        }
    }
    return crossings;
}

EpochMarks extract_epochs(const AudioBuffer& buffer, const ZffConfig& cfg) {
    if (cfg.window_factor < 1.0 || cfg.window_factor > 2.0) {
        throw ArgumentError("window_factor must lie in [1, 2]");
    }

    std::int64_t period;
    try {
        period = estimate_avg_pitch_period(buffer.samples, buffer.sample_rate, cfg);
    } catch (const NoPeriodicityFound&) {
        period = buffer.sample_rate / 200;
    }
    if (period <= 0) {
        throw ArgumentError("average pitch period must be positive");
    }
    if (buffer.length() < 4 * period) {
        throw SignalTooShort("need at least 4 average pitch periods of signal");
    }

    const std::vector<double> diffed = first_difference(buffer.samples);
    const std::vector<double> resonated = zero_frequency_resonate(diffed);
    const auto half_window =
        std::max<std::int64_t>(1, std::llround(cfg.window_factor * static_cast<double>(period) / 2.0));
    const std::vector<double> flattened = remove_trend(resonated, half_window, cfg.trend_iterations);

    EpochMarks marks;
    marks.indices = detect_positive_zero_crossings(flattened);
    marks.signal_length = buffer.length();
    marks.sample_rate = buffer.sample_rate;
    return marks;
}

} // namespace esola
