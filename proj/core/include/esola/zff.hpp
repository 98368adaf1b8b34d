#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "esola/audio_io.hpp"
#include "esola/epoch_marks.hpp"

namespace esola {

/// Parameters of the zero-frequency-filtering epoch extractor.
struct ZffConfig {
    /// Trend-removal window length as a multiple of the average pitch period.
    /// Must stay within [1, 2].
    double window_factor = 1.5;
    /// Number of mean-subtraction passes applied to the resonator output.
    /// One pass leaves visible residual trend from the cascaded integrators;
    /// three flattens up to cubic growth.
    int trend_iterations = 3;
    double f0_search_min_hz = 66.0;
    double f0_search_max_hz = 400.0;
    /// When set, skips pitch-period estimation entirely.
    std::optional<std::int64_t> avg_pitch_period_samples;
};

/// First difference x[n] = s[n] - s[n-1] (x[0] = s[0]); removes low-frequency
/// bias ahead of the resonator. Throws SignalTooShort for fewer than 2 samples.
std::vector<double> first_difference(const std::vector<double>& signal);

/// Cascade of `stages` ideal zero-frequency resonators, each the recursion
/// y[n] = 2 y[n-1] - y[n-2] + x[n] (double pole at z = 1), zero initial state.
std::vector<double> zero_frequency_resonate(const std::vector<double>& signal, int stages = 2);

/// Lag in [sample_rate/f0_max, sample_rate/f0_min] maximizing the normalized
/// autocorrelation of the whole signal. Honors cfg.avg_pitch_period_samples as
/// an override. Throws NoPeriodicityFound when the peak stays below 0.1, and
/// SignalTooShort when fewer than two maximum periods are available.
std::int64_t estimate_avg_pitch_period(const std::vector<double>& signal, int sample_rate,
                                       const ZffConfig& cfg = {});

/// Subtract, `iterations` times, the mean over a (2*half_window + 1)-sample
/// window centered on each sample; the window is truncated at the edges.
/// Throws ArgumentError when the window exceeds the signal.
std::vector<double> remove_trend(const std::vector<double>& signal, std::int64_t half_window,
                                 int iterations);

/// All n >= 1 with signal[n-1] < 0 and signal[n] >= 0, strictly increasing.
std::vector<std::int64_t> detect_positive_zero_crossings(const std::vector<double>& signal);

/// Full pipeline: first difference -> double zero-frequency resonator ->
/// trend removal (window from the average pitch period) -> positive zero
/// crossings. Falls back to a period of sample_rate/200 when the signal shows
/// no periodicity in the search band.
EpochMarks extract_epochs(const AudioBuffer& buffer, const ZffConfig& cfg = {});

} // namespace esola
