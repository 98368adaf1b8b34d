#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "esola/audio_io.hpp"

namespace esola {

/// Per-frame fundamental-frequency estimates. f0_hz is 0 for frames whose
/// autocorrelation peak stays below the voicing threshold.
struct F0Track {
    std::vector<double> frame_times; // frame centers, seconds
    std::vector<double> f0_hz;
    std::vector<double> voicing_strength; // normalized autocorrelation peak in [0, 1]
};

struct F0TrackConfig {
    double frame_ms = 40.0;
    double hop_ms = 10.0;
    double f0_min_hz = 60.0;
    double f0_max_hz = 400.0;
    double voicing_threshold = 0.5;
};

/// Autocorrelation pitch tracker with parabolic peak interpolation.
/// Throws SignalTooShort when the buffer cannot hold one frame.
F0Track estimate_f0_track(const AudioBuffer& buffer, const F0TrackConfig& cfg = {});

/// Mean of the nonzero (voiced) estimates; 0 when there are none.
double mean_f0(const F0Track& track);

/// output_length - round(alpha * input_length), in samples.
std::int64_t duration_error(std::int64_t output_length, std::int64_t input_length, double alpha);

/// CSV rows "time_s,f0_hz,voicing".
void write_f0_track_csv(const F0Track& track, const std::string& path);

struct SpectrogramConfig {
    double frame_ms = 25.0;
    double hop_ms = 10.0;
};

/// Hann-windowed short-time spectrum as CSV "time_s,freq_hz,magnitude_db",
/// time-major, magnitudes clamped at -120 dB.
void spectrogram_csv(const AudioBuffer& buffer, const std::string& path,
                     const SpectrogramConfig& cfg = {});

} // namespace esola
