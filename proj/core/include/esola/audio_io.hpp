#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace esola {

/// Mono PCM signal. Samples are real-valued amplitudes in [-1, 1],
/// normalized from 16-bit integers by dividing by 32768.
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 0;

    /// Only 16-bit PCM sources are supported.
    static constexpr int kSourceBitDepth = 16;

    std::int64_t length() const { return static_cast<std::int64_t>(samples.size()); }
    double duration_seconds() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

/// Quantize one real sample to a 16-bit word: clamp(round(x * 32768), -32768, 32767).
std::int16_t sample_to_word(double x);

/// Inverse of sample_to_word: w / 32768.
double word_to_sample(std::int16_t w);

/// Read a RIFF/WAVE file. Requires PCM format code 1, 16-bit depth, 1 or 2
/// channels; stereo is averaged to mono. Unknown chunks are skipped.
/// Throws FormatError on malformed or unsupported containers, IoError if the
/// file cannot be read, SignalTooShort if the data chunk holds zero samples.
AudioBuffer read_wav(const std::string& path);

/// Write a 16-bit PCM mono WAV. Throws SignalTooShort on an empty buffer,
/// IoError on write failure.
void write_wav(const AudioBuffer& buffer, const std::string& path);

} // namespace esola
