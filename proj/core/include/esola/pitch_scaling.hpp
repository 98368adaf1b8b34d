#pragma once

#include "esola/audio_io.hpp"
#include "esola/epoch_marks.hpp"
#include "esola/tsm.hpp"

namespace esola {

/// Band-limited resampler parameters. ratio is the speed factor: output
/// length = round(input / ratio); played at the original rate, every
/// frequency is multiplied by ratio.
struct ResampleSpec {
    double ratio = 1.0;
    int filter_taps_per_phase = 32;
    double kaiser_beta = 8.6;
};

/// Kaiser-windowed sinc interpolation with cutoff min(1, 1/ratio) * Nyquist.
/// The sample_rate field is left unchanged; the pitch change is realized by
/// playing the resampled content at the original rate.
/// Throws ArgumentError for ratios outside [0.25, 4], SignalTooShort when the
/// input is no longer than 2 * filter_taps_per_phase.
AudioBuffer resample(const AudioBuffer& buffer, const ResampleSpec& spec);

/// Pitch-scale by beta (> 1 raises pitch): time-scale by alpha = beta, then
/// resample by ratio = beta. Total duration is preserved to within one frame.
AudioBuffer pitch_scale(const AudioBuffer& buffer, const EpochMarks& marks, double beta,
                        const TsmConfig& cfg = {}, const ResampleSpec& spec = {});

} // namespace esola
