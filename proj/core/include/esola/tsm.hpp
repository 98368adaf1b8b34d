#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "esola/audio_io.hpp"
#include "esola/epoch_marks.hpp"

namespace esola {

enum class FadeKind {
    Linear,
    RaisedCosine,
};

/// Cross-fade weight curve for the overlap region. beta[0] = 1, beta[L-1] = 0,
/// monotone non-increasing: a frame fades out while its successor fades in.
struct FadeCurve {
    FadeKind kind = FadeKind::RaisedCosine;

    /// The L weights beta[0..L).
    std::vector<double> weights(int overlap) const;
};

/// Frame geometry for fixed-synthesis overlap-add.
struct TsmConfig {
    /// Analysis/synthesis frame length, milliseconds.
    double frame_ms = 20.0;
    /// Overlap between successive synthesis frames as a fraction of the frame.
    double overlap_fraction = 0.5;
    FadeCurve fade{};

    int frame_length(int sample_rate) const;    // N
    int overlap_length(int sample_rate) const;  // L
    int synthesis_shift(int sample_rate) const; // Ss = N - L; also the k_m cap
};

/// Resolved per-run frame parameters.
struct FrameParams {
    int frame_length = 0;        // N
    int overlap = 0;             // L
    int synthesis_shift = 0;     // Ss
    double analysis_shift = 0.0; // Ss / alpha, kept real to avoid drift
    std::int64_t frame_count = 0;
    std::int64_t output_length = 0; // (frame_count - 1) * Ss + frame_length
};

/// Derive frame geometry and the frame count whose synthesis span lands
/// nearest alpha * input_length (always within half a synthesis shift).
/// Throws SignalTooShort when the input cannot hold one frame plus one shift.
FrameParams compute_frame_params(std::int64_t input_length, int sample_rate, double alpha,
                                 const TsmConfig& cfg = {});

/// Epoch indices falling in [start, start + length), relative to start.
std::vector<std::int64_t> epochs_in_window(const EpochMarks& marks, std::int64_t start,
                                           std::int64_t length);

/// Alignment shift k: the smallest non-negative distance from the first
/// synthesis-frame epoch to any analysis-frame epoch, clamped to k_max.
/// Zero when either frame has no epochs or no candidate is non-negative.
std::int64_t compute_alignment_shift(std::span<const std::int64_t> synth_epochs,
                                     std::span<const std::int64_t> analysis_epochs,
                                     std::int64_t k_max);

/// Blend frame into synthesis at position: the first fade.size() samples are
/// cross-faded with the existing content, the rest copied verbatim.
void crossfade_overlap_add(std::span<double> synthesis, std::span<const double> frame,
                           std::int64_t position, std::span<const double> fade);

/// One row per synthesis frame.
struct AlignmentRecord {
    std::int64_t frame = 0;
    std::int64_t analysis_start = 0; // before the shift
    std::int64_t shift = 0;          // k_m, in [0, Ss]
    std::int64_t synthesis_start = 0;
    bool epochs_used = false; // both frames held epochs when aligning
};

using AlignmentTrace = std::vector<AlignmentRecord>;

struct TimeScaleResult {
    AudioBuffer audio;
    AlignmentTrace trace;
};

/// Epoch-aligned fixed-synthesis time scaling. alpha > 1 lengthens (slows),
/// alpha < 1 shortens. Output length lands within half a synthesis shift of
/// alpha times the input length. Throws ArgumentError when marks do not refer
/// to this buffer, SignalTooShort on undersized input.
TimeScaleResult time_scale(const AudioBuffer& buffer, const EpochMarks& marks, double alpha,
                           const TsmConfig& cfg = {});

/// Breakpoint of a piecewise-constant time-scale schedule.
struct ScheduledFactor {
    double time_s = 0.0;
    double alpha = 1.0;
};

/// Same frame loop as time_scale, with the analysis shift following the last
/// breakpoint at or before the running analysis position. A single-breakpoint
/// schedule is bitwise-identical to time_scale at that factor.
AudioBuffer time_scale_scheduled(const AudioBuffer& buffer, const EpochMarks& marks,
                                 std::span<const ScheduledFactor> schedule,
                                 const TsmConfig& cfg = {});

} // namespace esola
