#pragma once

// Shared fixed-synthesis overlap-add frame loop. ESOLA, OLA, and SOLAFS differ
// only in how the per-frame analysis shift is chosen; the loop geometry, frame
// accounting, and cross-fade are identical by construction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "esola/audio_io.hpp"
#include "esola/errors.hpp"
#include "esola/tsm.hpp"

namespace esola::detail {

/// Piecewise-constant scale factor, active from start_sample onward.
struct AlphaSegment {
    double start_sample = 0.0;
    double alpha = 1.0;
};

/// Copy n samples starting at `start`, reading zeros outside [0, len).
inline void read_padded(const std::vector<double>& x, std::int64_t start, std::int64_t n,
                        std::vector<double>& out) {
    const auto len = static_cast<std::int64_t>(x.size());
    out.resize(static_cast<std::size_t>(n));
    const std::int64_t lo = std::clamp<std::int64_t>(start, 0, len);
    const std::int64_t hi = std::clamp<std::int64_t>(start + n, 0, len);
    std::fill(out.begin(), out.end(), 0.0);
    if (hi > lo) {
        std::copy(x.begin() + lo, x.begin() + hi, out.begin() + static_cast<std::size_t>(lo - start));
    }
}

inline std::int64_t segments_target_length(std::span<const AlphaSegment> segments,
                                           std::int64_t input_length) {
    double target = 0.0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const double seg_start = std::max(0.0, segments[i].start_sample);
        const double seg_end = i + 1 < segments.size()
                                   ? std::min(static_cast<double>(input_length),
                                              segments[i + 1].start_sample)
                                   : static_cast<double>(input_length);
        if (seg_end > seg_start) {
            target += segments[i].alpha * (seg_end - seg_start);
        }
    }
    return std::llround(target);
}

/// Frame count whose synthesis span lands nearest the target output length.
inline std::int64_t frame_count_for_target(std::int64_t target_output, int frame_length,
                                           int synthesis_shift) {
    const auto extra = std::llround(static_cast<double>(target_output - frame_length) /
                                    static_cast<double>(synthesis_shift));
    return 1 + std::max<std::int64_t>(0, extra);
}

/// Policy contract:
///   std::int64_t choose_shift(frame, analysis_start, synth_start,
///                             std::span<const double> synthesis);
///   void note_frame(analysis_start_shifted, synth_start);  // after the write
///   bool used_epochs() const;
template <class AlignPolicy>
TimeScaleResult run_fixed_synthesis(const AudioBuffer& input,
                                    std::span<const AlphaSegment> segments, const TsmConfig& cfg,
                                    AlignPolicy& policy) {
    const int sample_rate = input.sample_rate;
    const int N = cfg.frame_length(sample_rate);
    const int L = cfg.overlap_length(sample_rate);
    const int Ss = cfg.synthesis_shift(sample_rate);
    const std::int64_t len = input.length();
    if (len < static_cast<std::int64_t>(N) + Ss) {
        throw SignalTooShort("input of " + std::to_string(len) + " samples is shorter than one frame plus one synthesis shift (" +
                             std::to_string(N + Ss) + ")");
    }

    const std::int64_t target = segments_target_length(segments, len);
    const std::int64_t frames = frame_count_for_target(target, N, Ss);
    const std::int64_t out_len = (frames - 1) * Ss + N;

    const std::vector<double> fade = cfg.fade.weights(L);

    TimeScaleResult result;
    result.audio.sample_rate = sample_rate;
    result.audio.samples.assign(static_cast<std::size_t>(out_len), 0.0);
    result.trace.reserve(static_cast<std::size_t>(frames));

    std::vector<double>& y = result.audio.samples;

    // Frame 0 is the verbatim base case.
    std::copy(input.samples.begin(), input.samples.begin() + N, y.begin());
    policy.note_frame(0, 0);
    result.trace.push_back({0, 0, 0, 0, false});

    // Analysis positions accumulate per segment from an anchor so that a
    // single-segment run reduces to round(m * Sa) exactly.
    std::size_t seg = 0;
    std::int64_t anchor_frame = 0;
    double anchor_pos = 0.0;
    std::vector<double> frame_buf;

    for (std::int64_t m = 1; m < frames; ++m) {
        double pos = anchor_pos + static_cast<double>(m - anchor_frame) *
                                      (static_cast<double>(Ss) / segments[seg].alpha);
        while (seg + 1 < segments.size() && pos >= segments[seg + 1].start_sample) {
            ++seg;
            anchor_frame = m;
            anchor_pos = pos;
        }

        const std::int64_t analysis_start = std::llround(pos);
        const std::int64_t synth_start = m * Ss;
        const std::int64_t k =
            policy.choose_shift(m, analysis_start, synth_start, std::span<const double>(y));

        read_padded(input.samples, analysis_start + k, N, frame_buf);
        crossfade_overlap_add(y, frame_buf, synth_start, fade);
        policy.note_frame(analysis_start + k, synth_start);
        result.trace.push_back({m, analysis_start, k, synth_start, policy.used_epochs()});
    }
    return result;
}

/// Epoch alignment (ESOLA). Synthesis-stream epochs are tracked by
/// bookkeeping: every overlap-add records where the shifted analysis frame's
/// epochs land in output coordinates.
class EpochAlignPolicy {
public:
    EpochAlignPolicy(const EpochMarks& marks, int frame_length, std::int64_t k_max)
        : marks_(marks), frame_length_(frame_length), k_max_(k_max) {}

    std::int64_t choose_shift(std::int64_t /*frame*/, std::int64_t analysis_start,
                              std::int64_t synth_start, std::span<const double> /*synthesis*/) {
        while (cursor_ < synth_epochs_.size() && synth_epochs_[cursor_] < synth_start) {
            ++cursor_;
        }
        synth_local_.clear();
        for (std::size_t i = cursor_;
             i < synth_epochs_.size() && synth_epochs_[i] < synth_start + frame_length_; ++i) {
            synth_local_.push_back(synth_epochs_[i] - synth_start);
        }
        analysis_local_ = epochs_in_window(marks_, analysis_start, frame_length_);
        used_epochs_ = !synth_local_.empty() && !analysis_local_.empty();
        return compute_alignment_shift(synth_local_, analysis_local_, k_max_);
    }

    void note_frame(std::int64_t analysis_start_shifted, std::int64_t synth_start) {
        for (std::int64_t local : epochs_in_window(marks_, analysis_start_shifted, frame_length_)) {
            const std::int64_t mapped = synth_start + local;
            auto it = std::lower_bound(synth_epochs_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                                       synth_epochs_.end(), mapped);
            if (it == synth_epochs_.end() || *it != mapped) {
                synth_epochs_.insert(it, mapped);
            }
        }
    }

    bool used_epochs() const { return used_epochs_; }

private:
    const EpochMarks& marks_;
    int frame_length_;
    std::int64_t k_max_;
    std::vector<std::int64_t> synth_epochs_;
    std::size_t cursor_ = 0;
    std::vector<std::int64_t> synth_local_;
    std::vector<std::int64_t> analysis_local_;
    bool used_epochs_ = false;
};

/// Plain OLA: never shifts.
class ZeroShiftPolicy {
public:
    std::int64_t choose_shift(std::int64_t, std::int64_t, std::int64_t,
                              std::span<const double>) {
        return 0;
    }
    void note_frame(std::int64_t, std::int64_t) {}
    bool used_epochs() const { return false; }
};

} // namespace esola::detail
