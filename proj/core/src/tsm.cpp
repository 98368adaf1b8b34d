#include "esola/tsm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "esola/errors.hpp"
#include "ola_loop.hpp"

namespace esola {

std::vector<double> FadeCurve::weights(int overlap) const {
    if (overlap < 0) {
        throw ArgumentError("negative overlap");
    }
    std::vector<double> beta(static_cast<std::size_t>(overlap));
    if (overlap == 0) {
        return beta;
    }
    if (overlap == 1) {
        beta[0] = 1.0;
        return beta;
    }
    const double denom = static_cast<double>(overlap - 1);
    for (int n = 0; n < overlap; ++n) {
        switch (kind) {
        case FadeKind::Linear:
            beta[static_cast<std::size_t>(n)] = 1.0 - static_cast<double>(n) / denom;
            break;
        case FadeKind::RaisedCosine:
            beta[static_cast<std::size_t>(n)] =
                0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(n) / denom));
            break;
        }
    }
    return beta;
}

int TsmConfig::frame_length(int sample_rate) const {
    if (sample_rate <= 0) {
        throw ArgumentError("sample rate must be positive");
    }
    if (!(frame_ms > 0.0)) {
        throw ArgumentError("frame_ms must be positive");
    }
    const int n = static_cast<int>(std::lround(frame_ms * 1e-3 * sample_rate));
    if (n < 4) {
        throw ArgumentError("frame of " + std::to_string(n) + " samples is too short (need >= 4)");
    }
    return n;
}

int TsmConfig::overlap_length(int sample_rate) const {
    if (!(overlap_fraction > 0.0 && overlap_fraction < 1.0)) {
        throw ArgumentError("overlap_fraction must lie in (0, 1)");
    }
    const int n = frame_length(sample_rate);
    const int l = static_cast<int>(std::lround(overlap_fraction * n));
    if (l < 1 || l >= n) {
        throw ArgumentError("overlap of " + std::to_string(l) + " samples leaves no synthesis shift");
    }
    return l;
}

int TsmConfig::synthesis_shift(int sample_rate) const {
    return frame_length(sample_rate) - overlap_length(sample_rate);
}

FrameParams compute_frame_params(std::int64_t input_length, int sample_rate, double alpha,
                                 const TsmConfig& cfg) {
    if (!(alpha > 0.0)) {
        throw ArgumentError("time-scale factor must be positive");
    }
    FrameParams p;
    p.frame_length = cfg.frame_length(sample_rate);
    p.overlap = cfg.overlap_length(sample_rate);
    p.synthesis_shift = cfg.synthesis_shift(sample_rate);
    if (input_length < static_cast<std::int64_t>(p.frame_length) + p.synthesis_shift) {
        throw SignalTooShort("input of " + std::to_string(input_length) +
                             " samples is shorter than one frame plus one synthesis shift (" +
                             std::to_string(p.frame_length + p.synthesis_shift) + ")");
    }
    p.analysis_shift = static_cast<double>(p.synthesis_shift) / alpha;
    const detail::AlphaSegment seg{0.0, alpha};
    const std::int64_t target =
        detail::segments_target_length(std::span<const detail::AlphaSegment>(&seg, 1), input_length);
    p.frame_count = detail::frame_count_for_target(target, p.frame_length, p.synthesis_shift);
    p.output_length = (p.frame_count - 1) * p.synthesis_shift + p.frame_length;
    return p;
}

std::vector<std::int64_t> epochs_in_window(const EpochMarks& marks, std::int64_t start,
                                           std::int64_t length) {
    std::vector<std::int64_t> local;
    auto lo = std::lower_bound(marks.indices.begin(), marks.indices.end(), start);
    auto hi = std::lower_bound(lo, marks.indices.end(), start + length);
    local.reserve(static_cast<std::size_t>(hi - lo));
    for (auto it = lo; it != hi; ++it) {
        local.push_back(*it - start);
    }
    return local;
}

std::int64_t compute_alignment_shift(std::span<const std::int64_t> synth_epochs,
                                     std::span<const std::int64_t> analysis_epochs,
                                     std::int64_t k_max) {
    if (k_max < 0) {
        throw ArgumentError("k_max must be non-negative");
    }
    if (synth_epochs.empty() || analysis_epochs.empty()) {
        return 0;
    }
    const std::int64_t first_synth = synth_epochs.front();
    std::int64_t best = -1;
    for (std::int64_t n : analysis_epochs) {
        const std::int64_t candidate = n - first_synth;
        if (candidate >= 0 && (best < 0 || candidate < best)) {
            best = candidate;
        }
    }
    if (best < 0) {
        return 0;
    }
    return std::min(best, k_max);
}

void crossfade_overlap_add(std::span<double> synthesis, std::span<const double> frame,
                           std::int64_t position, std::span<const double> fade) {
    const auto n = static_cast<std::int64_t>(frame.size());
    const auto overlap = static_cast<std::int64_t>(fade.size());
    if (overlap >= n) {
        throw ArgumentError("overlap must be shorter than the frame");
    }
    if (position < 0 || position + n > static_cast<std::int64_t>(synthesis.size())) {
        throw ArgumentError("frame write out of bounds");
    }
    double* dst = synthesis.data() + position;
    for (std::int64_t i = 0; i < overlap; ++i) {
        dst[i] = fade[static_cast<std::size_t>(i)] * dst[i] +
                 (1.0 - fade[static_cast<std::size_t>(i)]) * frame[static_cast<std::size_t>(i)];
    }
    std::copy(frame.begin() + overlap, frame.end(), dst + overlap);
}

namespace {

void check_marks(const AudioBuffer& buffer, const EpochMarks& marks) {
    if (marks.signal_length != buffer.length()) {
        throw ArgumentError("marks refer to a signal of " + std::to_string(marks.signal_length) +
                            " samples, buffer has " + std::to_string(buffer.length()));
    }
    if (marks.sample_rate != buffer.sample_rate) {
        throw ArgumentError("marks sample rate " + std::to_string(marks.sample_rate) +
                            " does not match buffer rate " + std::to_string(buffer.sample_rate));
    }
}

std::vector<detail::AlphaSegment> to_segments(std::span<const ScheduledFactor> schedule,
                                              int sample_rate) {
    if (schedule.empty()) {
        throw ArgumentError("empty schedule");
    }
    std::vector<detail::AlphaSegment> segments;
    segments.reserve(schedule.size());
    double prev_time = -1.0;
    for (const ScheduledFactor& bp : schedule) {
        if (bp.time_s < 0.0) {
            throw ArgumentError("schedule time must be non-negative");
        }
        if (bp.time_s <= prev_time && !segments.empty()) {
            throw ArgumentError("schedule breakpoints must be strictly increasing in time");
        }
        if (!(bp.alpha > 0.0)) {
            throw ArgumentError("schedule factors must be positive");
        }
        segments.push_back({bp.time_s * sample_rate, bp.alpha});
        prev_time = bp.time_s;
    }
    // The first factor also governs any span before its breakpoint.
    segments.front().start_sample = 0.0;
    return segments;
}

} // namespace

TimeScaleResult time_scale(const AudioBuffer& buffer, const EpochMarks& marks, double alpha,
                           const TsmConfig& cfg) {
    if (!(alpha > 0.0)) {
        throw ArgumentError("time-scale factor must be positive");
    }
    check_marks(buffer, marks);
    const int N = cfg.frame_length(buffer.sample_rate);
    const int Ss = cfg.synthesis_shift(buffer.sample_rate);
    detail::EpochAlignPolicy policy(marks, N, Ss);
    const detail::AlphaSegment seg{0.0, alpha};
    return detail::run_fixed_synthesis(buffer, std::span<const detail::AlphaSegment>(&seg, 1), cfg,
                                       policy);
}

AudioBuffer time_scale_scheduled(const AudioBuffer& buffer, const EpochMarks& marks,
                                 std::span<const ScheduledFactor> schedule, const TsmConfig& cfg) {
    check_marks(buffer, marks);
    const std::vector<detail::AlphaSegment> segments = to_segments(schedule, buffer.sample_rate);
    const int N = cfg.frame_length(buffer.sample_rate);
    const int Ss = cfg.synthesis_shift(buffer.sample_rate);
    detail::EpochAlignPolicy policy(marks, N, Ss);
    return detail::run_fixed_synthesis(buffer, segments, cfg, policy).audio;
}

} // namespace esola
