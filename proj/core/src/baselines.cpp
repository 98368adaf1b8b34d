#include "esola/baselines.hpp"

#include <cmath>

#include "esola/errors.hpp"
#include "ola_loop.hpp"

namespace esola {

namespace {

/// Correlation alignment over the overlap region (SOLAFS). Denominator
/// energies of the shifted input windows come from one prefix-sum pass per
/// frame; the numerators are the unavoidable (k_max+1) * L products.
class CorrelationAlignPolicy {
public:
    CorrelationAlignPolicy(const std::vector<double>& input, int overlap, std::int64_t k_max)
        : input_(input), overlap_(overlap), k_max_(k_max) {
        slab_.reserve(static_cast<std::size_t>(overlap_ + k_max_));
        sq_prefix_.resize(static_cast<std::size_t>(overlap_ + k_max_) + 1);
    }

    std::int64_t choose_shift(std::int64_t /*frame*/, std::int64_t analysis_start,
                              std::int64_t synth_start, std::span<const double> synthesis) {
        const std::int64_t span = overlap_ + k_max_;
        detail::read_padded(input_, analysis_start, span, slab_);

        sq_prefix_[0] = 0.0;
        for (std::int64_t i = 0; i < span; ++i) {
            const double v = slab_[static_cast<std::size_t>(i)];
            sq_prefix_[static_cast<std::size_t>(i) + 1] = sq_prefix_[static_cast<std::size_t>(i)] + v * v;
        }

        const double* y = synthesis.data() + synth_start;
        double y_energy = 0.0;
        for (int i = 0; i < overlap_; ++i) {
            y_energy += y[i] * y[i];
        }

        std::int64_t best_k = 0;
        double best_r = -2.0;
        for (std::int64_t k = 0; k <= k_max_; ++k) {
            const double* x = slab_.data() + k;
            double num = 0.0;
            for (int i = 0; i < overlap_; ++i) {
                num += y[i] * x[i];
            }
            const double x_energy = sq_prefix_[static_cast<std::size_t>(k + overlap_)] -
                                    sq_prefix_[static_cast<std::size_t>(k)];
            const double r =
                (y_energy > 0.0 && x_energy > 0.0) ? num / std::sqrt(y_energy * x_energy) : 0.0;
            if (r > best_r) { // strict: ties keep the smaller k
                best_r = r;
                best_k = k;
            }
        }
        return best_k;
    }

    void note_frame(std::int64_t, std::int64_t) {}
    bool used_epochs() const { return false; }

private:
    const std::vector<double>& input_;
    int overlap_;
    std::int64_t k_max_;
    std::vector<double> slab_;
    std::vector<double> sq_prefix_;
};

} // namespace

AudioBuffer ola_time_scale(const AudioBuffer& buffer, double alpha, const TsmConfig& cfg) {
    if (!(alpha > 0.0)) {
        throw ArgumentError("time-scale factor must be positive");
    }
    detail::ZeroShiftPolicy policy;
    const detail::AlphaSegment seg{0.0, alpha};
    return detail::run_fixed_synthesis(buffer, std::span<const detail::AlphaSegment>(&seg, 1), cfg,
                                       policy)
        .audio;
}

double normalized_cross_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ArgumentError("windows differ in length");
    }
    if (a.empty()) {
        throw ArgumentError("empty windows");
    }
    double num = 0.0, ea = 0.0, eb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += a[i] * b[i];
        ea += a[i] * a[i];
        eb += b[i] * b[i];
    }
    if (ea <= 0.0 || eb <= 0.0) {
        return 0.0;
    }
    return num / std::sqrt(ea * eb);
}

TimeScaleResult solafs_time_scale(const AudioBuffer& buffer, double alpha,
                                  const SolafsConfig& cfg) {
    if (!(alpha > 0.0)) {
        throw ArgumentError("time-scale factor must be positive");
    }
    const int L = cfg.frames.overlap_length(buffer.sample_rate);
    const std::int64_t k_max = cfg.k_max.value_or(cfg.frames.synthesis_shift(buffer.sample_rate));
    if (k_max < 0) {
        throw ArgumentError("k_max must be non-negative");
    }
    CorrelationAlignPolicy policy(buffer.samples, L, k_max);
    const detail::AlphaSegment seg{0.0, alpha};
    return detail::run_fixed_synthesis(buffer, std::span<const detail::AlphaSegment>(&seg, 1),
                                       cfg.frames, policy);
}

} // namespace esola
