#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "esola/audio_io.hpp"
#include "esola/tsm.hpp"

namespace esola {

/// SOLAFS shares the fixed-synthesis frame geometry; k_max defaults to the
/// synthesis shift when unset.
struct SolafsConfig {
    TsmConfig frames{};
    std::optional<std::int64_t> k_max{};
};

/// Plain overlap-add: the ESOLA frame loop with every alignment shift forced
/// to zero. No pitch consistency guarantee.
AudioBuffer ola_time_scale(const AudioBuffer& buffer, double alpha, const TsmConfig& cfg = {});

/// sum a[n] b[n] / sqrt(sum a^2 * sum b^2); 0 when either window has no
/// energy. Throws ArgumentError on length mismatch or empty windows.
double normalized_cross_correlation(std::span<const double> a, std::span<const double> b);

/// SOLAFS: per frame, the shift k in [0, k_max] maximizing the normalized
/// cross-correlation between the synthesis overlap region and the shifted
/// input window, ties toward smaller k. Fixed synthesis shift as in ESOLA.
TimeScaleResult solafs_time_scale(const AudioBuffer& buffer, double alpha,
                                  const SolafsConfig& cfg = {});

} // namespace esola
