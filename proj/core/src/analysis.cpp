#include "esola/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

#include "esola/errors.hpp"
#include "fft.hpp"

namespace esola {

namespace {

// Normalized autocorrelation of one frame at a given lag; overlap-windowed
// energies in the denominator.
double frame_autocorr(const double* f, std::int64_t n, std::int64_t lag) {
    if (lag <= 0 || lag >= n) {
        return 0.0;
    }
    double num = 0.0, e0 = 0.0, e1 = 0.0;
    for (std::int64_t i = 0; i < n - lag; ++i) {
        num += f[i] * f[i + lag];
        e0 += f[i] * f[i];
        e1 += f[i + lag] * f[i + lag];
    }
    if (e0 <= 0.0 || e1 <= 0.0) {
        return 0.0;
    }
    return num / std::sqrt(e0 * e1);
}

} // namespace

F0Track estimate_f0_track(const AudioBuffer& buffer, const F0TrackConfig& cfg) {
    if (buffer.sample_rate <= 0) {
        throw ArgumentError("sample rate must be positive");
    }
    if (!(cfg.f0_min_hz > 0.0 && cfg.f0_min_hz < cfg.f0_max_hz)) {
        throw ArgumentError("bad f0 search band");
    }
    const int fs = buffer.sample_rate;
    const auto frame = static_cast<std::int64_t>(std::lround(cfg.frame_ms * 1e-3 * fs));
    const auto hop = static_cast<std::int64_t>(std::lround(cfg.hop_ms * 1e-3 * fs));
    if (frame < 2 || hop < 1) {
        throw ArgumentError("frame and hop must be positive");
    }
    if (buffer.length() < frame) {
        throw SignalTooShort("buffer shorter than one analysis frame");
    }

    const auto lag_min =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(fs / cfg.f0_max_hz)));
    const auto lag_max = std::min<std::int64_t>(
        frame - 1, static_cast<std::int64_t>(std::floor(fs / cfg.f0_min_hz)));

    F0Track track;
    const std::int64_t n_frames = (buffer.length() - frame) / hop + 1;
    track.frame_times.reserve(static_cast<std::size_t>(n_frames));
    track.f0_hz.reserve(static_cast<std::size_t>(n_frames));
    track.voicing_strength.reserve(static_cast<std::size_t>(n_frames));

    std::vector<double> window(static_cast<std::size_t>(frame));
    std::vector<double> lag_r;
    for (std::int64_t t = 0; t < n_frames; ++t) {
        const std::int64_t start = t * hop;
        double mean = 0.0;
        for (std::int64_t i = 0; i < frame; ++i) {
            mean += buffer.samples[static_cast<std::size_t>(start + i)];
        }
        mean /= static_cast<double>(frame);
        for (std::int64_t i = 0; i < frame; ++i) {
            window[static_cast<std::size_t>(i)] =
                buffer.samples[static_cast<std::size_t>(start + i)] - mean;
        }

        lag_r.assign(static_cast<std::size_t>(lag_max - lag_min + 1), 0.0);
        double best_r = 0.0;
        for (std::int64_t lag = lag_min; lag <= lag_max; ++lag) {
            const double r = frame_autocorr(window.data(), frame, lag);
            lag_r[static_cast<std::size_t>(lag - lag_min)] = r;
            best_r = std::max(best_r, r);
        }

        double f0 = 0.0;
        if (best_r >= cfg.voicing_threshold) {
            // A periodic signal peaks at every period multiple; overlap-added
            // audio can even repeat exactly at two periods while a non-integer
            // fundamental reads slightly low at integer lags. Take the
            // smallest local maximum whose interpolated height reaches 90% of
            // the best peak.
            const auto r_at = [&](std::int64_t lag) {
                return lag_r[static_cast<std::size_t>(lag - lag_min)];
            };
            const auto peak_height = [&](std::int64_t lag) {
                if (lag <= lag_min || lag >= lag_max) {
                    return r_at(lag);
                }
                const double rm = r_at(lag - 1), r0 = r_at(lag), rp = r_at(lag + 1);
                const double a = 0.5 * (rm + rp) - r0;
                const double b = 0.5 * (rp - rm);
                return a < 0.0 ? r0 - b * b / (4.0 * a) : r0;
            };

            std::vector<std::int64_t> peaks;
            for (std::int64_t lag = lag_min; lag <= lag_max; ++lag) {
                const bool left_ok = lag == lag_min || r_at(lag) >= r_at(lag - 1);
                const bool right_ok = lag == lag_max || r_at(lag) > r_at(lag + 1);
                if (left_ok && right_ok && r_at(lag) > 0.0) {
                    peaks.push_back(lag);
                }
            }
            double h_best = 0.0;
            for (std::int64_t lag : peaks) {
                h_best = std::max(h_best, peak_height(lag));
            }
            std::int64_t chosen = 0;
            for (std::int64_t lag : peaks) {
                if (peak_height(lag) >= 0.9 * h_best) {
                    chosen = lag;
                    break;
                }
            }

            if (chosen > 0) {
                double lag_refined = static_cast<double>(chosen);
                if (chosen > lag_min && chosen < lag_max) {
                    const double rm = r_at(chosen - 1), r0 = r_at(chosen), rp = r_at(chosen + 1);
                    const double denom = rm - 2.0 * r0 + rp;
                    if (std::abs(denom) > 1e-12) {
                        lag_refined += 0.5 * (rm - rp) / denom;
                    }
                }
                lag_refined = std::clamp(lag_refined, static_cast<double>(lag_min),
                                         static_cast<double>(lag_max));
                f0 = fs / lag_refined;
            }
        }

        track.frame_times.push_back((static_cast<double>(start) + frame / 2.0) / fs);
        track.f0_hz.push_back(f0);
        track.voicing_strength.push_back(std::clamp(best_r, 0.0, 1.0));
    }
    return track;
}

double mean_f0(const F0Track& track) {
    double sum = 0.0;
    std::int64_t voiced = 0;
    for (double f : track.f0_hz) {
        if (f > 0.0) {
            sum += f;
            ++voiced;
        }
    }
    return voiced > 0 ? sum / static_cast<double>(voiced) : 0.0;
}

std::int64_t duration_error(std::int64_t output_length, std::int64_t input_length, double alpha) {
    return output_length - std::llround(alpha * static_cast<double>(input_length));
}

void write_f0_track_csv(const F0Track& track, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) {
        throw IoError("cannot open for writing: " + path);
    }
    os << "time_s,f0_hz,voicing\n";
    for (std::size_t i = 0; i < track.f0_hz.size(); ++i) {
        os << track.frame_times[i] << ',' << track.f0_hz[i] << ',' << track.voicing_strength[i]
           << '\n';
    }
    if (!os) {
        throw IoError("write failure: " + path);
    }
}

void spectrogram_csv(const AudioBuffer& buffer, const std::string& path,
                     const SpectrogramConfig& cfg) {
    if (buffer.sample_rate <= 0) {
        throw ArgumentError("sample rate must be positive");
    }
    const int fs = buffer.sample_rate;
    const auto frame = static_cast<std::int64_t>(std::lround(cfg.frame_ms * 1e-3 * fs));
    const auto hop = static_cast<std::int64_t>(std::lround(cfg.hop_ms * 1e-3 * fs));
    if (frame < 2 || hop < 1) {
        throw ArgumentError("frame and hop must be positive");
    }
    if (buffer.length() < frame) {
        throw SignalTooShort("buffer shorter than one analysis frame");
    }

    const std::size_t fft_size = detail::next_pow2(static_cast<std::size_t>(frame));
    const std::size_t n_bins = fft_size / 2 + 1;
    const std::int64_t n_frames = (buffer.length() - frame) / hop + 1;

    std::vector<double> hann(static_cast<std::size_t>(frame));
    for (std::int64_t i = 0; i < frame; ++i) {
        hann[static_cast<std::size_t>(i)] =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(frame - 1)));
    }

    std::ofstream os(path, std::ios::trunc);
    if (!os) {
        throw IoError("cannot open for writing: " + path);
    }
    os << "time_s,freq_hz,magnitude_db\n";

    constexpr double kDbFloor = -120.0;
    std::vector<std::complex<double>> spectrum(fft_size);
    for (std::int64_t t = 0; t < n_frames; ++t) {
        const std::int64_t start = t * hop;
        std::fill(spectrum.begin(), spectrum.end(), std::complex<double>(0.0, 0.0));
        for (std::int64_t i = 0; i < frame; ++i) {
            spectrum[static_cast<std::size_t>(i)] =
                buffer.samples[static_cast<std::size_t>(start + i)] *
                hann[static_cast<std::size_t>(i)];
        }
        detail::fft_inplace(spectrum);

        const double time_s = (static_cast<double>(start) + frame / 2.0) / fs;
        for (std::size_t b = 0; b < n_bins; ++b) {
            const double mag = std::abs(spectrum[b]);
            const double db = mag > 0.0 ? std::max(kDbFloor, 20.0 * std::log10(mag)) : kDbFloor;
            os << time_s << ',' << (static_cast<double>(b) * fs / static_cast<double>(fft_size))
               << ',' << db << '\n';
        }
    }
    if (!os) {
        throw IoError("write failure: " + path);
    }
}

} // namespace esola
