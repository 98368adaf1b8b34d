#include "esola/analysis.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <gtest/gtest.h>
#include <map>
#include <sstream>

#include "esola/errors.hpp"
#include "support/signals.hpp"

namespace {

using esola::AudioBuffer;
using esola::F0Track;

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("esola_analysis_" + name);
}

TEST(F0Track, TracksPureSine) {
    const AudioBuffer buf = esola::testing::sine(120.0, 1.0, 16000);
    const F0Track track = esola::estimate_f0_track(buf);
    ASSERT_FALSE(track.f0_hz.empty());
    for (double f0 : track.f0_hz) {
        ASSERT_GT(f0, 0.0);
        EXPECT_NEAR(f0, 120.0, 1.0);
    }
}

TEST(F0Track, WhiteNoiseIsMostlyUnvoiced) {
    const AudioBuffer buf = esola::testing::white_noise(1.0, 16000);
    const F0Track track = esola::estimate_f0_track(buf);
    std::size_t unvoiced = 0;
    for (double f0 : track.f0_hz) {
        if (f0 == 0.0) {
            ++unvoiced;
        }
    }
    EXPECT_GE(static_cast<double>(unvoiced) / static_cast<double>(track.f0_hz.size()), 0.9);
}

TEST(F0Track, SilenceIsAllUnvoiced) {
    AudioBuffer silence;
    silence.sample_rate = 16000;
    silence.samples.assign(8000, 0.0);
    const F0Track track = esola::estimate_f0_track(silence);
    for (double f0 : track.f0_hz) {
        EXPECT_EQ(f0, 0.0);
    }
}

TEST(F0Track, AmplitudeInvariant) {
    const AudioBuffer loud = esola::testing::sine(150.0, 0.5, 16000, 0.9);
    AudioBuffer quiet = loud;
    for (double& v : quiet.samples) {
        v *= 0.1;
    }
    const F0Track a = esola::estimate_f0_track(loud);
    const F0Track b = esola::estimate_f0_track(quiet);
    ASSERT_EQ(a.f0_hz.size(), b.f0_hz.size());
    for (std::size_t i = 0; i < a.f0_hz.size(); ++i) {
        // Identical up to rounding: scaling only perturbs the last few ulps of
        // the normalized autocorrelation.
        EXPECT_NEAR(a.f0_hz[i], b.f0_hz[i], 1e-9 * std::max(1.0, a.f0_hz[i]));
    }
}

TEST(F0Track, RejectsTooShortBuffers) {
    AudioBuffer tiny;
    tiny.sample_rate = 16000;
    tiny.samples.assign(100, 0.0);
    EXPECT_THROW(esola::estimate_f0_track(tiny), esola::SignalTooShort);
}

TEST(MeanF0, SkipsUnvoicedFrames) {
    F0Track track;
    track.frame_times = {0.0, 0.01, 0.02};
    track.f0_hz = {120.0, 0.0, 122.0};
    track.voicing_strength = {0.9, 0.1, 0.9};
    EXPECT_DOUBLE_EQ(esola::mean_f0(track), 121.0);
}

TEST(MeanF0, AllUnvoicedIsZero) {
    F0Track track;
    track.frame_times = {0.0, 0.01};
    track.f0_hz = {0.0, 0.0};
    track.voicing_strength = {0.0, 0.0};
    EXPECT_DOUBLE_EQ(esola::mean_f0(track), 0.0);
}

TEST(DurationError, Arithmetic) {
    EXPECT_EQ(esola::duration_error(16000, 16000, 1.0), 0);
    EXPECT_EQ(esola::duration_error(24010, 16000, 1.5), 10);
    EXPECT_EQ(esola::duration_error(7990, 16000, 0.5), -10);
}

TEST(F0Csv, WritesHeaderAndRows) {
    const AudioBuffer buf = esola::testing::sine(100.0, 0.3, 16000);
    const F0Track track = esola::estimate_f0_track(buf);
    const auto path = temp_file("f0.csv");
    esola::write_f0_track_csv(track, path.string());

    std::ifstream in(path);
    std::string header;
    ASSERT_TRUE(std::getline(in, header));
    EXPECT_EQ(header, "time_s,f0_hz,voicing");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, track.f0_hz.size());
}

TEST(SpectrogramCsv, SinePeaksAtItsFrequency) {
    const AudioBuffer buf = esola::testing::sine(1000.0, 0.5, 16000);
    const auto path = temp_file("spec.csv");
    esola::spectrogram_csv(buf, path.string());

    std::ifstream in(path);
    std::string line;
    ASSERT_TRUE(std::getline(in, line));
    ASSERT_EQ(line, "time_s,freq_hz,magnitude_db");

    // Per time slice, find the frequency of the largest magnitude.
    std::map<double, std::pair<double, double>> peak_by_time; // time -> (freq, mag)
    double bin_width = 0.0;
    double prev_freq = -1.0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        const double t = std::stod(cell);
        std::getline(row, cell, ',');
        const double f = std::stod(cell);
        std::getline(row, cell, ',');
        const double m = std::stod(cell);
        if (prev_freq >= 0.0 && f > prev_freq && bin_width == 0.0) {
            bin_width = f - prev_freq;
        }
        prev_freq = f;
        auto [it, inserted] = peak_by_time.try_emplace(t, f, m);
        if (!inserted && m > it->second.second) {
            it->second = {f, m};
        }
    }
    ASSERT_GT(bin_width, 0.0);
    ASSERT_FALSE(peak_by_time.empty());
    for (const auto& [t, peak] : peak_by_time) {
        EXPECT_NEAR(peak.first, 1000.0, bin_width + 1e-9) << "at t=" << t;
    }
}

TEST(SpectrogramCsv, SilenceSitsAtTheDbFloor) {
    AudioBuffer silence;
    silence.sample_rate = 16000;
    silence.samples.assign(8000, 0.0);
    const auto path = temp_file("floor.csv");
    esola::spectrogram_csv(silence, path.string());

    std::ifstream in(path);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        const auto last_comma = line.rfind(',');
        EXPECT_DOUBLE_EQ(std::stod(line.substr(last_comma + 1)), -120.0);
    }
}

TEST(SpectrogramCsv, RejectsShortBuffersAndBadPaths) {
    esola::AudioBuffer tiny;
    tiny.sample_rate = 16000;
    tiny.samples.assign(100, 0.0);
    EXPECT_THROW(esola::spectrogram_csv(tiny, temp_file("never.csv").string()),
                 esola::SignalTooShort);

    const AudioBuffer buf = esola::testing::sine(500.0, 0.25, 16000);
    EXPECT_THROW(esola::spectrogram_csv(buf, "/nonexistent/dir/spec.csv"), esola::IoError);
}

TEST(SpectrogramCsv, RowCountIsFramesTimesBins) {
    const AudioBuffer buf = esola::testing::sine(500.0, 0.25, 16000);
    const auto path = temp_file("count.csv");
    esola::spectrogram_csv(buf, path.string());

    // 25 ms frames (400 samples -> 512-point FFT -> 257 bins), 10 ms hop.
    const std::int64_t frames = (buf.length() - 400) / 160 + 1;
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, static_cast<std::size_t>(frames) * 257u);
}

} // namespace
