#include "esola/audio_io.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <gtest/gtest.h>
#include <vector>

#include "esola/epoch_marks.hpp"
#include "esola/errors.hpp"
#include "support/signals.hpp"

namespace {

using esola::AudioBuffer;

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("esola_io_" + name);
}

void append_u32(std::vector<unsigned char>& v, std::uint32_t x) {
    v.push_back(x & 0xff);
    v.push_back((x >> 8) & 0xff);
    v.push_back((x >> 16) & 0xff);
    v.push_back((x >> 24) & 0xff);
}

void append_u16(std::vector<unsigned char>& v, std::uint16_t x) {
    v.push_back(x & 0xff);
    v.push_back((x >> 8) & 0xff);
}

// Hand-assembled WAV, independent of write_wav.
std::vector<unsigned char> make_wav_bytes(std::uint16_t format_code, std::uint16_t channels,
                                          std::uint32_t rate, std::uint16_t bits,
                                          const std::vector<std::int16_t>& words) {
    std::vector<unsigned char> v = {'R', 'I', 'F', 'F'};
    const std::uint32_t data_size = static_cast<std::uint32_t>(words.size() * 2);
    append_u32(v, 36 + data_size);
    v.insert(v.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    append_u32(v, 16);
    append_u16(v, format_code);
    append_u16(v, channels);
    append_u32(v, rate);
    append_u32(v, rate * channels * (bits / 8));
    append_u16(v, static_cast<std::uint16_t>(channels * (bits / 8)));
    append_u16(v, bits);
    v.insert(v.end(), {'d', 'a', 't', 'a'});
    append_u32(v, data_size);
    for (std::int16_t w : words) {
        append_u16(v, static_cast<std::uint16_t>(w));
    }
    return v;
}

void write_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(AudioIo, ReadsMono16BitWords) {
    const auto path = temp_file("mono.wav");
    write_bytes(path, make_wav_bytes(1, 1, 16000, 16, {0, 16384, -32768}));

    const AudioBuffer buf = esola::read_wav(path.string());
    EXPECT_EQ(buf.sample_rate, 16000);
    ASSERT_EQ(buf.samples.size(), 3u);
    EXPECT_DOUBLE_EQ(buf.samples[0], 0.0);
    EXPECT_DOUBLE_EQ(buf.samples[1], 0.5);
    EXPECT_DOUBLE_EQ(buf.samples[2], -1.0);
}

TEST(AudioIo, AveragesStereoToMono) {
    const auto path = temp_file("stereo.wav");
    write_bytes(path, make_wav_bytes(1, 2, 8000, 16, {100, 300}));

    const AudioBuffer buf = esola::read_wav(path.string());
    ASSERT_EQ(buf.samples.size(), 1u);
    EXPECT_DOUBLE_EQ(buf.samples[0], 200.0 / 32768.0);
}

TEST(AudioIo, RejectsFloatFormat) {
    const auto path = temp_file("float.wav");
    write_bytes(path, make_wav_bytes(3, 1, 16000, 16, {0, 0}));
    EXPECT_THROW(esola::read_wav(path.string()), esola::FormatError);
}

TEST(AudioIo, RejectsWrongBitDepthAndGarbage) {
    const auto path = temp_file("bits.wav");
    write_bytes(path, make_wav_bytes(1, 1, 16000, 8, {0, 0}));
    EXPECT_THROW(esola::read_wav(path.string()), esola::FormatError);

    const auto bad = temp_file("garbage.wav");
    write_bytes(bad, {'n', 'o', 't', 'a', 'w', 'a', 'v', 'e', '!', '!', '!', '!', '!'});
    EXPECT_THROW(esola::read_wav(bad.string()), esola::FormatError);

    EXPECT_THROW(esola::read_wav("/nonexistent/nowhere.wav"), esola::IoError);
}

TEST(AudioIo, RejectsEmptyData) {
    const auto path = temp_file("empty.wav");
    write_bytes(path, make_wav_bytes(1, 1, 16000, 16, {}));
    EXPECT_THROW(esola::read_wav(path.string()), esola::SignalTooShort);
}

TEST(AudioIo, SkipsUnknownChunks) {
    auto bytes = make_wav_bytes(1, 1, 16000, 16, {42});
    // Splice a LIST chunk between fmt and data (offset 36 = start of "data").
    std::vector<unsigned char> extra = {'L', 'I', 'S', 'T', 4, 0, 0, 0, 'x', 'y', 'z', 'w'};
    bytes.insert(bytes.begin() + 36, extra.begin(), extra.end());
    // Patch the RIFF size.
    const std::uint32_t riff = static_cast<std::uint32_t>(bytes.size() - 8);
    bytes[4] = riff & 0xff;
    bytes[5] = (riff >> 8) & 0xff;
    bytes[6] = (riff >> 16) & 0xff;
    bytes[7] = (riff >> 24) & 0xff;

    const auto path = temp_file("chunks.wav");
    write_bytes(path, bytes);
    const AudioBuffer buf = esola::read_wav(path.string());
    ASSERT_EQ(buf.samples.size(), 1u);
    EXPECT_DOUBLE_EQ(buf.samples[0], 42.0 / 32768.0);
}

TEST(AudioIo, WritesExpectedWords) {
    AudioBuffer buf;
    buf.sample_rate = 16000;
    buf.samples = {0.0, 0.5};
    const auto path = temp_file("write.wav");
    esola::write_wav(buf, path.string());

    const auto bytes = read_bytes(path);
    ASSERT_EQ(bytes.size(), 44u + 4u);
    EXPECT_EQ(bytes[44], 0);
    EXPECT_EQ(bytes[45], 0);
    EXPECT_EQ(bytes[46], 0x00);
    EXPECT_EQ(bytes[47], 0x40); // 16384 little-endian
}

TEST(AudioIo, ClampsOutOfRangeSamples) {
    AudioBuffer buf;
    buf.sample_rate = 16000;
    buf.samples = {1.5, -1.5};
    const auto path = temp_file("clamp.wav");
    esola::write_wav(buf, path.string());

    const AudioBuffer back = esola::read_wav(path.string());
    EXPECT_DOUBLE_EQ(back.samples[0], 32767.0 / 32768.0);
    EXPECT_DOUBLE_EQ(back.samples[1], -1.0);
}

TEST(AudioIo, RefusesEmptyWrite) {
    AudioBuffer buf;
    buf.sample_rate = 16000;
    EXPECT_THROW(esola::write_wav(buf, temp_file("never.wav").string()), esola::SignalTooShort);
}

TEST(AudioIo, UnwritablePathIsAnIoError) {
    AudioBuffer buf;
    buf.sample_rate = 16000;
    buf.samples = {0.1, 0.2};
    EXPECT_THROW(esola::write_wav(buf, "/nonexistent/dir/out.wav"), esola::IoError);
}

TEST(AudioIo, WordConversionIsIdentityForAll16BitValues) {
    for (int w = -32768; w <= 32767; ++w) {
        const auto word = static_cast<std::int16_t>(w);
        EXPECT_EQ(esola::sample_to_word(esola::word_to_sample(word)), word);
    }
}

TEST(AudioIo, ReadWriteReadRoundTripsWords) {
    const AudioBuffer noise = esola::testing::white_noise(0.1, 16000, 0.9, 7);
    const auto first = temp_file("round1.wav");
    const auto second = temp_file("round2.wav");
    esola::write_wav(noise, first.string());

    const AudioBuffer once = esola::read_wav(first.string());
    esola::write_wav(once, second.string());
    const AudioBuffer twice = esola::read_wav(second.string());

    ASSERT_EQ(once.samples.size(), twice.samples.size());
    for (std::size_t i = 0; i < once.samples.size(); ++i) {
        ASSERT_DOUBLE_EQ(once.samples[i], twice.samples[i]) << "at sample " << i;
    }
    EXPECT_EQ(read_bytes(first), read_bytes(second));
}

TEST(AudioIo, RoundTripPreservesEmbeddedLsbs) {
    AudioBuffer buf = esola::testing::speech_like(0.2, 16000);
    esola::EpochMarks marks;
    marks.signal_length = buf.length();
    marks.sample_rate = buf.sample_rate;
    for (std::int64_t i = 37; i < buf.length(); i += 101) {
        marks.indices.push_back(i);
    }

    const AudioBuffer marked = esola::embed_lsb(buf, marks);
    const auto path = temp_file("lsb.wav");
    esola::write_wav(marked, path.string());
    const AudioBuffer back = esola::read_wav(path.string());

    const esola::EpochMarks recovered = esola::extract_lsb(back);
    EXPECT_EQ(recovered.indices, marks.indices);
}

} // namespace
