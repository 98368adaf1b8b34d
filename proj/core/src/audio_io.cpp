#include "esola/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "esola/errors.hpp"

namespace esola {

namespace {

constexpr double kScale = 32768.0;

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 16) & 0xff));
    out.push_back(static_cast<unsigned char>((v >> 24) & 0xff));
}

} // namespace

std::int16_t sample_to_word(double x) {
    long w = std::lround(x * kScale);
    w = std::clamp(w, -32768L, 32767L);
    return static_cast<std::int16_t>(w);
}

double word_to_sample(std::int16_t w) {
    return static_cast<double>(w) / kScale;
}

AudioBuffer read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failure: " + path);
    }

    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw FormatError("not a RIFF/WAVE file: " + path);
    }

    bool have_fmt = false;
    std::uint16_t format_code = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;

    // Chunk walk; fmt must precede data. Unknown chunks are skipped.
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* hdr = bytes.data() + pos;
        std::uint32_t chunk_size = read_u32(hdr + 4);
        std::size_t body = pos + 8;
        if (body + chunk_size > bytes.size()) {
            throw FormatError("truncated chunk in " + path);
        }
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (chunk_size < 16) {
                throw FormatError("fmt chunk too small in " + path);
            }
            format_code = read_u16(bytes.data() + body);
            channels = read_u16(bytes.data() + body + 2);
            sample_rate = read_u32(bytes.data() + body + 4);
            bits_per_sample = read_u16(bytes.data() + body + 14);
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            if (!have_fmt) {
                throw FormatError("data chunk before fmt in " + path);
            }
            data = bytes.data() + body;
            data_size = chunk_size;
            break;
        }
        pos = body + chunk_size + (chunk_size & 1); // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr) {
        throw FormatError("missing fmt or data chunk in " + path);
    }
    if (format_code != 1) {
        throw FormatError("unsupported format code " + std::to_string(format_code) +
                          " (only PCM = 1): " + path);
    }
    if (bits_per_sample != 16) {
        throw FormatError("unsupported bit depth " + std::to_string(bits_per_sample) +
                          " (only 16): " + path);
    }
    if (channels != 1 && channels != 2) {
        throw FormatError("unsupported channel count " + std::to_string(channels) + ": " + path);
    }
    if (sample_rate == 0) {
        throw FormatError("zero sample rate in " + path);
    }

    std::size_t frame_bytes = 2u * channels;
    std::size_t frames = data_size / frame_bytes;
    if (frames == 0) {
        throw SignalTooShort("no audio samples in " + path);
    }

    AudioBuffer buf;
    buf.sample_rate = static_cast<int>(sample_rate);
    buf.samples.resize(frames);
    if (channels == 1) {
        for (std::size_t i = 0; i < frames; ++i) {
            auto w = static_cast<std::int16_t>(read_u16(data + 2 * i));
            buf.samples[i] = word_to_sample(w);
        }
    } else {
        for (std::size_t i = 0; i < frames; ++i) {
            auto l = static_cast<std::int16_t>(read_u16(data + 4 * i));
            auto r = static_cast<std::int16_t>(read_u16(data + 4 * i + 2));
            buf.samples[i] = (static_cast<double>(l) + static_cast<double>(r)) / 2.0 / kScale;
        }
    }
    return buf;
}

void write_wav(const AudioBuffer& buffer, const std::string& path) {
    if (buffer.samples.empty()) {
        throw SignalTooShort("refusing to write an empty buffer: " + path);
    }
    if (buffer.sample_rate <= 0) {
        throw ArgumentError("sample rate must be positive");
    }

    const std::uint32_t data_size = static_cast<std::uint32_t>(buffer.samples.size() * 2);
    std::vector<unsigned char> out;
    out.reserve(44 + data_size);

    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + data_size);
    out.insert(out.end(), {'W', 'A', 'V', 'E'});

    out.insert(out.end(), {'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, 1); // PCM
    put_u16(out, 1); // mono
    put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate) * 2); // byte rate
    put_u16(out, 2);  // block align
    put_u16(out, 16); // bits per sample

    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, data_size);
    for (double x : buffer.samples) {
        put_u16(out, static_cast<std::uint16_t>(sample_to_word(x)));
    }

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot open for writing: " + path);
    }
    os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!os) {
        throw IoError("write failure: " + path);
    }
}

} // namespace esola
