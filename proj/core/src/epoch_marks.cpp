#include "esola/epoch_marks.hpp"

#include <fstream>
#include <sstream>

#include "esola/errors.hpp"

namespace esola {

bool EpochMarks::valid() const {
    std::int64_t prev = -1;
    for (std::int64_t e : indices) {
        if (e <= prev || e >= signal_length) {
            return false;
        }
        prev = e;
    }
    return sample_rate > 0 && signal_length >= 0;
}

AudioBuffer embed_lsb(const AudioBuffer& buffer, const EpochMarks& marks) {
    if (marks.signal_length != buffer.length()) {
        throw ArgumentError("marks refer to a signal of " + std::to_string(marks.signal_length) +
                            " samples, buffer has " + std::to_string(buffer.length()));
    }
    if (marks.sample_rate != buffer.sample_rate) {
        throw ArgumentError("marks sample rate " + std::to_string(marks.sample_rate) +
                            " does not match buffer rate " + std::to_string(buffer.sample_rate));
    }

    AudioBuffer out = buffer;
    // Clear every LSB, then set the marked ones. Bit operations happen on the
    // two's-complement 16-bit word.
    for (double& x : out.samples) {
        auto w = static_cast<std::uint16_t>(sample_to_word(x));
        x = word_to_sample(static_cast<std::int16_t>(w & 0xfffe));
    }
    for (std::int64_t e : marks.indices) {
        double& x = out.samples[static_cast<std::size_t>(e)];
        auto w = static_cast<std::uint16_t>(sample_to_word(x));
        x = word_to_sample(static_cast<std::int16_t>(w | 1));
    }
    return out;
}

EpochMarks extract_lsb(const AudioBuffer& buffer) {
    EpochMarks marks;
    marks.signal_length = buffer.length();
    marks.sample_rate = buffer.sample_rate;
    for (std::int64_t i = 0; i < buffer.length(); ++i) {
        auto w = static_cast<std::uint16_t>(sample_to_word(buffer.samples[static_cast<std::size_t>(i)]));
        if (w & 1) {
            marks.indices.push_back(i);
        }
    }
    return marks;
}

void write_marks_file(const EpochMarks& marks, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) {
        throw IoError("cannot open for writing: " + path);
    }
    os << "ESOLA-EPOCHS v1 " << marks.sample_rate << ' ' << marks.signal_length << '\n';
    for (std::int64_t e : marks.indices) {
        os << e << '\n';
    }
    if (!os) {
        throw IoError("write failure: " + path);
    }
}

EpochMarks read_marks_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open for reading: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("empty marks file: " + path);
    }
    std::istringstream hdr(line);
    std::string magic, version;
    EpochMarks marks;
    if (!(hdr >> magic >> version >> marks.sample_rate >> marks.signal_length) ||
        magic != "ESOLA-EPOCHS" || version != "v1" || marks.sample_rate <= 0 ||
        marks.signal_length < 0) {
        throw FormatError("bad marks header: " + path);
    }

    std::int64_t prev = -1;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::int64_t e = 0;
        if (!(row >> e)) {
            throw FormatError("bad index line '" + line + "' in " + path);
        }
        if (e <= prev || e < 0 || e >= marks.signal_length) {
            throw FormatError("non-monotone or out-of-range index " + std::to_string(e) + " in " +
                              path);
        }
        marks.indices.push_back(e);
        prev = e;
    }
    return marks;
}

} // namespace esola
