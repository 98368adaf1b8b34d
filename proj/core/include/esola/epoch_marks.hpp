#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "esola/audio_io.hpp"

namespace esola {

/// Glottal closure instants as strictly increasing sample indices into a
/// signal of signal_length samples at sample_rate Hz. May be empty.
struct EpochMarks {
    std::vector<std::int64_t> indices;
    std::int64_t signal_length = 0;
    int sample_rate = 0;

    bool valid() const;
};

/// Code epoch presence into the LSB of each sample's 16-bit word: LSB = 1 at
/// epoch indices, LSB = 0 everywhere else. The other 15 bits are unchanged.
/// Throws ArgumentError when marks do not refer to this buffer.
AudioBuffer embed_lsb(const AudioBuffer& buffer, const EpochMarks& marks);

/// Recover marks from an LSB-coded buffer. On audio that never went through
/// embed_lsb this returns whatever the LSBs happen to say.
EpochMarks extract_lsb(const AudioBuffer& buffer);

/// Sidecar text format, line 1: "ESOLA-EPOCHS v1 <sample_rate> <signal_length>",
/// then one ascending decimal index per line.
void write_marks_file(const EpochMarks& marks, const std::string& path);

/// Throws FormatError on a bad header or non-monotone / out-of-range indices.
EpochMarks read_marks_file(const std::string& path);

} // namespace esola
