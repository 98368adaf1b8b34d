// Command-line frontend: epoch extraction/embedding, time- and pitch-scale
// modification, objective analysis, and a method benchmark.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "esola/analysis.hpp"
#include "esola/audio_io.hpp"
#include "esola/baselines.hpp"
#include "esola/epoch_marks.hpp"
#include "esola/errors.hpp"
#include "esola/pitch_scaling.hpp"
#include "esola/tsm.hpp"
#include "esola/zff.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitBadArgs = 2;
constexpr int kExitProcessing = 3;

struct FrameOptions {
    double frame_ms = 20.0;
    double overlap = 0.5;
    std::string fade = "raised-cosine";

    esola::TsmConfig tsm() const {
        esola::TsmConfig cfg;
        cfg.frame_ms = frame_ms;
        cfg.overlap_fraction = overlap;
        if (fade == "linear") {
            cfg.fade.kind = esola::FadeKind::Linear;
        } else if (fade == "raised-cosine") {
            cfg.fade.kind = esola::FadeKind::RaisedCosine;
        } else {
            throw esola::ArgumentError("unknown fade '" + fade + "'");
        }
        return cfg;
    }
};

struct MarksOptions {
    std::string marks_file;
    bool use_embedded = false;
};

void add_frame_options(CLI::App* cmd, FrameOptions& opts) {
    cmd->add_option("--frame-ms", opts.frame_ms, "Frame length in milliseconds");
    cmd->add_option("--overlap", opts.overlap, "Overlap fraction in (0, 1)");
    cmd->add_option("--fade", opts.fade, "Cross-fade curve: linear | raised-cosine");
}

void add_marks_options(CLI::App* cmd, MarksOptions& opts) {
    auto* file = cmd->add_option("--marks", opts.marks_file, "Epoch marks file (sidecar)");
    auto* embedded = cmd->add_flag("--use-embedded-epochs", opts.use_embedded,
                                   "Recover epochs from the LSBs of the input");
    file->excludes(embedded);
}

esola::EpochMarks resolve_marks(const esola::AudioBuffer& input, const MarksOptions& opts) {
    if (!opts.marks_file.empty()) {
        return esola::read_marks_file(opts.marks_file);
    }
    if (opts.use_embedded) {
        return esola::extract_lsb(input);
    }
    return esola::extract_epochs(input);
}

void warn_factor_range(double factor) {
    if (factor < 0.5 || factor > 2.0) {
        std::cerr << "warning: factor " << factor
                  << " is outside the supported range [0.5, 2]; results may degrade\n";
    }
}

void write_trace_csv(const esola::AlignmentTrace& trace, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) {
        throw esola::IoError("cannot open for writing: " + path);
    }
    os << "frame,analysis_start,k_m,synthesis_start\n";
    for (const auto& rec : trace) {
        os << rec.frame << ',' << rec.analysis_start << ',' << rec.shift << ','
           << rec.synthesis_start << '\n';
    }
}

std::vector<esola::ScheduledFactor> read_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw esola::IoError("cannot open for reading: " + path);
    }
    std::vector<esola::ScheduledFactor> schedule;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream row(line);
        esola::ScheduledFactor bp;
        if (!(row >> bp.time_s >> bp.alpha)) {
            throw esola::FormatError("bad schedule line '" + line + "' in " + path);
        }
        schedule.push_back(bp);
    }
    if (schedule.empty()) {
        throw esola::FormatError("schedule file holds no breakpoints: " + path);
    }
    return schedule;
}

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

// ---- epochs ----------------------------------------------------------------

struct EpochsArgs {
    std::string input;
    std::string marks_out;
    bool embed = false;
    std::string output;
    esola::ZffConfig zff;
};

int run_epochs(const EpochsArgs& args) {
    const esola::AudioBuffer input = esola::read_wav(args.input);
    const esola::EpochMarks marks = esola::extract_epochs(input, args.zff);

    if (!args.marks_out.empty()) {
        esola::write_marks_file(marks, args.marks_out);
    }
    if (args.embed) {
        esola::write_wav(esola::embed_lsb(input, marks), args.output);
    }

    std::cout << "epochs: " << marks.indices.size() << "\n";
    if (marks.indices.size() >= 2) {
        const double span =
            static_cast<double>(marks.indices.back() - marks.indices.front());
        const double mean_gap = span / static_cast<double>(marks.indices.size() - 1);
        std::cout << "mean inter-epoch interval: " << 1000.0 * mean_gap / input.sample_rate
                  << " ms\n";
    } else {
        std::cout << "mean inter-epoch interval: n/a\n";
    }
    return kExitOk;
}

// ---- ts --------------------------------------------------------------------

struct TsArgs {
    std::string input;
    std::string output;
    double factor = 1.0;
    bool factor_given = false;
    std::string method = "esola";
    MarksOptions marks;
    FrameOptions frames;
    std::string schedule_file;
    std::string trace_file;
};

int run_ts(const TsArgs& args) {
    if (args.method != "esola" && args.method != "ola" && args.method != "solafs") {
        std::cerr << "error: unknown method '" << args.method << "'\n";
        return kExitBadArgs;
    }
    if (!args.schedule_file.empty() && args.method != "esola") {
        std::cerr << "error: --schedule requires --method esola\n";
        return kExitBadArgs;
    }
    if (args.schedule_file.empty() && !args.factor_given) {
        std::cerr << "error: either --factor or --schedule is required\n";
        return kExitBadArgs;
    }

    const esola::AudioBuffer input = esola::read_wav(args.input);
    const esola::TsmConfig cfg = args.frames.tsm();

    esola::AudioBuffer output;
    esola::AlignmentTrace trace;
    bool have_trace = false;

    if (!args.schedule_file.empty()) {
        const auto schedule = read_schedule(args.schedule_file);
        for (const auto& bp : schedule) {
            warn_factor_range(bp.alpha);
        }
        const esola::EpochMarks marks = resolve_marks(input, args.marks);
        output = esola::time_scale_scheduled(input, marks, schedule, cfg);
    } else if (args.method == "esola") {
        warn_factor_range(args.factor);
        const esola::EpochMarks marks = resolve_marks(input, args.marks);
        auto result = esola::time_scale(input, marks, args.factor, cfg);
        output = std::move(result.audio);
        trace = std::move(result.trace);
        have_trace = true;
    } else if (args.method == "ola") {
        warn_factor_range(args.factor);
        output = esola::ola_time_scale(input, args.factor, cfg);
    } else {
        warn_factor_range(args.factor);
        esola::SolafsConfig solafs;
        solafs.frames = cfg;
        auto result = esola::solafs_time_scale(input, args.factor, solafs);
        output = std::move(result.audio);
        trace = std::move(result.trace);
        have_trace = true;
    }

    if (!args.trace_file.empty()) {
        if (!have_trace) {
            std::cerr << "error: --trace is only available for esola and solafs\n";
            return kExitBadArgs;
        }
        write_trace_csv(trace, args.trace_file);
    }

    esola::write_wav(output, args.output);
    std::cout << "input:  " << input.duration_seconds() << " s (" << input.length()
              << " samples)\n"
              << "output: " << output.duration_seconds() << " s (" << output.length()
              << " samples)\n";
    return kExitOk;
}

// ---- ps --------------------------------------------------------------------

struct PsArgs {
    std::string input;
    std::string output;
    double factor = 1.0;
    MarksOptions marks;
    FrameOptions frames;
};

int run_ps(const PsArgs& args) {
    warn_factor_range(args.factor);
    const esola::AudioBuffer input = esola::read_wav(args.input);
    const esola::EpochMarks marks = resolve_marks(input, args.marks);
    const esola::AudioBuffer output =
        esola::pitch_scale(input, marks, args.factor, args.frames.tsm());
    esola::write_wav(output, args.output);

    const double f0_in = esola::mean_f0(esola::estimate_f0_track(input));
    const double f0_out = esola::mean_f0(esola::estimate_f0_track(output));
    std::cout << "input:   " << input.duration_seconds() << " s, mean F0 " << f0_in << " Hz\n"
              << "output:  " << output.duration_seconds() << " s, mean F0 " << f0_out << " Hz\n";
    if (f0_in > 0.0 && f0_out > 0.0) {
        std::cout << "F0 ratio: " << f0_out / f0_in << "\n";
    }
    return kExitOk;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
    std::string input;
    std::string pitch_csv;
    std::string spectrogram_csv;
};

int run_analyze(const AnalyzeArgs& args) {
    const esola::AudioBuffer input = esola::read_wav(args.input);
    const esola::F0Track track = esola::estimate_f0_track(input);

    if (!args.pitch_csv.empty()) {
        esola::write_f0_track_csv(track, args.pitch_csv);
    }
    if (!args.spectrogram_csv.empty()) {
        esola::spectrogram_csv(input, args.spectrogram_csv);
    }

    std::cout << "duration: " << input.duration_seconds() << " s\n"
              << "sample rate: " << input.sample_rate << " Hz\n"
              << "mean F0: " << esola::mean_f0(track) << " Hz\n";
    return kExitOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
    std::string input;
    std::string factors = "0.5,0.75,1.25,1.5,2";
    std::string methods = "esola,ola,solafs";
    int repeats = 5;
    std::string csv;
};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int run_bench(const BenchArgs& args) {
    const std::vector<std::string> methods = split_csv_list(args.methods);
    std::vector<double> factors;
    for (const std::string& f : split_csv_list(args.factors)) {
        try {
            std::size_t used = 0;
            factors.push_back(std::stod(f, &used));
            if (used != f.size()) {
                throw std::invalid_argument(f);
            }
        } catch (const std::exception&) {
            std::cerr << "error: bad factor '" << f << "'\n";
            return kExitBadArgs;
        }
    }
    if (methods.empty() || factors.empty() || args.repeats < 1) {
        std::cerr << "error: empty methods/factors or bad repeat count\n";
        return kExitBadArgs;
    }
    for (const std::string& m : methods) {
        if (m != "esola" && m != "ola" && m != "solafs") {
            std::cerr << "error: unknown method '" << m << "'\n";
            return kExitBadArgs;
        }
    }

    const esola::AudioBuffer input = esola::read_wav(args.input);
    const double f0_in = esola::mean_f0(esola::estimate_f0_track(input));

    std::ostringstream csv;
    csv << "method,factor,median_seconds,duration_error_samples,f0_dev_pct\n";
    std::cout << "method   factor  median_s   dur_err   f0_dev%\n";

    for (const std::string& method : methods) {
        for (double factor : factors) {
            std::vector<double> seconds;
            esola::AudioBuffer output;
            for (int rep = 0; rep < args.repeats; ++rep) {
                const auto start = std::chrono::steady_clock::now();
                if (method == "esola") {
                    // Extraction is part of the measured pipeline.
                    const esola::EpochMarks marks = esola::extract_epochs(input);
                    output = esola::time_scale(input, marks, factor).audio;
                } else if (method == "ola") {
                    output = esola::ola_time_scale(input, factor);
                } else {
                    output = esola::solafs_time_scale(input, factor).audio;
                }
                const auto stop = std::chrono::steady_clock::now();
                seconds.push_back(std::chrono::duration<double>(stop - start).count());
            }

            const std::int64_t dur_err =
                esola::duration_error(output.length(), input.length(), factor);
            double f0_dev = 0.0;
            if (f0_in > 0.0) {
                const double f0_out = esola::mean_f0(esola::estimate_f0_track(output));
                f0_dev = 100.0 * std::abs(f0_out - f0_in) / f0_in;
            }
            const double med = median_of(seconds);

            csv << method << ',' << factor << ',' << med << ',' << dur_err << ',' << f0_dev
                << '\n';
            std::printf("%-8s %6.3g  %8.5f  %8lld  %8.3f\n", method.c_str(), factor, med,
                        static_cast<long long>(dur_err), f0_dev);
        }
    }

    if (!args.csv.empty()) {
        std::ofstream os(args.csv, std::ios::trunc);
        if (!os) {
            throw esola::IoError("cannot open for writing: " + args.csv);
        }
        os << csv.str();
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Epoch-synchronous overlap-add time/pitch scaling for speech"};
    app.require_subcommand(1);

    EpochsArgs epochs;
    auto* cmd_epochs = app.add_subcommand("epochs", "Extract epochs; save or embed them");
    cmd_epochs->add_option("--input", epochs.input, "Input WAV")->required();
    cmd_epochs->add_option("--marks", epochs.marks_out, "Write a marks file here");
    auto* embed_flag =
        cmd_epochs->add_flag("--embed", epochs.embed, "Embed epochs into the sample LSBs");
    auto* embed_out = cmd_epochs->add_option("--output", epochs.output, "Marked WAV path");
    embed_flag->needs(embed_out);
    embed_out->needs(embed_flag);
    cmd_epochs->add_option("--f0-min", epochs.zff.f0_search_min_hz, "Pitch search floor, Hz");
    cmd_epochs->add_option("--f0-max", epochs.zff.f0_search_max_hz, "Pitch search ceiling, Hz");
    cmd_epochs->add_option("--trend-iters", epochs.zff.trend_iterations,
                           "Mean-subtraction passes");
    cmd_epochs->add_option("--window-factor", epochs.zff.window_factor,
                           "Trend window as a multiple of the pitch period, in [1, 2]");

    TsArgs ts;
    auto* cmd_ts = app.add_subcommand("ts", "Time-scale modification");
    cmd_ts->add_option("--input", ts.input, "Input WAV")->required();
    cmd_ts->add_option("--output", ts.output, "Output WAV")->required();
    auto* factor_opt = cmd_ts->add_option("--factor", ts.factor,
                                          "Time-scale factor; > 1 slows, < 1 speeds up");
    cmd_ts->add_option("--method", ts.method, "esola | ola | solafs");
    add_marks_options(cmd_ts, ts.marks);
    add_frame_options(cmd_ts, ts.frames);
    cmd_ts->add_option("--schedule", ts.schedule_file,
                       "Breakpoint file ('time_s alpha' per line)");
    cmd_ts->add_option("--trace", ts.trace_file, "Write the alignment trace CSV here");

    PsArgs ps;
    auto* cmd_ps = app.add_subcommand("ps", "Pitch-scale modification");
    cmd_ps->add_option("--input", ps.input, "Input WAV")->required();
    cmd_ps->add_option("--output", ps.output, "Output WAV")->required();
    cmd_ps->add_option("--factor", ps.factor, "Pitch factor; > 1 raises pitch")->required();
    add_marks_options(cmd_ps, ps.marks);
    add_frame_options(cmd_ps, ps.frames);

    AnalyzeArgs analyze;
    auto* cmd_analyze = app.add_subcommand("analyze", "Objective measurements");
    cmd_analyze->add_option("--input", analyze.input, "Input WAV")->required();
    cmd_analyze->add_option("--pitch-csv", analyze.pitch_csv, "Write the F0 track CSV here");
    cmd_analyze->add_option("--spectrogram-csv", analyze.spectrogram_csv,
                            "Write the spectrogram CSV here");

    BenchArgs bench;
    auto* cmd_bench = app.add_subcommand("bench", "Compare method execution times");
    cmd_bench->add_option("--input", bench.input, "Input WAV")->required();
    cmd_bench->add_option("--factors", bench.factors, "Comma-separated factors");
    cmd_bench->add_option("--methods", bench.methods, "Comma-separated methods");
    cmd_bench->add_option("--repeats", bench.repeats, "Repeats per cell (median reported)");
    cmd_bench->add_option("--csv", bench.csv, "Write results CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitBadArgs;
    }

    try {
        if (cmd_epochs->parsed()) {
            if (epochs.marks_out.empty() && !epochs.embed) {
                std::cerr << "error: nothing to do; pass --marks and/or --embed --output\n";
                return kExitBadArgs;
            }
            return run_epochs(epochs);
        }
        if (cmd_ts->parsed()) {
            ts.factor_given = factor_opt->count() > 0;
            return run_ts(ts);
        }
        if (cmd_ps->parsed()) {
            return run_ps(ps);
        }
        if (cmd_analyze->parsed()) {
            return run_analyze(analyze);
        }
        if (cmd_bench->parsed()) {
            return run_bench(bench);
        }
    } catch (const esola::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const esola::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const esola::ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const esola::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitProcessing;
    }
    return kExitBadArgs;
}
