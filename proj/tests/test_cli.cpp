// End-to-end tests of the command-line tool, exit codes included.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <gtest/gtest.h>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "esola/audio_io.hpp"
#include "esola/epoch_marks.hpp"
#include "support/signals.hpp"

#ifndef ESOLA_CLI_PATH
#error "ESOLA_CLI_PATH must point at the esola binary"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RunResult run_cli(const std::string& args) {
    const fs::path dir = fs::temp_directory_path();
    const fs::path out = dir / "esola_cli_stdout.txt";
    const fs::path err = dir / "esola_cli_stderr.txt";
    const std::string cmd = std::string(ESOLA_CLI_PATH) + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

class CliTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = fs::temp_directory_path() / "esola_cli_test";
        fs::create_directories(dir_);
        proxy_wav_ = (dir_ / "proxy.wav").string();
        esola::write_wav(esola::testing::voiced_proxy(120.0, 3.0, 16000).audio, proxy_wav_);
        sine_wav_ = (dir_ / "sine.wav").string();
        esola::write_wav(esola::testing::sine(200.0, 2.0, 16000), sine_wav_);
        silence_wav_ = (dir_ / "silence.wav").string();
        esola::AudioBuffer silence;
        silence.sample_rate = 16000;
        silence.samples.assign(16000, 0.0);
        esola::write_wav(silence, silence_wav_);
    }

    static inline fs::path dir_;
    static inline std::string proxy_wav_;
    static inline std::string sine_wav_;
    static inline std::string silence_wav_;

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
};

TEST_F(CliTest, EpochsWritesMarksFile) {
    const auto r = run_cli("epochs --input " + proxy_wav_ + " --marks " + path("p.epo"));
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("epochs:"), std::string::npos);
    EXPECT_NE(r.out.find("mean inter-epoch interval:"), std::string::npos);

    std::ifstream in(path("p.epo"));
    std::string header;
    ASSERT_TRUE(std::getline(in, header));
    EXPECT_EQ(header, "ESOLA-EPOCHS v1 16000 48000");
}

TEST_F(CliTest, SilentInputReportsZeroEpochs) {
    const auto r = run_cli("epochs --input " + silence_wav_ + " --marks " + path("s.epo"));
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("epochs: 0"), std::string::npos);
}

TEST_F(CliTest, EmbeddedEpochsFeedTimeScaling) {
    auto r = run_cli("epochs --input " + proxy_wav_ + " --embed --output " + path("marked.wav"));
    ASSERT_EQ(r.exit_code, 0) << r.err;

    r = run_cli("ts --input " + path("marked.wav") + " --output " + path("ts_emb.wav") +
                " --factor 1.5 --use-embedded-epochs");
    ASSERT_EQ(r.exit_code, 0) << r.err;

    const auto out = esola::read_wav(path("ts_emb.wav"));
    EXPECT_NEAR(static_cast<double>(out.length()), 1.5 * 48000.0, 320.0);
}

TEST_F(CliTest, TimeScaleIdentityFactorKeepsDuration) {
    const auto r = run_cli("ts --input " + proxy_wav_ + " --output " + path("ts1.wav") +
                           " --factor 1.0");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto out = esola::read_wav(path("ts1.wav"));
    EXPECT_NEAR(static_cast<double>(out.length()), 48000.0, 320.0);
}

TEST_F(CliTest, FactorOutsideRangeWarnsButRuns) {
    const auto r = run_cli("ts --input " + proxy_wav_ + " --output " + path("ts3.wav") +
                           " --factor 3");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    const auto out = esola::read_wav(path("ts3.wav"));
    EXPECT_NEAR(static_cast<double>(out.length()), 3.0 * 48000.0, 320.0);
}

TEST_F(CliTest, TraceCsvHasContractColumns) {
    const auto r = run_cli("ts --input " + proxy_wav_ + " --output " + path("ts_tr.wav") +
                           " --factor 1.25 --trace " + path("trace.csv"));
    ASSERT_EQ(r.exit_code, 0) << r.err;

    std::ifstream in(path("trace.csv"));
    std::string header;
    ASSERT_TRUE(std::getline(in, header));
    EXPECT_EQ(header, "frame,analysis_start,k_m,synthesis_start");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++rows;
    }
    EXPECT_GT(rows, 100u);
}

TEST_F(CliTest, ScheduleWithOneBreakpointMatchesFactorRun) {
    {
        std::ofstream sched(path("sched.txt"));
        sched << "0.0 1.25\n";
    }
    auto r = run_cli("ts --input " + proxy_wav_ + " --output " + path("ts_f.wav") +
                     " --factor 1.25");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    r = run_cli("ts --input " + proxy_wav_ + " --output " + path("ts_s.wav") + " --schedule " +
                path("sched.txt"));
    ASSERT_EQ(r.exit_code, 0) << r.err;

    EXPECT_EQ(slurp(path("ts_f.wav")), slurp(path("ts_s.wav")));
}

TEST_F(CliTest, MethodsProduceOutputAndBadMethodExits2) {
    for (const std::string method : {"ola", "solafs"}) {
        const auto r = run_cli("ts --input " + proxy_wav_ + " --output " +
                               path("ts_" + method + ".wav") + " --factor 1.5 --method " + method);
        EXPECT_EQ(r.exit_code, 0) << method << ": " << r.err;
    }
    const auto bad = run_cli("ts --input " + proxy_wav_ + " --output " + path("x.wav") +
                             " --factor 1.5 --method wsola");
    EXPECT_EQ(bad.exit_code, 2);
}

TEST_F(CliTest, MissingInputExits1) {
    const auto r = run_cli("ts --input " + path("nope.wav") + " --output " + path("y.wav") +
                           " --factor 1.0");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, PitchScaleReportsExpectedRatio) {
    const auto r = run_cli("ps --input " + proxy_wav_ + " --output " + path("ps.wav") +
                           " --factor 1.2");
    ASSERT_EQ(r.exit_code, 0) << r.err;

    const auto pos = r.out.find("F0 ratio: ");
    ASSERT_NE(pos, std::string::npos) << r.out;
    const double ratio = std::stod(r.out.substr(pos + 10));
    EXPECT_NEAR(ratio, 1.2, 0.03 * 1.2);

    const auto out = esola::read_wav(path("ps.wav"));
    EXPECT_NEAR(static_cast<double>(out.length()), 48000.0, 321.0);
}

TEST_F(CliTest, AnalyzeEmitsPitchCsvWithinOnePercent) {
    const auto r = run_cli("analyze --input " + sine_wav_ + " --pitch-csv " + path("f0.csv"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("mean F0:"), std::string::npos);

    std::ifstream in(path("f0.csv"));
    std::string line;
    ASSERT_TRUE(std::getline(in, line));
    ASSERT_EQ(line, "time_s,f0_hz,voicing");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        const double f0 = std::stod(line.substr(first + 1, second - first - 1));
        EXPECT_NEAR(f0, 200.0, 2.0);
        ++rows;
    }
    EXPECT_GT(rows, 100u);
}

TEST_F(CliTest, AnalyzeSummaryOnlyIsFine) {
    const auto r = run_cli("analyze --input " + sine_wav_);
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.out.find("duration:"), std::string::npos);
    EXPECT_NE(r.out.find("sample rate: 16000"), std::string::npos);
}

TEST_F(CliTest, BenchWritesCsvGrid) {
    const auto r = run_cli("bench --input " + proxy_wav_ +
                           " --factors 0.75,1.5 --methods esola,ola --repeats 2 --csv " +
                           path("bench.csv"));
    ASSERT_EQ(r.exit_code, 0) << r.err;

    std::ifstream in(path("bench.csv"));
    std::string line;
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(line, "method,factor,median_seconds,duration_error_samples,f0_dev_pct");
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        rows.push_back(line);
    }
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].rfind("esola,0.75,", 0), 0u);
    EXPECT_EQ(rows[3].rfind("ola,1.5,", 0), 0u);
}

TEST_F(CliTest, BenchRejectsUnknownMethod) {
    const auto r = run_cli("bench --input " + proxy_wav_ + " --methods esola,psola");
    EXPECT_EQ(r.exit_code, 2);
}

} // namespace
