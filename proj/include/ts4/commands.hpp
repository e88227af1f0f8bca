#pragma once

#include "ts4/corpus.hpp"
#include "ts4/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ts4::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kFailure = 1, kBadArguments = 2 };

struct AugmentArgs {
    fs::path input_dir;
    pipeline::Method method = pipeline::Method::TS4;
    std::int64_t base_fold = 1;
    std::optional<std::string> multipliers; // "3:1,2:1,1:6,0:12"
    std::uint64_t seed = 0;
    std::optional<fs::path> config;
    fs::path output_dir;
    unsigned threads = 0;
};

struct ReportArgs {
    fs::path original_dir;
    std::vector<fs::path> batch_dirs;
    std::optional<std::size_t> max_lag;
    std::optional<fs::path> config; // accepted for uniformity; metrics take no settings
    std::uint64_t seed = 0;
    fs::path output_path;
    unsigned threads = 0;
};

struct DecomposeArgs {
    fs::path trial_file;
    Channel channel = Channel::Y;
    std::optional<fs::path> config;
    std::uint64_t seed = 0;
    fs::path output_dir;
};

struct GenCorpusArgs {
    corpus::CorpusConfig corpus;
    std::optional<fs::path> config; // may hold a "corpus" object
    fs::path output_dir;
};

nlohmann::json run_augment(const AugmentArgs& args);
pipeline::FidelitySummary run_report(const ReportArgs& args);
pipeline::Ts4Parts run_decompose(const DecomposeArgs& args);
Dataset run_gen_corpus(const GenCorpusArgs& args);

/// One row per method, in kAllMethods order.
std::string format_summary_table(const pipeline::FidelitySummary& summary);
std::string format_pair_rows(const pipeline::FidelitySummary& summary);

/// Parses argv, dispatches, maps failures onto exit codes
/// (0 success, 1 I/O or validation failure, 2 bad arguments).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ts4::cli
