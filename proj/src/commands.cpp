#include "ts4/commands.hpp"

#include "parallel.hpp"
#include "ts4/io.hpp"
#include "ts4/metrics.hpp"
#include "ts4/transient.hpp"

#include <CLI11.hpp>

#include <ostream>
#include <sstream>

namespace ts4::cli {

using nlohmann::json;

namespace {

pipeline::AugmentConfig load_config(const std::optional<fs::path>& path, std::uint64_t seed)
{
    pipeline::AugmentConfig cfg;
    cfg.ts4.base_seed = RngSeed{seed};
    if (path) cfg = io::read_config_file(*path, cfg);
    return cfg;
}

std::string component_table(const std::vector<double>& values)
{
    std::string text = "t,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) text += std::to_string(i) + "," + io::format_double(values[i]) + "\n";
    return text;
}

} // namespace

json run_augment(const AugmentArgs& args)
{
    pipeline::AugmentConfig cfg = load_config(args.config, args.seed);
    cfg.threads = args.threads;
    pipeline::FoldPlan plan;
    plan.base_fold = args.base_fold;
    if (args.multipliers) plan.per_class_multiplier = io::parse_multipliers(*args.multipliers);
    pipeline::validate(plan);

    const Dataset source = io::read_dataset(args.input_dir);
    const auto batch = pipeline::augment_batch(source, args.method, cfg, plan, RngSeed{args.seed});
    return io::write_batch(args.output_dir, batch, source, cfg);
}

pipeline::FidelitySummary run_report(const ReportArgs& args)
{
    if (args.config) (void)load_config(args.config, args.seed);
    if (args.batch_dirs.empty()) throw Error(ErrorCode::InvalidArgument, "at least one batch directory is required");
    const Dataset original = io::read_dataset(args.original_dir);
    std::vector<pipeline::BatchItem> items;
    for (const auto& dir : args.batch_dirs) {
        auto batch = io::read_batch(dir);
        std::move(batch.items.begin(), batch.items.end(), std::back_inserter(items));
    }
    const auto summary = pipeline::fidelity_report(items, original, args.max_lag, args.threads);

    io::write_text(args.output_path, format_summary_table(summary));
    fs::path pairs = args.output_path;
    pairs.replace_extension(".pairs.csv");
    io::write_text(pairs, format_pair_rows(summary));
    return summary;
}

pipeline::Ts4Parts run_decompose(const DecomposeArgs& args)
{
    const auto cfg = load_config(args.config, args.seed);
    const auto loaded = io::read_trial(args.trial_file);
    const Series& input = loaded.trial.channel(args.channel);
    const auto parts = pipeline::ts4_decompose(input, cfg.ts4);

    const fs::path& out = args.output_dir;
    fs::create_directories(out);
    io::write_text(out / "transient_diff.csv", component_table(parts.transient_diff.samples));
    io::write_text(out / "shape.csv", component_table(parts.shape.samples));
    io::write_text(out / "low_level.csv", component_table(parts.low_level.samples));

    std::string combined = "t,input,transient_diff,shape,low_level\n";
    for (std::size_t i = 0; i < input.size(); ++i) {
        combined += std::to_string(i) + "," + io::format_double(input.samples[i]) + "," +
                    io::format_double(parts.transient_diff.samples[i]) + "," +
                    io::format_double(parts.shape.samples[i]) + "," + io::format_double(parts.low_level.samples[i]) +
                    "\n";
    }
    io::write_text(out / "components.csv", combined);

    std::string spans = "start,end\n";
    for (const auto& s : parts.transients.spans) spans += std::to_string(s.start) + "," + std::to_string(s.end) + "\n";
    io::write_text(out / "spans.csv", spans);

    std::string acf_text = "lag,input,shape,low_level\n";
    auto acf_or_empty = [](const Series& s) {
        try {
            return metrics::acf(s, s.size() - 1);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ConstantSeries) throw;
            return std::vector<double>{};
        }
    };
    const auto acf_in = acf_or_empty(input);
    const auto acf_shape = acf_or_empty(parts.shape);
    const auto acf_low = acf_or_empty(parts.low_level);
    auto cell = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? io::format_double(v[i]) : ""; };
    for (std::size_t lag = 0; lag < input.size(); ++lag)
        acf_text += std::to_string(lag) + "," + cell(acf_in, lag) + "," + cell(acf_shape, lag) + "," +
                    cell(acf_low, lag) + "\n";
    io::write_text(out / "acf.csv", acf_text);

    const auto centred = zero_mean(input);
    const auto grid = transient::spectrogram(centred.series, cfg.ts4.spectrogram);
    const auto stats = transient::column_stats(grid);
    std::string spec = "column,start_sample,bin,freq,magnitude\n";
    for (Eigen::Index t = 0; t < grid.magnitudes.cols(); ++t)
        for (Eigen::Index k = 0; k < grid.magnitudes.rows(); ++k)
            spec += std::to_string(t) + "," + std::to_string(grid.col_times[static_cast<std::size_t>(t)]) + "," +
                    std::to_string(k) + "," + io::format_double(grid.bin_freqs[static_cast<std::size_t>(k)]) + "," +
                    io::format_double(grid.magnitudes(k, t)) + "\n";
    io::write_text(out / "spectrogram.csv", spec);

    std::string col_text = "column,start_sample,mean,std\n";
    for (std::size_t t = 0; t < stats.size(); ++t)
        col_text += std::to_string(t) + "," + std::to_string(grid.col_times[t]) + "," +
                    io::format_double(stats[t].mean) + "," + io::format_double(stats[t].std) + "\n";
    io::write_text(out / "column_stats.csv", col_text);
    return parts;
}

Dataset run_gen_corpus(const GenCorpusArgs& args)
{
    corpus::CorpusConfig cfg = args.corpus;
    if (args.config) {
        json j;
        try {
            j = json::parse(io::read_text(*args.config));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::Format, args.config->string() + ": " + e.what());
        }
        if (j.contains("corpus")) {
            const auto& c = j.at("corpus");
            try {
                cfg.n_per_class = c.value("n_per_class", cfg.n_per_class);
                cfg.median_length = c.value("median_length", cfg.median_length);
                cfg.length_log_sigma = c.value("length_log_sigma", cfg.length_log_sigma);
                cfg.min_length = c.value("min_length", cfg.min_length);
                cfg.max_length = c.value("max_length", cfg.max_length);
                cfg.four_class = c.value("four_class", cfg.four_class);
                cfg.subjects = c.value("subjects", cfg.subjects);
            } catch (const json::exception& e) {
                throw Error(ErrorCode::Format, std::string("corpus config: ") + e.what());
            }
        }
    }
    Dataset d = corpus::generate_corpus(cfg);
    fs::create_directories(args.output_dir);
    detail::parallel_for(d.trials.size(), 0, [&](std::size_t i) {
        io::write_trial(args.output_dir / (d.trials[i].trial_id + ".csv"), d.trials[i]);
    });
    return d;
}

std::string format_summary_table(const pipeline::FidelitySummary& summary)
{
    std::string text = "method,delta_mean_pct,delta_std_pct,acf_rmse,dtw_pct,pairs,mean_flagged,std_flagged,shape_unscored\n";
    for (const auto& m : summary.methods) {
        text += std::string(pipeline::to_string(m.method)) + "," + io::format_fixed(m.delta_mean_pct, 4) + "," +
                io::format_fixed(m.delta_std_pct, 4) + "," + io::format_fixed(m.acf_rmse, 4) + "," +
                io::format_fixed(m.dtw_pct, 4) + "," + std::to_string(m.pairs) + "," + std::to_string(m.mean_flagged) +
                "," + std::to_string(m.std_flagged) + "," + std::to_string(m.shape_unscored) + "\n";
    }
    return text;
}

std::string format_pair_rows(const pipeline::FidelitySummary& summary)
{
    std::string text = "method,source,synthetic,channel,delta_mean_pct,mean_flagged,delta_std_pct,std_flagged,acf_rmse,"
                       "dtw_pct,shape_valid\n";
    for (const auto& row : summary.pairs) {
        const auto& r = row.report;
        text += std::string(pipeline::to_string(row.method)) + "," + row.source_trial_id + "," +
                row.synthetic_trial_id + "," + std::string(to_string(row.channel)) + "," +
                io::format_double(r.delta_mean_pct.value) + "," + (r.delta_mean_pct.zero_denominator ? "1" : "0") +
                "," + io::format_double(r.delta_std_pct.value) + "," + (r.delta_std_pct.zero_denominator ? "1" : "0") +
                "," + io::format_double(r.acf_rmse) + "," + io::format_double(r.dtw_pct) + "," +
                (row.shape_metrics_valid ? "1" : "0") + "\n";
    }
    return text;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Time-series augmentation: TS4, surrogate, window slicing and window warping"};
    app.require_subcommand(1);

    AugmentArgs aug;
    std::string aug_method = "ts4";
    std::string aug_config;
    auto* augment = app.add_subcommand("augment", "Synthesise a class-balanced batch from a trial directory");
    augment->add_option("--input", aug.input_dir, "Directory of trial files")->required();
    augment->add_option("--method", aug_method, "ts4 | surrogate | slice | warp")
        ->check(CLI::IsMember({"ts4", "surrogate", "slice", "warp"}));
    augment->add_option("--fold", aug.base_fold, "Base fold increase")->check(CLI::PositiveNumber);
    augment->add_option("--multipliers", aug.multipliers, "Per-score multipliers, e.g. 3:1,2:1,1:6,0:12");
    augment->add_option("--seed", aug.seed, "Base seed");
    augment->add_option("--config", aug_config, "JSON config overriding module defaults");
    augment->add_option("--out", aug.output_dir, "Output directory")->required();
    augment->add_option("--threads", aug.threads, "Worker threads (0 = all cores)");

    ReportArgs rep;
    std::string rep_config;
    std::size_t rep_max_lag = 0;
    auto* report = app.add_subcommand("report", "Fidelity table comparing batches with their originals");
    report->add_option("--original", rep.original_dir, "Directory of original trials")->required();
    report->add_option("--batch", rep.batch_dirs, "Batch directory (repeatable)")->required();
    auto* max_lag_opt = report->add_option("--max-lag", rep_max_lag, "Largest ACF lag (default N-1)");
    report->add_option("--seed", rep.seed, "Unused; accepted for uniformity");
    report->add_option("--config", rep_config, "JSON config");
    report->add_option("--out", rep.output_path, "Output CSV path (per-pair rows go to <stem>.pairs.csv)")->required();
    report->add_option("--threads", rep.threads, "Worker threads (0 = all cores)");

    DecomposeArgs dec;
    std::string dec_channel = "y";
    std::string dec_config;
    auto* decompose = app.add_subcommand("decompose", "Split one channel into transient, shape and low-level parts");
    decompose->add_option("--trial", dec.trial_file, "Trial CSV file")->required();
    decompose->add_option("--channel", dec_channel, "x | y | z")->check(CLI::IsMember({"x", "y", "z"}));
    decompose->add_option("--seed", dec.seed, "Clustering seed");
    decompose->add_option("--config", dec_config, "JSON config");
    decompose->add_option("--out", dec.output_dir, "Output directory")->required();

    GenCorpusArgs gen;
    std::string gen_config;
    auto* gen_corpus = app.add_subcommand("gen-corpus", "Write a synthetic labelled triaxial corpus");
    gen_corpus->add_option("--n-per-class", gen.corpus.n_per_class, "Trials per class");
    gen_corpus->add_option("--median-length", gen.corpus.median_length, "Median trial length in samples");
    gen_corpus->add_option("--length-spread", gen.corpus.length_log_sigma, "Log-normal sigma of trial lengths");
    gen_corpus->add_option("--min-length", gen.corpus.min_length, "Shortest trial");
    gen_corpus->add_option("--max-length", gen.corpus.max_length, "Longest trial");
    gen_corpus->add_flag("--four-class", gen.corpus.four_class, "Emit scores 0..3 instead of {3, 2, 1}");
    gen_corpus->add_option("--seed", gen.corpus.seed.value, "Corpus seed");
    gen_corpus->add_option("--config", gen_config, "JSON config with an optional \"corpus\" object");
    gen_corpus->add_option("--out", gen.output_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kBadArguments;
    }

    try {
        if (augment->parsed()) {
            aug.method = pipeline::method_from_string(aug_method);
            try {
                pipeline::FoldPlan probe;
                probe.base_fold = aug.base_fold;
                if (aug.multipliers) probe.per_class_multiplier = io::parse_multipliers(*aug.multipliers);
                pipeline::validate(probe);
            } catch (const Error& e) {
                err << "error: " << e.what() << "\n";
                return kBadArguments;
            }
            if (!aug_config.empty()) aug.config = aug_config;
            const json manifest = run_augment(aug);
            out << "wrote " << manifest.at("emitted_total").get<std::size_t>() << " of "
                << manifest.at("planned_total").get<std::int64_t>() << " planned trials to " << aug.output_dir.string()
                << "\n";
            for (const auto& skip : manifest.at("skips"))
                err << "skipped " << skip.at("trial_id").get<std::string>() << ": "
                    << skip.at("reason").get<std::string>() << "\n";
        } else if (report->parsed()) {
            if (!rep_config.empty()) rep.config = rep_config;
            if (max_lag_opt->count() > 0) rep.max_lag = rep_max_lag;
            out << format_summary_table(run_report(rep));
        } else if (decompose->parsed()) {
            dec.channel = channel_from_string(dec_channel);
            if (!dec_config.empty()) dec.config = dec_config;
            const auto parts = run_decompose(dec);
            out << "transient spans: " << parts.transients.spans.size()
                << ", shape components: " << parts.shape_components.size() << "\n";
        } else if (gen_corpus->parsed()) {
            if (!gen_config.empty()) gen.config = gen_config;
            const auto d = run_gen_corpus(gen);
            out << "wrote " << d.trials.size() << " trials to " << gen.output_dir.string() << "\n";
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kOk;
}

} // namespace ts4::cli
