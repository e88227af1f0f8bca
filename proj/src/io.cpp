#include "ts4/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ts4::io {

using nlohmann::json;

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty())
        throw Error(ErrorCode::Format, "not a number: '" + std::string(text) + "'");
    return v;
}

std::string format_fixed(double v, int decimals)
{
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

void write_text(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path meta_path_for(const fs::path& csv_path)
{
    fs::path p = csv_path;
    p.replace_extension();
    return p.string() + std::string(kMetaSuffix);
}

namespace {

json provenance_json(const pipeline::Provenance& p)
{
    return json{{"method", std::string(pipeline::to_string(p.method))},
                {"source", p.source_trial_id},
                {"fold", p.fold_index},
                {"seed", p.seed.value}};
}

pipeline::Provenance provenance_from_json(const json& j)
{
    pipeline::Provenance p;
    p.method = pipeline::method_from_string(j.at("method").get<std::string>());
    p.source_trial_id = j.at("source").get<std::string>();
    p.fold_index = j.at("fold").get<std::int64_t>();
    p.seed = RngSeed{j.at("seed").get<std::uint64_t>()};
    return p;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view strip_cr(std::string_view s)
{
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

json parse_json(const fs::path& path)
{
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, path.string() + ": " + e.what());
    }
}

} // namespace

void write_trial(const fs::path& csv_path, const ScoredTrial& trial,
                 const std::optional<pipeline::Provenance>& provenance)
{
    std::string text;
    text.reserve(trial.x.size() * 48 + 16);
    text += kTrialHeader;
    text += '\n';
    for (std::size_t i = 0; i < trial.x.size(); ++i) {
        text += std::to_string(i);
        for (Channel c : kTrialChannels) {
            text += ',';
            text += format_double(trial.channel(c).samples[i]);
        }
        text += '\n';
    }
    write_text(csv_path, text);

    json meta{{"trial_id", trial.trial_id},
              {"subject_id", trial.subject_id},
              {"score", trial.score},
              {"sample_rate_hz", trial.x.sample_rate_hz}};
    if (provenance) meta["provenance"] = provenance_json(*provenance);
    write_text(meta_path_for(csv_path), meta.dump(2) + "\n");
}

LoadedTrial read_trial(const fs::path& csv_path)
{
    const json meta = parse_json(meta_path_for(csv_path));
    LoadedTrial loaded;
    ScoredTrial& t = loaded.trial;
    double rate = 0.0;
    try {
        t.trial_id = meta.at("trial_id").get<std::string>();
        t.subject_id = meta.at("subject_id").get<std::string>();
        t.score = meta.at("score").get<int>();
        rate = meta.at("sample_rate_hz").get<double>();
        if (meta.contains("provenance")) loaded.provenance = provenance_from_json(meta.at("provenance"));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, meta_path_for(csv_path).string() + ": " + e.what());
    }
    if (t.score < 0 || t.score > 3)
        throw Error(ErrorCode::Format, csv_path.string() + ": score " + std::to_string(t.score) + " not in 0..3");

    const std::string text = read_text(csv_path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kTrialHeader)
        throw Error(ErrorCode::Format, csv_path.string() + ": expected header '" + std::string(kTrialHeader) + "'");
    for (Channel c : kTrialChannels) t.channel(c) = Series{{}, rate, c};

    std::size_t row = 1;
    std::optional<double> prev_t;
    while (std::getline(in, line)) {
        ++row;
        const auto view = strip_cr(line);
        if (view.empty()) continue;
        const auto cells = split(view, ',');
        if (cells.size() != 4)
            throw Error(ErrorCode::Format,
                        csv_path.string() + ":" + std::to_string(row) + ": expected 4 columns, got " +
                            std::to_string(cells.size()));
        try {
            const double time = parse_double(cells[0]);
            if (prev_t && !(time > *prev_t))
                throw Error(ErrorCode::Format, "t not strictly increasing");
            prev_t = time;
            t.x.samples.push_back(parse_double(cells[1]));
            t.y.samples.push_back(parse_double(cells[2]));
            t.z.samples.push_back(parse_double(cells[3]));
        } catch (const Error& e) {
            throw Error(ErrorCode::Format, csv_path.string() + ":" + std::to_string(row) + ": " + e.what());
        }
    }
    const auto check = validate_trial(t);
    if (!check.ok()) throw Error(ErrorCode::Format, csv_path.string() + ": " + check.violations.front());
    return loaded;
}

Dataset read_dataset(const fs::path& dir)
{
    if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "not a directory: " + dir.string());
    Dataset d;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() <= kMetaSuffix.size() || !name.ends_with(kMetaSuffix)) continue;
        const fs::path csv = dir / (name.substr(0, name.size() - kMetaSuffix.size()) + ".csv");
        d.trials.push_back(read_trial(csv).trial);
    }
    std::sort(d.trials.begin(), d.trials.end(),
              [](const ScoredTrial& a, const ScoredTrial& b) { return a.trial_id < b.trial_id; });
    return d;
}

void write_dataset(const fs::path& dir, const Dataset& d)
{
    fs::create_directories(dir);
    for (const auto& t : d.trials) write_trial(dir / (t.trial_id + ".csv"), t);
}

namespace {

std::string_view warp_name(distort::WarpScale w)
{
    switch (w) {
    case distort::WarpScale::Expand2x: return "expand2x";
    case distort::WarpScale::Contract0_5x: return "contract0_5x";
    case distort::WarpScale::Random: return "random";
    }
    return "random";
}

distort::WarpScale warp_from_name(const std::string& name)
{
    if (name == "expand2x") return distort::WarpScale::Expand2x;
    if (name == "contract0_5x") return distort::WarpScale::Contract0_5x;
    if (name == "random") return distort::WarpScale::Random;
    throw Error(ErrorCode::Format, "unknown warp_scale '" + name + "'");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> keys, std::string_view where)
{
    if (!j.is_object()) throw Error(ErrorCode::Format, std::string(where) + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw Error(ErrorCode::Format, "unknown key '" + key + "' in " + std::string(where));
    }
}

template <class T>
void overlay(const json& j, const char* key, T& target)
{
    if (j.contains(key)) target = j.at(key).get<T>();
}

} // namespace

json to_json(const pipeline::AugmentConfig& cfg)
{
    json grouping;
    if (const auto* cv = std::get_if<ssa::CumulativeVariance>(&cfg.ts4.ssa.grouping))
        grouping = {{"rule", "cumulative_variance"}, {"fraction", cv->fraction}};
    else
        grouping = {{"rule", "fixed_count"}, {"count", std::get<ssa::FixedCount>(cfg.ts4.ssa.grouping).count}};
    const auto& sp = cfg.ts4.spectrogram;
    const auto& tr = cfg.ts4.transient;
    return json{
        {"ssa", {{"window_m", cfg.ts4.ssa.window_m}, {"grouping", grouping}}},
        {"spectrogram",
         {{"window_len_samples", sp.window_len_samples},
          {"hop_samples", sp.hop_samples},
          {"fft_size", sp.fft_size},
          {"magnitude", sp.magnitude}}},
        {"transient",
         {{"mean_threshold", tr.mean_threshold},
          {"std_threshold", tr.std_threshold},
          {"k_clusters", tr.k_clusters},
          {"min_cluster_members", tr.min_cluster_members}}},
        {"distort", {{"window_fraction", cfg.distort.window_fraction}, {"warp_scale", warp_name(cfg.distort.warp_scale)}}},
        {"clustering_seed", cfg.ts4.base_seed.value},
        {"allow_window_shrink", cfg.allow_window_shrink},
    };
}

pipeline::AugmentConfig augment_config_from_json(const json& j, pipeline::AugmentConfig cfg)
{
    try {
        reject_unknown(j, {"ssa", "spectrogram", "transient", "distort", "clustering_seed", "allow_window_shrink", "corpus"},
                       "config");
        if (j.contains("ssa")) {
            const auto& s = j.at("ssa");
            reject_unknown(s, {"window_m", "grouping"}, "ssa");
            overlay(s, "window_m", cfg.ts4.ssa.window_m);
            if (s.contains("grouping")) {
                const auto& g = s.at("grouping");
                reject_unknown(g, {"rule", "fraction", "count"}, "ssa.grouping");
                const auto rule = g.at("rule").get<std::string>();
                if (rule == "cumulative_variance")
                    cfg.ts4.ssa.grouping = ssa::CumulativeVariance{g.value("fraction", 0.90)};
                else if (rule == "fixed_count")
                    cfg.ts4.ssa.grouping = ssa::FixedCount{g.at("count").get<std::size_t>()};
                else
                    throw Error(ErrorCode::Format, "unknown grouping rule '" + rule + "'");
            }
        }
        if (j.contains("spectrogram")) {
            const auto& s = j.at("spectrogram");
            reject_unknown(s, {"window_len_samples", "hop_samples", "fft_size", "magnitude"}, "spectrogram");
            overlay(s, "window_len_samples", cfg.ts4.spectrogram.window_len_samples);
            overlay(s, "hop_samples", cfg.ts4.spectrogram.hop_samples);
            overlay(s, "fft_size", cfg.ts4.spectrogram.fft_size);
            overlay(s, "magnitude", cfg.ts4.spectrogram.magnitude);
        }
        if (j.contains("transient")) {
            const auto& s = j.at("transient");
            reject_unknown(s, {"mean_threshold", "std_threshold", "k_clusters", "min_cluster_members"}, "transient");
            overlay(s, "mean_threshold", cfg.ts4.transient.mean_threshold);
            overlay(s, "std_threshold", cfg.ts4.transient.std_threshold);
            overlay(s, "k_clusters", cfg.ts4.transient.k_clusters);
            overlay(s, "min_cluster_members", cfg.ts4.transient.min_cluster_members);
        }
        if (j.contains("distort")) {
            const auto& s = j.at("distort");
            reject_unknown(s, {"window_fraction", "warp_scale"}, "distort");
            overlay(s, "window_fraction", cfg.distort.window_fraction);
            if (s.contains("warp_scale")) cfg.distort.warp_scale = warp_from_name(s.at("warp_scale").get<std::string>());
        }
        if (j.contains("clustering_seed")) cfg.ts4.base_seed = RngSeed{j.at("clustering_seed").get<std::uint64_t>()};
        overlay(j, "allow_window_shrink", cfg.allow_window_shrink);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, std::string("config: ") + e.what());
    }
    pipeline::validate(cfg.ts4);
    distort::validate(cfg.distort);
    return cfg;
}

pipeline::AugmentConfig read_config_file(const fs::path& path, pipeline::AugmentConfig base)
{
    return augment_config_from_json(parse_json(path), std::move(base));
}

json to_json(const pipeline::FoldPlan& plan)
{
    json mult = json::object();
    for (const auto& [score, m] : plan.per_class_multiplier) mult[std::to_string(score)] = m;
    return json{{"base_fold", plan.base_fold}, {"per_class_multiplier", mult}};
}

std::map<int, std::int64_t> parse_multipliers(std::string_view text)
{
    std::map<int, std::int64_t> out;
    for (auto part : split(text, ',')) {
        if (part.empty()) continue;
        const auto colon = part.find(':');
        if (colon == std::string_view::npos)
            throw Error(ErrorCode::InvalidArgument, "multiplier '" + std::string(part) + "' is not score:count");
        int score = 0;
        std::int64_t mult = 0;
        const auto key = part.substr(0, colon);
        const auto val = part.substr(colon + 1);
        const auto r1 = std::from_chars(key.data(), key.data() + key.size(), score);
        const auto r2 = std::from_chars(val.data(), val.data() + val.size(), mult);
        if (r1.ec != std::errc() || r1.ptr != key.data() + key.size() || r2.ec != std::errc() ||
            r2.ptr != val.data() + val.size())
            throw Error(ErrorCode::InvalidArgument, "multiplier '" + std::string(part) + "' is not score:count");
        out[score] = mult;
    }
    return out;
}

json write_batch(const fs::path& dir, const pipeline::AugmentedBatch& batch, const Dataset& source,
                 const pipeline::AugmentConfig& cfg)
{
    fs::create_directories(dir);
    json items = json::array();
    for (const auto& item : batch.items) {
        const std::string file = item.trial.trial_id + ".csv";
        write_trial(dir / file, item.trial, item.provenance);
        items.push_back({{"file", file},
                         {"trial_id", item.trial.trial_id},
                         {"score", item.trial.score},
                         {"provenance", provenance_json(item.provenance)}});
    }
    json skips = json::array();
    for (const auto& s : batch.skips)
        skips.push_back({{"trial_id", s.trial_id}, {"reason", s.reason}, {"planned_items", s.planned_items}});

    json planned = json::object();
    std::int64_t planned_total = 0;
    for (const auto& [score, n] : pipeline::plan_folds(source.class_counts(), batch.plan)) {
        planned[std::to_string(score)] = n;
        planned_total += n;
    }
    json manifest{{"format", "ts4aug-batch"},
                  {"version", 1},
                  {"method", std::string(pipeline::to_string(batch.method))},
                  {"base_seed", batch.base_seed.value},
                  {"plan", to_json(batch.plan)},
                  {"planned_counts", planned},
                  {"planned_total", planned_total},
                  {"emitted_total", batch.items.size()},
                  {"config", to_json(cfg)},
                  {"items", items},
                  {"skips", skips},
                  {"notes", batch.notes}};
    write_text(dir / std::string(kManifestName), manifest.dump(2) + "\n");
    return manifest;
}

LoadedBatch read_batch(const fs::path& dir)
{
    LoadedBatch batch;
    batch.manifest = parse_json(dir / std::string(kManifestName));
    try {
        for (const auto& entry : batch.manifest.at("items")) {
            const fs::path file = dir / entry.at("file").get<std::string>();
            if (!fs::exists(file)) throw Error(ErrorCode::Format, "manifest lists missing file " + file.string());
            LoadedTrial loaded = read_trial(file);
            pipeline::BatchItem item;
            item.trial = std::move(loaded.trial);
            item.provenance = provenance_from_json(entry.at("provenance"));
            batch.items.push_back(std::move(item));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, "manifest: " + std::string(e.what()));
    }
    return batch;
}

} // namespace ts4::io
