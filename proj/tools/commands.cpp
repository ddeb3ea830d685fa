#include "commands.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>

#include <json.hpp>

#include "wb/analysis.hpp"
#include "wb/errors.hpp"
#include "wb/feature_csv.hpp"
#include "wb/image_io.hpp"
#include "wb/metrics.hpp"
#include "wb/model_io.hpp"
#include "wb/rng.hpp"
#include "wb/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace wb::cli {

namespace {

constexpr const char* kToolVersion = "1.0.0";

void print_warnings(const DatasetManifest& manifest) {
    for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
}

DetectorConfig detector_config_from(const TrainArgs& args) {
    DetectorConfig cfg;
    cfg.kind = parse_detector(args.detector);
    cfg.n_trees = args.n_trees;
    cfg.max_samples = args.max_samples;
    cfg.nu = args.nu;
    if (args.gamma != "scale") {
        try {
            cfg.gamma = std::stod(args.gamma);
        } catch (const std::exception&) {
            fail(Errc::invalid_config, "gamma must be 'scale' or a number, got '" + args.gamma + "'");
        }
        if (cfg.gamma <= 0.0) fail(Errc::invalid_config, "gamma must be positive");
    }
    cfg.standardize = !args.no_standardize;
    return cfg;
}

// ---- evaluate: run-config parsing ------------------------------------------

struct RunConfig {
    std::string manifest;
    std::string output_dir;
    uint64_t seed = 0;
    int n_folds = 2;
    int jobs = 1;
    DetectorConfig detector;
    std::vector<std::string> features;  // empty ⇒ "all" single-feature analysis
    bool features_all = true;
    std::vector<int> combination_sizes;
    std::vector<std::string> generators;  // empty ⇒ all in manifest
    std::vector<std::string> conditions = {"none"};
    std::vector<std::string> train_regimes = {"clean"};
    bool pooled_auc = false;
    bool allow_off_grid = false;
    int quant_offset = 128;
    std::string external_scores;
};

void reject_unknown_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
    for (auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) fail(Errc::invalid_config, "run config: unknown key '" + key + "' in " + where);
    }
}

RunConfig parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::missing_file, "cannot open run config: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(Errc::invalid_config, std::string("run config parse error: ") + e.what());
    }
    if (!j.is_object()) fail(Errc::invalid_config, "run config must be a JSON object");
    reject_unknown_keys(j,
                        {"manifest", "output_dir", "seed", "n_folds", "jobs", "detector", "features",
                         "combination_sizes", "generators", "post_process", "auc_mode", "allow_off_grid",
                         "quant_offset", "external_scores"},
                        "top level");

    RunConfig cfg;
    if (!j.contains("manifest")) fail(Errc::invalid_config, "run config: 'manifest' is required");
    cfg.manifest = j.at("manifest").get<std::string>();
    if (!j.contains("output_dir")) fail(Errc::invalid_config, "run config: 'output_dir' is required");
    cfg.output_dir = j.at("output_dir").get<std::string>();
    cfg.seed = j.value("seed", 0ULL);
    cfg.n_folds = j.value("n_folds", 2);
    cfg.jobs = j.value("jobs", 1);
    cfg.allow_off_grid = j.value("allow_off_grid", false);
    cfg.quant_offset = j.value("quant_offset", 128);
    cfg.external_scores = j.value("external_scores", "");

    if (j.contains("detector")) {
        const json& d = j.at("detector");
        reject_unknown_keys(d, {"kind", "n_trees", "max_samples", "nu", "gamma", "standardize"}, "detector");
        cfg.detector.kind = parse_detector(d.value("kind", "iforest"));
        cfg.detector.n_trees = d.value("n_trees", 100);
        cfg.detector.max_samples = d.value("max_samples", 0);
        cfg.detector.nu = d.value("nu", 0.5);
        if (d.contains("gamma")) {
            if (d.at("gamma").is_string()) {
                if (d.at("gamma").get<std::string>() != "scale")
                    fail(Errc::invalid_config, "detector.gamma must be 'scale' or a number");
                cfg.detector.gamma = 0.0;
            } else {
                cfg.detector.gamma = d.at("gamma").get<double>();
            }
        }
        cfg.detector.standardize = d.value("standardize", true);
    }

    if (j.contains("features")) {
        const json& f = j.at("features");
        if (f.is_string()) {
            std::string s = f.get<std::string>();
            if (s == "all" || s == "best8") {
                cfg.features_all = true;
            } else {
                cfg.features_all = false;
                cfg.features = {s};
            }
        } else if (f.is_array()) {
            cfg.features_all = false;
            cfg.features = f.get<std::vector<std::string>>();
            if (cfg.features.empty()) fail(Errc::invalid_config, "run config: empty feature list");
        } else {
            fail(Errc::invalid_config, "run config: 'features' must be 'all', a name or a list");
        }
    }
    if (!cfg.features.empty()) resolve_feature_indices(cfg.features);  // validates names

    if (j.contains("combination_sizes")) {
        cfg.combination_sizes = j.at("combination_sizes").get<std::vector<int>>();
        for (int s : cfg.combination_sizes)
            if (s < 2 || s > 4) fail(Errc::invalid_config, "combination sizes must be in {2,3,4}");
        if (!cfg.features_all)
            fail(Errc::invalid_config, "combination_sizes requires features='all' (the best-8 come from ranking)");
    }
    if (j.contains("generators")) cfg.generators = j.at("generators").get<std::vector<std::string>>();

    if (j.contains("post_process")) {
        const json& p = j.at("post_process");
        reject_unknown_keys(p, {"conditions", "train_regimes"}, "post_process");
        if (p.contains("conditions")) {
            if (p.at("conditions").is_string()) {
                std::string s = p.at("conditions").get<std::string>();
                if (s == "paper_grid") {
                    cfg.conditions = {"none"};
                    for (const auto& c : post_process_grid()) cfg.conditions.push_back(c);
                } else if (s == "none") {
                    cfg.conditions = {"none"};
                } else {
                    fail(Errc::invalid_config, "post_process.conditions must be 'paper_grid', 'none' or a list");
                }
            } else {
                cfg.conditions = p.at("conditions").get<std::vector<std::string>>();
                if (cfg.conditions.empty()) fail(Errc::invalid_config, "post_process.conditions is empty");
            }
        }
        if (p.contains("train_regimes")) {
            cfg.train_regimes = p.at("train_regimes").get<std::vector<std::string>>();
            for (const auto& r : cfg.train_regimes)
                if (r != "clean" && r != "processed")
                    fail(Errc::invalid_config, "train regime must be 'clean' or 'processed', got '" + r + "'");
            if (cfg.train_regimes.empty()) fail(Errc::invalid_config, "post_process.train_regimes is empty");
        }
    }
    for (const auto& c : cfg.conditions) PostProcessSpec::parse(c, cfg.allow_off_grid);  // validates

    std::string auc_mode = j.value("auc_mode", "fold_averaged");
    if (auc_mode == "pooled")
        cfg.pooled_auc = true;
    else if (auc_mode != "fold_averaged")
        fail(Errc::invalid_config, "auc_mode must be 'fold_averaged' or 'pooled'");
    return cfg;
}

// ---- evaluate: grid execution ----------------------------------------------

struct CellResult {
    std::string generator;
    std::string condition;
    std::string regime;
    std::string best_feature;
    double best_auc = 0.0;
    double best_accuracy = 0.0;
    std::vector<EvalReport> per_feature;  // one entry per evaluated feature set
};

json cell_to_json(const CellResult& cell) {
    json per = json::array();
    for (const auto& rep : cell.per_feature) per.push_back(report_to_json(rep));
    return {{"generator", cell.generator},
            {"condition", cell.condition},
            {"train_regime", cell.regime},
            {"best_feature", cell.best_feature},
            {"best_auc", cell.best_auc},
            {"best_balanced_accuracy", cell.best_accuracy},
            {"runs", std::move(per)}};
}

std::string feature_set_label(const std::vector<std::string>& feats) {
    std::string label;
    for (const auto& f : feats) label += (label.empty() ? "" : "+") + f;
    return label;
}

CellResult run_cell(const RunConfig& cfg, const DatasetManifest& manifest, const FoldAssignment& folds,
                    const std::string& generator, const std::string& condition, const std::string& regime,
                    FeatureCache& cache) {
    PostProcessSpec test_post = PostProcessSpec::parse(condition, cfg.allow_off_grid);
    PostProcessSpec train_post =
        regime == "processed" ? test_post : PostProcessSpec::parse("none", cfg.allow_off_grid);

    CrossvalOptions opts;
    opts.n_folds = cfg.n_folds;
    opts.seed = cfg.seed;
    opts.pooled_auc = cfg.pooled_auc;
    opts.preprocess.quant_offset = cfg.quant_offset;
    opts.jobs = cfg.jobs;

    std::vector<std::vector<std::string>> feature_sets;
    if (cfg.features_all) {
        for (const auto& name : feature_names()) feature_sets.push_back({name});
    } else {
        feature_sets.push_back(cfg.features);
    }

    CellResult cell;
    cell.generator = generator;
    cell.condition = condition;
    cell.regime = regime;
    for (const auto& feats : feature_sets) {
        EvalReport rep = run_crossval(manifest, folds, feats, cfg.detector, generator, train_post, test_post,
                                      opts, &cache);
        if (cell.per_feature.empty() || rep.auc > cell.best_auc) {
            cell.best_auc = rep.auc;
            cell.best_feature = feature_set_label(feats);
            cell.best_accuracy = rep.balanced_accuracy;
        }
        cell.per_feature.push_back(std::move(rep));
    }
    return cell;
}

FeatureRanking ranking_from_cell(const CellResult& cell) {
    FeatureRanking ranking;
    FeatureScoreTable unused;
    (void)unused;
    std::array<double, kFeatureCount> aucs{};
    for (const auto& rep : cell.per_feature) {
        if (rep.features.size() != 1) continue;
        int idx = feature_index(rep.features[0]);
        if (idx >= 0) aucs[idx] = rep.auc;
    }
    const auto& names = feature_names();
    std::vector<int> order(kFeatureCount);
    for (int i = 0; i < kFeatureCount; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (aucs[a] != aucs[b]) return aucs[a] > aucs[b];
        return names[a] < names[b];
    });
    ranking.auc = aucs;
    for (int i = 0; i < 8; ++i) ranking.best8.push_back(names[order[i]]);
    for (int i = 0; i < kFeatureCount; ++i) {
        Metric metric = static_cast<Metric>(i / 8);
        auto [it, inserted] = ranking.best_per_metric.try_emplace(metric_tag(metric), aucs[i]);
        if (!inserted) it->second = std::max(it->second, aucs[i]);
    }
    return ranking;
}

void write_tables(const RunConfig& cfg, const std::vector<CellResult>& cells,
                  const std::vector<std::string>& generators) {
    for (const std::string& regime : cfg.train_regimes) {
        for (const char* what : {"auc", "accuracy"}) {
            std::string csv_path = cfg.output_dir + "/table_" + what + "__train_" + regime + ".csv";
            std::ofstream out(csv_path);
            out << "generator";
            for (const auto& c : cfg.conditions) out << "," << c;
            out << "\n";
            for (const auto& gen : generators) {
                out << gen;
                for (const auto& cond : cfg.conditions) {
                    const CellResult* found = nullptr;
                    for (const auto& cell : cells)
                        if (cell.generator == gen && cell.condition == cond && cell.regime == regime)
                            found = &cell;
                    if (!found)
                        out << ",";
                    else
                        out << ","
                            << format_double(std::string(what) == "auc" ? found->best_auc
                                                                        : found->best_accuracy);
                }
                out << "\n";
            }
        }
    }

    std::ofstream txt(cfg.output_dir + "/table.txt");
    for (const std::string& regime : cfg.train_regimes) {
        txt << "Best single-run AUC per condition (train regime: " << regime << ")\n";
        txt << "generator";
        for (const auto& c : cfg.conditions) txt << "\t" << c;
        txt << "\n";
        for (const auto& gen : generators) {
            txt << gen;
            for (const auto& cond : cfg.conditions) {
                bool printed = false;
                for (const auto& cell : cells)
                    if (cell.generator == gen && cell.condition == cond && cell.regime == regime) {
                        char buf[16];
                        std::snprintf(buf, sizeof(buf), "%.3f", cell.best_auc);
                        txt << "\t" << buf;
                        printed = true;
                        break;
                    }
                if (!printed) txt << "\t-";
            }
            txt << "\n";
        }
        txt << "\n";
    }
}

int evaluate_external(const RunConfig& cfg, const DatasetManifest& manifest) {
    std::vector<std::string> generators = cfg.generators.empty() ? manifest.generators() : cfg.generators;
    json out;
    out["tool_version"] = kToolVersion;
    out["external_scores"] = cfg.external_scores;
    json reports = json::array();
    for (const auto& gen : generators) {
        EvalReport rep = ingest_external_scores(cfg.external_scores, manifest, gen);
        reports.push_back(report_to_json(rep));
    }
    out["reports"] = std::move(reports);
    fs::create_directories(cfg.output_dir);
    std::ofstream f(cfg.output_dir + "/external_report.json");
    f << out.dump(1) << "\n";
    std::cout << "external evaluation written to " << cfg.output_dir << "/external_report.json\n";
    return 0;
}

}  // namespace

int cmd_extract(const ExtractArgs& args) {
    DatasetManifest manifest = load_manifest(args.manifest);
    print_warnings(manifest);
    PreprocessConfig cfg;
    cfg.quant_offset = args.quant_offset;

    FeatureTable table;
    table.rows.resize(manifest.records.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < manifest.records.size(); i = next.fetch_add(1)) {
            const SampleRecord& rec = manifest.records[i];
            Image img = decode_image(manifest.resolve_path(rec));
            FeatureRow row;
            row.id = rec.id;
            row.label = rec.label;
            row.generator = rec.generator;
            row.features = extract_features(img, cfg);
            table.rows[i] = std::move(row);
        }
    };
    int jobs = std::max(1, args.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    write_feature_csv(table, args.out_csv);
    std::cout << "extracted " << table.rows.size() << " rows -> " << args.out_csv << "\n";
    return 0;
}

int cmd_train(const TrainArgs& args) {
    FeatureTable table = read_feature_csv(args.features_csv);
    std::vector<std::string> feats = args.features.empty()
                                         ? std::vector<std::string>(feature_names().begin(), feature_names().end())
                                         : args.features;
    std::vector<int> indices = resolve_feature_indices(feats);

    std::vector<const FeatureRow*> train_rows;
    for (const auto& row : table.rows)
        if (row.label == Label::real) train_rows.push_back(&row);
    if (train_rows.size() < 2)
        fail(Errc::invalid_config, "training needs at least 2 real rows, found " +
                                       std::to_string(train_rows.size()));

    RowMatrix X = make_matrix(static_cast<int>(train_rows.size()), static_cast<int>(indices.size()));
    for (size_t r = 0; r < train_rows.size(); ++r)
        for (size_t c = 0; c < indices.size(); ++c)
            X.at(static_cast<int>(r), static_cast<int>(c)) = train_rows[r]->features.values[indices[c]];

    DetectorConfig cfg = detector_config_from(args);
    DetectorModel model = fit_detector(cfg, X, feats, args.seed);
    save_model(model, args.out_model);
    std::cout << "trained " << args.detector << " on " << train_rows.size() << " real rows ("
              << feats.size() << " features) -> " << args.out_model << "\n";
    return 0;
}

int cmd_score(const ScoreArgs& args) {
    DetectorModel model = load_model(args.model);
    FeatureTable table = read_feature_csv(args.features_csv);
    std::vector<int> indices = resolve_feature_indices(model.feature_names);

    std::vector<ScoreRow> rows;
    rows.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        std::vector<double> x(indices.size());
        for (size_t c = 0; c < indices.size(); ++c) x[c] = row.features.values[indices[c]];
        rows.push_back({row.id, row.label, row.generator, score_sample(model, x)});
    }
    write_score_csv(rows, args.out_csv);
    std::cout << "scored " << rows.size() << " rows -> " << args.out_csv << "\n";
    return 0;
}

int cmd_augment(const AugmentArgs& args) {
    DatasetManifest manifest = load_manifest(args.manifest);
    print_warnings(manifest);
    PostProcessSpec spec = PostProcessSpec::parse(args.spec, args.allow_off_grid);
    spec.rng_seed = args.seed;
    DatasetManifest derived = materialize_augmented(manifest, spec, args.out_dir);
    std::cout << "materialized " << derived.records.size() << " images (" << spec.to_string() << ") -> "
              << args.out_dir << "\n";
    return 0;
}

int cmd_pca(const PcaArgs& args) {
    DatasetManifest manifest = load_manifest(args.manifest);
    print_warnings(manifest);

    std::vector<const SampleRecord*> reals, synths;
    for (const auto& rec : manifest.records) {
        if (rec.label == Label::real && static_cast<int>(reals.size()) < args.per_class) reals.push_back(&rec);
        if (rec.label == Label::synthetic && static_cast<int>(synths.size()) < args.per_class &&
            (args.generator.empty() || rec.generator == args.generator))
            synths.push_back(&rec);
    }
    if (static_cast<int>(reals.size()) < args.components)
        fail(Errc::invalid_config, "pca needs at least k real images, have " + std::to_string(reals.size()));
    if (synths.empty()) fail(Errc::invalid_config, "pca needs synthetic images in the manifest");

    auto rows_of = [&](const std::vector<const SampleRecord*>& recs) {
        RowMatrix m = make_matrix(static_cast<int>(recs.size()), 256 * 256);
        for (size_t i = 0; i < recs.size(); ++i) {
            Image img = decode_image(manifest.resolve_path(*recs[i]));
            AveragedCooccurrence avg = average_cooccurrence(img);
            std::copy(avg.matrix.begin(), avg.matrix.end(), m.data.begin() + i * avg.matrix.size());
        }
        return m;
    };
    RowMatrix real_rows = rows_of(reals);
    RowMatrix synth_rows = rows_of(synths);

    PcaProjection pca = fit_pca(real_rows, args.components);

    int n = real_rows.rows + synth_rows.rows;
    RowMatrix proj = make_matrix(n, args.components);
    for (int r = 0; r < real_rows.rows; ++r)
        for (int c = 0; c < args.components; ++c) proj.at(r, c) = pca.projections.at(r, c);
    for (int r = 0; r < synth_rows.rows; ++r) {
        std::vector<double> p = pca_project(pca, std::span<const double>(synth_rows.row(r), synth_rows.cols));
        for (int c = 0; c < args.components; ++c) proj.at(real_rows.rows + r, c) = p[c];
    }

    // csv: reals first, then synthetics, matching the heatmap row order
    {
        std::ofstream out(args.out_prefix + ".csv");
        out << "id,label";
        for (int c = 0; c < args.components; ++c) out << ",pc" << (c + 1);
        out << "\n";
        for (int r = 0; r < n; ++r) {
            const SampleRecord* rec = r < real_rows.rows ? reals[r] : synths[r - real_rows.rows];
            out << rec->id << "," << label_tag(rec->label);
            for (int c = 0; c < args.components; ++c) out << "," << format_double(proj.at(r, c));
            out << "\n";
        }
    }

    // min-max normalized heatmap, one cell per projection entry
    double lo = proj.data[0], hi = proj.data[0];
    for (double v : proj.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double range = hi > lo ? hi - lo : 1.0;
    int cell = std::max(1, args.cell_px);
    Image heat = make_image(args.components * cell, n * cell, 1);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < args.components; ++c) {
            auto gray = static_cast<uint8_t>(std::lround(255.0 * (proj.at(r, c) - lo) / range));
            for (int dy = 0; dy < cell; ++dy)
                for (int dx = 0; dx < cell; ++dx) heat.at(r * cell + dy, c * cell + dx) = gray;
        }
    write_png(heat, args.out_prefix + ".png");

    std::cout << "pca projections (" << real_rows.rows << " real + " << synth_rows.rows << " synthetic, k="
              << args.components << ") -> " << args.out_prefix << ".csv/.png\n";
    return 0;
}

int cmd_evaluate(const EvaluateArgs& args) {
    RunConfig cfg = parse_run_config(args.config_path);
    if (args.seed_override) cfg.seed = *args.seed_override;
    if (args.jobs_override) cfg.jobs = *args.jobs_override;
    if (!args.output_dir_override.empty()) cfg.output_dir = args.output_dir_override;

    DatasetManifest manifest = load_manifest(cfg.manifest);
    print_warnings(manifest);

    if (!cfg.external_scores.empty()) return evaluate_external(cfg, manifest);

    FoldAssignment folds = assign_folds(manifest, cfg.n_folds, cfg.seed);
    std::vector<std::string> generators = cfg.generators.empty() ? manifest.generators() : cfg.generators;
    if (generators.empty()) fail(Errc::invalid_config, "manifest has no synthetic records to evaluate");

    fs::create_directories(cfg.output_dir + "/reports");
    FeatureCache cache;

    // the "none" condition has no processed/clean distinction; run it once
    std::vector<std::pair<std::string, std::string>> grid;
    for (const auto& condition : cfg.conditions) {
        if (condition == "none") {
            grid.emplace_back(condition, "clean");
        } else {
            for (const auto& regime : cfg.train_regimes) grid.emplace_back(condition, regime);
        }
    }

    std::vector<CellResult> cells;
    for (const auto& gen : generators) {
        for (const auto& [condition, regime] : grid) {
            CellResult cell = run_cell(cfg, manifest, folds, gen, condition, regime, cache);
            std::ofstream out(cfg.output_dir + "/reports/" + gen + "__" + condition + "__train_" + regime +
                              ".json");
            out << cell_to_json(cell).dump(1) << "\n";
            cells.push_back(std::move(cell));
        }
    }
    // a "none" cell stands in for both regimes in the tables
    {
        std::vector<CellResult> mirrored;
        for (const auto& cell : cells)
            if (cell.condition == "none" && cell.regime == "clean") {
                for (const auto& regime : cfg.train_regimes)
                    if (regime != "clean") {
                        CellResult copy = cell;
                        copy.regime = regime;
                        mirrored.push_back(std::move(copy));
                    }
            }
        for (auto& m : mirrored) cells.push_back(std::move(m));
    }

    json summary;
    summary["tool_version"] = kToolVersion;
    summary["seed"] = cfg.seed;
    summary["n_folds"] = cfg.n_folds;
    summary["detector"] = cfg.detector.to_json();
    summary["conditions"] = cfg.conditions;
    summary["train_regimes"] = cfg.train_regimes;
    summary["generators"] = generators;
    summary["auc_mode"] = cfg.pooled_auc ? "pooled" : "fold_averaged";

    json per_generator = json::object();
    for (const auto& gen : generators) {
        json g;
        json cells_json = json::array();
        for (const auto& cell : cells)
            if (cell.generator == gen)
                cells_json.push_back({{"condition", cell.condition},
                                      {"train_regime", cell.regime},
                                      {"best_feature", cell.best_feature},
                                      {"auc", cell.best_auc},
                                      {"balanced_accuracy", cell.best_accuracy}});
        g["cells"] = std::move(cells_json);

        // ranking and combinations come from the unprocessed condition
        if (cfg.features_all) {
            for (const auto& cell : cells) {
                if (cell.generator != gen || cell.condition != "none" || cell.regime != "clean") continue;
                FeatureRanking ranking = ranking_from_cell(cell);
                json r;
                r["best8"] = ranking.best8;
                r["best_per_metric"] = ranking.best_per_metric;
                json aucs = json::object();
                for (int i = 0; i < kFeatureCount; ++i) aucs[feature_names()[i]] = ranking.auc[i];
                r["auc"] = std::move(aucs);
                g["ranking"] = std::move(r);

                if (!cfg.combination_sizes.empty()) {
                    CrossvalOptions opts;
                    opts.n_folds = cfg.n_folds;
                    opts.seed = cfg.seed;
                    opts.pooled_auc = cfg.pooled_auc;
                    opts.preprocess.quant_offset = cfg.quant_offset;
                    opts.jobs = cfg.jobs;
                    PostProcessSpec none;
                    auto combos = combination_search(manifest, folds, ranking.best8, cfg.detector, gen, none,
                                                     none, opts, cfg.combination_sizes, &cache);
                    json cj = json::array();
                    for (const auto& combo : combos)
                        cj.push_back({{"size", combo.size},
                                      {"n_evaluated", combo.n_evaluated},
                                      {"best_auc", combo.best_auc},
                                      {"best_auc_subset", combo.best_auc_subset},
                                      {"best_balanced_accuracy", combo.best_accuracy},
                                      {"best_balanced_accuracy_subset", combo.best_accuracy_subset}});
                    g["combinations"] = std::move(cj);
                }
            }
        }
        per_generator[gen] = std::move(g);
    }
    summary["results"] = std::move(per_generator);

    std::ofstream out(cfg.output_dir + "/summary.json");
    out << summary.dump(1) << "\n";
    write_tables(cfg, cells, generators);
    std::cout << "evaluation complete: " << cells.size() << " grid cells -> " << cfg.output_dir << "\n";
    return 0;
}

void print_version() {
    std::cout << "wbdetect " << kToolVersion << " (manifest schema v" << kManifestFormatVersion
              << ", model format v" << kModelFormatVersion << ", feature order v" << kFeatureOrderVersion
              << ")\n";
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace wb::cli
