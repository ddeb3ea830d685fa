#include "wb/runner.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "wb/errors.hpp"
#include "wb/image_io.hpp"
#include "wb/metrics.hpp"
#include "wb/rng.hpp"

using nlohmann::json;

namespace wb {

namespace {

void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex err_mu;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

FeatureVector compute_record_features(const DatasetManifest& manifest, const SampleRecord& rec,
                                      const PostProcessSpec& spec, const PreprocessConfig& cfg,
                                      uint64_t pp_master_seed) {
    Image img = decode_image(manifest.resolve_path(rec));
    if (spec.kind != PostProcessKind::none) {
        PostProcessSpec per_image = spec;
        per_image.rng_seed = derive_seed(pp_master_seed, rec.id);
        img = apply_post_process(img, per_image);
    }
    return extract_features(img, cfg);
}

std::string cache_key(const SampleRecord& rec, const PostProcessSpec& spec, const PreprocessConfig& cfg,
                      uint64_t pp_master_seed) {
    return rec.id + "|" + spec.to_string() + "|" + std::to_string(cfg.quant_offset) + "|" +
           std::to_string(spec.kind == PostProcessKind::upscale ? pp_master_seed : 0);
}

}  // namespace

json DetectorConfig::to_json() const {
    json j;
    j["kind"] = detector_tag(kind);
    if (kind == DetectorKind::iforest) {
        j["n_trees"] = n_trees;
        j["max_samples"] = max_samples;
    } else {
        j["nu"] = nu;
        j["gamma"] = gamma <= 0.0 ? json("scale") : json(gamma);
        j["standardize"] = standardize;
    }
    return j;
}

json report_to_json(const EvalReport& r) {
    json folds = json::array();
    for (const auto& f : r.folds)
        folds.push_back({{"test_fold", f.test_fold},
                         {"auc", f.auc},
                         {"balanced_accuracy", f.balanced_accuracy},
                         {"n_train", f.n_train},
                         {"n_test_real", f.n_test_real},
                         {"n_test_synth", f.n_test_synth}});
    return {{"generator", r.generator},
            {"auc", r.auc},
            {"balanced_accuracy", r.balanced_accuracy},
            {"n_real", r.n_real},
            {"n_synthetic", r.n_synthetic},
            {"folds", std::move(folds)},
            {"post_process", {{"train", r.train_post}, {"test", r.test_post}}},
            {"features", r.features},
            {"detector", r.detector.to_json()},
            {"seed", r.seed},
            {"auc_mode", r.auc_mode}};
}

FeatureVector FeatureCache::get(const DatasetManifest& manifest, const SampleRecord& rec,
                                const PostProcessSpec& spec, const PreprocessConfig& cfg,
                                uint64_t pp_master_seed) {
    std::string key = cache_key(rec, spec, cfg, pp_master_seed);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(key);
        if (it != map_.end()) return it->second;
    }
    FeatureVector fv = compute_record_features(manifest, rec, spec, cfg, pp_master_seed);
    std::lock_guard<std::mutex> lock(mu_);
    return map_.emplace(key, fv).first->second;
}

void FeatureCache::warm(const DatasetManifest& manifest, const PostProcessSpec& spec,
                        const PreprocessConfig& cfg, uint64_t pp_master_seed, int jobs) {
    parallel_for(manifest.records.size(), jobs,
                 [&](size_t i) { get(manifest, manifest.records[i], spec, cfg, pp_master_seed); });
}

std::vector<int> resolve_feature_indices(const std::vector<std::string>& names) {
    std::vector<int> idx;
    idx.reserve(names.size());
    for (const auto& name : names) {
        int i = feature_index(name);
        if (i < 0) fail(Errc::invalid_config, "unknown feature '" + name + "'");
        idx.push_back(i);
    }
    return idx;
}

RowMatrix feature_matrix(const std::vector<const SampleRecord*>& records,
                         const std::vector<FeatureVector>& vectors, const std::vector<int>& feature_indices) {
    RowMatrix X = make_matrix(static_cast<int>(records.size()), static_cast<int>(feature_indices.size()));
    for (size_t r = 0; r < vectors.size(); ++r)
        for (size_t c = 0; c < feature_indices.size(); ++c) X.at(static_cast<int>(r), static_cast<int>(c)) =
            vectors[r].values[feature_indices[c]];
    return X;
}

DetectorModel fit_detector(const DetectorConfig& cfg, const RowMatrix& X,
                           const std::vector<std::string>& feature_names, uint64_t seed) {
    DetectorModel model;
    model.kind = cfg.kind;
    model.feature_names = feature_names;
    model.seed = seed;
    if (cfg.kind == DetectorKind::iforest) {
        IsolationForestParams params;
        params.n_trees = cfg.n_trees;
        params.max_samples = cfg.max_samples;
        params.seed = seed;
        model.iforest = fit_isolation_forest(X, params);
    } else {
        OneClassSvmParams params;
        params.nu = cfg.nu;
        params.gamma = cfg.gamma;
        params.standardize = cfg.standardize;
        model.ocsvm = fit_ocsvm(X, params);
    }
    return model;
}

EvalReport run_crossval(const DatasetManifest& manifest, const FoldAssignment& folds,
                        const std::vector<std::string>& features, const DetectorConfig& detector,
                        const std::string& generator, const PostProcessSpec& train_post,
                        const PostProcessSpec& test_post, const CrossvalOptions& opts, FeatureCache* cache) {
    if (features.empty()) fail(Errc::invalid_config, "run_crossval: empty feature set");
    std::vector<int> feature_indices = resolve_feature_indices(features);

    FeatureCache local_cache;
    FeatureCache& fc = cache ? *cache : local_cache;

    uint64_t train_pp_seed = derive_seed(opts.seed, "pp-train");
    uint64_t test_pp_seed = derive_seed(opts.seed, "pp-test");

    std::vector<const SampleRecord*> reals, synths;
    for (const auto& rec : manifest.records) {
        if (rec.label == Label::real)
            reals.push_back(&rec);
        else if (rec.generator == generator)
            synths.push_back(&rec);
    }
    if (reals.empty()) fail(Errc::invalid_config, "run_crossval: no real records in manifest");
    if (synths.empty()) fail(Errc::invalid_config, "run_crossval: no synthetic records for generator '" + generator + "'");

    EvalReport report;
    report.generator = generator;
    report.features = features;
    report.detector = detector;
    report.seed = opts.seed;
    report.train_post = train_post.to_string();
    report.test_post = test_post.to_string();
    report.auc_mode = opts.pooled_auc ? "pooled" : "fold_averaged";
    report.n_real = static_cast<int>(reals.size());
    report.n_synthetic = static_cast<int>(synths.size());

    std::vector<double> pooled_real, pooled_synth;
    double auc_sum = 0.0, acc_sum = 0.0;

    for (int test_fold = 0; test_fold < folds.n_folds; ++test_fold) {
        std::vector<const SampleRecord*> train_recs, test_real_recs;
        for (const auto* rec : reals) {
            int f = folds.fold_of(*rec);
            if (f < 0) fail(Errc::invalid_config, "real record '" + rec->id + "' has no fold");
            (f == test_fold ? test_real_recs : train_recs).push_back(rec);
        }
        if (train_recs.empty() || test_real_recs.empty())
            fail(Errc::invalid_config, "fold " + std::to_string(test_fold) + " leaves an empty train or test side");

        auto features_of = [&](const std::vector<const SampleRecord*>& recs, const PostProcessSpec& spec,
                               uint64_t pp_seed) {
            std::vector<FeatureVector> out(recs.size());
            parallel_for(recs.size(), opts.jobs,
                         [&](size_t i) { out[i] = fc.get(manifest, *recs[i], spec, opts.preprocess, pp_seed); });
            return out;
        };

        std::vector<FeatureVector> train_fv = features_of(train_recs, train_post, train_pp_seed);
        std::vector<FeatureVector> test_real_fv = features_of(test_real_recs, test_post, test_pp_seed);
        std::vector<FeatureVector> test_synth_fv = features_of(synths, test_post, test_pp_seed);

        RowMatrix X = feature_matrix(train_recs, train_fv, feature_indices);
        uint64_t fold_seed = derive_seed(opts.seed, "fold-" + std::to_string(test_fold));
        DetectorModel model = fit_detector(detector, X, features, fold_seed);

        auto score_all = [&](const std::vector<const SampleRecord*>& recs, const std::vector<FeatureVector>& fvs) {
            std::vector<double> scores(recs.size());
            for (size_t i = 0; i < recs.size(); ++i) {
                std::vector<double> x(feature_indices.size());
                for (size_t c = 0; c < feature_indices.size(); ++c) x[c] = fvs[i].values[feature_indices[c]];
                scores[i] = score_sample(model, x);
            }
            return scores;
        };

        std::vector<double> real_scores = score_all(test_real_recs, test_real_fv);
        std::vector<double> synth_scores = score_all(synths, test_synth_fv);

        FoldOutcome fold;
        fold.test_fold = test_fold;
        fold.auc = auc(real_scores, synth_scores);
        fold.balanced_accuracy = balanced_accuracy(real_scores, synth_scores);
        fold.n_train = static_cast<int>(train_recs.size());
        fold.n_test_real = static_cast<int>(test_real_recs.size());
        fold.n_test_synth = static_cast<int>(synths.size());
        report.folds.push_back(fold);

        auc_sum += fold.auc;
        acc_sum += fold.balanced_accuracy;
        pooled_real.insert(pooled_real.end(), real_scores.begin(), real_scores.end());
        pooled_synth.insert(pooled_synth.end(), synth_scores.begin(), synth_scores.end());
    }

    report.auc = opts.pooled_auc ? auc(pooled_real, pooled_synth) : auc_sum / folds.n_folds;
    report.balanced_accuracy = acc_sum / folds.n_folds;
    return report;
}

EvalReport ingest_external_scores(const std::string& scores_csv, const DatasetManifest& manifest,
                                  const std::string& generator) {
    std::ifstream in(scores_csv);
    if (!in) fail(Errc::missing_file, "cannot open scores file: " + scores_csv);

    std::vector<double> real_scores, synth_scores;
    std::string line;
    int lineno = 0;
    int matched = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 && line.rfind("id,", 0) == 0) continue;  // optional header
        auto comma = line.find(',');
        if (comma == std::string::npos)
            fail(Errc::schema, "scores line " + std::to_string(lineno) + ": expected 'id,score'");
        std::string id = line.substr(0, comma);
        double logit;
        try {
            logit = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            fail(Errc::schema, "scores line " + std::to_string(lineno) + ": bad score value");
        }
        const SampleRecord* rec = manifest.find(id);
        if (!rec) fail(Errc::schema, "scores line " + std::to_string(lineno) + ": id '" + id + "' not in manifest");
        // external binary logits are positive ⇒ synthetic; negate to the
        // internal positive ⇒ real orientation
        double score = -logit;
        if (rec->label == Label::real) {
            real_scores.push_back(score);
            ++matched;
        } else if (rec->generator == generator) {
            synth_scores.push_back(score);
            ++matched;
        }
    }
    if (matched == 0) fail(Errc::schema, "no scores matched the manifest");

    EvalReport report;
    report.generator = generator;
    report.auc_mode = "pooled";
    report.n_real = static_cast<int>(real_scores.size());
    report.n_synthetic = static_cast<int>(synth_scores.size());
    report.auc = auc(real_scores, synth_scores);
    report.balanced_accuracy = balanced_accuracy(real_scores, synth_scores);
    report.features = {"external"};
    return report;
}

}  // namespace wb
