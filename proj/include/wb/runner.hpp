#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "wb/augment.hpp"
#include "wb/dataset.hpp"
#include "wb/model_io.hpp"
#include "wb/texture.hpp"

namespace wb {

struct DetectorConfig {
    DetectorKind kind = DetectorKind::iforest;
    int n_trees = 100;
    int max_samples = 0;  // 0 ⇒ full training set
    double nu = 0.5;
    double gamma = 0.0;  // 0 ⇒ "scale"
    bool standardize = true;

    nlohmann::json to_json() const;
};

struct FoldOutcome {
    int test_fold = 0;
    double auc = 0.0;
    double balanced_accuracy = 0.0;
    int n_train = 0;
    int n_test_real = 0;
    int n_test_synth = 0;
};

struct EvalReport {
    std::string generator;
    double auc = 0.0;                // mean over folds (or pooled, per auc_mode)
    double balanced_accuracy = 0.0;  // mean over folds
    int n_real = 0;
    int n_synthetic = 0;
    std::vector<FoldOutcome> folds;
    std::string train_post = "none";
    std::string test_post = "none";
    std::vector<std::string> features;
    DetectorConfig detector;
    uint64_t seed = 0;
    std::string auc_mode = "fold_averaged";
};

nlohmann::json report_to_json(const EvalReport& report);

// Features keyed by (record id, post-process condition); shared across grid
// cells so each image is decoded and processed once per condition.
class FeatureCache {
  public:
    FeatureVector get(const DatasetManifest& manifest, const SampleRecord& rec, const PostProcessSpec& spec,
                      const PreprocessConfig& cfg, uint64_t pp_master_seed);
    // precompute entries for all records on `jobs` threads
    void warm(const DatasetManifest& manifest, const PostProcessSpec& spec, const PreprocessConfig& cfg,
              uint64_t pp_master_seed, int jobs);

  private:
    std::mutex mu_;
    std::map<std::string, FeatureVector> map_;
};

struct CrossvalOptions {
    int n_folds = 2;
    uint64_t seed = 0;
    bool pooled_auc = false;  // pool scores across folds instead of averaging AUCs
    PreprocessConfig preprocess;
    int jobs = 1;
};

// One cross-validated evaluation of one generator under a (train, test)
// post-processing pair: per fold, fits the detector on real training
// features and scores the held-out reals plus every synthetic patch of the
// generator, then averages over folds.
EvalReport run_crossval(const DatasetManifest& manifest, const FoldAssignment& folds,
                        const std::vector<std::string>& features, const DetectorConfig& detector,
                        const std::string& generator, const PostProcessSpec& train_post,
                        const PostProcessSpec& test_post, const CrossvalOptions& opts,
                        FeatureCache* cache = nullptr);

// Third-party binary-detector logits (CSV id,score; positive ⇒ synthetic).
// Scores are negated on ingestion to match the internal positive-real
// orientation, then evaluated with the same metric code path.
EvalReport ingest_external_scores(const std::string& scores_csv, const DatasetManifest& manifest,
                                  const std::string& generator);

// Helpers shared with the CLI.
RowMatrix feature_matrix(const std::vector<const SampleRecord*>& records,
                         const std::vector<FeatureVector>& vectors, const std::vector<int>& feature_indices);
std::vector<int> resolve_feature_indices(const std::vector<std::string>& names);
DetectorModel fit_detector(const DetectorConfig& cfg, const RowMatrix& X,
                           const std::vector<std::string>& feature_names, uint64_t seed);

}  // namespace wb
