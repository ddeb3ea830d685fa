#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wb::cli {

struct ExtractArgs {
    std::string manifest;
    std::string out_csv;
    int jobs = 1;
    int quant_offset = 128;
};

struct TrainArgs {
    std::string features_csv;
    std::string out_model;
    std::string detector = "iforest";
    std::vector<std::string> features;  // empty ⇒ all 40
    uint64_t seed = 0;
    int n_trees = 100;
    int max_samples = 0;
    double nu = 0.5;
    std::string gamma = "scale";
    bool no_standardize = false;
};

struct ScoreArgs {
    std::string model;
    std::string features_csv;
    std::string out_csv;
};

struct AugmentArgs {
    std::string manifest;
    std::string spec;
    std::string out_dir;
    uint64_t seed = 0;
    bool allow_off_grid = false;
};

struct PcaArgs {
    std::string manifest;
    int components = 3;
    std::string out_prefix;
    int per_class = 25;
    std::string generator;  // empty ⇒ any synthetic
    int cell_px = 8;
};

struct EvaluateArgs {
    std::string config_path;
    std::optional<uint64_t> seed_override;
    std::optional<int> jobs_override;
    std::string output_dir_override;
};

int cmd_extract(const ExtractArgs& args);
int cmd_train(const TrainArgs& args);
int cmd_score(const ScoreArgs& args);
int cmd_augment(const AugmentArgs& args);
int cmd_pca(const PcaArgs& args);
int cmd_evaluate(const EvaluateArgs& args);

void print_version();

// maps wb::Error categories and unexpected exceptions to exit codes
int run_guarded(const std::function<int()>& body);

}  // namespace wb::cli
