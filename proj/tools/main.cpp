#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"wbdetect - synthetic western-blot image detection toolkit"};
    app.require_subcommand(0, 1);

    bool show_version = false;
    app.add_flag("--version", show_version, "print tool and file-format versions");

    wb::cli::ExtractArgs extract;
    auto* cmd_extract = app.add_subcommand("extract", "extract texture features for every manifest record");
    cmd_extract->add_option("manifest", extract.manifest, "JSONL manifest")->required();
    cmd_extract->add_option("out_csv", extract.out_csv, "output feature CSV")->required();
    cmd_extract->add_option("--jobs", extract.jobs, "worker threads");
    cmd_extract->add_option("--quant-offset", extract.quant_offset, "residual quantization offset");

    wb::cli::TrainArgs train;
    auto* cmd_train = app.add_subcommand("train", "fit a one-class detector on the real rows of a feature CSV");
    cmd_train->add_option("features_csv", train.features_csv, "feature CSV from 'extract'")->required();
    cmd_train->add_option("out_model", train.out_model, "output model file")->required();
    cmd_train->add_option("--detector", train.detector, "iforest|ocsvm");
    cmd_train->add_option("--feature", train.features, "feature column (repeatable; default: all 40)");
    cmd_train->add_option("--seed", train.seed, "rng seed");
    cmd_train->add_option("--trees", train.n_trees, "isolation forest tree count");
    cmd_train->add_option("--max-samples", train.max_samples, "per-tree subsample (0 = full set)");
    cmd_train->add_option("--nu", train.nu, "one-class svm nu");
    cmd_train->add_option("--gamma", train.gamma, "'scale' or a positive number");
    cmd_train->add_flag("--no-standardize", train.no_standardize, "skip z-scoring before the svm");

    wb::cli::ScoreArgs score;
    auto* cmd_score = app.add_subcommand("score", "score a feature CSV with a trained model");
    cmd_score->add_option("model", score.model, "model file from 'train'")->required();
    cmd_score->add_option("features_csv", score.features_csv, "feature CSV")->required();
    cmd_score->add_option("out_csv", score.out_csv, "output score CSV")->required();

    wb::cli::EvaluateArgs evaluate;
    uint64_t eval_seed = 0;
    int eval_jobs = 0;
    auto* cmd_evaluate = app.add_subcommand("evaluate", "run a cross-validated experiment grid from a config file");
    cmd_evaluate->add_option("config", evaluate.config_path, "run-config JSON")->required();
    auto* seed_opt = cmd_evaluate->add_option("--seed", eval_seed, "override the config seed");
    auto* jobs_opt = cmd_evaluate->add_option("--jobs", eval_jobs, "override the config worker count");
    cmd_evaluate->add_option("--output-dir", evaluate.output_dir_override, "override the config output dir");

    wb::cli::AugmentArgs augment;
    auto* cmd_augment = app.add_subcommand("augment", "materialize a post-processed copy of a dataset");
    cmd_augment->add_option("manifest", augment.manifest, "JSONL manifest")->required();
    cmd_augment->add_option("spec", augment.spec, "condition, e.g. jpeg_80 or upscale_1.25")->required();
    cmd_augment->add_option("out_dir", augment.out_dir, "output directory")->required();
    cmd_augment->add_option("--seed", augment.seed, "crop seed");
    cmd_augment->add_flag("--allow-off-grid", augment.allow_off_grid, "accept factors outside the canonical grid");

    wb::cli::PcaArgs pca;
    auto* cmd_pca = app.add_subcommand("pca", "project averaged co-occurrence matrices onto principal components");
    cmd_pca->add_option("manifest", pca.manifest, "JSONL manifest")->required();
    cmd_pca->add_option("out_prefix", pca.out_prefix, "output prefix (.png and .csv)")->required();
    cmd_pca->add_option("--components", pca.components, "number of components");
    cmd_pca->add_option("--per-class", pca.per_class, "images per class");
    cmd_pca->add_option("--generator", pca.generator, "restrict synthetic rows to one generator");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage problems exit with 2
    }

    if (show_version) {
        wb::cli::print_version();
        return 0;
    }

    return wb::cli::run_guarded([&]() -> int {
        if (cmd_extract->parsed()) return wb::cli::cmd_extract(extract);
        if (cmd_train->parsed()) return wb::cli::cmd_train(train);
        if (cmd_score->parsed()) return wb::cli::cmd_score(score);
        if (cmd_evaluate->parsed()) {
            if (!seed_opt->empty()) evaluate.seed_override = eval_seed;
            if (!jobs_opt->empty()) evaluate.jobs_override = eval_jobs;
            return wb::cli::cmd_evaluate(evaluate);
        }
        if (cmd_augment->parsed()) return wb::cli::cmd_augment(augment);
        if (cmd_pca->parsed()) return wb::cli::cmd_pca(pca);
        std::cout << app.help();
        return 0;
    });
}
