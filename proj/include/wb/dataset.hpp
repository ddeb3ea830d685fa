#pragma once

#include <map>
#include <string>
#include <vector>

#include "wb/image.hpp"

namespace wb {

enum class Label : uint8_t { real, synthetic };

inline const char* label_tag(Label l) { return l == Label::real ? "real" : "synthetic"; }
Label parse_label(const std::string& tag);

// Well-known generator tags; anything else is accepted and kept verbatim
// (treated as "other"). Real samples always carry "none".
bool is_known_generator(const std::string& tag);

struct SampleRecord {
    std::string id;
    std::string path;  // relative paths resolve against the manifest directory
    Label label = Label::real;
    std::string generator = "none";
    std::string source_image_id;
    int width = 0;   // filled by validate_files
    int height = 0;  // filled by validate_files
    // provenance, present on derived (post-processed) manifests
    std::string origin_id;
    std::string post_process;
};

struct DatasetManifest {
    std::vector<SampleRecord> records;
    int patch_size = 256;
    std::string base_dir;
    std::vector<std::string> warnings;  // unknown-field notices from loading

    const SampleRecord* find(const std::string& id) const;
    std::string resolve_path(const SampleRecord& rec) const;
    // distinct generator tags among synthetic records, in first-appearance order
    std::vector<std::string> generators() const;
};

// JSON-Lines, one record per line, fields {id, path, label, generator,
// source_image_id} (+ optional origin_id/post_process provenance).
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

// Convenience importer: CSV with a header naming the same fields.
DatasetManifest import_csv_manifest(const std::string& path);

DatasetManifest manifest_from_records(std::vector<SampleRecord> records, std::string base_dir = "");

// Decodes every referenced file and fills width/height; throws on the first failure.
void validate_files(DatasetManifest& manifest);

struct FoldAssignment {
    int n_folds = 2;
    std::map<std::string, int> by_source;  // source_image_id → fold

    // fold of a record; −1 for synthetic records (test-only, never trained on)
    int fold_of(const SampleRecord& rec) const;
};

// Real source images are shuffled by seed and dealt round-robin, so fold
// sizes (in source images) differ by at most one. Patches from one source
// image can never cross folds.
FoldAssignment assign_folds(const DatasetManifest& manifest, int n_folds, uint64_t rng_seed);

// n patches of size×size; top-left corners drawn uniformly with replacement
// (row first, then column), deterministic for a given seed.
std::vector<Image> extract_patches(const Image& image, int n, int size, uint64_t rng_seed);

}  // namespace wb
