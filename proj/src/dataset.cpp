#include "wb/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wb/errors.hpp"
#include "wb/image_io.hpp"
#include "wb/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace wb {

namespace {

const std::set<std::string> kKnownGenerators = {"pix2pix", "cyclegan", "sg2ada", "ddpm"};
const std::set<std::string> kRequiredFields = {"id", "path", "label", "generator", "source_image_id"};
const std::set<std::string> kOptionalFields = {"origin_id", "post_process"};

std::string field_str(const json& j, const std::string& key, int line) {
    auto it = j.find(key);
    if (it == j.end())
        fail(Errc::schema, "manifest line " + std::to_string(line) + ": missing field '" + key + "'");
    if (!it->is_string())
        fail(Errc::schema, "manifest line " + std::to_string(line) + ": field '" + key + "' must be a string");
    return it->get<std::string>();
}

void check_record(const SampleRecord& rec, int line) {
    auto where = [line] { return line > 0 ? "manifest line " + std::to_string(line) : std::string("record"); };
    if (rec.id.empty()) fail(Errc::schema, where() + ": empty id");
    if (rec.label == Label::real && rec.generator != "none")
        fail(Errc::schema, where() + ": real record '" + rec.id + "' has generator '" + rec.generator + "'");
    if (rec.label == Label::synthetic && (rec.generator == "none" || rec.generator.empty()))
        fail(Errc::schema, where() + ": synthetic record '" + rec.id + "' needs a generator tag");
    if (rec.label == Label::real && rec.source_image_id.empty())
        fail(Errc::schema, where() + ": real record '" + rec.id + "' needs a source_image_id");
}

SampleRecord record_from_json(const json& j, int line, std::vector<std::string>& warnings) {
    SampleRecord rec;
    rec.id = field_str(j, "id", line);
    rec.path = field_str(j, "path", line);
    rec.label = parse_label(field_str(j, "label", line));
    rec.generator = field_str(j, "generator", line);
    rec.source_image_id = field_str(j, "source_image_id", line);
    for (auto& [key, value] : j.items()) {
        if (kRequiredFields.count(key)) continue;
        if (key == "origin_id") {
            rec.origin_id = value.is_string() ? value.get<std::string>() : "";
        } else if (key == "post_process") {
            rec.post_process = value.is_string() ? value.get<std::string>() : "";
        } else {
            warnings.push_back("manifest line " + std::to_string(line) + ": ignoring unknown field '" + key + "'");
        }
    }
    check_record(rec, line);
    return rec;
}

void check_unique_ids(const std::vector<SampleRecord>& records) {
    std::set<std::string> seen;
    for (const auto& rec : records)
        if (!seen.insert(rec.id).second) fail(Errc::schema, "duplicate record id '" + rec.id + "'");
}

}  // namespace

Label parse_label(const std::string& tag) {
    if (tag == "real") return Label::real;
    if (tag == "synthetic") return Label::synthetic;
    fail(Errc::schema, "unknown label '" + tag + "' (expected real|synthetic)");
}

bool is_known_generator(const std::string& tag) { return kKnownGenerators.count(tag) > 0; }

const SampleRecord* DatasetManifest::find(const std::string& id) const {
    for (const auto& rec : records)
        if (rec.id == id) return &rec;
    return nullptr;
}

std::string DatasetManifest::resolve_path(const SampleRecord& rec) const {
    fs::path p(rec.path);
    if (p.is_absolute() || base_dir.empty()) return rec.path;
    return (fs::path(base_dir) / p).string();
}

std::vector<std::string> DatasetManifest::generators() const {
    std::vector<std::string> out;
    for (const auto& rec : records) {
        if (rec.label != Label::synthetic) continue;
        if (std::find(out.begin(), out.end(), rec.generator) == out.end()) out.push_back(rec.generator);
    }
    return out;
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::missing_file, "cannot open manifest: " + path);
    DatasetManifest manifest;
    manifest.base_dir = fs::path(path).parent_path().string();

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            fail(Errc::schema, "manifest line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.is_object()) fail(Errc::schema, "manifest line " + std::to_string(lineno) + ": not a JSON object");
        manifest.records.push_back(record_from_json(j, lineno, manifest.warnings));
    }
    check_unique_ids(manifest.records);
    return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(Errc::generic, "cannot write manifest: " + path);
    for (const auto& rec : manifest.records) {
        json j;
        j["id"] = rec.id;
        j["path"] = rec.path;
        j["label"] = label_tag(rec.label);
        j["generator"] = rec.generator;
        j["source_image_id"] = rec.source_image_id;
        if (!rec.origin_id.empty()) j["origin_id"] = rec.origin_id;
        if (!rec.post_process.empty()) j["post_process"] = rec.post_process;
        out << j.dump() << "\n";
    }
}

DatasetManifest import_csv_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::missing_file, "cannot open manifest csv: " + path);
    DatasetManifest manifest;
    manifest.base_dir = fs::path(path).parent_path().string();

    std::string header;
    if (!std::getline(in, header)) return manifest;
    std::vector<std::string> columns;
    {
        std::stringstream ss(header);
        std::string col;
        while (std::getline(ss, col, ',')) {
            if (!col.empty() && col.back() == '\r') col.pop_back();
            columns.push_back(col);
        }
    }
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        while (cells.size() < columns.size()) cells.emplace_back();
        json j;
        for (size_t i = 0; i < columns.size(); ++i) j[columns[i]] = cells[i];
        manifest.records.push_back(record_from_json(j, lineno, manifest.warnings));
    }
    check_unique_ids(manifest.records);
    return manifest;
}

DatasetManifest manifest_from_records(std::vector<SampleRecord> records, std::string base_dir) {
    DatasetManifest manifest;
    manifest.records = std::move(records);
    manifest.base_dir = std::move(base_dir);
    for (const auto& rec : manifest.records) check_record(rec, 0);
    check_unique_ids(manifest.records);
    return manifest;
}

void validate_files(DatasetManifest& manifest) {
    for (auto& rec : manifest.records) {
        Image img = decode_image(manifest.resolve_path(rec));
        rec.width = img.width;
        rec.height = img.height;
    }
}

int FoldAssignment::fold_of(const SampleRecord& rec) const {
    if (rec.label == Label::synthetic) return -1;
    auto it = by_source.find(rec.source_image_id);
    return it == by_source.end() ? -1 : it->second;
}

FoldAssignment assign_folds(const DatasetManifest& manifest, int n_folds, uint64_t rng_seed) {
    if (n_folds < 2) fail(Errc::invalid_config, "n_folds must be >= 2");
    std::vector<std::string> sources;
    std::set<std::string> seen;
    for (const auto& rec : manifest.records) {
        if (rec.label != Label::real) continue;
        if (seen.insert(rec.source_image_id).second) sources.push_back(rec.source_image_id);
    }
    if (static_cast<int>(sources.size()) < n_folds)
        fail(Errc::invalid_config, "need at least " + std::to_string(n_folds) + " real source images, have " +
                                       std::to_string(sources.size()));
    // shuffle in a canonical (sorted) starting order so the result depends
    // only on the set of ids and the seed, not on record order
    std::sort(sources.begin(), sources.end());
    Rng rng(rng_seed);
    rng.shuffle(sources);

    FoldAssignment folds;
    folds.n_folds = n_folds;
    for (size_t i = 0; i < sources.size(); ++i) folds.by_source[sources[i]] = static_cast<int>(i % n_folds);
    return folds;
}

std::vector<Image> extract_patches(const Image& image, int n, int size, uint64_t rng_seed) {
    if (n < 1) fail(Errc::invalid_config, "patch count must be >= 1");
    if (image.width < size || image.height < size)
        fail(Errc::invalid_config, "image " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                                       " smaller than patch size " + std::to_string(size));
    Rng rng(rng_seed);
    std::vector<Image> patches;
    patches.reserve(n);
    for (int k = 0; k < n; ++k) {
        int y = static_cast<int>(rng.next_below(static_cast<uint64_t>(image.height - size) + 1));
        int x = static_cast<int>(rng.next_below(static_cast<uint64_t>(image.width - size) + 1));
        Image patch = make_image(size, size, image.channels);
        for (int row = 0; row < size; ++row) {
            const uint8_t* src = image.data.data() +
                                 (static_cast<size_t>(y + row) * image.width + x) * image.channels;
            std::copy(src, src + static_cast<size_t>(size) * image.channels,
                      patch.data.begin() + static_cast<size_t>(row) * size * image.channels);
        }
        patches.push_back(std::move(patch));
    }
    return patches;
}

}  // namespace wb
