#include <doctest.h>

#include <fstream>
#include <set>

#include "support/fixtures.hpp"
#include "wb/dataset.hpp"
#include "wb/errors.hpp"

using namespace wb;

namespace {

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    for (const auto& line : lines) out << line << "\n";
}

}  // namespace

TEST_CASE("load_manifest: parse, order, invariants") {
    fixtures::TempDir dir("wb-manifest");
    std::string path = dir.path() + "/m.jsonl";

    SUBCASE("three valid records parse in order") {
        write_lines(path, {
            R"({"id":"a","path":"a.png","label":"real","generator":"none","source_image_id":"s1"})",
            R"({"id":"b","path":"b.png","label":"real","generator":"none","source_image_id":"s2"})",
            R"({"id":"c","path":"c.png","label":"synthetic","generator":"ddpm","source_image_id":""})",
        });
        DatasetManifest m = load_manifest(path);
        REQUIRE(m.records.size() == 3);
        CHECK(m.records[0].id == "a");
        CHECK(m.records[1].id == "b");
        CHECK(m.records[2].generator == "ddpm");
        CHECK(m.generators() == std::vector<std::string>{"ddpm"});
        CHECK(m.warnings.empty());
    }

    SUBCASE("real record with a generator names its line") {
        write_lines(path, {
            R"({"id":"a","path":"a.png","label":"real","generator":"none","source_image_id":"s1"})",
            R"({"id":"b","path":"b.png","label":"real","generator":"pix2pix","source_image_id":"s2"})",
        });
        try {
            load_manifest(path);
            FAIL("expected a schema error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::schema);
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }

    SUBCASE("empty file gives an empty valid manifest") {
        write_lines(path, {});
        DatasetManifest m = load_manifest(path);
        CHECK(m.records.empty());
    }

    SUBCASE("duplicate ids rejected") {
        write_lines(path, {
            R"({"id":"a","path":"a.png","label":"real","generator":"none","source_image_id":"s1"})",
            R"({"id":"a","path":"b.png","label":"real","generator":"none","source_image_id":"s2"})",
        });
        CHECK_THROWS_AS(load_manifest(path), Error);
    }

    SUBCASE("synthetic without generator rejected") {
        write_lines(path, {R"({"id":"a","path":"a.png","label":"synthetic","generator":"none","source_image_id":""})"});
        CHECK_THROWS_AS(load_manifest(path), Error);
    }

    SUBCASE("real without source_image_id rejected") {
        write_lines(path, {R"({"id":"a","path":"a.png","label":"real","generator":"none","source_image_id":""})"});
        CHECK_THROWS_AS(load_manifest(path), Error);
    }

    SUBCASE("parse errors carry the line number") {
        write_lines(path, {
            R"({"id":"a","path":"a.png","label":"real","generator":"none","source_image_id":"s1"})",
            "{not json",
        });
        try {
            load_manifest(path);
            FAIL("expected a schema error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }

    SUBCASE("unknown fields warn, provenance fields do not") {
        write_lines(path, {
            R"({"id":"a","path":"a.png","label":"real","generator":"none","source_image_id":"s1","mystery":1})",
            R"({"id":"b","path":"b.png","label":"real","generator":"none","source_image_id":"s2","origin_id":"x","post_process":"jpeg_80"})",
        });
        DatasetManifest m = load_manifest(path);
        REQUIRE(m.warnings.size() == 1);
        CHECK(m.warnings[0].find("mystery") != std::string::npos);
        CHECK(m.records[1].origin_id == "x");
        CHECK(m.records[1].post_process == "jpeg_80");
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_manifest(dir.path() + "/absent.jsonl"), Error);
    }
}

TEST_CASE("manifest jsonl roundtrip and csv import") {
    fixtures::TempDir dir("wb-manifest-rt");
    std::vector<SampleRecord> records;
    for (int i = 0; i < 4; ++i) {
        SampleRecord r;
        r.id = "p" + std::to_string(i);
        r.path = r.id + ".png";
        r.label = i < 2 ? Label::real : Label::synthetic;
        r.generator = i < 2 ? "none" : "cyclegan";
        r.source_image_id = i < 2 ? "src" + std::to_string(i) : "";
        records.push_back(r);
    }
    DatasetManifest m = manifest_from_records(records, dir.path());
    save_manifest(m, dir.path() + "/m.jsonl");
    DatasetManifest loaded = load_manifest(dir.path() + "/m.jsonl");
    REQUIRE(loaded.records.size() == 4);
    for (size_t i = 0; i < 4; ++i) {
        CHECK(loaded.records[i].id == records[i].id);
        CHECK(loaded.records[i].generator == records[i].generator);
    }

    std::ofstream csv(dir.path() + "/m.csv");
    csv << "id,path,label,generator,source_image_id\n";
    csv << "x1,x1.png,real,none,s9\n";
    csv << "x2,x2.png,synthetic,sg2ada,\n";
    csv.close();
    DatasetManifest from_csv = import_csv_manifest(dir.path() + "/m.csv");
    REQUIRE(from_csv.records.size() == 2);
    CHECK(from_csv.records[0].source_image_id == "s9");
    CHECK(from_csv.records[1].generator == "sg2ada");
}

TEST_CASE("validate_files decodes and fills dimensions") {
    fixtures::TempDir dir("wb-validate");
    write_png(fixtures::random_image(12, 7, 3, 1), dir.path() + "/ok.png");
    SampleRecord r;
    r.id = "ok";
    r.path = "ok.png";
    r.label = Label::real;
    r.source_image_id = "s";
    DatasetManifest m = manifest_from_records({r}, dir.path());
    validate_files(m);
    CHECK(m.records[0].width == 12);
    CHECK(m.records[0].height == 7);

    r.id = "gone";
    r.path = "gone.png";
    DatasetManifest bad = manifest_from_records({r}, dir.path());
    CHECK_THROWS_AS(validate_files(bad), Error);
}

TEST_CASE("extract_patches geometry and determinism") {
    SUBCASE("256x256 image yields the full frame") {
        Image img = fixtures::random_image(256, 256, 1, 2);
        auto patches = extract_patches(img, 1, 256, 7);
        REQUIRE(patches.size() == 1);
        CHECK(patches[0].data == img.data);
    }

    SUBCASE("512x256 forces row 0") {
        Image img = fixtures::random_image(512, 256, 1, 3);
        auto patches = extract_patches(img, 50, 256, 11);
        REQUIRE(patches.size() == 50);
        for (const auto& p : patches) {
            REQUIRE(p.width == 256);
            REQUIRE(p.height == 256);
            // row 0 ⇒ the first patch row appears as a contiguous slice of image row 0
            bool found = false;
            for (int x = 0; x + 256 <= 512 && !found; ++x) {
                found = std::equal(p.data.begin(), p.data.begin() + 256, img.data.begin() + x);
            }
            CHECK(found);
        }
    }

    SUBCASE("same seed twice is identical") {
        Image img = fixtures::random_image(300, 300, 3, 4);
        auto a = extract_patches(img, 10, 128, 99);
        auto b = extract_patches(img, 10, 128, 99);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].data == b[i].data);
        auto c = extract_patches(img, 10, 128, 100);
        bool all_same = true;
        for (size_t i = 0; i < a.size(); ++i) all_same = all_same && a[i].data == c[i].data;
        CHECK(!all_same);
    }

    SUBCASE("too-small image rejected; count conserved") {
        Image img = fixtures::random_image(100, 300, 1, 5);
        CHECK_THROWS_AS(extract_patches(img, 1, 128, 0), Error);
        Image ok = fixtures::random_image(130, 130, 1, 6);
        CHECK(extract_patches(ok, 17, 128, 0).size() == 17);
    }
}

TEST_CASE("assign_folds: balance, leakage-freedom, determinism") {
    auto make_manifest = [](int n_sources, int patches_per_source) {
        std::vector<SampleRecord> records;
        for (int s = 0; s < n_sources; ++s)
            for (int p = 0; p < patches_per_source; ++p) {
                SampleRecord r;
                r.id = "s" + std::to_string(s) + "_p" + std::to_string(p);
                r.path = r.id + ".png";
                r.label = Label::real;
                r.source_image_id = "src" + std::to_string(s);
                records.push_back(r);
            }
        SampleRecord synth;
        synth.id = "fake";
        synth.path = "fake.png";
        synth.label = Label::synthetic;
        synth.generator = "pix2pix";
        records.push_back(synth);
        return manifest_from_records(records);
    };

    SUBCASE("284 sources split 142/142") {
        DatasetManifest m = make_manifest(284, 2);
        FoldAssignment folds = assign_folds(m, 2, 1);
        int count0 = 0, count1 = 0;
        for (const auto& [src, fold] : folds.by_source) (fold == 0 ? count0 : count1)++;
        CHECK(count0 == 142);
        CHECK(count1 == 142);
    }

    SUBCASE("3 sources over 2 folds split 2/1") {
        DatasetManifest m = make_manifest(3, 1);
        FoldAssignment folds = assign_folds(m, 2, 0);
        int count0 = 0, count1 = 0;
        for (const auto& [src, fold] : folds.by_source) (fold == 0 ? count0 : count1)++;
        CHECK(count0 + count1 == 3);
        CHECK(std::abs(count0 - count1) <= 1);
    }

    SUBCASE("no source id in two folds; synthetic gets none") {
        DatasetManifest m = make_manifest(20, 5);
        FoldAssignment folds = assign_folds(m, 4, 3);
        std::vector<std::set<std::string>> per_fold(4);
        for (const auto& rec : m.records) {
            int f = folds.fold_of(rec);
            if (rec.label == Label::synthetic) {
                CHECK(f == -1);
                continue;
            }
            REQUIRE(f >= 0);
            per_fold[f].insert(rec.source_image_id);
        }
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                for (const auto& src : per_fold[a]) CHECK(per_fold[b].count(src) == 0);
    }

    SUBCASE("deterministic in seed, sensitive to seed") {
        DatasetManifest m = make_manifest(17, 2);
        FoldAssignment f1 = assign_folds(m, 2, 5);
        FoldAssignment f2 = assign_folds(m, 2, 5);
        CHECK(f1.by_source == f2.by_source);
        FoldAssignment f3 = assign_folds(m, 2, 6);
        CHECK(f1.by_source != f3.by_source);
    }

    SUBCASE("fewer sources than folds rejected") {
        DatasetManifest m = make_manifest(2, 1);
        CHECK_THROWS_AS(assign_folds(m, 3, 0), Error);
    }
}
