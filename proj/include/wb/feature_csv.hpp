#pragma once

#include <string>
#include <vector>

#include "wb/dataset.hpp"
#include "wb/texture.hpp"

namespace wb {

// One row of the extracted-feature table: id, label, generator + the
// 40-entry descriptor in canonical column order.
struct FeatureRow {
    std::string id;
    Label label = Label::real;
    std::string generator = "none";
    FeatureVector features;
};

struct FeatureTable {
    std::vector<FeatureRow> rows;
};

// Header: id,label,generator,<40 feature names>. Doubles are written in
// shortest round-trip form, so write→read is value-exact.
void write_feature_csv(const FeatureTable& table, const std::string& path);
FeatureTable read_feature_csv(const std::string& path);

struct ScoreRow {
    std::string id;
    Label label = Label::real;
    std::string generator = "none";
    double score = 0.0;
};

void write_score_csv(const std::vector<ScoreRow>& rows, const std::string& path);
std::vector<ScoreRow> read_score_csv(const std::string& path);

std::string format_double(double v);  // shortest round-trip decimal form

}  // namespace wb
