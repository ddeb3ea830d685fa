#include "wb/feature_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "wb/errors.hpp"

namespace wb {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& s, int lineno, const std::string& path) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        fail(Errc::schema, path + " line " + std::to_string(lineno) + ": bad number '" + s + "'");
    return v;
}

void check_no_comma(const std::string& field, const std::string& what) {
    if (field.find(',') != std::string::npos)
        fail(Errc::schema, what + " contains a comma, unsupported in CSV output: '" + field + "'");
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

void write_feature_csv(const FeatureTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(Errc::generic, "cannot write: " + path);
    out << "id,label,generator";
    for (const auto& name : feature_names()) out << "," << name;
    out << "\n";
    for (const auto& row : table.rows) {
        check_no_comma(row.id, "id");
        check_no_comma(row.generator, "generator");
        out << row.id << "," << label_tag(row.label) << "," << row.generator;
        for (double v : row.features.values) out << "," << format_double(v);
        out << "\n";
    }
}

FeatureTable read_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::missing_file, "cannot open feature csv: " + path);
    std::string line;
    if (!std::getline(in, line)) fail(Errc::schema, path + ": empty feature csv");
    line = strip_cr(line);

    std::vector<std::string> header = split_line(line);
    if (header.size() != 3 + kFeatureCount || header[0] != "id" || header[1] != "label" || header[2] != "generator")
        fail(Errc::schema, path + ": unexpected header (want id,label,generator + 40 feature columns)");
    std::vector<int> column_feature(kFeatureCount);
    for (int c = 0; c < kFeatureCount; ++c) {
        int idx = feature_index(header[3 + c]);
        if (idx < 0) fail(Errc::schema, path + ": unknown feature column '" + header[3 + c] + "'");
        column_feature[c] = idx;
    }

    FeatureTable table;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != 3 + kFeatureCount)
            fail(Errc::schema, path + " line " + std::to_string(lineno) + ": expected " +
                                   std::to_string(3 + kFeatureCount) + " columns, got " +
                                   std::to_string(cells.size()));
        FeatureRow row;
        row.id = cells[0];
        row.label = parse_label(cells[1]);
        row.generator = cells[2];
        for (int c = 0; c < kFeatureCount; ++c)
            row.features.values[column_feature[c]] = parse_double(cells[3 + c], lineno, path);
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_score_csv(const std::vector<ScoreRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(Errc::generic, "cannot write: " + path);
    out << "id,label,generator,score,predicted_label\n";
    for (const auto& row : rows) {
        check_no_comma(row.id, "id");
        out << row.id << "," << label_tag(row.label) << "," << row.generator << "," << format_double(row.score)
            << "," << (row.score > 0.0 ? "real" : "synthetic") << "\n";
    }
}

std::vector<ScoreRow> read_score_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::missing_file, "cannot open score csv: " + path);
    std::string line;
    if (!std::getline(in, line)) fail(Errc::schema, path + ": empty score csv");
    std::vector<ScoreRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() < 4) fail(Errc::schema, path + " line " + std::to_string(lineno) + ": short row");
        ScoreRow row;
        row.id = cells[0];
        row.label = parse_label(cells[1]);
        row.generator = cells[2];
        row.score = parse_double(cells[3], lineno, path);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace wb
