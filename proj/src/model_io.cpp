#include "wb/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wb/errors.hpp"
#include "wb/rng.hpp"

using nlohmann::json;

namespace wb {

namespace {

constexpr const char* kMagic = "wb-model";

std::string checksum_hex(const std::string& s) {
    uint64_t h = fnv1a64(s);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json iforest_payload(const IsolationForestModel& m) {
    json trees = json::array();
    for (const auto& tree : m.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.size});
        trees.push_back(std::move(nodes));
    }
    return {{"n_trees", m.n_trees},   {"max_samples", m.max_samples}, {"train_dim", m.train_dim},
            {"rng_seed", m.rng_seed}, {"height_limit", m.height_limit}, {"trees", std::move(trees)}};
}

IsolationForestModel iforest_from_payload(const json& p) {
    IsolationForestModel m;
    m.n_trees = p.at("n_trees").get<int>();
    m.max_samples = p.at("max_samples").get<int>();
    m.train_dim = p.at("train_dim").get<int>();
    m.rng_seed = p.at("rng_seed").get<uint64_t>();
    m.height_limit = p.at("height_limit").get<int>();
    for (const auto& nodes : p.at("trees")) {
        IsolationTree tree;
        for (const auto& n : nodes)
            tree.nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(),
                                  n.at(3).get<int>(), n.at(4).get<int>()});
        m.trees.push_back(std::move(tree));
    }
    return m;
}

json ocsvm_payload(const OneClassSvmModel& m) {
    return {{"rho", m.rho},
            {"gamma", m.gamma},
            {"nu", m.nu},
            {"train_dim", m.train_dim},
            {"kkt_residual", m.kkt_residual},
            {"iterations", m.iterations},
            {"scaler", {{"enabled", m.scaler.enabled}, {"mean", m.scaler.mean}, {"stddev", m.scaler.stddev}}},
            {"dual_coefficients", m.dual_coefficients},
            {"sv_rows", m.support_vectors.rows},
            {"sv_data", m.support_vectors.data}};
}

OneClassSvmModel ocsvm_from_payload(const json& p) {
    OneClassSvmModel m;
    m.rho = p.at("rho").get<double>();
    m.gamma = p.at("gamma").get<double>();
    m.nu = p.at("nu").get<double>();
    m.train_dim = p.at("train_dim").get<int>();
    m.kkt_residual = p.at("kkt_residual").get<double>();
    m.iterations = p.at("iterations").get<uint64_t>();
    const json& sc = p.at("scaler");
    m.scaler.enabled = sc.at("enabled").get<bool>();
    m.scaler.mean = sc.at("mean").get<std::vector<double>>();
    m.scaler.stddev = sc.at("stddev").get<std::vector<double>>();
    m.dual_coefficients = p.at("dual_coefficients").get<std::vector<double>>();
    m.support_vectors.rows = p.at("sv_rows").get<int>();
    m.support_vectors.cols = m.train_dim;
    m.support_vectors.data = p.at("sv_data").get<std::vector<double>>();
    if (m.support_vectors.data.size() !=
        static_cast<size_t>(m.support_vectors.rows) * static_cast<size_t>(m.train_dim))
        fail(Errc::schema, "model payload: support vector shape mismatch");
    return m;
}

json model_to_json(const DetectorModel& model) {
    json j;
    j["magic"] = kMagic;
    j["format_version"] = kModelFormatVersion;
    j["detector"] = detector_tag(model.kind);
    j["feature_names"] = model.feature_names;
    j["seed"] = model.seed;
    j["payload"] = model.kind == DetectorKind::iforest ? iforest_payload(model.iforest)
                                                       : ocsvm_payload(model.ocsvm);
    return j;
}

}  // namespace

const char* detector_tag(DetectorKind k) { return k == DetectorKind::iforest ? "iforest" : "ocsvm"; }

DetectorKind parse_detector(const std::string& tag) {
    if (tag == "iforest") return DetectorKind::iforest;
    if (tag == "ocsvm") return DetectorKind::ocsvm;
    fail(Errc::invalid_config, "unknown detector '" + tag + "' (expected iforest|ocsvm)");
}

double score_sample(const DetectorModel& model, std::span<const double> x) {
    return model.kind == DetectorKind::iforest ? score_isolation_forest(model.iforest, x)
                                               : score_ocsvm(model.ocsvm, x);
}

void save_model(const DetectorModel& model, const std::string& path) {
    json j = model_to_json(model);
    j["checksum"] = checksum_hex(j.dump());
    std::ofstream out(path);
    if (!out) fail(Errc::generic, "cannot write model: " + path);
    out << j.dump(1) << "\n";
}

DetectorModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::missing_file, "cannot open model: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(Errc::schema, std::string("model parse error: ") + e.what());
    }
    if (!j.is_object() || j.value("magic", "") != kMagic) fail(Errc::schema, "not a model file: " + path);
    if (j.value("format_version", -1) != kModelFormatVersion)
        fail(Errc::schema, "unsupported model format version in " + path);
    std::string stored = j.at("checksum").get<std::string>();
    j.erase("checksum");
    if (checksum_hex(j.dump()) != stored) fail(Errc::schema, "model checksum mismatch (corrupt file): " + path);

    DetectorModel model;
    model.kind = parse_detector(j.at("detector").get<std::string>());
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.seed = j.at("seed").get<uint64_t>();
    if (model.kind == DetectorKind::iforest)
        model.iforest = iforest_from_payload(j.at("payload"));
    else
        model.ocsvm = ocsvm_from_payload(j.at("payload"));
    return model;
}

}  // namespace wb
