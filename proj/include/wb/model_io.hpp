#pragma once

#include <string>
#include <vector>

#include "wb/iforest.hpp"
#include "wb/ocsvm.hpp"

namespace wb {

enum class DetectorKind : uint8_t { iforest, ocsvm };

const char* detector_tag(DetectorKind k);
DetectorKind parse_detector(const std::string& tag);

// A trained one-class detector plus the feature columns it consumes.
struct DetectorModel {
    DetectorKind kind = DetectorKind::iforest;
    std::vector<std::string> feature_names;
    uint64_t seed = 0;
    IsolationForestModel iforest;
    OneClassSvmModel ocsvm;
};

double score_sample(const DetectorModel& model, std::span<const double> x);

// Versioned JSON container with magic string and FNV-1a checksum. A loaded
// model scores bit-identically to the saved one.
void save_model(const DetectorModel& model, const std::string& path);
DetectorModel load_model(const std::string& path);

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kManifestFormatVersion = 1;
inline constexpr int kFeatureOrderVersion = 1;

}  // namespace wb
