#include "wb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wb/errors.hpp"

namespace wb {

double auc(std::span<const double> scores_real, std::span<const double> scores_synth) {
    if (scores_real.empty() || scores_synth.empty()) fail(Errc::invalid_config, "auc: empty score set");
    for (double s : scores_real)
        if (!std::isfinite(s)) fail(Errc::numeric, "auc: non-finite score");
    for (double s : scores_synth)
        if (!std::isfinite(s)) fail(Errc::numeric, "auc: non-finite score");

    struct Entry {
        double score;
        bool real;
    };
    std::vector<Entry> all;
    all.reserve(scores_real.size() + scores_synth.size());
    for (double s : scores_real) all.push_back({s, true});
    for (double s : scores_synth) all.push_back({s, false});
    std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.score < b.score; });

    // rank-sum of the real class with average ranks over ties
    double rank_sum = 0.0;
    size_t i = 0;
    while (i < all.size()) {
        size_t j = i;
        while (j < all.size() && all[j].score == all[i].score) ++j;
        double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based ranks i+1..j
        for (size_t k = i; k < j; ++k)
            if (all[k].real) rank_sum += avg_rank;
        i = j;
    }
    double n_r = static_cast<double>(scores_real.size());
    double n_s = static_cast<double>(scores_synth.size());
    double u = rank_sum - n_r * (n_r + 1.0) / 2.0;
    return u / (n_r * n_s);
}

double balanced_accuracy(std::span<const double> scores_real, std::span<const double> scores_synth,
                         double threshold) {
    if (scores_real.empty() || scores_synth.empty())
        fail(Errc::invalid_config, "balanced_accuracy: empty score set");
    size_t real_ok = 0, synth_ok = 0;
    for (double s : scores_real)
        if (s > threshold) ++real_ok;
    for (double s : scores_synth)
        if (!(s > threshold)) ++synth_ok;  // ties predict synthetic
    double tpr = static_cast<double>(real_ok) / static_cast<double>(scores_real.size());
    double tnr = static_cast<double>(synth_ok) / static_cast<double>(scores_synth.size());
    return 0.5 * (tpr + tnr);
}

}  // namespace wb
