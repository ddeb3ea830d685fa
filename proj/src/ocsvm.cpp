#include "wb/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <unordered_map>

#include "wb/errors.hpp"

namespace wb {

namespace {

double rbf(const double* a, const double* b, int dim, double gamma) {
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) {
        double d = a[k] - b[k];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

// On-demand kernel rows with FIFO eviction under a byte budget.
class KernelCache {
  public:
    KernelCache(const RowMatrix& X, double gamma, size_t cache_mb) : X_(X), gamma_(gamma) {
        size_t row_bytes = sizeof(double) * static_cast<size_t>(X.rows);
        max_rows_ = std::max<size_t>(2, cache_mb * 1024 * 1024 / std::max<size_t>(1, row_bytes));
    }

    const std::vector<double>& row(int i) {
        auto it = rows_.find(i);
        if (it != rows_.end()) return it->second;
        if (rows_.size() >= max_rows_) {
            rows_.erase(order_.front());
            order_.pop_front();
        }
        std::vector<double> r(X_.rows);
        const double* xi = X_.row(i);
        for (int j = 0; j < X_.rows; ++j) r[j] = rbf(xi, X_.row(j), X_.cols, gamma_);
        order_.push_back(i);
        return rows_.emplace(i, std::move(r)).first->second;
    }

  private:
    const RowMatrix& X_;
    double gamma_;
    size_t max_rows_;
    std::unordered_map<int, std::vector<double>> rows_;
    std::list<int> order_;
};

double matrix_variance(const RowMatrix& X) {
    double mean = 0.0;
    for (double v : X.data) mean += v;
    mean /= static_cast<double>(X.data.size());
    double var = 0.0;
    for (double v : X.data) var += (v - mean) * (v - mean);
    return var / static_cast<double>(X.data.size());
}

}  // namespace

void Scaler::fit(const RowMatrix& X) {
    enabled = true;
    mean.assign(X.cols, 0.0);
    stddev.assign(X.cols, 0.0);
    for (int r = 0; r < X.rows; ++r)
        for (int c = 0; c < X.cols; ++c) mean[c] += X.at(r, c);
    for (int c = 0; c < X.cols; ++c) mean[c] /= X.rows;
    for (int r = 0; r < X.rows; ++r)
        for (int c = 0; c < X.cols; ++c) {
            double d = X.at(r, c) - mean[c];
            stddev[c] += d * d;
        }
    for (int c = 0; c < X.cols; ++c) {
        stddev[c] = std::sqrt(stddev[c] / X.rows);
        if (stddev[c] <= 0.0) stddev[c] = 1.0;  // constant column passes through
    }
}

void Scaler::apply(std::span<double> row) const {
    if (!enabled) return;
    for (size_t c = 0; c < row.size(); ++c) row[c] = (row[c] - mean[c]) / stddev[c];
}

RowMatrix Scaler::transform(const RowMatrix& X) const {
    if (!enabled) return X;
    RowMatrix out = X;
    for (int r = 0; r < out.rows; ++r)
        apply(std::span<double>(out.data.data() + static_cast<size_t>(r) * out.cols, out.cols));
    return out;
}

OneClassSvmModel fit_ocsvm(const RowMatrix& X_raw, const OneClassSvmParams& params) {
    const int n = X_raw.rows;
    if (n < 2) fail(Errc::invalid_config, "one-class svm needs at least 2 rows");
    if (!(params.nu > 0.0 && params.nu <= 1.0)) fail(Errc::invalid_config, "nu must be in (0, 1]");
    for (double v : X_raw.data)
        if (!std::isfinite(v)) fail(Errc::numeric, "one-class svm: non-finite training value");

    Scaler scaler;
    if (params.standardize) scaler.fit(X_raw);
    RowMatrix X = scaler.transform(X_raw);

    double gamma = params.gamma;
    if (gamma <= 0.0) {
        double var = matrix_variance(X);
        gamma = var > 0.0 ? 1.0 / (X.cols * var) : 1.0;
    }

    const double C = 1.0 / (params.nu * n);
    const double bound_eps = C * 1e-12;

    // standard warm start: the first floor(nu·n) coefficients at the box
    // bound, the next one takes the remainder of the simplex budget
    std::vector<double> alpha(n, 0.0);
    int n_bound = static_cast<int>(params.nu * n);
    n_bound = std::min(n_bound, n);
    for (int i = 0; i < n_bound; ++i) alpha[i] = C;
    double remainder = 1.0 - n_bound * C;
    if (n_bound < n && remainder > 0.0) alpha[n_bound] = remainder;

    KernelCache cache(X, gamma, params.cache_mb);

    // gradient of ½αᵀQα is Qα
    std::vector<double> grad(n, 0.0);
    for (int j = 0; j < n; ++j) {
        if (alpha[j] <= 0.0) continue;
        const auto& kj = cache.row(j);
        for (int i = 0; i < n; ++i) grad[i] += alpha[j] * kj[i];
    }

    uint64_t iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    while (true) {
        // maximal violating pair: KKT needs max{G_i : α_i>0} ≤ min{G_i : α_i<C}
        int i_up = -1, i_low = -1;
        double g_min = std::numeric_limits<double>::infinity();
        double g_max = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (alpha[i] < C - bound_eps && grad[i] < g_min) {
                g_min = grad[i];
                i_up = i;
            }
            if (alpha[i] > bound_eps && grad[i] > g_max) {
                g_max = grad[i];
                i_low = i;
            }
        }
        gap = (i_up >= 0 && i_low >= 0) ? g_max - g_min : 0.0;
        if (gap <= params.tol) break;
        if (++iter > params.max_iter)
            fail(Errc::numeric, "one-class svm did not converge within " + std::to_string(params.max_iter) +
                                    " iterations (gap " + std::to_string(gap) + ")");

        const auto& ki = cache.row(i_up);
        const auto& kj = cache.row(i_low);
        double eta = ki[i_up] + kj[i_low] - 2.0 * ki[i_low];
        double step = eta > 1e-12 ? (g_max - g_min) / eta : (g_max - g_min) / 1e-12;
        step = std::min({step, C - alpha[i_up], alpha[i_low]});

        alpha[i_up] += step;
        alpha[i_low] -= step;
        if (alpha[i_up] > C - bound_eps) alpha[i_up] = C;
        if (alpha[i_low] < bound_eps) alpha[i_low] = 0.0;
        for (int k = 0; k < n; ++k) grad[k] += step * (ki[k] - kj[k]);
    }

    // exact gradient recomputation: removes incremental drift before the
    // KKT report and the rho estimate
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int j = 0; j < n; ++j) {
        if (alpha[j] <= 0.0) continue;
        const auto& kj = cache.row(j);
        for (int i = 0; i < n; ++i) grad[i] += alpha[j] * kj[i];
    }
    double g_min = std::numeric_limits<double>::infinity();
    double g_max = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    int free_count = 0;
    for (int i = 0; i < n; ++i) {
        if (alpha[i] < C - bound_eps) g_min = std::min(g_min, grad[i]);
        if (alpha[i] > bound_eps) g_max = std::max(g_max, grad[i]);
        if (alpha[i] > bound_eps && alpha[i] < C - bound_eps) {
            free_sum += grad[i];
            ++free_count;
        }
    }

    OneClassSvmModel model;
    model.nu = params.nu;
    model.gamma = gamma;
    model.scaler = scaler;
    model.train_dim = X.cols;
    model.iterations = iter;
    model.kkt_residual = (std::isfinite(g_max) && std::isfinite(g_min)) ? std::max(0.0, g_max - g_min) : 0.0;

    if (free_count > 0)
        model.rho = free_sum / free_count;
    else if (std::isfinite(g_max) && std::isfinite(g_min))
        model.rho = 0.5 * (g_max + g_min);
    else if (std::isfinite(g_max))
        model.rho = g_max;
    else
        model.rho = g_min;

    int n_sv = 0;
    for (int i = 0; i < n; ++i)
        if (alpha[i] > 0.0) ++n_sv;
    model.support_vectors = make_matrix(n_sv, X.cols);
    model.dual_coefficients.reserve(n_sv);
    int row = 0;
    for (int i = 0; i < n; ++i) {
        if (alpha[i] <= 0.0) continue;
        std::copy(X.row(i), X.row(i) + X.cols, model.support_vectors.data.begin() +
                                                   static_cast<size_t>(row) * X.cols);
        model.dual_coefficients.push_back(alpha[i]);
        ++row;
    }
    return model;
}

double score_ocsvm(const OneClassSvmModel& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.train_dim)
        fail(Errc::invalid_config, "score dimension mismatch: got " + std::to_string(x.size()) + ", model has " +
                                       std::to_string(model.train_dim));
    std::vector<double> q(x.begin(), x.end());
    model.scaler.apply(q);
    double sum = 0.0;
    for (int i = 0; i < model.support_vectors.rows; ++i)
        sum += model.dual_coefficients[i] * rbf(model.support_vectors.row(i), q.data(), model.train_dim, model.gamma);
    return sum - model.rho;
}

}  // namespace wb
