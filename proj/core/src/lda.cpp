#include "gorec/lda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gorec/errors.hpp"
#include "json.hpp"

namespace gorec {

namespace {

// Cholesky factorization of a symmetric matrix; returns the lower factor or
// nothing if the matrix is not numerically positive definite.
std::optional<std::vector<double>> cholesky(const std::vector<double>& a, std::size_t n) {
    std::vector<double> l(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) sum -= l[i * n + k] * l[j * n + k];
            if (i == j) {
                if (sum <= 0.0) return std::nullopt;
                l[i * n + i] = std::sqrt(sum);
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    return l;
}

// Solve A x = b given the Cholesky factor L of A.
std::vector<double> cholesky_solve(const std::vector<double>& l, std::size_t n,
                                   const std::vector<double>& b) {
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= l[i * n + k] * y[k];
        y[i] = sum / l[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double sum = y[i];
        for (std::size_t k = i + 1; k < n; ++k) sum -= l[k * n + i] * x[k];
        x[i] = sum / l[i * n + i];
    }
    return x;
}

// Condition proxy from the Cholesky diagonal; exact spectral condition
// numbers are not needed to pick a shrinkage level.
double condition_estimate(const std::vector<double>& l, std::size_t n) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lo = std::min(lo, l[i * n + i]);
        hi = std::max(hi, l[i * n + i]);
    }
    return (hi / lo) * (hi / lo);
}

std::vector<double> shrink(const std::vector<double>& cov, std::size_t n, double gamma) {
    double mean_variance = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_variance += cov[i * n + i];
    mean_variance /= static_cast<double>(n);
    if (mean_variance <= 0.0) mean_variance = 1.0;
    std::vector<double> out(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out[i * n + j] = (1.0 - gamma) * cov[i * n + j] +
                             (i == j ? gamma * mean_variance : 0.0);
    return out;
}

}  // namespace

LdaModel fit_lda(const std::vector<std::vector<double>>& points,
                 const std::vector<std::size_t>& labels, const std::vector<std::string>& classes,
                 std::optional<double> gamma) {
    if (classes.size() < 2) throw validation_error("fit_lda needs at least 2 classes");
    if (points.size() != labels.size())
        throw validation_error("fit_lda: points and labels differ in length");
    if (points.empty()) throw validation_error("fit_lda: no training points");

    const std::size_t dim = points.front().size();
    const std::size_t k = classes.size();

    std::vector<std::size_t> counts(k, 0);
    std::vector<std::vector<double>> means(k, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t c = labels[i];
        if (c >= k) throw validation_error("fit_lda: label out of range");
        ++counts[c];
        for (std::size_t d = 0; d < dim; ++d) means[c][d] += points[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] < 2)
            throw validation_error("fit_lda: class '" + classes[c] + "' has fewer than 2 points");
        for (auto& m : means[c]) m /= static_cast<double>(counts[c]);
    }

    // Pooled within-class covariance, (n - k) denominator.
    std::vector<double> cov(dim * dim, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& mean = means[labels[i]];
        for (std::size_t a = 0; a < dim; ++a) {
            const double da = points[i][a] - mean[a];
            for (std::size_t b = 0; b <= a; ++b)
                cov[a * dim + b] += da * (points[i][b] - mean[b]);
        }
    }
    const double denom = static_cast<double>(points.size() - k);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
            cov[a * dim + b] /= denom > 0.0 ? denom : 1.0;
            cov[b * dim + a] = cov[a * dim + b];
        }

    LdaModel model;
    model.classes = classes;
    model.means = std::move(means);
    model.priors.assign(k, 1.0 / static_cast<double>(k));
    model.dim = dim;

    const std::vector<double> ladder = gamma ? std::vector<double>{*gamma}
                                             : std::vector<double>{0.0, 1e-6, 1e-4, 1e-2};
    for (double g : ladder) {
        auto shrunk = shrink(cov, dim, g);
        const auto factor = cholesky(shrunk, dim);
        if (factor && (gamma || condition_estimate(*factor, dim) < 1e12)) {
            model.covariance = std::move(shrunk);
            model.shrinkage = g;
            return model;
        }
        if (gamma) break;
    }
    // Last resort: near-diagonal covariance is always well conditioned.
    model.covariance = shrink(cov, dim, 1e-1);
    model.shrinkage = 1e-1;
    if (!cholesky(model.covariance, dim))
        throw validation_error("fit_lda: covariance not positive definite even after shrinkage");
    return model;
}

std::pair<std::size_t, std::vector<double>> lda_classify(const LdaModel& model,
                                                         const std::vector<double>& point) {
    if (point.size() != model.dim)
        throw validation_error("lda_classify: point dimension " + std::to_string(point.size()) +
                               " does not match model dimension " + std::to_string(model.dim));
    const std::size_t n = model.dim;
    const auto factor = cholesky(model.covariance, n);
    if (!factor) throw validation_error("lda_classify: covariance not positive definite");

    std::vector<double> scores(model.classes.size());
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        const auto w = cholesky_solve(*factor, n, model.means[c]);  // Sigma^-1 mu_c
        double xw = 0.0, mw = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            xw += point[d] * w[d];
            mw += model.means[c][d] * w[d];
        }
        scores[c] = xw - 0.5 * mw + std::log(model.priors[c]);
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c)
        if (scores[c] > scores[best]) best = c;  // ties keep the lowest index

    const double shift = scores[best];
    double total = 0.0;
    std::vector<double> posterior(scores.size());
    for (std::size_t c = 0; c < scores.size(); ++c) {
        posterior[c] = std::exp(scores[c] - shift);
        total += posterior[c];
    }
    for (auto& p : posterior) p /= total;
    return {best, std::move(posterior)};
}

std::string lda_recognize(const ContinuousTrace& prefix, const LdaModel& model,
                          const FeatureSelection& selection) {
    if (prefix.rows.empty()) throw validation_error("lda_recognize: empty prefix");
    const auto point = project_row(prefix.rows.back(), selection.selected);
    return model.classes[lda_classify(model, point).first];
}

std::vector<std::vector<double>> lda_training_points(const Dataset& dataset,
                                                     const std::vector<std::size_t>& trace_indices,
                                                     const std::string& goal,
                                                     const std::vector<std::size_t>& selected,
                                                     int tail_rows) {
    std::vector<std::vector<double>> points;
    for (std::size_t i : trace_indices) {
        const auto& trace = dataset.traces.at(i);
        if (trace.goal != goal) continue;
        const std::size_t take = std::min<std::size_t>(trace.rows.size(),
                                                       static_cast<std::size_t>(tail_rows));
        for (std::size_t r = trace.rows.size() - take; r < trace.rows.size(); ++r)
            points.push_back(project_row(trace.rows[r], selected));
    }
    return points;
}

std::string LdaModel::to_json() const {
    nlohmann::ordered_json j;
    j["classes"] = classes;
    j["means"] = means;
    j["covariance"] = covariance;
    j["shrinkage"] = shrinkage;
    j["priors"] = priors;
    j["dim"] = dim;
    return j.dump(2);
}

LdaModel LdaModel::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    LdaModel m;
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.means = j.at("means").get<std::vector<std::vector<double>>>();
    m.covariance = j.at("covariance").get<std::vector<double>>();
    m.shrinkage = j.at("shrinkage").get<double>();
    m.priors = j.at("priors").get<std::vector<double>>();
    m.dim = j.at("dim").get<std::size_t>();
    return m;
}

}  // namespace gorec
