#include "gorec/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gorec/errors.hpp"
#include "gorec/rng.hpp"
#include "json.hpp"

namespace gorec {

namespace {

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

std::size_t nearest_centroid(const std::vector<double>& point,
                             const std::vector<std::vector<double>>& centroids) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = sq_distance(point, centroids[c]);
        if (d < best_d) {  // ties keep the lowest centroid index
            best_d = d;
            best = c;
        }
    }
    return best;
}

struct KMeansRun {
    std::vector<std::vector<double>> centroids;
    double wcss = std::numeric_limits<double>::infinity();
};

std::vector<std::vector<double>> seed_centroids(const std::vector<std::vector<double>>& points,
                                                std::size_t k, Rng& rng, bool uniform_seed) {
    const std::size_t n = points.size();

    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    if (uniform_seed) {
        // k distinct points, uniformly at random
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        for (std::size_t i = 0; i < n - 1; ++i)
            std::swap(order[i], order[i + static_cast<std::size_t>(rng.uniform_int(
                                              0, static_cast<std::int64_t>(n - i) - 1))]);
        std::set<std::vector<double>> taken;
        for (std::size_t i = 0; i < n && centroids.size() < k; ++i)
            if (taken.insert(points[order[i]]).second) centroids.push_back(points[order[i]]);
    }
    // k-means++ seeding (also tops up uniform seeding if duplicates ran out)
    if (centroids.empty())
        centroids.push_back(points[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))]);
    std::vector<double> min_d2(n);
    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids) d = std::min(d, sq_distance(points[i], c));
            min_d2[i] = d;
            total += d;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            double target = rng.uniform() * total;
            for (std::size_t i = 0; i < n; ++i) {
                target -= min_d2[i];
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
                pick = i;
            }
        } else {
            pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
        }
        centroids.push_back(points[pick]);
    }
    return centroids;
}

/// Lloyd iterations plus Hartigan refinement from explicit seed centroids.
KMeansRun lloyd_from(const std::vector<std::vector<double>>& points,
                     std::vector<std::vector<double>> centroids, int max_iterations) {
    const std::size_t n = points.size();
    const std::size_t dim = points.front().size();
    const std::size_t k = centroids.size();

    std::vector<std::size_t> assignment(n, k);
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = nearest_centroid(points[i], centroids);
            if (c != assignment[i]) {
                assignment[i] = c;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < dim; ++d) sums[assignment[i]][d] += points[i][d];
            ++counts[assignment[i]];
        }
        // Repair empty clusters with the point farthest from its centroid.
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t farthest = 0;
            double worst = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[assignment[i]] <= 1) continue;
                const double d = sq_distance(points[i], centroids[assignment[i]]);
                if (d > worst) {
                    worst = d;
                    farthest = i;
                }
            }
            const std::size_t old = assignment[farthest];
            for (std::size_t d = 0; d < dim; ++d) {
                sums[old][d] -= points[farthest][d];
                sums[c][d] += points[farthest][d];
            }
            --counts[old];
            ++counts[c];
            assignment[farthest] = c;
            changed = true;
        }
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t d = 0; d < dim; ++d)
                centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        if (!changed) break;
    }

    // Hartigan-style refinement: move single points between clusters while
    // the exact WCSS delta is negative. Escapes Lloyd fixed points.
    std::vector<std::size_t> counts(k, 0);
    std::vector<std::vector<double>> means(k, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        assignment[i] = nearest_centroid(points[i], centroids);
        ++counts[assignment[i]];
        for (std::size_t d = 0; d < dim; ++d) means[assignment[i]][d] += points[i][d];
    }
    for (std::size_t c = 0; c < k; ++c)
        if (counts[c] > 0)
            for (std::size_t d = 0; d < dim; ++d)
                means[c][d] /= static_cast<double>(counts[c]);
    bool improved = true;
    for (int pass = 0; improved && pass < max_iterations; ++pass) {
        improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t from = assignment[i];
            if (counts[from] <= 1) continue;
            const double na = static_cast<double>(counts[from]);
            const double removal = na / (na - 1.0) * sq_distance(points[i], means[from]);
            std::size_t best_to = from;
            double best_delta = -1e-12;
            for (std::size_t to = 0; to < k; ++to) {
                if (to == from || counts[to] == 0) continue;
                const double nb = static_cast<double>(counts[to]);
                const double delta =
                    nb / (nb + 1.0) * sq_distance(points[i], means[to]) - removal;
                if (delta < best_delta) {
                    best_delta = delta;
                    best_to = to;
                }
            }
            if (best_to == from) continue;
            for (std::size_t d = 0; d < dim; ++d) {
                means[from][d] = (means[from][d] * na - points[i][d]) / (na - 1.0);
                const double nb = static_cast<double>(counts[best_to]);
                means[best_to][d] = (means[best_to][d] * nb + points[i][d]) / (nb + 1.0);
            }
            --counts[from];
            ++counts[best_to];
            assignment[i] = best_to;
            improved = true;
        }
    }
    for (std::size_t c = 0; c < k; ++c)
        if (counts[c] > 0) centroids[c] = means[c];

    KMeansRun run;
    run.centroids = std::move(centroids);
    run.wcss = 0.0;
    for (const auto& p : points) run.wcss += sq_distance(p, run.centroids[nearest_centroid(p, run.centroids)]);
    return run;
}

std::vector<double> normalize_point(const std::vector<double>& row, const Codebook& codebook) {
    std::vector<double> point = project_row(row, codebook.selected);
    for (double v : point)
        if (!std::isfinite(v)) throw validation_error("non-finite feature value in row");
    if (codebook.normalize)
        for (std::size_t i = 0; i < point.size(); ++i)
            point[i] = (point[i] - codebook.means[i]) / codebook.stds[i];
    return point;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> fit_normalizer(
    const std::vector<std::vector<double>>& rows, const std::vector<std::size_t>& selected) {
    if (rows.empty()) throw validation_error("fit_normalizer needs at least 1 row");
    const std::size_t dim = selected.size();
    std::vector<double> mean(dim, 0.0), std_dev(dim, 0.0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < dim; ++i) mean[i] += row.at(selected[i]);
    for (auto& m : mean) m /= static_cast<double>(rows.size());
    for (const auto& row : rows)
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = row.at(selected[i]) - mean[i];
            std_dev[i] += d * d;
        }
    for (auto& s : std_dev) {
        s = std::sqrt(s / static_cast<double>(rows.size()));  // population std
        if (s == 0.0) s = 1.0;
    }
    return {std::move(mean), std::move(std_dev)};
}

Codebook fit_codebook(const std::vector<std::vector<double>>& rows,
                      const std::vector<std::size_t>& selected, std::size_t n_clusters,
                      std::uint64_t seed, const KMeansOptions& options) {
    if (n_clusters < 1) throw domain_error("n_clusters must be >= 1");
    if (rows.empty()) throw validation_error("fit_codebook needs training rows");

    Codebook codebook;
    codebook.n_clusters = n_clusters;
    codebook.selected = selected;
    codebook.seed = seed;
    codebook.normalize = options.normalize;
    std::tie(codebook.means, codebook.stds) = fit_normalizer(rows, selected);

    std::vector<std::vector<double>> points;
    points.reserve(rows.size());
    for (const auto& row : rows) points.push_back(normalize_point(row, codebook));

    std::set<std::vector<double>> distinct(points.begin(), points.end());
    if (n_clusters > distinct.size())
        throw infeasible_error("n_clusters=" + std::to_string(n_clusters) + " exceeds " +
                               std::to_string(distinct.size()) + " distinct rows");

    Rng master(seed);
    KMeansRun best;
    // With few distinct points every seed combination fits in a small budget;
    // enumerate them all instead of sampling restarts.
    double combinations = 1.0;
    for (std::size_t i = 0; i < n_clusters && combinations <= 64.0; ++i)
        combinations *= static_cast<double>(distinct.size() - i) / static_cast<double>(i + 1);
    if (combinations <= 64.0) {
        const std::vector<std::vector<double>> unique(distinct.begin(), distinct.end());
        std::vector<std::size_t> pick(n_clusters);
        for (std::size_t i = 0; i < n_clusters; ++i) pick[i] = i;
        while (true) {
            std::vector<std::vector<double>> seeds;
            for (std::size_t i : pick) seeds.push_back(unique[i]);
            KMeansRun run = lloyd_from(points, std::move(seeds), options.max_iterations);
            if (run.wcss < best.wcss) best = std::move(run);  // ties keep the earliest seeds
            std::size_t j = n_clusters;
            while (j > 0 && pick[j - 1] == unique.size() - n_clusters + j - 1) --j;
            if (j == 0) break;
            ++pick[j - 1];
            for (std::size_t i = j; i < n_clusters; ++i) pick[i] = pick[i - 1] + 1;
        }
    } else {
        for (int restart = 0; restart < options.restarts; ++restart) {
            // Alternate k-means++ and uniform seeding for basin diversity.
            Rng rng = master.fork(static_cast<std::uint64_t>(restart));
            KMeansRun run =
                lloyd_from(points, seed_centroids(points, n_clusters, rng, restart % 2 == 1),
                           options.max_iterations);
            if (run.wcss < best.wcss) best = std::move(run);  // ties keep the earliest restart
        }
    }
    codebook.centroids = std::move(best.centroids);
    return codebook;
}

std::size_t assign_event(const std::vector<double>& row, const Codebook& codebook) {
    return nearest_centroid(normalize_point(row, codebook), codebook.centroids);
}

double codebook_wcss(const Codebook& codebook, const std::vector<std::vector<double>>& rows) {
    double wcss = 0.0;
    for (const auto& row : rows) {
        const auto point = normalize_point(row, codebook);
        wcss += sq_distance(point, codebook.centroids[nearest_centroid(point, codebook.centroids)]);
    }
    return wcss;
}

std::vector<std::size_t> discretize_rows(const std::vector<std::vector<double>>& rows,
                                         const Codebook& codebook) {
    std::vector<std::size_t> events;
    events.reserve(rows.size());
    for (const auto& row : rows) events.push_back(assign_event(row, codebook));
    return events;
}

std::map<std::string, std::vector<EventTrace>> discretize(
    const Dataset& dataset, const std::vector<std::size_t>& trace_indices,
    const Codebook& codebook) {
    std::map<std::string, std::vector<EventTrace>> logs;
    for (std::size_t i : trace_indices) {
        const auto& trace = dataset.traces.at(i);
        logs[trace.goal].push_back(
            EventTrace{trace.trace_id, trace.goal, discretize_rows(trace.rows, codebook)});
    }
    return logs;
}

std::map<std::string, std::vector<EventTrace>> discretize(const Dataset& dataset,
                                                          const Codebook& codebook) {
    std::vector<std::size_t> all(dataset.traces.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return discretize(dataset, all, codebook);
}

std::string Codebook::to_json() const {
    nlohmann::ordered_json j;
    j["n_clusters"] = n_clusters;
    j["selected"] = selected;
    j["means"] = means;
    j["stds"] = stds;
    j["centroids"] = centroids;
    j["seed"] = seed;
    j["normalize"] = normalize;
    return j.dump(2);
}

Codebook Codebook::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Codebook c;
    c.n_clusters = j.at("n_clusters").get<std::size_t>();
    c.selected = j.at("selected").get<std::vector<std::size_t>>();
    c.means = j.at("means").get<std::vector<double>>();
    c.stds = j.at("stds").get<std::vector<double>>();
    c.centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.normalize = j.at("normalize").get<bool>();
    return c;
}

}  // namespace gorec
