#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gorec/dataset.hpp"
#include "gorec/featsel.hpp"

namespace gorec {

/// Fitted quantizer: z-score normalization plus k-means centroids in
/// selected-feature space. Event symbol = index of the nearest centroid.
struct Codebook {
    std::size_t n_clusters = 0;
    std::vector<std::size_t> selected;
    std::vector<double> means;  // per selected feature
    std::vector<double> stds;   // per selected feature, 1 for zero variance
    std::vector<std::vector<double>> centroids;  // n_clusters x |selected|
    std::uint64_t seed = 0;
    bool normalize = true;

    std::string to_json() const;
    static Codebook from_json(const std::string& text);
};

struct EventTrace {
    std::string trace_id;
    std::string goal;
    std::vector<std::size_t> events;
};

struct KMeansOptions {
    int restarts = 10;
    int max_iterations = 300;
    bool normalize = true;
};

/// Per selected feature: mean and population std over all rows; std 1 when
/// the variance is zero.
std::pair<std::vector<double>, std::vector<double>> fit_normalizer(
    const std::vector<std::vector<double>>& rows, const std::vector<std::size_t>& selected);

/// Seeded k-means++ with Lloyd iterations, empty-cluster repair, and best-of
/// restarts by WCSS. Deterministic for fixed inputs and seed.
Codebook fit_codebook(const std::vector<std::vector<double>>& rows,
                      const std::vector<std::size_t>& selected, std::size_t n_clusters,
                      std::uint64_t seed, const KMeansOptions& options = {});

std::size_t assign_event(const std::vector<double>& row, const Codebook& codebook);

/// Within-cluster sum of squares of the codebook over the given rows,
/// assigning each row to its nearest centroid.
double codebook_wcss(const Codebook& codebook, const std::vector<std::vector<double>>& rows);

/// Map every trace to an event trace and group by goal (key order follows
/// dataset.goals for iteration done through that list).
std::map<std::string, std::vector<EventTrace>> discretize(const Dataset& dataset,
                                                          const Codebook& codebook);
std::map<std::string, std::vector<EventTrace>> discretize(
    const Dataset& dataset, const std::vector<std::size_t>& trace_indices,
    const Codebook& codebook);

std::vector<std::size_t> discretize_rows(const std::vector<std::vector<double>>& rows,
                                         const Codebook& codebook);

}  // namespace gorec
