#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gorec {

/// F x F matrix of |Pearson correlation| values. Symmetric, unit diagonal.
/// Zero-variance features correlate 0 with everything else.
struct CorrelationMatrix {
    std::size_t size = 0;
    std::vector<double> values;  // row-major, size*size

    double at(std::size_t i, std::size_t j) const { return values[i * size + j]; }
    /// Correlation distance 1 - |rho|.
    double distance(std::size_t i, std::size_t j) const { return 1.0 - at(i, j); }
};

enum class Linkage { Single, Complete, Average };

std::string linkage_name(Linkage linkage);
Linkage linkage_from_name(const std::string& name);

struct FeatureSelection {
    std::size_t n_selected = 0;
    std::vector<std::size_t> selected;               // one medoid per cluster
    std::vector<std::vector<std::size_t>> clusters;  // partition of {0..F-1}
    struct Merge {
        std::size_t left;   // cluster ids being merged (id = smallest member)
        std::size_t right;
        double height;      // linkage distance at this merge
    };
    std::vector<Merge> merge_tree;
    Linkage linkage = Linkage::Average;

    std::string to_json() const;
    static FeatureSelection from_json(const std::string& text);
};

CorrelationMatrix correlation_matrix(const std::vector<std::vector<double>>& rows);

/// Agglomerative clustering over correlation distance, stopping at n_f
/// clusters. Ties merge the lowest-index pair. Medoids are left unset.
FeatureSelection cluster_features(const CorrelationMatrix& corr, std::size_t n_f,
                                  Linkage linkage = Linkage::Average);

/// Fill in per-cluster medoids: the member with smallest mean distance to
/// the other members (lowest index on ties; singletons pick themselves).
FeatureSelection select_medoids(FeatureSelection selection, const CorrelationMatrix& corr);

/// Project a row to the selected features, in selection order.
std::vector<double> project_row(const std::vector<double>& row,
                                const std::vector<std::size_t>& selected);

}  // namespace gorec
