#include "gorec/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gorec/errors.hpp"
#include "json.hpp"

namespace gorec {

std::string linkage_name(Linkage linkage) {
    switch (linkage) {
        case Linkage::Single: return "single";
        case Linkage::Complete: return "complete";
        case Linkage::Average: return "average";
    }
    return "average";
}

Linkage linkage_from_name(const std::string& name) {
    if (name == "single") return Linkage::Single;
    if (name == "complete") return Linkage::Complete;
    if (name == "average") return Linkage::Average;
    throw domain_error("unknown linkage '" + name + "' (single|complete|average)");
}

CorrelationMatrix correlation_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.size() < 2) throw validation_error("correlation_matrix needs at least 2 rows");
    const std::size_t n = rows.size();
    const std::size_t f = rows.front().size();

    std::vector<double> mean(f, 0.0);
    for (const auto& row : rows)
        for (std::size_t j = 0; j < f; ++j) mean[j] += row[j];
    for (auto& m : mean) m /= static_cast<double>(n);

    std::vector<double> variance(f, 0.0);
    for (const auto& row : rows)
        for (std::size_t j = 0; j < f; ++j) {
            const double d = row[j] - mean[j];
            variance[j] += d * d;
        }

    CorrelationMatrix corr;
    corr.size = f;
    corr.values.assign(f * f, 0.0);
    for (std::size_t i = 0; i < f; ++i) corr.values[i * f + i] = 1.0;

    for (std::size_t i = 0; i < f; ++i) {
        if (variance[i] == 0.0) continue;
        for (std::size_t j = i + 1; j < f; ++j) {
            if (variance[j] == 0.0) continue;
            double cov = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                cov += (rows[r][i] - mean[i]) * (rows[r][j] - mean[j]);
            double rho = std::abs(cov) / std::sqrt(variance[i] * variance[j]);
            rho = std::min(rho, 1.0);
            corr.values[i * f + j] = rho;
            corr.values[j * f + i] = rho;
        }
    }
    return corr;
}

namespace {

double cluster_distance(const CorrelationMatrix& corr, const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b, Linkage linkage) {
    double best = linkage == Linkage::Single ? std::numeric_limits<double>::infinity() : 0.0;
    double sum = 0.0;
    for (std::size_t i : a)
        for (std::size_t j : b) {
            const double d = corr.distance(i, j);
            switch (linkage) {
                case Linkage::Single: best = std::min(best, d); break;
                case Linkage::Complete: best = std::max(best, d); break;
                case Linkage::Average: sum += d; break;
            }
        }
    if (linkage == Linkage::Average)
        return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    return best;
}

}  // namespace

FeatureSelection cluster_features(const CorrelationMatrix& corr, std::size_t n_f,
                                  Linkage linkage) {
    const std::size_t f = corr.size;
    if (n_f < 1 || n_f > f)
        throw domain_error("n_f must be in [1, " + std::to_string(f) + "], got " +
                           std::to_string(n_f));

    // Active clusters keyed by their smallest member index.
    std::vector<std::vector<std::size_t>> clusters(f);
    for (std::size_t i = 0; i < f; ++i) clusters[i] = {i};
    std::vector<bool> active(f, true);

    FeatureSelection selection;
    selection.linkage = linkage;
    selection.n_selected = n_f;

    for (std::size_t remaining = f; remaining > n_f; --remaining) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_a = 0, best_b = 0;
        for (std::size_t a = 0; a < f; ++a) {
            if (!active[a]) continue;
            for (std::size_t b = a + 1; b < f; ++b) {
                if (!active[b]) continue;
                const double d = cluster_distance(corr, clusters[a], clusters[b], linkage);
                if (d < best) {  // ties keep the lexicographically first (a, b)
                    best = d;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        selection.merge_tree.push_back({best_a, best_b, best});
        clusters[best_a].insert(clusters[best_a].end(), clusters[best_b].begin(),
                                clusters[best_b].end());
        std::sort(clusters[best_a].begin(), clusters[best_a].end());
        active[best_b] = false;
        clusters[best_b].clear();
    }

    for (std::size_t i = 0; i < f; ++i)
        if (active[i]) selection.clusters.push_back(clusters[i]);
    return selection;
}

FeatureSelection select_medoids(FeatureSelection selection, const CorrelationMatrix& corr) {
    selection.selected.clear();
    for (const auto& cluster : selection.clusters) {
        std::size_t medoid = cluster.front();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t candidate : cluster) {
            double sum = 0.0;
            for (std::size_t other : cluster)
                if (other != candidate) sum += corr.distance(candidate, other);
            const double avg =
                cluster.size() > 1 ? sum / static_cast<double>(cluster.size() - 1) : 0.0;
            if (avg < best) {  // ties keep the lowest feature index
                best = avg;
                medoid = candidate;
            }
        }
        selection.selected.push_back(medoid);
    }
    return selection;
}

std::vector<double> project_row(const std::vector<double>& row,
                                const std::vector<std::size_t>& selected) {
    std::vector<double> out;
    out.reserve(selected.size());
    for (std::size_t i : selected) out.push_back(row.at(i));
    return out;
}

std::string FeatureSelection::to_json() const {
    nlohmann::ordered_json j;
    j["n_f"] = n_selected;
    j["linkage"] = linkage_name(linkage);
    j["selected"] = selected;
    j["clusters"] = clusters;
    nlohmann::ordered_json merges = nlohmann::ordered_json::array();
    for (const auto& m : merge_tree)
        merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}});
    j["merge_tree"] = merges;
    return j.dump(2);
}

FeatureSelection FeatureSelection::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    FeatureSelection s;
    s.n_selected = j.at("n_f").get<std::size_t>();
    s.linkage = linkage_from_name(j.at("linkage").get<std::string>());
    s.selected = j.at("selected").get<std::vector<std::size_t>>();
    s.clusters = j.at("clusters").get<std::vector<std::vector<std::size_t>>>();
    for (const auto& m : j.at("merge_tree"))
        s.merge_tree.push_back({m.at("left").get<std::size_t>(), m.at("right").get<std::size_t>(),
                                m.at("height").get<double>()});
    return s;
}

}  // namespace gorec
