#include "gorec/stats.hpp"

#include <cmath>
#include <stdexcept>

#include "gorec/errors.hpp"

namespace gorec {

namespace {

double sample_variance(const std::vector<double>& samples, double mean) {
    double sum = 0.0;
    for (double v : samples) sum += (v - mean) * (v - mean);
    return sum / static_cast<double>(samples.size() - 1);
}

double sample_mean(const std::vector<double>& samples) {
    double sum = 0.0;
    for (double v : samples) sum += v;
    return sum / static_cast<double>(samples.size());
}

// Continued fraction for the incomplete beta function (Lentz's method).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIterations = 300;
    constexpr double kEps = 3e-14;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (df <= 0.0) throw domain_error("student_t_cdf: df must be > 0");
    const double x = df / (df + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

std::pair<double, double> mean_ci(const std::vector<double>& samples, double level) {
    if (samples.empty()) throw validation_error("mean_ci: no samples");
    const double mean = sample_mean(samples);
    if (samples.size() == 1) return {mean, 0.0};
    const double sd = std::sqrt(sample_variance(samples, mean));
    // Normal quantile for the usual levels; 95% is what the reports use.
    double z = 1.95996;
    if (level != 0.95) {
        // Acklam-style inverse via bisection on the error function; rare path.
        double lo = 0.0, hi = 10.0;
        const double target = 0.5 + level / 2.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (0.5 * (1.0 + std::erf(mid / std::sqrt(2.0))) < target ? lo : hi) = mid;
        }
        z = 0.5 * (lo + hi);
    }
    return {mean, z * sd / std::sqrt(static_cast<double>(samples.size()))};
}

double welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw validation_error("welch_t_test: both samples need n >= 2");
    const double mean_a = sample_mean(a);
    const double mean_b = sample_mean(b);
    const double var_a = sample_variance(a, mean_a);
    const double var_b = sample_variance(b, mean_b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double se2 = var_a / na + var_b / nb;
    if (se2 == 0.0) return mean_a == mean_b ? 1.0 : 0.0;
    const double t = (mean_a - mean_b) / std::sqrt(se2);
    const double df = se2 * se2 /
                      (var_a * var_a / (na * na * (na - 1.0)) +
                       var_b * var_b / (nb * nb * (nb - 1.0)));
    return 2.0 * (1.0 - student_t_cdf(std::abs(t), df));
}

double sidak_alpha(double alpha, std::size_t m_comparisons) {
    if (!(alpha > 0.0) || alpha >= 1.0) throw domain_error("sidak_alpha: alpha must be in (0, 1)");
    if (m_comparisons < 1) throw domain_error("sidak_alpha: m must be >= 1");
    return 1.0 - std::pow(1.0 - alpha, 1.0 / static_cast<double>(m_comparisons));
}

double f1_score(double precision, double recall) {
    if (precision < 0.0 || precision > 1.0 || recall < 0.0 || recall > 1.0)
        throw domain_error("f1_score: precision and recall must be in [0, 1]");
    const double denom = precision + recall;
    if (denom == 0.0) return 0.0;
    return 2.0 * precision * recall / denom;
}

}  // namespace gorec
