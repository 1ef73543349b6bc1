#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace prominence {

struct SampleSet {
    std::string label;
    std::vector<double> values;

    /// Non-empty and finite, else ValidationError.
    void validate() const;
};

struct TestResult {
    std::string method;
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n1 = 0;
    std::optional<std::size_t> n2;
};

struct BootstrapConfig {
    double level = 0.95;
    std::size_t resamples = 10000;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;  // does not affect the result
};

struct BootstrapCI {
    double low = 0.0;
    double high = 0.0;
    double level = 0.95;
    std::size_t resamples = 0;
    std::uint64_t seed = 0;
    double observed = 0.0;  // mean(a) - mean(b) on the original samples
};

/// Kolmogorov limiting survival function Q(lambda) = P(K > lambda).
double kolmogorov_survival(double lambda);

/// Two-sample Kolmogorov-Smirnov. D is exact; the p-value uses the
/// asymptotic distribution at lambda = sqrt(n1 n2 / (n1 + n2)) * D.
TestResult ks2_test(const SampleSet& a, const SampleSet& b);

/// D'Agostino-Pearson omnibus K^2 (skewness and kurtosis z-scores), p from
/// chi-square with 2 degrees of freedom. Needs n >= 20 and non-zero variance.
TestResult dagostino_pearson(const SampleSet& a);

inline constexpr std::size_t kNormalityMinSamples = 20;

/// Percentile bootstrap CI for mean(a) - mean(b). Resamples are drawn in
/// fixed-size shards, each from its own derived seed, so the interval is
/// identical for any `jobs`.
BootstrapCI bootstrap_mean_diff(const SampleSet& a, const SampleSet& b, const BootstrapConfig& config = {});

/// 100 * (linked - unlinked) / unlinked; unlinked must be positive.
double percent_difference(double linked_mean, double unlinked_mean);

/// Linear-interpolation quantile (type 7) of an ascending-sorted sample.
double sorted_quantile(std::span<const double> sorted, double q);

}  // namespace prominence
