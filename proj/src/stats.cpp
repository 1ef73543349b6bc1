#include "prominence/stats.hpp"

#include "prominence/error.hpp"
#include "prominence/parallel.hpp"
#include "prominence/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace prominence {

void SampleSet::validate() const {
    if (values.empty()) throw ValidationError("sample '" + label + "' is empty");
    for (double v : values) {
        if (!std::isfinite(v)) throw ValidationError("sample '" + label + "' contains a non-finite value");
    }
}

double kolmogorov_survival(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    if (lambda < 1.18) {
        // P(K <= x) = sqrt(2 pi)/x * sum exp(-(2k-1)^2 pi^2 / (8 x^2)); converges fast for small x.
        const double w = std::sqrt(2.0 * std::numbers::pi) / lambda;
        const double f = -std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double cdf = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double t = static_cast<double>(2 * k - 1);
            cdf += std::exp(f * t * t);
        }
        return std::clamp(1.0 - w * cdf, 0.0, 1.0);
    }
    double q = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        q += sign * term;
        if (term < 1e-300) break;
        sign = -sign;
    }
    return std::clamp(2.0 * q, 0.0, 1.0);
}

TestResult ks2_test(const SampleSet& a, const SampleSet& b) {
    a.validate();
    b.validate();
    std::vector<double> x = a.values;
    std::vector<double> y = b.values;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n1 = static_cast<double>(x.size());
    const double n2 = static_cast<double>(y.size());

    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < x.size() || j < y.size()) {
        // Step both ECDFs past the next pooled value, including all ties.
        double v;
        if (j >= y.size() || (i < x.size() && x[i] <= y[j])) {
            v = x[i];
        } else {
            v = y[j];
        }
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
    }

    TestResult r;
    r.method = "ks_2samp_asymptotic";
    r.statistic = d;
    r.n1 = x.size();
    r.n2 = y.size();
    const double effective_n = n1 * n2 / (n1 + n2);
    r.p_value = kolmogorov_survival(std::sqrt(effective_n) * d);
    return r;
}

namespace {

double skewness_z(double b1, double n) {
    double y = b1 * std::sqrt(((n + 1) * (n + 3)) / (6.0 * (n - 2)));
    const double beta2 = 3.0 * (n * n + 27 * n - 70) * (n + 1) * (n + 3) / ((n - 2) * (n + 5) * (n + 7) * (n + 9));
    const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
    const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
    const double alpha = std::sqrt(2.0 / (w2 - 1.0));
    y /= alpha;
    return delta * std::log(y + std::sqrt(y * y + 1.0));
}

double kurtosis_z(double b2, double n) {
    const double expected = 3.0 * (n - 1) / (n + 1);
    const double variance = 24.0 * n * (n - 2) * (n - 3) / ((n + 1) * (n + 1) * (n + 3) * (n + 5));
    const double x = (b2 - expected) / std::sqrt(variance);
    const double sqrt_beta1 = 6.0 * (n * n - 5 * n + 2) / ((n + 7) * (n + 9)) *
                              std::sqrt(6.0 * (n + 3) * (n + 5) / (n * (n - 2) * (n - 3)));
    const double a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + std::sqrt(1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)));
    const double term1 = 1.0 - 2.0 / (9.0 * a);
    const double denom = 1.0 + x * std::sqrt(2.0 / (a - 4.0));
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    const double term2 = std::copysign(std::cbrt((1.0 - 2.0 / a) / std::abs(denom)), denom);
    return (term1 - term2) / std::sqrt(2.0 / (9.0 * a));
}

}  // namespace

TestResult dagostino_pearson(const SampleSet& a) {
    a.validate();
    const std::size_t count = a.values.size();
    if (count < kNormalityMinSamples) {
        throw ValidationError("normality test needs at least " + std::to_string(kNormalityMinSamples) +
                              " values, sample '" + a.label + "' has " + std::to_string(count));
    }
    const double n = static_cast<double>(count);
    double mean = 0.0;
    for (double v : a.values) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : a.values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const auto [lo, hi] = std::minmax_element(a.values.begin(), a.values.end());
    if (*lo == *hi || !(m2 > 0.0)) throw ValidationError("sample '" + a.label + "' has zero variance");

    const double zs = skewness_z(m3 / std::pow(m2, 1.5), n);
    const double zk = kurtosis_z(m4 / (m2 * m2), n);
    TestResult r;
    r.method = "dagostino_pearson";
    r.statistic = zs * zs + zk * zk;
    r.p_value = std::exp(-0.5 * r.statistic);  // chi-square(2) survival
    r.n1 = count;
    return r;
}

double sorted_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw ValidationError("quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

namespace {

constexpr std::size_t kShardSize = 256;

// Mean around a reference value: exact for constant samples.
double shifted_mean_of_resample(std::span<const double> v, Rng& rng) {
    const double ref = v[0];
    double sum = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) sum += v[rng.below(v.size())] - ref;
    return ref + sum / static_cast<double>(v.size());
}

double shifted_mean(std::span<const double> v) {
    const double ref = v[0];
    double sum = 0.0;
    for (double x : v) sum += x - ref;
    return ref + sum / static_cast<double>(v.size());
}

}  // namespace

BootstrapCI bootstrap_mean_diff(const SampleSet& a, const SampleSet& b, const BootstrapConfig& config) {
    a.validate();
    b.validate();
    if (!(config.level > 0.0 && config.level < 1.0)) throw ValidationError("CI level must lie in (0, 1)");
    if (config.resamples < 1) throw ValidationError("resamples must be at least 1");

    std::vector<double> diffs(config.resamples);
    const std::size_t shards = (config.resamples + kShardSize - 1) / kShardSize;
    parallel_for(shards, config.jobs, [&](std::size_t shard) {
        Rng rng(derive_seed(config.seed, shard));
        const std::size_t begin = shard * kShardSize;
        const std::size_t end = std::min(begin + kShardSize, config.resamples);
        for (std::size_t r = begin; r < end; ++r) {
            const double ma = shifted_mean_of_resample(a.values, rng);
            const double mb = shifted_mean_of_resample(b.values, rng);
            diffs[r] = ma - mb;
        }
    });
    std::sort(diffs.begin(), diffs.end());

    BootstrapCI ci;
    const double tail = (1.0 - config.level) / 2.0;
    ci.low = sorted_quantile(diffs, tail);
    ci.high = sorted_quantile(diffs, 1.0 - tail);
    ci.level = config.level;
    ci.resamples = config.resamples;
    ci.seed = config.seed;
    ci.observed = shifted_mean(a.values) - shifted_mean(b.values);
    return ci;
}

double percent_difference(double linked_mean, double unlinked_mean) {
    if (!(unlinked_mean > 0.0)) {
        throw ValidationError("percent difference undefined for non-positive baseline mean");
    }
    return 100.0 * (linked_mean - unlinked_mean) / unlinked_mean;
}

}  // namespace prominence
