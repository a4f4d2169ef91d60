#include "fracdiff/rng.hpp"

#include <stdexcept>
#include <vector>

namespace fracdiff {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SampleSummary summarize(std::span<const double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("summarize: need at least two samples");
    const double n = double(samples.size());
    const double mean = pairwise_sum(samples) / n;
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double d = samples[i] - mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / (n - 1.0);
    return {samples.size(), mean, std::sqrt(var / n)};
}

}  // namespace fracdiff
