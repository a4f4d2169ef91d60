#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>

namespace fracdiff {

/// Counter-based random stream (Philox4x32-10). The key is the run seed and
/// the stream id occupies the upper half of the counter, so every
/// (seed, stream_id) pair is an independent, reproducible sequence and no
/// state is shared between streams.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() { return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard exponential.
    double exponential() { return -std::log(uniform()); }

    /// Standard normal by Box-Muller; the second variate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::uint32_t next_u32() {
        if (buffer_pos_ == 4) refill();
        return buffer_[buffer_pos_++];
    }

    void refill() {
        constexpr std::uint32_t kMul0 = 0xD2511F53u, kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u, kWeyl1 = 0xBB67AE85u;
        std::array<std::uint32_t, 4> ctr = {std::uint32_t(counter_), std::uint32_t(counter_ >> 32),
                                            std::uint32_t(stream_id_), std::uint32_t(stream_id_ >> 32)};
        std::uint32_t k0 = std::uint32_t(seed_), k1 = std::uint32_t(seed_ >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
            ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ k0, std::uint32_t(p1),
                   std::uint32_t(p0 >> 32) ^ ctr[3] ^ k1, std::uint32_t(p0)};
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        buffer_ = ctr;
        buffer_pos_ = 0;
        ++counter_;
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    std::size_t buffer_pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Mean and standard error of a Monte-Carlo sample.
struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

/// Order-independent pairwise sum.
double pairwise_sum(std::span<const double> values);

/// Requires at least two samples. Uses pairwise summation throughout so the
/// result depends only on the sample values, not on how they were produced.
SampleSummary summarize(std::span<const double> samples);

}  // namespace fracdiff
