#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "dsg/numeric.hpp"

namespace dsg {

/// Identifies one reproducible substream of a root seed.
///
/// Splitting rule: stream k is seeded with
///   splitmix64(root_seed ^ (0x9E3779B97F4A7C15 * (k + 1))),
/// i.e. the root seed xored with multiples of the 64-bit golden ratio and
/// scrambled once. Distinct indices give statistically independent streams.
struct SeedStream {
    std::uint64_t root_seed = 0;
    std::uint64_t stream_index = 0;

    std::uint64_t derived_seed() const {
        std::uint64_t z = root_seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1));
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

/// mt19937_64 wrapped with platform-independent uniform draws.
/// std::uniform_real_distribution is implementation-defined, so doubles are
/// built directly from the raw 64-bit output.
class Rng {
  public:
    explicit Rng(SeedStream s) : engine_(s.derived_seed()) {}
    explicit Rng(std::uint64_t raw_seed) : engine_(raw_seed) {}

    std::uint64_t bits() { return engine_(); }

    /// uniform on [0,1) with 53-bit resolution
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// index into a cumulative branch layout: returns the first i with
    /// u < cumsum(probs[0..i]); caller supplies the branch probabilities.
    template <class Probs>
    int pick_branch(const Probs& probs) {
        double u = uniform();
        double acc = 0.0;
        int n = static_cast<int>(probs.size());
        for (int i = 0; i < n; ++i) {
            acc += probs[i];
            if (u < acc) return i;
        }
        return n - 1;  // guard against the accumulated sum landing at 1-ulp
    }

  private:
    std::mt19937_64 engine_;
};

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
};

/// Runs `samples` independent draws of `sample_one(rng)` and reports the mean
/// with its standard error. Bit-reproducible for a fixed SeedStream.
template <class F>
McEstimate mc_mean(F&& sample_one, long samples, SeedStream stream) {
    require(samples >= 1, "mc_mean: samples must be >= 1");
    Rng rng(stream);
    double mean = 0.0, m2 = 0.0;
    for (long i = 1; i <= samples; ++i) {
        double x = sample_one(rng);
        double d = x - mean;
        mean += d / static_cast<double>(i);
        m2 += d * (x - mean);
    }
    McEstimate out;
    out.mean = mean;
    out.samples = samples;
    out.stderr_ = samples > 1 ? std::sqrt(m2 / (static_cast<double>(samples) - 1.0) /
                                          static_cast<double>(samples))
                              : 0.0;
    return out;
}

}  // namespace dsg
