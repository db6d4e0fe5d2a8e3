// Copyright 2026 The qdt Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Monte Carlo estimate of the aggregate attraction factor
 * |q| = (1/N) sum_j |q_j| over prospect lattices whose attraction factors are
 * drawn from a magnitude law, under sum_j q_j = 0 and -1 <= q_j <= 1.
 *
 * Sample i uses its own std::mt19937_64 seeded with splitmix64(seed, i), so the
 * estimate does not depend on how samples are split across worker threads.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qdt/error.hpp"

namespace qdt {

class AttractionDistribution {
  public:
    enum class Kind { uniform_magnitude, beta_magnitude, truncated_gaussian };

    /// |q| ~ Uniform(low, high). The default range has mean 1/4.
    static AttractionDistribution uniform(double low = 0.0, double high = 0.5,
                                          std::size_t lattice_size = 2) {
        if (!(0.0 <= low && low <= high && high <= 1.0)) {
            throw InputError("uniform magnitude range must satisfy 0 <= low <= high <= 1");
        }
        return {Kind::uniform_magnitude, low, high, lattice_size};
    }

    /// |q| ~ Beta(alpha, beta).
    static AttractionDistribution beta(double alpha, double beta, std::size_t lattice_size = 2) {
        if (!(alpha > 0.0 && beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
            throw InputError("beta magnitude parameters must be positive");
        }
        return {Kind::beta_magnitude, alpha, beta, lattice_size};
    }

    /// |q| ~ Normal(mean, sigma) restricted to [0, 1].
    static AttractionDistribution truncated_gaussian(double mean, double sigma,
                                                     std::size_t lattice_size = 2) {
        if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mean)) {
            throw InputError("truncated gaussian needs a finite mean and positive sigma");
        }
        // Keep the acceptance rate of the rejection sampler reasonable.
        if (mean < -3.0 * sigma || mean > 1.0 + 3.0 * sigma) {
            throw InputError("truncated gaussian mean lies too far outside [0, 1]");
        }
        return {Kind::truncated_gaussian, mean, sigma, lattice_size};
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double first() const noexcept { return first_; }
    [[nodiscard]] double second() const noexcept { return second_; }
    [[nodiscard]] std::size_t lattice_size() const noexcept { return lattice_size_; }

    [[nodiscard]] AttractionDistribution with_lattice_size(std::size_t n) const {
        return {kind_, first_, second_, n};
    }

    template <class Rng> [[nodiscard]] double sample_magnitude(Rng &rng) const {
        switch (kind_) {
        case Kind::uniform_magnitude:
            if (first_ == second_) {
                return first_;
            }
            return std::uniform_real_distribution<double>(first_, second_)(rng);
        case Kind::beta_magnitude: {
            const double x = std::gamma_distribution<double>(first_, 1.0)(rng);
            const double y = std::gamma_distribution<double>(second_, 1.0)(rng);
            return x + y > 0.0 ? x / (x + y) : 0.0;
        }
        case Kind::truncated_gaussian: {
            std::normal_distribution<double> normal(first_, second_);
            for (int attempt = 0; attempt < 100000; ++attempt) {
                const double x = normal(rng);
                if (x >= 0.0 && x <= 1.0) {
                    return x;
                }
            }
            throw InvariantViolation("truncated gaussian rejection sampler exhausted");
        }
        }
        return 0.0;
    }

    friend bool operator==(const AttractionDistribution &,
                           const AttractionDistribution &) = default;

  private:
    AttractionDistribution(Kind kind, double first, double second, std::size_t lattice_size)
        : kind_{kind}, first_{first}, second_{second}, lattice_size_{lattice_size} {
        if (lattice_size_ < 2) {
            throw InputError("attraction lattice size must be at least 2");
        }
    }

    Kind kind_;
    double first_;
    double second_;
    std::size_t lattice_size_;
};

[[nodiscard]] inline const char *to_string(AttractionDistribution::Kind kind) {
    switch (kind) {
    case AttractionDistribution::Kind::uniform_magnitude:
        return "uniform_magnitude";
    case AttractionDistribution::Kind::beta_magnitude:
        return "beta_magnitude";
    case AttractionDistribution::Kind::truncated_gaussian:
        return "truncated_gaussian";
    }
    return "unknown";
}

struct MCResult {
    std::size_t sample_count;
    double aggregate_abs_q;
    double standard_error;
    std::uint64_t seed;

    friend bool operator==(const MCResult &, const MCResult &) = default;
};

namespace detail {

/// SplitMix64 finalizer over (seed, stream).
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr double kAlternationTolerance = 1e-12;

template <class Rng>
std::vector<double> draw_lattice(const AttractionDistribution &dist, Rng &rng) {
    const std::size_t n = dist.lattice_size();
    std::vector<double> q(n);
    for (auto &v : q) {
        const double m = dist.sample_magnitude(rng);
        v = (rng() & 1U) != 0 ? m : -m;
    }
    // Project onto sum q = 0 along a randomly chosen coordinate, so the binary
    // case becomes q = (s m, -s m) with m drawn straight from the magnitude law.
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    double others = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j != k) {
            others += q[j];
        }
    }
    q[k] = -others;

    // Re-clamp; any residual is spread evenly over the other coordinates.
    for (int iter = 0; iter < 100; ++iter) {
        for (auto &v : q) {
            v = std::clamp(v, -1.0, 1.0);
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != k) {
                sum += q[j];
            }
        }
        q[k] = std::clamp(-sum, -1.0, 1.0);
        const double residual = sum + q[k];
        if (std::abs(residual) <= kAlternationTolerance) {
            return q;
        }
        const double share = residual / static_cast<double>(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != k) {
                q[j] -= share;
            }
        }
    }
    throw InvariantViolation("alternation projection did not converge");
}

} // namespace detail

/// One lattice of attraction factors: values in [-1, 1] summing to zero.
[[nodiscard]] inline std::vector<double> sample_lattice_q(const AttractionDistribution &dist,
                                                          std::uint64_t seed) {
    std::mt19937_64 rng(detail::splitmix64(seed, 0));
    return detail::draw_lattice(dist, rng);
}

/**
 * Mean over `samples` lattices of (1/N) sum_j |q_j|, with its standard error.
 * `workers` only changes wall time, never the result.
 */
[[nodiscard]] inline MCResult estimate_aggregate(const AttractionDistribution &dist,
                                                 std::size_t samples, std::uint64_t seed,
                                                 unsigned workers = 1) {
    if (samples == 0) {
        throw InputError("Monte Carlo estimate needs at least one sample");
    }
    workers = std::max(1U, static_cast<unsigned>(std::min<std::size_t>(workers, samples)));
    std::vector<double> values(samples);
    std::vector<std::exception_ptr> failures(std::max(1U, workers));
    const auto run = [&](unsigned worker, std::size_t begin, std::size_t end) {
        try {
            for (std::size_t i = begin; i < end; ++i) {
                std::mt19937_64 rng(detail::splitmix64(seed, i));
                const auto q = detail::draw_lattice(dist, rng);
                double s = 0.0;
                for (double v : q) {
                    s += std::abs(v);
                }
                values[i] = s / static_cast<double>(q.size());
            }
        } catch (...) {
            failures[worker] = std::current_exception();
        }
    };

    if (workers == 1) {
        run(0, 0, samples);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (samples + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(samples, w * chunk);
            const std::size_t end = std::min(samples, begin + chunk);
            pool.emplace_back(run, w, begin, end);
        }
    }
    for (const auto &f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }

    const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(samples);
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double stdev =
        samples > 1 ? std::sqrt(ss / static_cast<double>(samples - 1)) : 0.0;
    return {samples, mean, stdev / std::sqrt(static_cast<double>(samples)), seed};
}

} // namespace qdt
