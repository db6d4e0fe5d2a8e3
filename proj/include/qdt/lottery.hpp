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
 * Choice between lotteries: expected utilities, utility factors, attraction
 * ranking and the quarter-law estimate of choice probabilities.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "qdt/error.hpp"
#include "qdt/linalg.hpp"

namespace qdt {

/// Magnitude of the attraction factor assigned by the quarter law.
inline constexpr double kQuarter = 0.25;

/// Default certainty gap above which the more certain lottery is more attractive.
inline constexpr double kDefaultAttractionThreshold = 0.1;

struct Outcome {
    double payoff;
    double probability;

    friend bool operator==(const Outcome &, const Outcome &) = default;
};

class Lottery {
  public:
    Lottery(std::string label, std::vector<Outcome> outcomes, double tol = kDefaultTolerance)
        : label_{std::move(label)}, outcomes_{std::move(outcomes)} {
        if (outcomes_.empty()) {
            throw InputError("lottery '" + label_ + "' has no outcomes");
        }
        double total = 0.0;
        for (const auto &o : outcomes_) {
            if (!std::isfinite(o.payoff)) {
                throw InputError("lottery '" + label_ + "' has a non-finite payoff");
            }
            if (!(o.probability >= 0.0 && o.probability <= 1.0)) {
                throw InputError("lottery '" + label_ + "' has a probability outside [0, 1]");
            }
            total += o.probability;
        }
        if (std::abs(total - 1.0) > tol) {
            throw InputError("lottery '" + label_ + "' probabilities sum to " +
                             std::to_string(total) + ", expected 1");
        }
    }

    [[nodiscard]] const std::string &label() const noexcept { return label_; }
    [[nodiscard]] std::span<const Outcome> outcomes() const noexcept { return outcomes_; }

    /// Largest probability attached to a strictly positive payoff (0 if none).
    [[nodiscard]] double certainty() const noexcept {
        double c = 0.0;
        for (const auto &o : outcomes_) {
            if (o.payoff > 0.0) {
                c = std::max(c, o.probability);
            }
        }
        return c;
    }

    [[nodiscard]] double max_gain() const noexcept {
        double g = outcomes_.front().payoff;
        for (const auto &o : outcomes_) {
            g = std::max(g, o.payoff);
        }
        return g;
    }

    friend bool operator==(const Lottery &, const Lottery &) = default;

  private:
    std::string label_;
    std::vector<Outcome> outcomes_;
};

/// u(x) = c x, or u(x) = c sign(x) |x|^a with 0 < a <= 1.
class UtilityFunction {
  public:
    enum class Kind { linear, power };

    static UtilityFunction linear(double scale = 1.0) { return {Kind::linear, scale, 1.0}; }
    static UtilityFunction power(double scale, double exponent) {
        return {Kind::power, scale, exponent};
    }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] double exponent() const noexcept { return exponent_; }

    [[nodiscard]] double operator()(double x) const {
        if (kind_ == Kind::linear) {
            return scale_ * x;
        }
        const double mag = std::pow(std::abs(x), exponent_);
        return scale_ * (x < 0.0 ? -mag : mag);
    }

    /// Same function with the scale multiplied by `factor`.
    [[nodiscard]] UtilityFunction rescaled(double factor) const {
        return {kind_, scale_ * factor, exponent_};
    }

    friend bool operator==(const UtilityFunction &, const UtilityFunction &) = default;

  private:
    UtilityFunction(Kind kind, double scale, double exponent)
        : kind_{kind}, scale_{scale}, exponent_{exponent} {
        if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
            throw InputError("utility scale must be positive");
        }
        if (kind_ == Kind::power && !(exponent_ > 0.0 && exponent_ <= 1.0)) {
            throw InputError("power utility exponent must lie in (0, 1]");
        }
    }

    Kind kind_;
    double scale_;
    double exponent_;
};

/// U = sum_i u(x_i) p(x_i).
[[nodiscard]] inline double expected_utility(const Lottery &lottery, const UtilityFunction &u) {
    double sum = 0.0;
    for (const auto &o : lottery.outcomes()) {
        sum += u(o.payoff) * o.probability;
    }
    return sum;
}

/// f_n = U_n / sum_m U_m. Expected utilities must be non-negative and not all zero.
[[nodiscard]] inline std::vector<double> utility_factors(std::span<const Lottery> lotteries,
                                                         const UtilityFunction &u) {
    if (lotteries.size() < 2) {
        throw InputError("utility factors need at least two lotteries");
    }
    std::vector<double> us;
    us.reserve(lotteries.size());
    double total = 0.0;
    for (const auto &l : lotteries) {
        const double value = expected_utility(l, u);
        if (value < 0.0) {
            throw InputError("lottery '" + l.label() +
                             "' has negative expected utility; only gains are supported");
        }
        us.push_back(value);
        total += value;
    }
    if (!(total > 0.0)) {
        throw InputError("all expected utilities are zero; utility factors are undefined");
    }
    for (auto &v : us) {
        v /= total;
    }
    return us;
}

/**
 * Pairwise preference: if certainties differ by more than theta the more certain
 * lottery wins, otherwise the one with the larger maximum gain. Returns +1 if
 * `x` is more attractive, -1 if `y` is, 0 on a tie.
 */
[[nodiscard]] inline int attraction_preference(const Lottery &x, const Lottery &y, double theta) {
    const double dc = x.certainty() - y.certainty();
    if (std::abs(dc) > theta) {
        return dc > 0.0 ? 1 : -1;
    }
    if (x.max_gain() != y.max_gain()) {
        return x.max_gain() > y.max_gain() ? 1 : -1;
    }
    return 0;
}

/**
 * Lottery indices, most attractive first. Lotteries are scored by pairwise wins;
 * equal scores are ambiguous and raise InputError so that the caller supplies an
 * explicit ranking instead.
 */
[[nodiscard]] inline std::vector<std::size_t>
attraction_ranking(std::span<const Lottery> lotteries,
                   double theta = kDefaultAttractionThreshold) {
    if (lotteries.size() < 2) {
        throw InputError("attraction ranking needs at least two lotteries");
    }
    if (!(theta >= 0.0)) {
        throw InputError("attraction threshold must be non-negative");
    }
    const std::size_t n = lotteries.size();
    std::vector<int> score(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const int pref = attraction_preference(lotteries[i], lotteries[j], theta);
            score[i] += pref;
            score[j] -= pref;
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (score[order[k]] == score[order[k + 1]]) {
            throw InputError("attraction ranking is ambiguous between '" +
                             lotteries[order[k]].label() + "' and '" +
                             lotteries[order[k + 1]].label() + "'; supply an explicit ranking");
        }
    }
    return order;
}

/// Resolves labels to indices; the labels must be a permutation of the lotteries.
[[nodiscard]] inline std::vector<std::size_t>
ranking_from_labels(std::span<const Lottery> lotteries, std::span<const std::string> labels) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < lotteries.size(); ++i) {
        index.emplace(lotteries[i].label(), i);
    }
    if (labels.size() != lotteries.size()) {
        throw InputError("ranking must list every lottery exactly once");
    }
    std::vector<std::size_t> out;
    std::unordered_set<std::size_t> seen;
    for (const auto &l : labels) {
        const auto it = index.find(l);
        if (it == index.end()) {
            throw InputError("ranking names unknown lottery '" + l + "'");
        }
        if (!seen.insert(it->second).second) {
            throw InputError("ranking lists lottery '" + l + "' twice");
        }
        out.push_back(it->second);
    }
    return out;
}

struct QuarterLawPrediction {
    std::vector<double> f;
    std::vector<double> q;
    std::vector<double> p;
    bool clamped = false;
};

namespace detail {

inline void require_permutation(std::span<const std::size_t> ranking, std::size_t n) {
    if (ranking.size() != n) {
        throw InputError("ranking is not a permutation of the lotteries");
    }
    std::vector<bool> seen(n, false);
    for (auto r : ranking) {
        if (r >= n || seen[r]) {
            throw InputError("ranking is not a permutation of the lotteries");
        }
        seen[r] = true;
    }
}

/// Attraction weights c_k by rank: linear from +1 to -1, scaled to mean |c| = 1.
inline std::vector<double> rank_weights(std::size_t n) {
    std::vector<double> c(n);
    double mean_abs = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        c[k] = 1.0 - 2.0 * static_cast<double>(k) / static_cast<double>(n - 1);
        mean_abs += std::abs(c[k]);
    }
    mean_abs /= static_cast<double>(n);
    for (auto &v : c) {
        v /= mean_abs;
    }
    return c;
}

/// Clamp to [0, 1] and hand the clipped mass to the unclamped entries, in proportion
/// to their current value (equally if they are all zero). Returns whether anything moved.
inline bool clamp_and_rebalance(std::vector<double> &p) {
    bool changed = false;
    std::vector<bool> pinned(p.size(), false);
    for (int iter = 0; iter < 100; ++iter) {
        bool clipped = false;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] < 0.0 || p[i] > 1.0) {
                p[i] = std::clamp(p[i], 0.0, 1.0);
                pinned[i] = true;
                clipped = changed = true;
            }
        }
        const double excess = std::accumulate(p.begin(), p.end(), 0.0) - 1.0;
        if (!clipped || excess == 0.0) {
            break;
        }
        double free_mass = 0.0;
        std::size_t free_count = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!pinned[i]) {
                free_mass += p[i];
                ++free_count;
            }
        }
        if (free_count == 0) {
            break;
        }
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (pinned[i]) {
                continue;
            }
            const double share = free_mass > 0.0 ? p[i] / free_mass
                                                 : 1.0 / static_cast<double>(free_count);
            p[i] -= excess * share;
        }
    }
    return changed;
}

} // namespace detail

/**
 * p = f + q with |q| = 1/4: the more attractive of two prospects gains a quarter,
 * the other loses it. For more prospects the attraction factors are spread
 * linearly over the ranking, keeping sum q = 0 and mean |q| = 1/4. Probabilities
 * that leave [0, 1] are clamped and the clipped mass is redistributed; q is then
 * recomputed as p - f.
 */
[[nodiscard]] inline QuarterLawPrediction quarter_law_predict(std::span<const double> fs,
                                                              std::span<const std::size_t> ranking,
                                                              double tol = kDefaultTolerance) {
    const std::size_t n = fs.size();
    if (n < 2) {
        throw InputError("quarter-law prediction needs at least two prospects");
    }
    if (std::abs(std::accumulate(fs.begin(), fs.end(), 0.0) - 1.0) > tol) {
        throw InputError("utility factors must sum to 1");
    }
    detail::require_permutation(ranking, n);

    QuarterLawPrediction out;
    out.f.assign(fs.begin(), fs.end());
    out.p = out.f;
    const auto weights = detail::rank_weights(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.p[ranking[k]] += kQuarter * weights[k];
    }
    out.clamped = detail::clamp_and_rebalance(out.p);
    out.q.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.q[i] = out.p[i] - out.f[i];
    }
    return out;
}

struct LotteryPrediction {
    std::string label;
    double expected_utility;
    double f;
    double q;
    double p;
};

struct PredictionReport {
    std::vector<LotteryPrediction> lotteries;
    std::vector<std::size_t> attraction_ranking; ///< indices, most attractive first
    bool clamped = false;
};

/// Either the certainty/gain heuristic with threshold theta, or an explicit order of labels.
using AttractionPolicy = std::variant<double, std::vector<std::string>>;

[[nodiscard]] inline PredictionReport
predict(std::span<const Lottery> lotteries, const UtilityFunction &u,
        const AttractionPolicy &policy = kDefaultAttractionThreshold) {
    const auto fs = utility_factors(lotteries, u);
    std::vector<std::size_t> ranking;
    if (const auto *theta = std::get_if<double>(&policy)) {
        ranking = attraction_ranking(lotteries, *theta);
    } else {
        ranking = ranking_from_labels(lotteries, std::get<std::vector<std::string>>(policy));
    }
    const auto q = quarter_law_predict(fs, ranking);

    PredictionReport report;
    report.attraction_ranking = ranking;
    report.clamped = q.clamped;
    for (std::size_t i = 0; i < lotteries.size(); ++i) {
        report.lotteries.push_back({lotteries[i].label(), expected_utility(lotteries[i], u),
                                    q.f[i], q.q[i], q.p[i]});
    }
    return report;
}

struct EmpiricalDeviation {
    std::vector<std::pair<std::string, double>> per_lottery; ///< |p_predicted - p_empirical|
    double max_deviation = 0.0;
};

/// Deviations of predicted choice probabilities from observed choice frequencies.
[[nodiscard]] inline EmpiricalDeviation
compare_to_empirical(const PredictionReport &report,
                     std::span<const std::pair<std::string, double>> empirical,
                     double tol = kDefaultTolerance) {
    double total = 0.0;
    std::unordered_map<std::string, double> freq;
    for (const auto &[label, value] : empirical) {
        if (!(value >= 0.0 && value <= 1.0)) {
            throw InputError("empirical frequency for '" + label + "' outside [0, 1]");
        }
        if (!freq.emplace(label, value).second) {
            throw InputError("duplicate empirical frequency for '" + label + "'");
        }
        total += value;
    }
    if (std::abs(total - 1.0) > tol) {
        throw InputError("empirical frequencies sum to " + std::to_string(total) + ", expected 1");
    }
    if (freq.size() != report.lotteries.size()) {
        throw InputError("empirical frequencies must cover exactly the predicted lotteries");
    }
    EmpiricalDeviation out;
    for (const auto &l : report.lotteries) {
        const auto it = freq.find(l.label);
        if (it == freq.end()) {
            throw InputError("no empirical frequency for lottery '" + l.label + "'");
        }
        const double d = std::abs(l.p - it->second);
        out.per_lottery.emplace_back(l.label, d);
        out.max_deviation = std::max(out.max_deviation, d);
    }
    return out;
}

} // namespace qdt
