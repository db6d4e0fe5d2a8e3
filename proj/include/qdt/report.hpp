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
 * The three front-end pipelines (predict, validate, quarterlaw) and the two
 * renderings of their results: a human-readable report and a line-delimited
 * JSON record stream. Numbers are written with 12 significant digits.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qdt/belief.hpp"
#include "qdt/config.hpp"
#include "qdt/entanglement.hpp"
#include "qdt/error.hpp"
#include "qdt/lottery.hpp"
#include "qdt/prospect.hpp"
#include "qdt/quarter_law.hpp"

namespace qdt {

inline constexpr const char *kToolVersion = "0.1.0";

/// Allowed slack of the Monte Carlo quarter-law check beyond three standard errors.
inline constexpr double kQuarterLawSlack = 0.005;

struct RunOptions {
    std::optional<std::uint64_t> seed;
    double tolerance = kDefaultTolerance;
    std::optional<double> theta;
    unsigned workers = 1;
};

/// One row of a report's internal consistency section.
struct Check {
    std::string name;
    double measured;
    double threshold;
    bool pass;
    bool diagnostic = false; ///< informational; never fails a report
    std::string detail;
};

struct QuantumSection {
    std::string state;
    std::vector<std::string> labels;
    std::vector<Complex> belief;
    std::vector<ProbabilityDecomposition> raw;
    std::vector<ProbabilityDecomposition> normalized;
    std::vector<EntanglementGate> gates;
    SeparabilityReport state_product;
    double povm_deviation;
};

struct ReportDocument {
    std::string command;
    std::string config_name;
    std::optional<std::uint64_t> seed;
    double tolerance = kDefaultTolerance;
    std::optional<double> theta;
    std::vector<std::string> ranking_labels;

    std::optional<PredictionReport> prediction;
    std::optional<EmpiricalDeviation> deviation;
    std::optional<std::vector<std::pair<std::string, double>>> empirical;
    std::optional<QuantumSection> quantum;
    std::optional<AttractionDistribution> distribution;
    std::optional<MCResult> montecarlo;
    std::vector<Check> checks;

    [[nodiscard]] bool ok() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const Check &c) { return c.diagnostic || c.pass; });
    }
};

namespace detail {

inline Check bound_check(std::string name, double measured, double threshold) {
    return {std::move(name), measured, threshold, std::abs(measured) <= threshold, false, {}};
}

inline void add_prediction_checks(ReportDocument &doc) {
    const auto &lots = doc.prediction->lotteries;
    double sf = 0.0, sq = 0.0, sp = 0.0;
    for (const auto &l : lots) {
        sf += l.f;
        sq += l.q;
        sp += l.p;
        doc.checks.push_back(bound_check("prediction.decomposition[" + l.label + "]",
                                         l.p - (l.f + l.q), doc.tolerance));
        const double outside = std::max({0.0, -l.p, l.p - 1.0});
        doc.checks.push_back(bound_check("prediction.range[" + l.label + "]", outside,
                                         doc.tolerance));
    }
    doc.checks.push_back(bound_check("prediction.sum_f", sf - 1.0, doc.tolerance));
    doc.checks.push_back(bound_check("prediction.sum_q", sq, doc.tolerance));
    doc.checks.push_back(bound_check("prediction.sum_p", sp - 1.0, doc.tolerance));
}

inline void run_prediction(const ExperimentConfig &cfg, const RunOptions &opts,
                           ReportDocument &doc) {
    if (cfg.lotteries.size() < 2) {
        throw InputError("configuration needs at least two lotteries");
    }
    AttractionPolicy policy = cfg.attraction.theta;
    if (cfg.attraction.mode == AttractionSpec::Mode::explicit_ranking) {
        policy = cfg.attraction.ranking;
    } else {
        doc.theta = opts.theta.value_or(cfg.attraction.theta);
        policy = *doc.theta;
    }
    doc.prediction = predict(cfg.lotteries, cfg.utility, policy);
    for (auto idx : doc.prediction->attraction_ranking) {
        doc.ranking_labels.push_back(cfg.lotteries[idx].label());
    }
    if (cfg.empirical) {
        doc.empirical = cfg.empirical;
        doc.deviation = compare_to_empirical(*doc.prediction, *cfg.empirical, doc.tolerance);
    }
    add_prediction_checks(doc);
}

inline void run_quantum(const ExperimentConfig &cfg, ReportDocument &doc, bool enforce_gate) {
    const UncertainUnion b = cfg.uncertainty();
    const ProspectLattice lattice = lottery_lattice(cfg.lotteries, b);
    const StatisticalOperator rho = cfg.strategic_state();

    QuantumSection qs{};
    if (const auto *preset = std::get_if<StatePreset>(&cfg.quantum->state)) {
        qs.state = to_string(*preset);
    } else {
        qs.state = "matrix";
    }
    for (const auto &l : cfg.lotteries) {
        qs.labels.push_back(l.label());
    }
    qs.belief.assign(b.amplitudes().begin(), b.amplitudes().end());
    qs.raw = lattice_probabilities(rho, lattice, false, doc.tolerance);
    qs.normalized = lattice_probabilities(rho, lattice, true, doc.tolerance);
    qs.povm_deviation = povm_deviation(lattice);
    qs.state_product = is_product_state(rho, lattice.space().dims());

    // validate shows gate violations as failed rows instead of raising.
    qs.gates = prospect_entanglement_gate(rho, lattice, kSeparabilityTolerance, enforce_gate);

    double sp = 0.0, sf = 0.0, sq = 0.0;
    for (std::size_t k = 0; k < qs.raw.size(); ++k) {
        const auto &r = qs.raw[k];
        const auto &n = qs.normalized[k];
        sp += n.p;
        sf += n.f;
        sq += n.q;
        doc.checks.push_back(bound_check("quantum.decomposition[" + qs.labels[k] + "]",
                                         r.p - (r.f + r.q), doc.tolerance));
    }
    doc.checks.push_back(bound_check("quantum.sum_p", sp - 1.0, doc.tolerance));
    doc.checks.push_back(bound_check("quantum.sum_f", sf - 1.0, doc.tolerance));
    doc.checks.push_back(bound_check("quantum.alternation", sq, doc.tolerance));
    doc.checks.push_back({"quantum.povm_deviation", qs.povm_deviation, doc.tolerance,
                          qs.povm_deviation <= doc.tolerance, true,
                          qs.povm_deviation <= doc.tolerance ? "resolution of unity holds"
                                                             : "resolution of unity fails"});
    doc.checks.push_back({"quantum.state_product", qs.state_product.residual,
                          qs.state_product.tolerance, qs.state_product.separable, true,
                          qs.state_product.separable ? "product" : "not a product"});

    for (std::size_t k = 0; k < qs.gates.size(); ++k) {
        const auto &g = qs.gates[k];
        doc.checks.push_back({"quantum.operator_separability[" + qs.labels[k] + "]",
                              g.operator_residual, kSeparabilityTolerance,
                              !g.operator_entangled, true,
                              g.operator_entangled ? "entangled" : "separable"});
        const bool gate_ok = !g.q_must_vanish || std::abs(g.q_normalized) <= kSeparabilityTolerance;
        doc.checks.push_back({"quantum.interference_gate[" + qs.labels[k] + "]",
                              std::abs(g.q_normalized), kSeparabilityTolerance, gate_ok, false,
                              g.q_must_vanish ? "q must vanish" : "q may be nonzero"});
    }
    doc.quantum = std::move(qs);
}

inline ReportDocument new_document(const char *command, const ExperimentConfig &cfg,
                                   const RunOptions &opts) {
    ReportDocument doc;
    doc.command = command;
    doc.config_name = cfg.name;
    doc.seed = opts.seed;
    doc.tolerance = opts.tolerance;
    return doc;
}

} // namespace detail

/**
 * Quarter-law prediction for the configured lotteries, deviations against the
 * empirical frequencies when given, and the quantum lattice evaluation when a
 * quantum section is present. Throws InvariantViolation if any internal check
 * fails, so no inconsistent report is ever produced.
 */
[[nodiscard]] inline ReportDocument run_predict(const ExperimentConfig &cfg,
                                                const RunOptions &opts = {}) {
    auto doc = detail::new_document("predict", cfg, opts);
    detail::run_prediction(cfg, opts, doc);
    if (cfg.quantum) {
        detail::run_quantum(cfg, doc, true);
    }
    for (const auto &c : doc.checks) {
        if (!c.diagnostic && !c.pass) {
            throw InvariantViolation("consistency check '" + c.name + "' failed (measured " +
                                     std::to_string(c.measured) + ")");
        }
    }
    return doc;
}

/// Every executable identity of the quantum evaluation as a pass/fail row.
[[nodiscard]] inline ReportDocument run_validate(const ExperimentConfig &cfg,
                                                 const RunOptions &opts = {}) {
    if (!cfg.quantum) {
        throw InputError("validate needs a quantum section in the configuration");
    }
    auto doc = detail::new_document("validate", cfg, opts);
    detail::run_prediction(cfg, opts, doc);
    detail::run_quantum(cfg, doc, false);
    return doc;
}

/**
 * Monte Carlo estimate of the aggregate attraction factor. For the uniform
 * magnitude family the result must lie within 3 standard errors + 0.005 of 1/4.
 */
[[nodiscard]] inline ReportDocument run_quarterlaw(const ExperimentConfig &cfg,
                                                   const RunOptions &opts = {}) {
    if (!cfg.montecarlo) {
        throw InputError("quarterlaw needs a quarterlaw section in the configuration");
    }
    auto doc = detail::new_document("quarterlaw", cfg, opts);
    const auto &mc = *cfg.montecarlo;
    const std::uint64_t seed = opts.seed.value_or(mc.seed);
    doc.seed = seed;
    doc.distribution = mc.distribution;
    doc.montecarlo = estimate_aggregate(mc.distribution, mc.samples, seed, opts.workers);

    const double gap = std::abs(doc.montecarlo->aggregate_abs_q - kQuarter);
    const double allowed = 3.0 * doc.montecarlo->standard_error + kQuarterLawSlack;
    const bool uniform =
        mc.distribution.kind() == AttractionDistribution::Kind::uniform_magnitude;
    doc.checks.push_back({"quarterlaw.aggregate_gap", gap, allowed, gap <= allowed, !uniform,
                          uniform ? "asserted for uniform magnitudes" : "informational"});
    if (!doc.ok()) {
        throw InvariantViolation("aggregate attraction factor " +
                                 std::to_string(doc.montecarlo->aggregate_abs_q) +
                                 " is farther than " + std::to_string(allowed) + " from 1/4");
    }
    return doc;
}

namespace detail {

/// Rounds to 12 significant digits; -0 becomes 0.
inline double round12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

inline std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", round12(x));
    return buf;
}

inline nlohmann::ordered_json complex_json(Complex z) {
    return nlohmann::ordered_json::array({round12(z.real()), round12(z.imag())});
}

} // namespace detail

/// One JSON object per line.
[[nodiscard]] inline std::string render_records(const ReportDocument &doc) {
    using json = nlohmann::ordered_json;
    using detail::round12;
    std::ostringstream out;
    const auto emit = [&](const json &j) { out << j.dump() << '\n'; };

    json meta{{"record", "meta"},
              {"tool", "qdt"},
              {"version", kToolVersion},
              {"command", doc.command},
              {"config", doc.config_name},
              {"tolerance", doc.tolerance}};
    meta["seed"] = doc.seed ? json(*doc.seed) : json(nullptr);
    meta["theta"] = doc.theta ? json(round12(*doc.theta)) : json(nullptr);
    emit(meta);

    if (doc.prediction) {
        for (std::size_t i = 0; i < doc.prediction->lotteries.size(); ++i) {
            const auto &l = doc.prediction->lotteries[i];
            const auto &order = doc.prediction->attraction_ranking;
            const auto rank = std::find(order.begin(), order.end(), i) - order.begin() + 1;
            emit(json{{"record", "lottery"},
                      {"label", l.label},
                      {"expected_utility", round12(l.expected_utility)},
                      {"f", round12(l.f)},
                      {"q", round12(l.q)},
                      {"p", round12(l.p)},
                      {"attraction_rank", rank}});
        }
        emit(json{{"record", "ranking"},
                  {"order", doc.ranking_labels},
                  {"clamped", doc.prediction->clamped}});
    }
    if (doc.deviation) {
        for (std::size_t i = 0; i < doc.deviation->per_lottery.size(); ++i) {
            const auto &[label, d] = doc.deviation->per_lottery[i];
            double empirical = 0.0;
            for (const auto &[l, v] : *doc.empirical) {
                if (l == label) {
                    empirical = v;
                }
            }
            emit(json{{"record", "deviation"},
                      {"label", label},
                      {"predicted", round12(doc.prediction->lotteries[i].p)},
                      {"empirical", round12(empirical)},
                      {"deviation", round12(d)}});
        }
        emit(json{{"record", "deviation_max"}, {"value", round12(doc.deviation->max_deviation)}});
    }
    if (doc.quantum) {
        const auto &q = *doc.quantum;
        json belief = json::array();
        for (const auto &z : q.belief) {
            belief.push_back(detail::complex_json(z));
        }
        emit(json{{"record", "state"},
                  {"state", q.state},
                  {"belief_amplitudes", belief},
                  {"product_residual", round12(q.state_product.residual)},
                  {"product", q.state_product.separable},
                  {"povm_deviation", round12(q.povm_deviation)}});
        for (std::size_t k = 0; k < q.raw.size(); ++k) {
            const auto &g = q.gates[k];
            emit(json{{"record", "prospect"},
                      {"label", q.labels[k]},
                      {"p_raw", round12(q.raw[k].p)},
                      {"f_raw", round12(q.raw[k].f)},
                      {"q_raw", round12(q.raw[k].q)},
                      {"p", round12(q.normalized[k].p)},
                      {"f", round12(q.normalized[k].f)},
                      {"q", round12(q.normalized[k].q)},
                      {"operator_residual", round12(g.operator_residual)},
                      {"operator_entangled", g.operator_entangled},
                      {"q_must_vanish", g.q_must_vanish}});
        }
    }
    if (doc.montecarlo) {
        const auto &d = *doc.distribution;
        emit(json{{"record", "montecarlo"},
                  {"distribution", to_string(d.kind())},
                  {"parameters", json::array({round12(d.first()), round12(d.second())})},
                  {"lattice_size", d.lattice_size()},
                  {"samples", doc.montecarlo->sample_count},
                  {"seed", doc.montecarlo->seed},
                  {"aggregate_abs_q", round12(doc.montecarlo->aggregate_abs_q)},
                  {"standard_error", round12(doc.montecarlo->standard_error)}});
    }
    for (const auto &c : doc.checks) {
        emit(json{{"record", "check"},
                  {"name", c.name},
                  {"measured", round12(c.measured)},
                  {"threshold", round12(c.threshold)},
                  {"pass", c.pass},
                  {"diagnostic", c.diagnostic},
                  {"detail", c.detail}});
    }
    emit(json{{"record", "summary"}, {"ok", doc.ok()}});
    return out.str();
}

[[nodiscard]] inline std::string render_human(const ReportDocument &doc) {
    using detail::fmt12;
    std::ostringstream out;
    out << "qdt " << kToolVersion << " " << doc.command;
    if (!doc.config_name.empty()) {
        out << " (" << doc.config_name << ")";
    }
    out << "\n";
    out << "tolerance " << fmt12(doc.tolerance);
    if (doc.seed) {
        out << ", seed " << *doc.seed;
    }
    if (doc.theta) {
        out << ", attraction threshold " << fmt12(*doc.theta);
    }
    out << "\n";

    if (doc.prediction) {
        out << "\nPrediction (quarter law)\n";
        char line[256];
        std::snprintf(line, sizeof line, "  %-12s %14s %14s %14s %14s\n", "lottery", "U", "f", "q",
                      "p");
        out << line;
        for (const auto &l : doc.prediction->lotteries) {
            std::snprintf(line, sizeof line, "  %-12s %14s %14s %14s %14s\n", l.label.c_str(),
                          fmt12(l.expected_utility).c_str(), fmt12(l.f).c_str(),
                          fmt12(l.q).c_str(), fmt12(l.p).c_str());
            out << line;
        }
        out << "  attraction order:";
        for (const auto &l : doc.ranking_labels) {
            out << " " << l;
        }
        out << (doc.prediction->clamped ? "  (probabilities clamped)\n" : "\n");
    }
    if (doc.deviation) {
        out << "\nComparison with observed choice frequencies\n";
        for (std::size_t i = 0; i < doc.deviation->per_lottery.size(); ++i) {
            const auto &[label, d] = doc.deviation->per_lottery[i];
            out << "  " << label << ": |p - p_obs| = " << fmt12(d) << "\n";
        }
        out << "  max deviation " << fmt12(doc.deviation->max_deviation) << "\n";
    }
    if (doc.quantum) {
        const auto &q = *doc.quantum;
        out << "\nQuantum evaluation (state: " << q.state << ")\n";
        out << "  belief amplitudes:";
        for (const auto &z : q.belief) {
            out << " (" << fmt12(z.real()) << ", " << fmt12(z.imag()) << ")";
        }
        out << "\n  strategic state " << (q.state_product.separable ? "is" : "is not")
            << " a product state (residual " << fmt12(q.state_product.residual) << ")\n";
        out << "  POVM deviation " << fmt12(q.povm_deviation) << "\n";
        char line[512];
        std::snprintf(line, sizeof line, "  %-12s %16s %16s %16s %16s %16s %16s  %s\n", "lottery",
                      "p_raw", "f_raw", "q_raw", "p", "f", "q", "operator");
        out << line;
        for (std::size_t k = 0; k < q.raw.size(); ++k) {
            std::snprintf(line, sizeof line, "  %-12s %16s %16s %16s %16s %16s %16s  %s\n",
                          q.labels[k].c_str(), fmt12(q.raw[k].p).c_str(),
                          fmt12(q.raw[k].f).c_str(), fmt12(q.raw[k].q).c_str(),
                          fmt12(q.normalized[k].p).c_str(), fmt12(q.normalized[k].f).c_str(),
                          fmt12(q.normalized[k].q).c_str(),
                          q.gates[k].operator_entangled ? "entangled" : "separable");
            out << line;
        }
    }
    if (doc.montecarlo) {
        const auto &d = *doc.distribution;
        out << "\nQuarter law Monte Carlo\n";
        out << "  distribution " << to_string(d.kind()) << " (" << fmt12(d.first()) << ", "
            << fmt12(d.second()) << "), lattice size " << d.lattice_size() << "\n";
        out << "  samples " << doc.montecarlo->sample_count << ", seed "
            << doc.montecarlo->seed << "\n";
        out << "  aggregate |q| = " << fmt12(doc.montecarlo->aggregate_abs_q) << " +/- "
            << fmt12(doc.montecarlo->standard_error) << "\n";
    }
    if (!doc.checks.empty()) {
        out << "\nChecks\n";
        for (const auto &c : doc.checks) {
            const char *status = c.diagnostic ? "info" : (c.pass ? "pass" : "FAIL");
            out << "  [" << status << "] " << c.name << " = " << fmt12(c.measured)
                << " (limit " << fmt12(c.threshold) << ")";
            if (!c.detail.empty()) {
                out << " " << c.detail;
            }
            out << "\n";
        }
    }
    out << "\n" << (doc.ok() ? "OK" : "FAILED") << "\n";
    return out.str();
}

} // namespace qdt
