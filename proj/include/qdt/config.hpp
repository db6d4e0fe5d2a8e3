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
 * Experiment configuration: a versioned YAML document describing lotteries,
 * utility, attraction policy, empirical frequencies, an optional quantum
 * section and an optional Monte Carlo section. See docs/config_schema.md.
 *
 * Every error carries the 1-based line and column of the offending node.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "qdt/belief.hpp"
#include "qdt/error.hpp"
#include "qdt/lottery.hpp"
#include "qdt/matrix.hpp"
#include "qdt/quarter_law.hpp"

namespace qdt {

inline constexpr const char *kConfigSchema = "qdt-experiment/1";

class ConfigError : public InputError {
  public:
    ConfigError(const std::string &message, int line, int column)
        : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": " + message),
          line_{line}, column_{column} {}

    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

  private:
    int line_;
    int column_;
};

struct AttractionSpec {
    enum class Mode { heuristic, explicit_ranking };

    Mode mode = Mode::heuristic;
    double theta = kDefaultAttractionThreshold;
    std::vector<std::string> ranking; ///< labels, most attractive first

    friend bool operator==(const AttractionSpec &, const AttractionSpec &) = default;
};

struct QuantumSpec {
    std::variant<StatePreset, CMatrix> state;
    std::vector<Complex> belief_amplitudes; ///< raw; normalized on use

    friend bool operator==(const QuantumSpec &, const QuantumSpec &) = default;
};

struct MonteCarloSpec {
    AttractionDistribution distribution = AttractionDistribution::uniform();
    std::size_t samples = 100000;
    std::uint64_t seed = 0;

    friend bool operator==(const MonteCarloSpec &, const MonteCarloSpec &) = default;
};

struct ExperimentConfig {
    std::string schema = kConfigSchema;
    std::string name;
    std::vector<Lottery> lotteries;
    UtilityFunction utility = UtilityFunction::linear();
    AttractionSpec attraction;
    std::optional<std::vector<std::pair<std::string, double>>> empirical;
    std::optional<QuantumSpec> quantum;
    std::optional<MonteCarloSpec> montecarlo;

    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;

    [[nodiscard]] UncertainUnion uncertainty() const {
        if (!quantum) {
            throw InputError("configuration has no quantum section");
        }
        const auto &b = quantum->belief_amplitudes;
        return UncertainUnion::normalized(uncertainty_space(b.size()), b);
    }

    [[nodiscard]] CompositeSpace composite_space() const {
        return CompositeSpace(choice_space(lotteries), uncertainty().space());
    }

    [[nodiscard]] StatisticalOperator strategic_state() const {
        const CompositeSpace space = composite_space();
        if (const auto *preset = std::get_if<StatePreset>(&quantum->state)) {
            return make_state(*preset, space);
        }
        return StatisticalOperator(std::get<CMatrix>(quantum->state), space.product_space());
    }
};

namespace detail {

[[noreturn]] inline void fail_at(const YAML::Node &node, const std::string &message) {
    const YAML::Mark m = node.Mark();
    throw ConfigError(message, m.line + 1, m.column + 1);
}

template <class T> T scalar_as(const YAML::Node &node, const char *what) {
    if (!node.IsScalar()) {
        fail_at(node, std::string(what) + " must be a scalar");
    }
    try {
        return node.as<T>();
    } catch (const YAML::Exception &) {
        fail_at(node, std::string("cannot read ") + what + " from '" + node.Scalar() + "'");
    }
}

inline YAML::Node required(const YAML::Node &parent, const char *key) {
    if (!parent.IsMap()) {
        fail_at(parent, "expected a mapping");
    }
    YAML::Node child = parent[key];
    if (!child) {
        fail_at(parent, std::string("missing required key '") + key + "'");
    }
    return child;
}

inline void only_keys(const YAML::Node &node, std::initializer_list<const char *> keys) {
    if (!node.IsMap()) {
        fail_at(node, "expected a mapping");
    }
    for (const auto &kv : node) {
        const auto key = kv.first.as<std::string>();
        bool known = false;
        for (const char *k : keys) {
            known = known || key == k;
        }
        if (!known) {
            fail_at(kv.first, "unknown key '" + key + "'");
        }
    }
}

/// `[re, im]`, `"(re, im)"` or a plain real number.
inline Complex parse_complex(const YAML::Node &node) {
    if (node.IsSequence()) {
        if (node.size() != 2) {
            fail_at(node, "complex literal must be [re, im]");
        }
        return {scalar_as<double>(node[0], "real part"), scalar_as<double>(node[1], "imaginary part")};
    }
    if (!node.IsScalar()) {
        fail_at(node, "expected a complex literal");
    }
    const std::string text = node.Scalar();
    if (!text.empty() && text.front() == '(') {
        std::istringstream in(text);
        char open = 0, comma = 0, close = 0;
        double re = 0.0, im = 0.0;
        if (!(in >> open >> re >> comma >> im >> close) || comma != ',' || close != ')' ||
            !(in >> std::ws).eof()) {
            fail_at(node, "malformed complex literal '" + text + "'");
        }
        return {re, im};
    }
    return {scalar_as<double>(node, "complex literal"), 0.0};
}

inline Lottery parse_lottery(const YAML::Node &node) {
    only_keys(node, {"label", "outcomes"});
    const auto label = scalar_as<std::string>(required(node, "label"), "lottery label");
    const YAML::Node outs = required(node, "outcomes");
    if (!outs.IsSequence() || outs.size() == 0) {
        fail_at(outs, "lottery '" + label + "' needs a non-empty outcomes list");
    }
    std::vector<Outcome> outcomes;
    for (const auto &o : outs) {
        only_keys(o, {"payoff", "probability"});
        outcomes.push_back({scalar_as<double>(required(o, "payoff"), "payoff"),
                            scalar_as<double>(required(o, "probability"), "probability")});
    }
    try {
        return Lottery(label, std::move(outcomes));
    } catch (const InputError &e) {
        fail_at(node, e.what());
    }
}

inline UtilityFunction parse_utility(const YAML::Node &node) {
    only_keys(node, {"kind", "scale", "exponent"});
    const auto kind = scalar_as<std::string>(required(node, "kind"), "utility kind");
    const double scale = node["scale"] ? scalar_as<double>(node["scale"], "utility scale") : 1.0;
    try {
        if (kind == "linear") {
            if (node["exponent"]) {
                fail_at(node["exponent"], "linear utility takes no exponent");
            }
            return UtilityFunction::linear(scale);
        }
        if (kind == "power") {
            return UtilityFunction::power(
                scale, scalar_as<double>(required(node, "exponent"), "utility exponent"));
        }
    } catch (const ConfigError &) {
        throw;
    } catch (const InputError &e) {
        fail_at(node, e.what());
    }
    fail_at(node["kind"], "unknown utility kind '" + kind + "' (expected linear or power)");
}

inline StatePreset parse_preset(const YAML::Node &node) {
    const auto name = scalar_as<std::string>(node, "state preset");
    for (auto p : {StatePreset::maximally_mixed, StatePreset::product, StatePreset::correlated}) {
        if (name == to_string(p)) {
            return p;
        }
    }
    fail_at(node, "unknown state preset '" + name + "'");
}

inline CMatrix parse_matrix(const YAML::Node &node) {
    if (!node.IsSequence() || node.size() == 0) {
        fail_at(node, "matrix literal must be a non-empty list of rows");
    }
    const std::size_t n = node.size();
    std::vector<Complex> entries;
    for (const auto &row : node) {
        if (!row.IsSequence() || row.size() != node[0].size()) {
            fail_at(row, "matrix rows must be lists of equal length");
        }
        for (const auto &z : row) {
            entries.push_back(parse_complex(z));
        }
    }
    try {
        return CMatrix(n, node[0].size(), std::move(entries));
    } catch (const InputError &e) {
        fail_at(node, e.what());
    }
}

inline MonteCarloSpec parse_montecarlo(const YAML::Node &node) {
    only_keys(node, {"distribution", "parameters", "lattice_size", "samples", "seed"});
    MonteCarloSpec mc;
    const auto kind = scalar_as<std::string>(required(node, "distribution"), "distribution");
    const std::size_t n =
        node["lattice_size"] ? scalar_as<std::size_t>(node["lattice_size"], "lattice_size") : 2;
    const YAML::Node params = node["parameters"];
    const auto param = [&](const char *key, double fallback) {
        if (params && params.IsMap() && params[key]) {
            return scalar_as<double>(params[key], key);
        }
        return fallback;
    };
    try {
        if (kind == "uniform_magnitude") {
            if (params) {
                only_keys(params, {"low", "high"});
            }
            mc.distribution = AttractionDistribution::uniform(param("low", 0.0), param("high", 0.5), n);
        } else if (kind == "beta_magnitude") {
            if (!params) {
                fail_at(node, "beta_magnitude needs parameters {alpha, beta}");
            }
            only_keys(params, {"alpha", "beta"});
            mc.distribution = AttractionDistribution::beta(
                scalar_as<double>(required(params, "alpha"), "alpha"),
                scalar_as<double>(required(params, "beta"), "beta"), n);
        } else if (kind == "truncated_gaussian") {
            if (!params) {
                fail_at(node, "truncated_gaussian needs parameters {mean, sigma}");
            }
            only_keys(params, {"mean", "sigma"});
            mc.distribution = AttractionDistribution::truncated_gaussian(
                scalar_as<double>(required(params, "mean"), "mean"),
                scalar_as<double>(required(params, "sigma"), "sigma"), n);
        } else {
            fail_at(node["distribution"], "unknown distribution '" + kind + "'");
        }
    } catch (const ConfigError &) {
        throw;
    } catch (const InputError &e) {
        fail_at(params ? params : node, e.what());
    }
    if (node["samples"]) {
        mc.samples = scalar_as<std::size_t>(node["samples"], "samples");
        if (mc.samples == 0) {
            fail_at(node["samples"], "samples must be positive");
        }
    }
    if (node["seed"]) {
        mc.seed = scalar_as<std::uint64_t>(node["seed"], "seed");
    }
    return mc;
}

} // namespace detail

/// Parses and validates a configuration document.
[[nodiscard]] inline ExperimentConfig parse_config(const std::string &source) {
    YAML::Node root;
    try {
        root = YAML::Load(source);
    } catch (const YAML::ParserException &e) {
        throw ConfigError("syntax error: " + e.msg, e.mark.line + 1, e.mark.column + 1);
    }
    if (!root || root.IsNull()) {
        throw ConfigError("syntax error: empty document", 1, 1);
    }
    if (!root.IsMap()) {
        detail::fail_at(root, "syntax error: top level must be a mapping");
    }
    detail::only_keys(root, {"schema", "name", "lotteries", "utility", "attraction", "empirical",
                             "quantum", "quarterlaw"});

    ExperimentConfig cfg;
    const YAML::Node schema = detail::required(root, "schema");
    cfg.schema = detail::scalar_as<std::string>(schema, "schema");
    if (cfg.schema != kConfigSchema) {
        detail::fail_at(schema, "unsupported schema '" + cfg.schema + "' (expected " +
                                    kConfigSchema + ")");
    }
    if (root["name"]) {
        cfg.name = detail::scalar_as<std::string>(root["name"], "name");
    }

    if (const YAML::Node lots = root["lotteries"]) {
        if (!lots.IsSequence()) {
            detail::fail_at(lots, "lotteries must be a list");
        }
        std::unordered_set<std::string> labels;
        for (const auto &l : lots) {
            cfg.lotteries.push_back(detail::parse_lottery(l));
            if (!labels.insert(cfg.lotteries.back().label()).second) {
                detail::fail_at(l, "duplicate lottery label '" + cfg.lotteries.back().label() + "'");
            }
        }
        if (cfg.lotteries.size() < 2) {
            detail::fail_at(lots, "at least two lotteries are required");
        }
    }

    if (const YAML::Node u = root["utility"]) {
        cfg.utility = detail::parse_utility(u);
    }

    if (const YAML::Node a = root["attraction"]) {
        detail::only_keys(a, {"mode", "theta", "ranking"});
        const auto mode = detail::scalar_as<std::string>(detail::required(a, "mode"), "mode");
        if (mode == "heuristic") {
            cfg.attraction.mode = AttractionSpec::Mode::heuristic;
            if (a["theta"]) {
                cfg.attraction.theta = detail::scalar_as<double>(a["theta"], "theta");
                if (!(cfg.attraction.theta >= 0.0)) {
                    detail::fail_at(a["theta"], "theta must be non-negative");
                }
            }
            if (a["ranking"]) {
                detail::fail_at(a["ranking"], "heuristic mode takes no ranking");
            }
        } else if (mode == "explicit") {
            cfg.attraction.mode = AttractionSpec::Mode::explicit_ranking;
            const YAML::Node r = detail::required(a, "ranking");
            if (!r.IsSequence()) {
                detail::fail_at(r, "ranking must be a list of lottery labels");
            }
            for (const auto &l : r) {
                cfg.attraction.ranking.push_back(detail::scalar_as<std::string>(l, "label"));
            }
            try {
                (void)ranking_from_labels(cfg.lotteries, cfg.attraction.ranking);
            } catch (const InputError &e) {
                detail::fail_at(r, e.what());
            }
        } else {
            detail::fail_at(a["mode"], "unknown attraction mode '" + mode +
                                           "' (expected heuristic or explicit)");
        }
    }

    if (const YAML::Node e = root["empirical"]) {
        if (!e.IsMap()) {
            detail::fail_at(e, "empirical must map lottery labels to frequencies");
        }
        std::vector<std::pair<std::string, double>> freq;
        double total = 0.0;
        for (const auto &kv : e) {
            const auto label = kv.first.as<std::string>();
            const bool known = std::any_of(cfg.lotteries.begin(), cfg.lotteries.end(),
                                           [&](const Lottery &l) { return l.label() == label; });
            if (!known) {
                detail::fail_at(kv.first, "empirical frequency for unknown lottery '" + label + "'");
            }
            const double v = detail::scalar_as<double>(kv.second, "frequency");
            if (!(v >= 0.0 && v <= 1.0)) {
                detail::fail_at(kv.second, "frequency for '" + label + "' outside [0, 1]");
            }
            freq.emplace_back(label, v);
            total += v;
        }
        if (freq.size() != cfg.lotteries.size()) {
            detail::fail_at(e, "empirical frequencies must cover every lottery");
        }
        if (std::abs(total - 1.0) > kDefaultTolerance) {
            detail::fail_at(e, "empirical frequencies sum to " + std::to_string(total) +
                                   ", expected 1");
        }
        cfg.empirical = std::move(freq);
    }

    if (const YAML::Node q = root["quantum"]) {
        detail::only_keys(q, {"state", "belief_amplitudes"});
        if (cfg.lotteries.empty()) {
            detail::fail_at(q, "quantum section needs lotteries");
        }
        QuantumSpec spec{StatePreset::maximally_mixed, {}};
        const YAML::Node state = detail::required(q, "state");
        detail::only_keys(state, {"preset", "matrix"});
        if (state["preset"] && state["matrix"]) {
            detail::fail_at(state, "state takes either a preset or a matrix, not both");
        }
        if (state["preset"]) {
            spec.state = detail::parse_preset(state["preset"]);
        } else if (state["matrix"]) {
            spec.state = detail::parse_matrix(state["matrix"]);
        } else {
            detail::fail_at(state, "state needs a preset or a matrix");
        }
        if (const YAML::Node b = q["belief_amplitudes"]) {
            if (!b.IsSequence() || b.size() == 0) {
                detail::fail_at(b, "belief_amplitudes must be a non-empty list");
            }
            for (const auto &z : b) {
                spec.belief_amplitudes.push_back(detail::parse_complex(z));
            }
        } else {
            const auto defaults = BeliefState().amplitudes();
            spec.belief_amplitudes.assign(defaults.begin(), defaults.end());
        }
        cfg.quantum = std::move(spec);
        try {
            (void)cfg.strategic_state();
        } catch (const InputError &e) {
            detail::fail_at(q, e.what());
        }
    }

    if (const YAML::Node mc = root["quarterlaw"]) {
        cfg.montecarlo = detail::parse_montecarlo(mc);
    }
    return cfg;
}

[[nodiscard]] inline ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open configuration file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace detail {

inline void emit_complex(YAML::Emitter &out, Complex z) {
    out << YAML::Flow << YAML::BeginSeq << z.real() << z.imag() << YAML::EndSeq;
}

} // namespace detail

/// Serializes a configuration; parse_config(serialize_config(c)) == c.
[[nodiscard]] inline std::string serialize_config(const ExperimentConfig &cfg) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "schema" << YAML::Value << cfg.schema;
    if (!cfg.name.empty()) {
        out << YAML::Key << "name" << YAML::Value << cfg.name;
    }
    if (!cfg.lotteries.empty()) {
        out << YAML::Key << "lotteries" << YAML::Value << YAML::BeginSeq;
        for (const auto &l : cfg.lotteries) {
            out << YAML::BeginMap << YAML::Key << "label" << YAML::Value << l.label();
            out << YAML::Key << "outcomes" << YAML::Value << YAML::BeginSeq;
            for (const auto &o : l.outcomes()) {
                out << YAML::Flow << YAML::BeginMap << YAML::Key << "payoff" << YAML::Value
                    << o.payoff << YAML::Key << "probability" << YAML::Value << o.probability
                    << YAML::EndMap;
            }
            out << YAML::EndSeq << YAML::EndMap;
        }
        out << YAML::EndSeq;
    }

    out << YAML::Key << "utility" << YAML::Value << YAML::BeginMap;
    if (cfg.utility.kind() == UtilityFunction::Kind::linear) {
        out << YAML::Key << "kind" << YAML::Value << "linear";
        out << YAML::Key << "scale" << YAML::Value << cfg.utility.scale();
    } else {
        out << YAML::Key << "kind" << YAML::Value << "power";
        out << YAML::Key << "scale" << YAML::Value << cfg.utility.scale();
        out << YAML::Key << "exponent" << YAML::Value << cfg.utility.exponent();
    }
    out << YAML::EndMap;

    out << YAML::Key << "attraction" << YAML::Value << YAML::BeginMap;
    if (cfg.attraction.mode == AttractionSpec::Mode::heuristic) {
        out << YAML::Key << "mode" << YAML::Value << "heuristic";
        out << YAML::Key << "theta" << YAML::Value << cfg.attraction.theta;
    } else {
        out << YAML::Key << "mode" << YAML::Value << "explicit";
        out << YAML::Key << "ranking" << YAML::Value << YAML::Flow << cfg.attraction.ranking;
    }
    out << YAML::EndMap;

    if (cfg.empirical) {
        out << YAML::Key << "empirical" << YAML::Value << YAML::BeginMap;
        for (const auto &[label, v] : *cfg.empirical) {
            out << YAML::Key << label << YAML::Value << v;
        }
        out << YAML::EndMap;
    }

    if (cfg.quantum) {
        out << YAML::Key << "quantum" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "state" << YAML::Value << YAML::BeginMap;
        if (const auto *preset = std::get_if<StatePreset>(&cfg.quantum->state)) {
            out << YAML::Key << "preset" << YAML::Value << to_string(*preset);
        } else {
            const auto &m = std::get<CMatrix>(cfg.quantum->state);
            out << YAML::Key << "matrix" << YAML::Value << YAML::BeginSeq;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                out << YAML::Flow << YAML::BeginSeq;
                for (std::size_t j = 0; j < m.cols(); ++j) {
                    detail::emit_complex(out, m(i, j));
                }
                out << YAML::EndSeq;
            }
            out << YAML::EndSeq;
        }
        out << YAML::EndMap;
        out << YAML::Key << "belief_amplitudes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (const auto &z : cfg.quantum->belief_amplitudes) {
            detail::emit_complex(out, z);
        }
        out << YAML::EndSeq << YAML::EndMap;
    }

    if (cfg.montecarlo) {
        const auto &mc = *cfg.montecarlo;
        const auto &d = mc.distribution;
        out << YAML::Key << "quarterlaw" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "distribution" << YAML::Value << to_string(d.kind());
        out << YAML::Key << "parameters" << YAML::Value << YAML::Flow << YAML::BeginMap;
        switch (d.kind()) {
        case AttractionDistribution::Kind::uniform_magnitude:
            out << YAML::Key << "low" << YAML::Value << d.first() << YAML::Key << "high"
                << YAML::Value << d.second();
            break;
        case AttractionDistribution::Kind::beta_magnitude:
            out << YAML::Key << "alpha" << YAML::Value << d.first() << YAML::Key << "beta"
                << YAML::Value << d.second();
            break;
        case AttractionDistribution::Kind::truncated_gaussian:
            out << YAML::Key << "mean" << YAML::Value << d.first() << YAML::Key << "sigma"
                << YAML::Value << d.second();
            break;
        }
        out << YAML::EndMap;
        out << YAML::Key << "lattice_size" << YAML::Value << d.lattice_size();
        out << YAML::Key << "samples" << YAML::Value << mc.samples;
        out << YAML::Key << "seed" << YAML::Value << mc.seed;
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

} // namespace qdt
