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

// qdt: command-line front end.
//
//   qdt predict    <config> [--theta T] [--tol E] [--format human|records] [--out PATH]
//   qdt validate   <config> ...
//   qdt quarterlaw <config> [--seed N] ...
//
// Exit codes: 0 success, 1 invariant violation, 2 input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qdt/config.hpp"
#include "qdt/error.hpp"
#include "qdt/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitInput = 2;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    double tol = qdt::kDefaultTolerance;
    std::optional<double> theta;
    std::string format = "human";
    std::string out;
    unsigned workers = 1;
};

void add_common(CLI::App &sub, Flags &flags) {
    sub.add_option("config", flags.config, "Experiment configuration (YAML)")
        ->required()
        ->check(CLI::ExistingFile);
    sub.add_option("--seed", flags.seed, "Master seed for Monte Carlo sampling");
    sub.add_option("--tol", flags.tol, "Tolerance of the consistency checks")
        ->check(CLI::PositiveNumber);
    sub.add_option("--theta", flags.theta, "Certainty gap of the attraction heuristic")
        ->check(CLI::NonNegativeNumber);
    sub.add_option("--format", flags.format, "Output format")
        ->check(CLI::IsMember({"human", "records"}));
    sub.add_option("--out", flags.out, "Write the report to this file instead of stdout");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum decision theory engine"};
    app.require_subcommand(1);
    Flags flags;
    auto *predict = app.add_subcommand("predict", "Predict choice probabilities for lotteries");
    auto *validate = app.add_subcommand("validate", "Check the quantum evaluation invariants");
    auto *quarterlaw = app.add_subcommand("quarterlaw", "Monte Carlo check of the quarter law");
    add_common(*predict, flags);
    add_common(*validate, flags);
    add_common(*quarterlaw, flags);
    quarterlaw->add_option("--workers", flags.workers, "Sampling threads (result is unchanged)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        const auto cfg = qdt::load_config(flags.config);
        qdt::RunOptions opts;
        opts.seed = flags.seed;
        opts.tolerance = flags.tol;
        opts.theta = flags.theta;
        opts.workers = flags.workers;

        qdt::ReportDocument doc;
        if (predict->parsed()) {
            doc = qdt::run_predict(cfg, opts);
        } else if (validate->parsed()) {
            doc = qdt::run_validate(cfg, opts);
        } else {
            doc = qdt::run_quarterlaw(cfg, opts);
        }

        const std::string text =
            flags.format == "records" ? qdt::render_records(doc) : qdt::render_human(doc);
        if (flags.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream file(flags.out, std::ios::binary);
            if (!(file << text)) {
                std::cerr << "qdt: cannot write '" << flags.out << "'\n";
                return kExitInput;
            }
        }
        return doc.ok() ? kExitOk : kExitInvariant;
    } catch (const qdt::InputError &e) {
        std::cerr << "qdt: " << flags.config << ": " << e.what() << "\n";
        return kExitInput;
    } catch (const qdt::InvariantViolation &e) {
        std::cerr << "qdt: invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    }
}
