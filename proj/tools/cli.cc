// Copyright 2026 The qlsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qlsim/analysis.h"
#include "qlsim/campaign.h"
#include "qlsim/comb.h"
#include "qlsim/config.h"
#include "qlsim/errors.h"
#include "qlsim/records.h"

namespace qlsim {

namespace {

struct SimulateArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 1;
};

struct FitArgs {
    std::string records;
    std::string qubit;
    std::string plot;
    std::size_t bootstrap = 0;
    std::uint64_t seed = 1;
};

struct CombArgs {
    std::string f_rep;
    std::string f_aom;
    std::int64_t n = 0;
    int sign = 1;
    std::optional<std::int64_t> delta_f_aom;
    std::optional<std::int64_t> delta_f_rep;
    std::optional<double> b_rot;
    double tolerance = 0.1;
    double rotational_tolerance = 0.01;
};

struct ReportArgs {
    std::string records;
    std::string qubit;
};

class Table {
   public:
    void row(std::string key, std::string value) {
        width_ = std::max(width_, key.size());
        rows_.emplace_back(std::move(key), std::move(value));
    }

    void print(std::ostream &out) const {
        out << std::left << std::setw(static_cast<int>(width_)) << "quantity" << "  value\n";
        for (const auto &[k, v] : rows_) {
            out << std::left << std::setw(static_cast<int>(width_)) << k << "  " << v << '\n';
        }
    }

   private:
    std::size_t width_ = 8;
    std::vector<std::pair<std::string, std::string>> rows_;
};

Qubit resolve_qubit(const std::string &flag, const std::vector<TrialRecord> &records) {
    if (!flag.empty()) {
        auto q = parse_qubit(flag);
        if (!q) {
            throw std::invalid_argument("--qubit must be low or high");
        }
        return *q;
    }
    for (const auto &r : records) {
        if (auto q = qubit_of_protocol(r.protocol)) {
            return *q;
        }
    }
    throw std::invalid_argument("cannot infer the qubit from the records; pass --qubit");
}

int do_simulate(const SimulateArgs &a, std::ostream &out) {
    ExperimentConfig cfg = load_config(a.config);
    if (a.seed) {
        cfg.seed = *a.seed;
    }
    CampaignSummary s = run_campaign(cfg, a.workers);
    write_outputs(a.out, cfg, s);
    out << "trials_valid = " << s.trials_valid << '\n';
    out << "trials_invalid = " << s.trials_invalid << '\n';
    out << "herald_cycles = " << s.herald_cycles << '\n';
    out << "output = " << a.out << '\n';
    if (s.budget_exhausted) {
        out << "budget_exhausted = true\n";
        return kExitBudget;
    }
    return kExitOk;
}

int do_fit(const FitArgs &a, std::ostream &out) {
    auto records = read_records_csv_file(a.records);
    Qubit qubit = resolve_qubit(a.qubit, records);
    auto points = fringe_points_from_records(records, qubit);
    FringeFit fit = fit_fringe(points);
    write_fit_report(out, fit, qubit, points.size());
    if (a.bootstrap > 0) {
        BootstrapResult b = bootstrap_uncertainty(records, qubit, a.bootstrap, a.seed);
        out << "bootstrap_resamples = " << b.resamples << '\n';
        out << "bootstrap_contrast_sigma = " << format_double(b.sigma_contrast) << '\n';
        out << "bootstrap_phi0_sigma = " << format_double(b.sigma_phi0) << '\n';
    }
    if (!a.plot.empty()) {
        std::ofstream plot(a.plot, std::ios::binary);
        if (!plot) {
            throw std::runtime_error("cannot write '" + a.plot + "'");
        }
        write_fringe_csv(plot, points, fit);
    }
    return kExitOk;
}

int do_comb(const CombArgs &a, std::ostream &out) {
    Table t;
    std::optional<double> f_raman;
    bool have_comb = !a.f_rep.empty() || !a.f_aom.empty() || a.n != 0;
    if (have_comb) {
        if (a.f_rep.empty() || a.f_aom.empty() || a.n == 0) {
            throw std::invalid_argument("--frep-hz, --faom-hz and --n are required together");
        }
        CombParams p{Frequency::parse(a.f_rep), Frequency::parse(a.f_aom), a.n, a.sign};
        p.validate();
        t.row("f_rep_hz", p.f_rep.str());
        t.row("f_aom_hz", p.f_aom.str());
        t.row("n", std::to_string(p.n));
        t.row("sign", a.sign > 0 ? "+1" : "-1");
        try {
            std::int64_t f = raman_frequency(p);
            t.row("f_raman_hz", std::to_string(f));
            f_raman = static_cast<double>(f);
        } catch (const CombError &) {
            f_raman = raman_frequency_approx(p, p.f_aom.to_double());
            t.row("f_raman_hz_approx", format_double(*f_raman));
        }
    }
    if (a.delta_f_aom || a.delta_f_rep) {
        if (!a.delta_f_aom || !a.delta_f_rep) {
            throw std::invalid_argument("--delta-faom-hz and --delta-frep-hz are required together");
        }
        NRecovery r = recover_n(*a.delta_f_aom, *a.delta_f_rep, a.tolerance);
        t.row("delta_f_aom_hz", std::to_string(*a.delta_f_aom));
        t.row("delta_f_rep_hz", std::to_string(*a.delta_f_rep));
        t.row("recovered_n", std::to_string(r.n));
        t.row("n_residual", format_double(r.residual));
    }
    if (a.b_rot) {
        t.row("b_rot_hz", format_double(*a.b_rot));
        t.row("expected_j0_j2_hz", format_double(RotationalModel{*a.b_rot}.energy_hz(2)));
        if (f_raman) {
            RotationalReport r = check_rotational_consistency(*f_raman, RotationalModel{*a.b_rot},
                                                              a.rotational_tolerance);
            t.row("relative_deviation", format_double(r.relative_deviation));
            t.row("rotational_consistent", r.pass ? "true" : "false");
        }
    }
    t.print(out);
    return kExitOk;
}

int do_report(const ReportArgs &a, std::ostream &out) {
    auto records = read_records_csv_file(a.records);
    Qubit qubit = resolve_qubit(a.qubit, records);
    auto points = fringe_points_from_records(records, qubit);
    FringeFit fit = fit_fringe(points);
    PopulationEstimate pop = populations_from_records(records, qubit);
    if (pop.total == 0) {
        throw std::invalid_argument("records contain no population trials (rows without phi_a)");
    }
    auto [p1, p2] = target_populations(pop);
    auto [e1, e2] = target_population_errors(pop);
    out << "qubit = " << to_string(qubit) << '\n';
    out << "population_trials = " << pop.total << '\n';
    out << "scan_points = " << points.size() << '\n';
    out << "contrast_sigma = " << format_double(fit.sigma_contrast()) << '\n';
    write_fidelity_report(out, fidelity(p1, p2, std::min(fit.contrast, 1.0), e1, e2, fit.sigma_contrast()));
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Heralded atom-molecule entanglement simulator", "qlsim"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "Run a heralded Monte Carlo campaign");
    simulate->add_option("--config", sim.config, "Config file")->required();
    simulate->add_option("--out", sim.out, "Output directory")->required();
    simulate->add_option("--seed", sim.seed, "Override the config seed");
    simulate->add_option("--workers", sim.workers, "Parallel trial workers")->check(CLI::PositiveNumber);

    FitArgs fit;
    auto *fit_cmd = app.add_subcommand("fit", "Fit the parity fringe of a record file");
    fit_cmd->add_option("--records", fit.records, "TrialRecord CSV")->required();
    fit_cmd->add_option("--qubit", fit.qubit, "low or high")->required()->check(CLI::IsMember({"low", "high"}));
    fit_cmd->add_option("--plot", fit.plot, "Write phi_a,parity,sigma,model_value CSV");
    fit_cmd->add_option("--bootstrap", fit.bootstrap, "Bootstrap resamples (0 disables)");
    fit_cmd->add_option("--seed", fit.seed, "Bootstrap seed");

    CombArgs comb;
    auto *comb_cmd = app.add_subcommand("comb", "Frequency-comb Raman arithmetic");
    comb_cmd->add_option("--frep-hz", comb.f_rep, "Repetition rate (Hz; decimal or p/q)");
    comb_cmd->add_option("--faom-hz", comb.f_aom, "AOM frequency (Hz; decimal or p/q)");
    comb_cmd->add_option("--n", comb.n, "Comb tooth difference N");
    comb_cmd->add_option("--sign", comb.sign, "+1 or -1")->check(CLI::IsMember({1, -1}));
    comb_cmd->add_option("--delta-faom-hz", comb.delta_f_aom, "AOM step for N recovery");
    comb_cmd->add_option("--delta-frep-hz", comb.delta_f_rep, "Repetition-rate step for N recovery");
    comb_cmd->add_option("--brot-hz", comb.b_rot, "Rotational constant for the J=0->2 check");
    comb_cmd->add_option("--n-tolerance", comb.tolerance, "Maximum N residual");
    comb_cmd->add_option("--rot-tolerance", comb.rotational_tolerance, "Relative rotational tolerance");

    ReportArgs report;
    auto *report_cmd = app.add_subcommand("report", "Fidelity report from a record file");
    report_cmd->add_option("--records", report.records, "TrialRecord CSV")->required();
    report_cmd->add_option("--qubit", report.qubit, "low or high (default: from protocol names)")
        ->check(CLI::IsMember({"low", "high"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "qlsim: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (*simulate) {
            return do_simulate(sim, out);
        }
        if (*fit_cmd) {
            return do_fit(fit, out);
        }
        if (*comb_cmd) {
            return do_comb(comb, out);
        }
        return do_report(report, out);
    } catch (const ConfigError &e) {
        err << "qlsim: " << e.what() << '\n';
        return kExitConfig;
    } catch (const TruncationError &e) {
        err << "qlsim: truncation: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const FitError &e) {
        err << "qlsim: fit: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception &e) {
        err << "qlsim: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace qlsim
