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

#include "qlsim/campaign.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "qlsim/analysis.h"
#include "qlsim/comb.h"
#include "qlsim/errors.h"
#include "qlsim/protocols.h"

namespace qlsim {

namespace {

constexpr std::size_t kPopulationSlot = std::numeric_limits<std::size_t>::max();

MolLevel draw_prior(const MoleculePrior &prior, Rng &rng) {
    double u = std::uniform_real_distribution<double>(0, 1)(rng);
    if (u < prior.minus32) {
        return MolLevel::M_minus32;
    }
    if (u < prior.minus32 + prior.minus52) {
        return MolLevel::M_minus52;
    }
    return MolLevel::Leaked;
}

std::string population_protocol_name(const ExperimentConfig &cfg) {
    if (is_scan(cfg.protocol)) {
        return *qubit_of(cfg.protocol) == Qubit::Low ? "population_L" : "population_H";
    }
    return std::string(to_string(cfg.protocol));
}

template <typename F>
auto parallel_map(std::uint64_t first, std::size_t count, std::size_t workers, F &&f)
    -> std::vector<decltype(f(first))> {
    std::vector<decltype(f(first))> out(count);
    std::size_t k = std::min(workers, count);
    if (k <= 1) {
        for (std::size_t i = 0; i < count; i++) {
            out[i] = f(first + i);
        }
        return out;
    }
    std::vector<std::exception_ptr> errors(k);
    std::vector<std::thread> threads;
    threads.reserve(k);
    for (std::size_t w = 0; w < k; w++) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += k) {
                    out[i] = f(first + i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

struct HeraldOutcome {
    bool success;
    std::size_t attempts;
};

HeraldOutcome run_herald_cycle(const ExperimentConfig &cfg, std::uint64_t cycle) {
    Rng rng = make_stream(cfg.seed, StreamDomain::Herald, cycle);
    TrialContext ctx(cfg.noise, cfg.pulses, rng, cfg.n_max, cfg.detect_threshold);
    StateVector state = molecule_state(draw_prior(cfg.prior, rng), cfg.n_max);
    ProtocolResult r = herald_prepare_minus32(std::move(state), cfg.herald, ctx);
    return HeraldOutcome{r.success, r.attempts};
}

struct PrepareResult {
    TrialRecord record;
    bool leaked = false;
};

// Herald cycle followed by a QLS identification of the molecule.
PrepareResult run_prepare_cycle(const ExperimentConfig &cfg, std::uint64_t cycle) {
    Rng rng = make_stream(cfg.seed, StreamDomain::Herald, cycle);
    TrialContext ctx(cfg.noise, cfg.pulses, rng, cfg.n_max, cfg.detect_threshold);
    StateVector state = molecule_state(draw_prior(cfg.prior, rng), cfg.n_max);
    ProtocolResult r = herald_prepare_minus32(std::move(state), cfg.herald, ctx);
    StateVector s = std::move(r.final_state);

    const ProtocolPulses &p = cfg.pulses;
    MolOutcome mol = MolOutcome::Other;
    ctx.reset(s);
    ctx.pulse(s, p.mol_pump);
    ctx.pulse(s, p.atom_readout);
    AtomDetection det = ctx.detect(s);
    if (det.outcome == AtomLevel::S) {
        mol = MolOutcome::Minus32;
    } else {
        ctx.reset(s);
        ctx.pulse(s, p.mol_pump_mirror);
        ctx.pulse(s, p.atom_readout);
        det = ctx.detect(s);
        if (det.outcome == AtomLevel::S) {
            mol = MolOutcome::Minus52;
        }
    }
    PrepareResult out;
    out.record.trial_id = cycle;
    out.record.protocol = "prepare";
    out.record.atom_outcome = det.outcome;
    out.record.mol_outcome = mol;
    out.record.photon_counts = det.photon_counts;
    out.record.herald_attempts = static_cast<std::uint32_t>(r.attempts);
    out.record.valid = r.success;
    out.leaked = s.leaked();
    return out;
}

class CampaignRunner {
   public:
    CampaignRunner(const ExperimentConfig &cfg, std::size_t workers, CampaignSummary &summary)
        : cfg_(cfg), workers_(std::max<std::size_t>(1, workers)), s_(summary),
          schedule_(make_stream(cfg.seed, StreamDomain::Schedule, 0)) {
    }

    void run_prepare() {
        std::uint64_t total = cfg_.targets.front();
        std::uint64_t first = 0;
        const std::uint64_t batch = 4096;
        s_.valid_counts = {0};
        s_.invalid_counts = {0};
        while (first < total) {
            std::size_t n = static_cast<std::size_t>(std::min(batch, total - first));
            auto results = parallel_map(first, n, workers_, [&](std::uint64_t c) { return run_prepare_cycle(cfg_, c); });
            for (auto &r : results) {
                s_.herald_cycles++;
                s_.herald_attempts += r.record.herald_attempts;
                s_.budget_used++;
                if (r.record.valid) {
                    s_.herald_successes++;
                    s_.herald_attempts_successful += r.record.herald_attempts;
                    s_.trials_valid++;
                    s_.valid_counts[0]++;
                } else {
                    s_.herald_aborted++;
                    s_.trials_invalid++;
                    s_.invalid_counts[0]++;
                }
                s_.leak_trials += r.leaked ? 1 : 0;
                s_.records.push_back(std::move(r.record));
            }
            first += n;
        }
    }

    /// Runs the heralded block loop over `slots`; false if the budget ran out.
    bool run_slots(const std::vector<std::optional<double>> &slots, const std::vector<std::uint64_t> &targets,
                   std::vector<std::uint64_t> &valid, std::vector<std::uint64_t> &invalid, bool population) {
        valid.assign(slots.size(), 0);
        invalid.assign(slots.size(), 0);
        auto incomplete = [&] {
            std::vector<std::size_t> out;
            for (std::size_t i = 0; i < slots.size(); i++) {
                if (valid[i] < targets[i]) {
                    out.push_back(i);
                }
            }
            return out;
        };
        auto open = incomplete();
        if (open.empty()) {
            return true;
        }
        std::size_t current = open.front();
        while (true) {
            if (s_.budget_used >= s_.budget) {
                s_.budget_exhausted = true;
                return false;
            }
            HeraldOutcome h = run_herald_cycle(cfg_, cycle_++);
            s_.herald_cycles++;
            s_.herald_attempts += h.attempts;
            if (!h.success) {
                s_.herald_aborted++;
                s_.budget_used++;
                continue;
            }
            s_.herald_successes++;
            s_.herald_attempts_successful += h.attempts;

            Block block{population ? kPopulationSlot : current, h.attempts, 0, false};
            bool first = true;
            bool done = false;
            while (!done) {
                std::uint64_t remaining_budget = s_.budget - s_.budget_used;
                if (remaining_budget == 0) {
                    s_.budget_exhausted = true;
                    break;
                }
                std::uint64_t need = targets[current] - valid[current];
                std::uint64_t batch = std::min<std::uint64_t>({need, remaining_budget, workers_ * 8});
                if (workers_ == 1) {
                    batch = 1;
                }
                std::optional<double> phi = slots[current];
                auto results = parallel_map(trial_id_, static_cast<std::size_t>(batch), workers_,
                                            [&](std::uint64_t id) { return run_trial(cfg_, TrialRequest{id, phi}); });
                for (auto &r : results) {
                    trial_id_++;
                    s_.budget_used++;
                    block.trials++;
                    r.record.herald_attempts = first ? static_cast<std::uint32_t>(h.attempts) : 0;
                    first = false;
                    s_.leak_trials += r.leaked ? 1 : 0;
                    bool ok = r.record.valid;
                    if (ok) {
                        fidelity_sum_ += r.creation_fidelity;
                        valid[current]++;
                        s_.trials_valid++;
                    } else {
                        invalid[current]++;
                        s_.trials_invalid++;
                    }
                    s_.records.push_back(std::move(r.record));
                    if (!ok) {
                        block.broken = true;
                        done = true;
                        break;
                    }
                    if (valid[current] == targets[current]) {
                        done = true;
                        break;
                    }
                }
            }
            s_.blocks.push_back(block);
            if (s_.budget_exhausted) {
                return false;
            }
            open = incomplete();
            if (open.empty()) {
                return true;
            }
            if (block.broken) {
                std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
                current = open[pick(schedule_)];
            } else {
                auto next = std::upper_bound(open.begin(), open.end(), current);
                current = next == open.end() ? open.front() : *next;
            }
        }
    }

    double fidelity_sum() const {
        return fidelity_sum_;
    }

   private:
    const ExperimentConfig &cfg_;
    std::size_t workers_;
    CampaignSummary &s_;
    Rng schedule_;
    std::uint64_t trial_id_ = 0;
    std::uint64_t cycle_ = 0;
    double fidelity_sum_ = 0;
};

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << text;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig &cfg, const TrialRequest &request) {
    Qubit qubit = *qubit_of(cfg.protocol);
    Rng rng = make_stream(cfg.seed, StreamDomain::Trial, request.trial_id);
    TrialContext ctx(cfg.noise, cfg.pulses, rng, cfg.n_max, cfg.detect_threshold);

    MolLevel start = sample_event(cfg.noise.prep_error, rng) ? MolLevel::M_minus52 : MolLevel::M_minus32;
    std::size_t n = sample_initial_motion(cfg.noise, rng, cfg.n_max);
    ctx.record.initial_n = n;
    StateVector state = StateVector::basis_state({AtomLevel::S, start, n}, cfg.n_max);
    if (sample_event(cfg.noise.leak_per_trial, rng)) {
        state.mark_leaked();
    }

    if (qubit == Qubit::Low) {
        state = create_psi_L(std::move(state), ctx);
    } else {
        state = create_psi_I(std::move(state), ctx);
        state = create_psi_H(std::move(state), ctx);
    }

    TrialResult out;
    if (cfg.protocol == ProtocolKind::PsiL || cfg.protocol == ProtocolKind::PsiH) {
        out.creation_fidelity =
            state.leaked() ? 0 : fidelity(qubit == Qubit::Low ? target_psi_L(cfg.n_max) : target_psi_H(cfg.n_max), state);
    }

    if (request.phi_a) {
        CoherenceWindows w = coherence_windows(cfg.pulses, qubit, cfg.analysis_wait_us);
        ctx.record.atom_phase_error = sample_phase_error(cfg.noise.atom_coherence_time_us, w.atom_us, rng);
        state = apply_dephasing(std::move(state), on_atom_D, ctx.record.atom_phase_error);
        if (qubit == Qubit::High) {
            ctx.record.comb_phase_error = sample_phase_error(cfg.noise.comb_coherence_time_us, w.comb_us, rng);
            state = apply_dephasing(std::move(state), on_mol_J0, ctx.record.comb_phase_error);
        }
        state = analysis_pulses(std::move(state), qubit, *request.phi_a, ctx);
    }

    AtomDetection det = ctx.detect(state);
    MolOutcome mol = detect_molecule_after_atom(state, qubit, ctx);
    bool leaked = state.leaked();
    bool valid = verify_manifold(state, ctx);

    out.record.trial_id = request.trial_id;
    out.record.protocol = request.phi_a ? std::string(to_string(cfg.protocol)) : population_protocol_name(cfg);
    out.record.phi_a = request.phi_a;
    out.record.atom_outcome = det.outcome;
    out.record.mol_outcome = mol;
    out.record.photon_counts = det.photon_counts;
    out.record.valid = valid;
    out.leaked = leaked || state.leaked();
    return out;
}

CampaignSummary run_campaign(const ExperimentConfig &cfg, std::size_t workers) {
    validate_config(cfg);
    CampaignSummary s;
    s.protocol = cfg.protocol;
    s.budget = cfg.effective_budget();
    CampaignRunner runner(cfg, workers, s);

    if (cfg.protocol == ProtocolKind::Prepare) {
        s.targets = cfg.targets;
        runner.run_prepare();
        return s;
    }

    if (is_scan(cfg.protocol)) {
        s.phi_a = cfg.phi_a;
        s.targets = cfg.targets.size() == 1 ? std::vector<std::uint64_t>(cfg.phi_a.size(), cfg.targets.front())
                                            : cfg.targets;
        std::vector<std::optional<double>> slots(cfg.phi_a.begin(), cfg.phi_a.end());
        bool ok = runner.run_slots(slots, s.targets, s.valid_counts, s.invalid_counts, false);
        s.population_target = cfg.population_trials;
        if (ok && cfg.population_trials > 0) {
            std::vector<std::uint64_t> v, iv;
            runner.run_slots({std::nullopt}, {cfg.population_trials}, v, iv, true);
            s.population_valid = v.front();
            s.population_invalid = iv.front();
        }
        return s;
    }

    s.population_target = cfg.targets.front();
    std::vector<std::uint64_t> v, iv;
    runner.run_slots({std::nullopt}, {s.population_target}, v, iv, true);
    s.population_valid = v.front();
    s.population_invalid = iv.front();
    if (s.population_valid > 0) {
        s.mean_creation_fidelity = runner.fidelity_sum() / static_cast<double>(s.population_valid);
    }
    return s;
}

PopulationEstimate run_population(const ExperimentConfig &cfg, std::size_t workers) {
    auto qubit = qubit_of(cfg.protocol);
    if (!qubit) {
        throw std::invalid_argument("run_population needs a qubit protocol");
    }
    ExperimentConfig pop = cfg;
    if (is_scan(cfg.protocol)) {
        pop.protocol = *qubit == Qubit::Low ? ProtocolKind::PopulationL : ProtocolKind::PopulationH;
        pop.phi_a.clear();
        pop.targets = {cfg.population_trials != 0 ? cfg.population_trials : cfg.total_target()};
        pop.population_trials = 0;
        pop.budget = 0;
    }
    CampaignSummary s = run_campaign(pop, workers);
    return populations_from_records(s.records, *qubit);
}

void write_summary(std::ostream &out, const CampaignSummary &s) {
    out << "protocol = " << to_string(s.protocol) << '\n';
    for (std::size_t i = 0; i < s.phi_a.size(); i++) {
        out << "phi_a[" << i << "] = " << format_double(s.phi_a[i]) << '\n';
        out << "target[" << i << "] = " << s.targets[i] << '\n';
        out << "valid[" << i << "] = " << s.valid_counts[i] << '\n';
        out << "invalid[" << i << "] = " << s.invalid_counts[i] << '\n';
    }
    if (s.protocol != ProtocolKind::Prepare) {
        out << "population_target = " << s.population_target << '\n';
        out << "population_valid = " << s.population_valid << '\n';
        out << "population_invalid = " << s.population_invalid << '\n';
    }
    out << "herald_cycles = " << s.herald_cycles << '\n';
    out << "herald_successes = " << s.herald_successes << '\n';
    out << "herald_aborted = " << s.herald_aborted << '\n';
    out << "herald_attempts = " << s.herald_attempts << '\n';
    out << "herald_attempts_successful = " << s.herald_attempts_successful << '\n';
    double efficiency = s.herald_attempts == 0 ? 0
                                               : static_cast<double>(s.herald_successes) /
                                                     static_cast<double>(s.herald_attempts);
    out << "herald_efficiency = " << format_double(efficiency) << '\n';
    out << "trials_valid = " << s.trials_valid << '\n';
    out << "trials_invalid = " << s.trials_invalid << '\n';
    out << "leak_trials = " << s.leak_trials << '\n';
    std::uint64_t broken = 0;
    std::uint64_t broken_trials = 0;
    for (const auto &b : s.blocks) {
        if (b.broken) {
            broken++;
            broken_trials += b.trials;
        }
    }
    out << "blocks = " << s.blocks.size() << '\n';
    out << "blocks_broken = " << broken << '\n';
    out << "mean_broken_run_length = "
        << format_double(broken == 0 ? 0 : static_cast<double>(broken_trials) / static_cast<double>(broken)) << '\n';
    if (s.protocol == ProtocolKind::PsiL || s.protocol == ProtocolKind::PsiH) {
        out << "mean_creation_fidelity = " << format_double(s.mean_creation_fidelity) << '\n';
    }
    out << "budget = " << s.budget << '\n';
    out << "budget_used = " << s.budget_used << '\n';
    out << "budget_exhausted = " << (s.budget_exhausted ? "true" : "false") << '\n';
}

void write_populations(std::ostream &out, const PopulationEstimate &pop) {
    using P = PopulationEstimate;
    const bool low = pop.qubit == Qubit::Low;
    const std::array<const char *, P::kSlots> names =
        low ? std::array<const char *, P::kSlots>{"S,-5/2", "D,-3/2", "S,-3/2", "D,-5/2", "other"}
            : std::array<const char *, P::kSlots>{"S,0", "D,2", "S,2", "D,0", "other"};
    out << "qubit = " << to_string(pop.qubit) << '\n';
    out << "trials = " << pop.total << '\n';
    for (std::size_t i = 0; i < P::kSlots; i++) {
        out << "P(" << names[i] << ") = " << format_double(pop.p[i]) << '\n';
        out << "sigma(" << names[i] << ") = " << format_double(pop.stderr_[i]) << '\n';
        out << "count(" << names[i] << ") = " << pop.counts[i] << '\n';
    }
    out << "parity = " << format_double(parity(pop, pop.qubit)) << '\n';
}

void write_outputs(const std::filesystem::path &dir, const ExperimentConfig &cfg, const CampaignSummary &s) {
    std::filesystem::create_directories(dir);
    {
        std::ostringstream o;
        write_records_csv(o, s.records);
        write_text_file(dir / "records.csv", o.str());
    }
    {
        std::ostringstream o;
        write_summary(o, s);
        write_text_file(dir / "summary.txt", o.str());
    }
    {
        std::ostringstream o;
        o << "block,slot,phi_a_rad,herald_attempts,trials,broken\n";
        for (std::size_t i = 0; i < s.blocks.size(); i++) {
            const Block &b = s.blocks[i];
            bool pop = b.slot == kPopulationSlot;
            o << i << ',' << (pop ? std::string() : std::to_string(b.slot)) << ','
              << (pop ? std::string() : format_double(s.phi_a[b.slot])) << ',' << b.herald_attempts << ','
              << b.trials << ',' << (b.broken ? 1 : 0) << '\n';
        }
        write_text_file(dir / "blocks.csv", o.str());
    }
    {
        std::ostringstream o;
        write_config(o, cfg);
        write_text_file(dir / "config.txt", o.str());
    }

    auto qubit = qubit_of(cfg.protocol);
    if (!qubit) {
        return;
    }
    std::optional<FringeFit> fit;
    if (is_scan(cfg.protocol)) {
        auto points = fringe_points_from_records(s.records, *qubit);
        std::ostringstream o;
        try {
            fit = fit_fringe(points);
            write_fit_report(o, *fit, *qubit, points.size());
            if (cfg.bootstrap_resamples > 0) {
                try {
                    BootstrapResult b = bootstrap_uncertainty(s.records, *qubit, cfg.bootstrap_resamples, cfg.seed);
                    o << "bootstrap_resamples = " << b.resamples << '\n';
                    o << "bootstrap_contrast_sigma = " << format_double(b.sigma_contrast) << '\n';
                    o << "bootstrap_phi0_sigma = " << format_double(b.sigma_phi0) << '\n';
                    o << "bootstrap_fidelity_sigma = " << format_double(b.sigma_fidelity) << '\n';
                } catch (const std::invalid_argument &e) {
                    o << "bootstrap_status = " << e.what() << '\n';
                }
            }
            std::ostringstream csv;
            write_fringe_csv(csv, points, *fit);
            write_text_file(dir / "fringe.csv", csv.str());
        } catch (const FitError &e) {
            o << "status = " << e.what() << '\n';
        }
        write_text_file(dir / "fit.txt", o.str());
    }

    PopulationEstimate pop = populations_from_records(s.records, *qubit);
    if (pop.total > 0) {
        std::ostringstream o;
        write_populations(o, pop);
        write_text_file(dir / "populations.txt", o.str());
        if (fit) {
            auto [p1, p2] = target_populations(pop);
            auto [e1, e2] = target_population_errors(pop);
            std::ostringstream f;
            FidelityReport r = fidelity(p1, p2, std::min(fit->contrast, 1.0), e1, e2, fit->sigma_contrast());
            write_fidelity_report(f, r);
            write_text_file(dir / "fidelity.txt", f.str());
        }
    }

    if (cfg.protocol == ProtocolKind::PsiL || cfg.protocol == ProtocolKind::PsiH) {
        StateVector ideal = cfg.protocol == ProtocolKind::PsiL
                                ? create_psi_L(initial_state(cfg.n_max), cfg.pulses)
                                : create_psi_H(create_psi_I(initial_state(cfg.n_max), cfg.pulses), cfg.pulses);
        std::ostringstream o;
        o << "# noiseless output of the creation sequence: atom,mol,n,re,im\n";
        write_debug_dump(o, ideal);
        write_text_file(dir / "state.txt", o.str());
    }

    if (cfg.comb) {
        const CombSection &c = *cfg.comb;
        std::ostringstream o;
        CombParams p{c.f_rep, c.f_aom, c.n, c.sign};
        o << "f_rep_hz = " << c.f_rep.str() << '\n';
        o << "f_aom_hz = " << c.f_aom.str() << '\n';
        o << "n = " << c.n << '\n';
        o << "sign = " << c.sign << '\n';
        double f_raman = 0;
        try {
            std::int64_t f = raman_frequency(p);
            f_raman = static_cast<double>(f);
            o << "f_raman_hz = " << f << '\n';
        } catch (const CombError &e) {
            f_raman = raman_frequency_approx(p, c.f_aom.to_double());
            o << "f_raman_hz_approx = " << format_double(f_raman) << '\n';
        }
        RotationalReport rot = check_rotational_consistency(f_raman, RotationalModel{c.b_rot_hz});
        o << "expected_j0_j2_hz = " << format_double(rot.expected_hz) << '\n';
        o << "relative_deviation = " << format_double(rot.relative_deviation) << '\n';
        o << "rotational_consistent = " << (rot.pass ? "true" : "false") << '\n';
        write_text_file(dir / "comb.txt", o.str());
    }
}

}  // namespace qlsim
