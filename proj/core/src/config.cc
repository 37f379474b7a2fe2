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

#include "qlsim/config.h"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "qlsim/errors.h"
#include "qlsim/records.h"

namespace qlsim {

namespace {

constexpr std::array<std::pair<ProtocolKind, std::string_view>, 7> kProtocolNames = {{
    {ProtocolKind::Prepare, "prepare"},
    {ProtocolKind::PsiL, "psi_L"},
    {ProtocolKind::PsiH, "psi_H"},
    {ProtocolKind::ParityScanL, "parity_scan_L"},
    {ProtocolKind::ParityScanH, "parity_scan_H"},
    {ProtocolKind::PopulationL, "population_L"},
    {ProtocolKind::PopulationH, "population_H"},
}};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) {
            return out;
        }
        s.remove_prefix(comma + 1);
    }
}

std::optional<double> parse_number(std::string_view s) {
    double v = 0;
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    if (s == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

std::optional<std::uint64_t> parse_count(std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

struct Entry {
    std::size_t line;
    std::string key;
    std::string_view value;
};

class Setter {
   public:
    explicit Setter(const Entry &e) : e_(e) {
    }

    [[noreturn]] void fail(const std::string &what) const {
        throw ConfigError(e_.line, e_.key, what);
    }

    double number() const {
        auto v = parse_number(e_.value);
        if (!v) {
            fail("expected a number, got '" + std::string(e_.value) + "'");
        }
        return *v;
    }

    double probability() const {
        double v = number();
        if (!(v >= 0 && v <= 1)) {
            fail("must lie in [0, 1]");
        }
        return v;
    }

    double positive() const {
        double v = number();
        if (!(v > 0)) {
            fail("must be positive");
        }
        return v;
    }

    double non_negative() const {
        double v = number();
        if (!(v >= 0) || std::isinf(v)) {
            fail("must be non-negative and finite");
        }
        return v;
    }

    std::uint64_t count() const {
        auto v = parse_count(e_.value);
        if (!v) {
            fail("expected a non-negative integer, got '" + std::string(e_.value) + "'");
        }
        return *v;
    }

    std::string_view text() const {
        return e_.value;
    }

    Frequency frequency() const {
        try {
            return Frequency::parse(e_.value);
        } catch (const CombError &ex) {
            fail(ex.what());
        }
    }

   private:
    const Entry &e_;
};

using Handler = std::function<void(ExperimentConfig &, const Setter &)>;

const std::map<std::string, Handler, std::less<>> &experiment_keys() {
    static const std::map<std::string, Handler, std::less<>> keys = {
        {"protocol",
         [](ExperimentConfig &c, const Setter &s) {
             auto p = parse_protocol(s.text());
             if (!p) {
                 s.fail("unknown protocol '" + std::string(s.text()) + "'");
             }
             c.protocol = *p;
         }},
        {"phi_a",
         [](ExperimentConfig &c, const Setter &s) {
             c.phi_a.clear();
             for (auto item : split_list(s.text())) {
                 auto v = parse_angle(item);
                 if (!v) {
                     s.fail("invalid angle '" + std::string(item) + "'");
                 }
                 c.phi_a.push_back(*v);
             }
         }},
        {"phi_a_grid",
         [](ExperimentConfig &c, const Setter &s) {
             std::uint64_t n = s.count();
             if (n == 0 || n > 100000) {
                 s.fail("must be between 1 and 100000");
             }
             c.phi_a.clear();
             for (std::uint64_t k = 0; k < n; k++) {
                 c.phi_a.push_back(2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
             }
         }},
        {"trials",
         [](ExperimentConfig &c, const Setter &s) {
             c.targets.clear();
             for (auto item : split_list(s.text())) {
                 auto v = parse_count(item);
                 if (!v) {
                     s.fail("invalid trial count '" + std::string(item) + "'");
                 }
                 c.targets.push_back(*v);
             }
         }},
        {"population_trials", [](ExperimentConfig &c, const Setter &s) { c.population_trials = s.count(); }},
        {"seed", [](ExperimentConfig &c, const Setter &s) { c.seed = s.count(); }},
        {"n_max",
         [](ExperimentConfig &c, const Setter &s) {
             std::uint64_t n = s.count();
             if (n < 3 || n > 64) {
                 s.fail("must be between 3 and 64");
             }
             c.n_max = n;
         }},
        {"budget", [](ExperimentConfig &c, const Setter &s) { c.budget = s.count(); }},
        {"max_herald_attempts",
         [](ExperimentConfig &c, const Setter &s) {
             c.herald.max_attempts = s.count();
             if (c.herald.max_attempts == 0) {
                 s.fail("must be positive");
             }
         }},
        {"herald_confirmations", [](ExperimentConfig &c, const Setter &s) { c.herald.confirmations = s.count(); }},
        {"detect_threshold",
         [](ExperimentConfig &c, const Setter &s) {
             std::uint64_t t = s.count();
             if (t == 0 || t > 1000000) {
                 s.fail("must be between 1 and 1000000");
             }
             c.detect_threshold = static_cast<std::uint32_t>(t);
         }},
        {"analysis_wait_us", [](ExperimentConfig &c, const Setter &s) { c.analysis_wait_us = s.non_negative(); }},
        {"bootstrap_resamples", [](ExperimentConfig &c, const Setter &s) { c.bootstrap_resamples = s.count(); }},
        {"prior_minus32", [](ExperimentConfig &c, const Setter &s) { c.prior.minus32 = s.probability(); }},
        {"prior_minus52", [](ExperimentConfig &c, const Setter &s) { c.prior.minus52 = s.probability(); }},
        {"prior_leaked", [](ExperimentConfig &c, const Setter &s) { c.prior.leaked = s.probability(); }},
    };
    return keys;
}

const std::map<std::string, Handler, std::less<>> &noise_keys() {
    static const std::map<std::string, Handler, std::less<>> keys = {
        {"nbar", [](ExperimentConfig &c, const Setter &s) { c.noise.nbar_M = s.non_negative(); }},
        {"atom_t2_us", [](ExperimentConfig &c, const Setter &s) { c.noise.atom_coherence_time_us = s.positive(); }},
        {"comb_t2_us", [](ExperimentConfig &c, const Setter &s) { c.noise.comb_coherence_time_us = s.positive(); }},
        {"prep_error", [](ExperimentConfig &c, const Setter &s) { c.noise.prep_error = s.probability(); }},
        {"leak_per_pulse", [](ExperimentConfig &c, const Setter &s) { c.noise.leak_per_pulse = s.probability(); }},
        {"leak_per_trial", [](ExperimentConfig &c, const Setter &s) { c.noise.leak_per_trial = s.probability(); }},
        {"bright_mean", [](ExperimentConfig &c, const Setter &s) { c.noise.detect_bright_mean = s.non_negative(); }},
        {"dark_mean", [](ExperimentConfig &c, const Setter &s) { c.noise.detect_dark_mean = s.non_negative(); }},
    };
    return keys;
}

CombSection &comb_of(ExperimentConfig &c) {
    if (!c.comb) {
        c.comb.emplace();
    }
    return *c.comb;
}

const std::map<std::string, Handler, std::less<>> &comb_keys() {
    static const std::map<std::string, Handler, std::less<>> keys = {
        {"f_rep_hz", [](ExperimentConfig &c, const Setter &s) { comb_of(c).f_rep = s.frequency(); }},
        {"f_aom_hz", [](ExperimentConfig &c, const Setter &s) { comb_of(c).f_aom = s.frequency(); }},
        {"n",
         [](ExperimentConfig &c, const Setter &s) {
             std::uint64_t n = s.count();
             if (n == 0 || n > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
                 s.fail("must be a positive integer");
             }
             comb_of(c).n = static_cast<std::int64_t>(n);
         }},
        {"sign",
         [](ExperimentConfig &c, const Setter &s) {
             if (s.text() == "1" || s.text() == "+1") {
                 comb_of(c).sign = 1;
             } else if (s.text() == "-1") {
                 comb_of(c).sign = -1;
             } else {
                 s.fail("must be +1 or -1");
             }
         }},
        {"brot_hz", [](ExperimentConfig &c, const Setter &s) { comb_of(c).b_rot_hz = s.positive(); }},
    };
    return keys;
}

void set_pulse(ExperimentConfig &c, const Entry &e) {
    PulseSpec *slot = c.pulses.find(e.key);
    if (slot == nullptr) {
        throw ConfigError(e.line, e.key, "unknown key in [pulses]");
    }
    try {
        *slot = parse_pulse_spec(e.value);
    } catch (const std::exception &ex) {
        throw ConfigError(e.line, e.key, ex.what());
    }
}

}  // namespace

std::string_view to_string(ProtocolKind kind) {
    for (const auto &[k, name] : kProtocolNames) {
        if (k == kind) {
            return name;
        }
    }
    return "?";
}

std::optional<ProtocolKind> parse_protocol(std::string_view text) {
    for (const auto &[k, name] : kProtocolNames) {
        if (name == text) {
            return k;
        }
    }
    return std::nullopt;
}

std::optional<Qubit> qubit_of(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::Prepare:
            return std::nullopt;
        case ProtocolKind::PsiL:
        case ProtocolKind::ParityScanL:
        case ProtocolKind::PopulationL:
            return Qubit::Low;
        default:
            return Qubit::High;
    }
}

bool is_scan(ProtocolKind kind) {
    return kind == ProtocolKind::ParityScanL || kind == ProtocolKind::ParityScanH;
}

std::uint64_t ExperimentConfig::total_target() const {
    std::uint64_t total = population_trials;
    if (targets.size() == 1 && phi_a.size() > 1) {
        return total + targets.front() * phi_a.size();
    }
    for (auto t : targets) {
        total += t;
    }
    return total;
}

std::uint64_t ExperimentConfig::effective_budget() const {
    return budget != 0 ? budget : 10 * total_target();
}

std::optional<double> parse_angle(std::string_view text) {
    std::string_view s = trim(text);
    double sign = 1;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        sign = s.front() == '-' ? -1 : 1;
        s = trim(s.substr(1));
    }
    if (s.empty()) {
        return std::nullopt;
    }
    double value = 1;
    char op = '*';
    while (true) {
        auto pos = s.find_first_of("*/");
        std::string_view factor = trim(s.substr(0, pos));
        double f = 0;
        if (factor == "pi") {
            f = std::numbers::pi;
        } else if (auto v = parse_number(factor); v && std::isfinite(*v)) {
            f = *v;
        } else {
            return std::nullopt;
        }
        if (op == '*') {
            value *= f;
        } else {
            if (f == 0) {
                return std::nullopt;
            }
            value /= f;
        }
        if (pos == std::string_view::npos) {
            break;
        }
        op = s[pos];
        s.remove_prefix(pos + 1);
    }
    return sign * value;
}

ExperimentConfig parse_config(std::istream &in) {
    ExperimentConfig cfg;
    std::string section;
    std::set<std::string> seen_sections;
    std::set<std::string> seen_keys;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        line_no++;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty() || line.front() == ';') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(line_no, "", "malformed section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "experiment" && section != "noise" && section != "comb" && section != "pulses") {
                throw ConfigError(line_no, section, "unknown section");
            }
            if (!seen_sections.insert(section).second) {
                throw ConfigError(line_no, section, "duplicate section");
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(line_no, "", "expected 'key = value'");
        }
        Entry e{line_no, std::string(trim(line.substr(0, eq))), trim(line.substr(eq + 1))};
        if (e.key.empty()) {
            throw ConfigError(line_no, "", "empty key");
        }
        if (section.empty()) {
            throw ConfigError(line_no, e.key, "key outside of any section");
        }
        std::string qualified = section + "." + e.key;
        if (!seen_keys.insert(qualified).second) {
            throw ConfigError(line_no, e.key, "duplicate key in [" + section + "]");
        }
        if (e.value.empty()) {
            throw ConfigError(line_no, e.key, "missing value");
        }
        if (section == "pulses") {
            set_pulse(cfg, e);
            continue;
        }
        const auto &keys = section == "experiment" ? experiment_keys()
                           : section == "noise"    ? noise_keys()
                                                   : comb_keys();
        auto it = keys.find(e.key);
        if (it == keys.end()) {
            throw ConfigError(line_no, e.key, "unknown key in [" + section + "]");
        }
        it->second(cfg, Setter(e));
    }
    if (!seen_keys.contains("experiment.protocol")) {
        throw ConfigError(0, "protocol", "missing required key in [experiment]");
    }
    if (!seen_keys.contains("experiment.trials")) {
        throw ConfigError(0, "trials", "missing required key in [experiment]");
    }
    validate_config(cfg);
    return cfg;
}

ExperimentConfig parse_config_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_config(in);
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(0, "", "cannot open '" + path + "'");
    }
    return parse_config(in);
}

void validate_config(const ExperimentConfig &cfg) {
    if (is_scan(cfg.protocol)) {
        if (cfg.phi_a.empty()) {
            throw ConfigError(0, "phi_a", "scan protocols need phi_a or phi_a_grid");
        }
        if (cfg.targets.size() != 1 && cfg.targets.size() != cfg.phi_a.size()) {
            throw ConfigError(0, "trials", "needs one count or one per phi_a value (" +
                                               std::to_string(cfg.phi_a.size()) + ")");
        }
    } else {
        if (!cfg.phi_a.empty()) {
            throw ConfigError(0, "phi_a", "only scan protocols take analysis phases");
        }
        if (cfg.targets.size() != 1) {
            throw ConfigError(0, "trials", "needs a single count for this protocol");
        }
        if (cfg.population_trials != 0) {
            throw ConfigError(0, "population_trials", "only scan protocols take extra population trials");
        }
    }
    if (cfg.total_target() == 0) {
        throw ConfigError(0, "trials", "no trials requested");
    }
    double prior_sum = cfg.prior.minus32 + cfg.prior.minus52 + cfg.prior.leaked;
    if (std::fabs(prior_sum - 1) > 1e-9) {
        throw ConfigError(0, "prior_minus32", "prior probabilities must sum to 1 (got " + format_double(prior_sum) +
                                                  ")");
    }
    try {
        cfg.noise.validate();
    } catch (const std::invalid_argument &ex) {
        throw ConfigError(0, "", ex.what());
    }
    // Protocols add up to two quanta on top of the sampled thermal n.
    double tail = thermal_tail(cfg.noise.nbar_M, cfg.n_max - 2);
    if (tail > 1e-6) {
        throw ConfigError(0, "n_max", "thermal population " + format_double(tail) + " at n >= " +
                                          std::to_string(cfg.n_max - 2) + " exceeds 1e-6; raise n_max or lower nbar");
    }
    if (cfg.comb) {
        const CombSection &c = *cfg.comb;
        CombParams p{c.f_rep, c.f_aom, c.n, c.sign};
        try {
            p.validate();
        } catch (const CombError &ex) {
            throw ConfigError(0, "comb", ex.what());
        }
        if (!(c.b_rot_hz > 0)) {
            throw ConfigError(0, "brot_hz", "missing or non-positive");
        }
    }
    if (cfg.bootstrap_resamples != 0 && cfg.bootstrap_resamples < 100) {
        throw ConfigError(0, "bootstrap_resamples", "must be 0 (disabled) or at least 100");
    }
    if (cfg.effective_budget() < cfg.total_target()) {
        throw ConfigError(0, "budget", "smaller than the requested trial count");
    }
}

void write_config(std::ostream &out, const ExperimentConfig &cfg) {
    auto list = [&](const auto &values, auto fmt) {
        for (std::size_t i = 0; i < values.size(); i++) {
            out << (i ? ", " : "") << fmt(values[i]);
        }
        out << '\n';
    };
    out << "[experiment]\n";
    out << "protocol = " << to_string(cfg.protocol) << '\n';
    if (!cfg.phi_a.empty()) {
        out << "phi_a = ";
        list(cfg.phi_a, [](double v) { return format_double(v); });
    }
    out << "trials = ";
    list(cfg.targets, [](std::uint64_t v) { return std::to_string(v); });
    if (cfg.population_trials != 0) {
        out << "population_trials = " << cfg.population_trials << '\n';
    }
    out << "seed = " << cfg.seed << '\n';
    out << "n_max = " << cfg.n_max << '\n';
    out << "budget = " << cfg.budget << '\n';
    out << "max_herald_attempts = " << cfg.herald.max_attempts << '\n';
    out << "herald_confirmations = " << cfg.herald.confirmations << '\n';
    out << "detect_threshold = " << cfg.detect_threshold << '\n';
    out << "analysis_wait_us = " << format_double(cfg.analysis_wait_us) << '\n';
    out << "bootstrap_resamples = " << cfg.bootstrap_resamples << '\n';
    out << "prior_minus32 = " << format_double(cfg.prior.minus32) << '\n';
    out << "prior_minus52 = " << format_double(cfg.prior.minus52) << '\n';
    out << "prior_leaked = " << format_double(cfg.prior.leaked) << '\n';
    out << "\n[noise]\n";
    auto t2 = [](double v) { return std::isinf(v) ? std::string("inf") : format_double(v); };
    out << "nbar = " << format_double(cfg.noise.nbar_M) << '\n';
    out << "atom_t2_us = " << t2(cfg.noise.atom_coherence_time_us) << '\n';
    out << "comb_t2_us = " << t2(cfg.noise.comb_coherence_time_us) << '\n';
    out << "prep_error = " << format_double(cfg.noise.prep_error) << '\n';
    out << "leak_per_pulse = " << format_double(cfg.noise.leak_per_pulse) << '\n';
    out << "leak_per_trial = " << format_double(cfg.noise.leak_per_trial) << '\n';
    out << "bright_mean = " << format_double(cfg.noise.detect_bright_mean) << '\n';
    out << "dark_mean = " << format_double(cfg.noise.detect_dark_mean) << '\n';
    if (cfg.comb) {
        out << "\n[comb]\n";
        out << "f_rep_hz = " << cfg.comb->f_rep.str() << '\n';
        out << "f_aom_hz = " << cfg.comb->f_aom.str() << '\n';
        out << "n = " << cfg.comb->n << '\n';
        out << "sign = " << cfg.comb->sign << '\n';
        out << "brot_hz = " << format_double(cfg.comb->b_rot_hz) << '\n';
    }
    out << "\n[pulses]\n";
    for (auto name : ProtocolPulses::names()) {
        out << name << " = " << format_pulse_spec(*cfg.pulses.find(name)) << '\n';
    }
}

}  // namespace qlsim
