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

#include "qlsim/comb.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace qlsim {

namespace {

__extension__ typedef __int128 i128;

constexpr i128 kInt64Max = std::numeric_limits<std::int64_t>::max();

std::int64_t narrow(i128 v, const char *what) {
    if (v > kInt64Max || v < -kInt64Max) {
        throw CombError(std::string(what) + ": exceeds 64-bit range");
    }
    return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) {
        a = -a;
    }
    if (b < 0) {
        b = -b;
    }
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Frequency reduce(i128 num, i128 den) {
    if (den == 0) {
        throw CombError("frequency denominator is zero");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Frequency::ratio(narrow(num, "frequency"), narrow(den, "frequency"));
}

i128 parse_integer(std::string_view s, std::string_view whole) {
    if (s.empty()) {
        throw CombError("invalid frequency '" + std::string(whole) + "'");
    }
    i128 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') {
            throw CombError("invalid frequency '" + std::string(whole) + "'");
        }
        v = v * 10 + (c - '0');
        if (v > kInt64Max * i128{1000000}) {
            throw CombError("frequency '" + std::string(whole) + "' out of range");
        }
    }
    return v;
}

}  // namespace

Frequency Frequency::hz(std::int64_t value) {
    Frequency f;
    f.num_ = value;
    f.den_ = 1;
    return f;
}

Frequency Frequency::ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw CombError("frequency denominator is zero");
    }
    i128 n = num, d = den;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    Frequency f;
    f.num_ = narrow(n, "frequency");
    f.den_ = narrow(d, "frequency");
    return f;
}

Frequency Frequency::parse(std::string_view text) {
    std::string_view s = text;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        bool neg = !s.empty() && s[0] == '-';
        i128 num = parse_integer(s.substr(neg ? 1 : 0, slash - (neg ? 1 : 0)), text);
        i128 den = parse_integer(s.substr(slash + 1), text);
        return reduce(neg ? -num : num, den);
    }
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    int exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view es = s.substr(e + 1);
        if (!es.empty() && es[0] == '+') {
            es.remove_prefix(1);
        }
        auto [ptr, ec] = std::from_chars(es.data(), es.data() + es.size(), exponent);
        if (ec != std::errc() || ptr != es.data() + es.size() || es.empty()) {
            throw CombError("invalid frequency '" + std::string(text) + "'");
        }
        s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
        exponent -= static_cast<int>(s.size() - dot - 1);
    } else {
        digits = std::string(s);
    }
    if (digits.empty() || exponent > 30 || exponent < -30) {
        throw CombError("invalid frequency '" + std::string(text) + "'");
    }
    i128 num = parse_integer(digits, text);
    i128 den = 1;
    for (; exponent > 0; exponent--) {
        num *= 10;
        if (num > kInt64Max * i128{1000000}) {
            throw CombError("frequency '" + std::string(text) + "' out of range");
        }
    }
    for (; exponent < 0; exponent++) {
        den *= 10;
    }
    return reduce(neg ? -num : num, den);
}

double Frequency::to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Frequency::str() const {
    if (den_ == 1) {
        return std::to_string(num_);
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

void CombParams::validate() const {
    if (f_rep.num() <= 0) {
        throw CombError("f_rep must be positive");
    }
    if (f_aom.num() <= 0) {
        throw CombError("f_AOM must be positive");
    }
    if (n <= 0) {
        throw CombError("N must be a positive integer");
    }
    if (sign != 1 && sign != -1) {
        throw CombError("sign must be +1 or -1");
    }
}

std::int64_t raman_frequency(const CombParams &params) {
    params.validate();
    // N num_r/den_r - s 2 num_a/den_a over the common denominator.
    i128 den = i128{params.f_rep.den()} * params.f_aom.den();
    i128 num = i128{params.n} * params.f_rep.num() * params.f_aom.den() -
               i128{params.sign} * 2 * params.f_aom.num() * params.f_rep.den();
    if (num % den != 0) {
        Frequency exact = reduce(num, den);
        throw CombError("N f_rep -+ 2 f_AOM = " + exact.str() + " Hz is not an integer number of Hz");
    }
    i128 v = num / den;
    return narrow(v < 0 ? -v : v, "raman frequency");
}

double raman_frequency_approx(const CombParams &params, double f_aom_hz) {
    long double nf = static_cast<long double>(params.n) * params.f_rep.num() / params.f_rep.den();
    return static_cast<double>(std::fabs(nf - params.sign * 2.0L * f_aom_hz));
}

NRecovery recover_n(std::int64_t delta_f_aom_hz, std::int64_t delta_f_rep_hz, double tolerance) {
    if (delta_f_rep_hz == 0) {
        throw CombError("delta f_rep must be nonzero");
    }
    i128 num = i128{2} * delta_f_aom_hz;
    i128 den = delta_f_rep_hz;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    // Nearest integer, halves away from zero.
    i128 q = (num >= 0 ? num + den / 2 : num - den / 2) / den;
    i128 rem = num - q * den;
    double residual = static_cast<double>(rem < 0 ? -rem : rem) / static_cast<double>(den);
    if (residual > tolerance) {
        throw CombError("ambiguous N: residual " + std::to_string(residual) + " exceeds tolerance");
    }
    if (q <= 0) {
        throw CombError("recovered N = " + std::to_string(static_cast<long long>(q)) + " is not positive");
    }
    return NRecovery{narrow(q, "N"), residual};
}

double rabi_transfer_probability(double omega, double delta, double duration_s) {
    double w2 = omega * omega + delta * delta;
    if (w2 == 0) {
        return 0;
    }
    double s = std::sin(std::sqrt(w2) * duration_s / 2);
    return omega * omega / w2 * s * s;
}

std::vector<LinePoint> scan_lineshape(const CombParams &base, std::span<const double> f_aom_hz,
                                      const LineshapeModel &model) {
    double t = model.duration_us * 1e-6;
    double omega = model.pulse_area / t;
    std::vector<LinePoint> out;
    out.reserve(f_aom_hz.size());
    for (double f : f_aom_hz) {
        double delta = 2 * std::numbers::pi * (raman_frequency_approx(base, f) - model.transition_hz);
        out.push_back(LinePoint{f, rabi_transfer_probability(omega, delta, t)});
    }
    return out;
}

double fourier_linewidth_hz(const LineshapeModel &model) {
    return 1 / (model.duration_us * 1e-6);
}

double estimate_line_center(const CombParams &base, std::span<const LinePoint> points, const LineshapeModel &model) {
    if (points.size() < 3) {
        throw CombError("line center fit needs at least 3 points");
    }
    double t = model.duration_us * 1e-6;
    double omega = model.pulse_area / t;
    // Shift of the model along f_AOM; the Raman detuning moves 2 Hz per Hz.
    double f_res_guess = points.front().f_aom_hz;
    double best_p = -1;
    for (const auto &p : points) {
        if (p.probability > best_p) {
            best_p = p.probability;
            f_res_guess = p.f_aom_hz;
        }
    }
    double offset0 = raman_frequency_approx(base, f_res_guess) - model.transition_hz;
    auto cost = [&](double shift) {
        double sxy = 0, sxx = 0, syy = 0;
        for (const auto &p : points) {
            double delta = 2 * std::numbers::pi *
                           (raman_frequency_approx(base, p.f_aom_hz) - model.transition_hz - offset0 + shift);
            double m = rabi_transfer_probability(omega, delta, t);
            sxy += m * p.probability;
            sxx += m * m;
            syy += p.probability * p.probability;
        }
        return sxx > 0 ? syy - sxy * sxy / sxx : syy;
    };
    // Coarse grid over +-2 linewidths, then golden-section refinement.
    double width = fourier_linewidth_hz(model);
    double lo = -2 * width, hi = 2 * width;
    const int grid = 200;
    double best = lo, best_cost = cost(lo);
    for (int i = 1; i <= grid; i++) {
        double x = lo + (hi - lo) * i / grid;
        double c = cost(x);
        if (c < best_cost) {
            best_cost = c;
            best = x;
        }
    }
    double step = (hi - lo) / grid;
    double a = best - step, b = best + step;
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double c1 = cost(x1), c2 = cost(x2);
    for (int i = 0; i < 100 && b - a > 1e-6 * width; i++) {
        if (c1 < c2) {
            b = x2;
            x2 = x1;
            c2 = c1;
            x1 = b - g * (b - a);
            c1 = cost(x1);
        } else {
            a = x1;
            x1 = x2;
            c1 = c2;
            x2 = a + g * (b - a);
            c2 = cost(x2);
        }
    }
    double shift = (a + b) / 2;
    // Raman offset at the center is offset0 - shift; convert back to f_AOM.
    double df_raman_df_aom = raman_frequency_approx(base, f_res_guess + 1) - raman_frequency_approx(base, f_res_guess);
    return f_res_guess - (offset0 - shift) / df_raman_df_aom;
}

RotationalReport check_rotational_consistency(double f_raman_hz, const RotationalModel &model, double tolerance,
                                              int j_lower, int j_upper) {
    double expected = model.energy_hz(j_upper) - model.energy_hz(j_lower);
    double deviation = std::fabs(f_raman_hz - expected) / std::fabs(expected);
    return RotationalReport{expected, deviation, deviation <= tolerance};
}

}  // namespace qlsim
