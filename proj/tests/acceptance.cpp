// Acceptance suite: one PASS/FAIL line per criterion with the measured values.
// Exit status is nonzero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dynspec/completion.hpp"
#include "dynspec/experiments.hpp"
#include "dynspec/hankel.hpp"
#include "dynspec/metrics.hpp"
#include "dynspec/prony.hpp"
#include "dynspec/rng.hpp"

using namespace dynspec;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Clock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

cvec direct_dft(const cvec& z) {
    const int n = int(z.size());
    cvec out = cvec::Zero(n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            out(k) += z(l) * std::polar(1.0, -2.0 * std::numbers::pi * double(k) * double(l) / double(n));
    return out;
}

void aliasing_oracle() {
    Clock clk;
    double worst = 0;
    Rng rng(split_seed(101, 1));
    for (auto [d, m] : {std::pair{15, 3}, std::pair{21, 3}, std::pair{15, 5}}) {
        const int J = d / m;
        for (int t = 0; t < 100; ++t) {
            cvec z(d);
            for (int i = 0; i < d; ++i) z(i) = cplx(rng.normal(), rng.normal());
            const cvec lhs = dft(subsample(z, m));
            const cvec zh = direct_dft(z);
            for (int j = 0; j < J; ++j) {
                cplx rhs = 0;
                for (int n = 0; n < m; ++n) rhs += zh(j + n * J);
                worst = std::max(worst, std::abs(lhs(j) - rhs / double(m)));
            }
        }
    }
    const double t = clk.seconds();
    report(1, "aliasing identity", worst <= 1e-12 && t < 1.0, fmt("max abs error %.3e (<= 1e-12), %.3f s (< 1 s)", worst, t));
}

void rank_suite() {
    Clock clk;
    Config cfg;
    cfg.spectrum = SpectrumKind::monotone;
    cfg.alpha = 0.0;
    cfg.sigma = 0.0;
    const Instance inst = make_instance(cfg, split_seed(102, 0));
    const auto ch = channel_sequences(inst.ms.clean, cfg.m, 150);
    std::vector<int> ranks;
    bool ok = true;
    for (const auto& c : ch) {
        const int r = numerical_rank(lift(c.sequence, 150), 1e-8);
        ranks.push_back(r);
        ok = ok && r == (c.j == 0 ? 2 : 3);
    }
    const double t = clk.seconds();
    report(2, "Hankel rank by channel", ok && t < 5.0,
           fmt("ranks j=0..4: %d %d %d %d %d (expect 2 3 3 3 3), %.2f s (< 5 s)", ranks[0], ranks[1], ranks[2],
               ranks[3], ranks[4], t));
}

void noiseless_pipeline() {
    Clock clk;
    Config cfg;
    cfg.alpha = 0.0;
    cfg.sigma = 0.0;
    double worst = 0;
    for (int s = 0; s < 5; ++s) {
        const TrialResult r = run_trial(make_instance(cfg, split_seed(103, std::uint64_t(s))), Method::proposed);
        worst = std::max(worst, r.failed ? INFINITY : r.re);
    }
    const double t = clk.seconds();
    report(3, "exact noiseless pipeline", worst <= 1e-9 && t < 10.0,
           fmt("max RE over 5 seeds %.3e (<= 1e-9), %.2f s (< 10 s)", worst, t));
}

void support_identification() {
    Clock clk;
    Config cfg;
    cfg.alpha = 0.05;
    cfg.c = 5.0;
    cfg.sigma = 0.0;
    int exact = 0;
    for (int s = 0; s < 15; ++s) {
        const TrialResult r = run_trial(make_instance(cfg, split_seed(104, std::uint64_t(s))), Method::proposed);
        exact += (!r.failed && r.estimated_support == r.true_support);
    }
    const double t = clk.seconds();
    report(4, "outlier support identification", exact == 15 && t < 30.0,
           fmt("%d/15 seeds exact, %.2f s (< 30 s)", exact, t));
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + DYNSPEC_CLI_PATH + "\" " + args + " > /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(cells);
    }
    return rows;
}

void alpha_sweep_and_determinism(const fs::path& dir) {
    const fs::path first = dir / "sweep_alpha_1.csv", second = dir / "sweep_alpha_2.csv";

    Clock clk;
    const int rc = run_cli("sweep-alpha --seed 0 --out \"" + first.string() + "\"");
    const double t = clk.seconds();
    double worst_prop = 0, best_cad = INFINITY;
    int trial_rows = 0, agg_rows = 0;
    if (rc == 0) {
        for (const auto& row : csv_rows(slurp(first))) {
            if (row.size() < 13) continue;
            if (row[4] != "-1") {
                ++trial_rows;
                continue;
            }
            ++agg_rows;
            const double med = std::stod(row[12]);
            if (row[3] == "proposed") worst_prop = std::max(worst_prop, med);
            else best_cad = std::min(best_cad, med);
        }
    }
    const bool ok5 = rc == 0 && trial_rows == 480 && agg_rows == 32 && worst_prop <= 1e-6 && best_cad >= 1e-1 && t < 600;
    report(5, "outlier-rate sweep", ok5,
           fmt("exit %d, %d trial + %d aggregate rows, worst proposed median RE %.3e (<= 1e-6), "
               "smallest Cadzow median RE %.3e (>= 1e-1), %.1f s (< 600 s)",
               rc, trial_rows, agg_rows, worst_prop, best_cad, t));

    const int rc2 = run_cli("sweep-alpha --seed 0 --out \"" + second.string() + "\"");
    const std::string a = slurp(first), b = slurp(second);
    report(9, "sweep determinism", rc == 0 && rc2 == 0 && !a.empty() && a == b,
           fmt("two sweep-alpha runs with seed 0: %zu and %zu bytes, %s", a.size(), b.size(),
               a == b ? "identical" : "different"));
}

void noise_table() {
    Clock clk;
    const Config cfg = noise_sweep_defaults();
    const SweepOutput out = sweep_noise(cfg);
    const double t = clk.seconds();
    const double target[] = {19.46, 56.66, 90.45, 128.46};
    std::vector<double> prop, cad;
    for (const auto& a : out.aggregates) (a.method == Method::proposed ? prop : cad).push_back(a.snr_spec);
    bool increasing = prop.size() == 4, dominant = prop.size() == 4 && cad.size() == 4, banded = prop.size() == 4;
    std::string values;
    for (std::size_t i = 0; i < prop.size() && i < cad.size() && i < 4; ++i) {
        if (i > 0 && !(prop[i] > prop[i - 1])) increasing = false;
        if (!(prop[i] >= cad[i] + 10.0)) dominant = false;
        if (!(std::abs(prop[i] - target[i]) <= 10.0)) banded = false;
        values += fmt("%s%.2f/%.2f (target %.2f)", i ? ", " : "", prop[i], cad[i], target[i]);
    }
    report(6, "noise-level SNR table", increasing && dominant && banded && t < 300,
           fmt("median SNR proposed/Cadzow dB over %d seeds at sigma 1e-3..1e-9: %s; increasing %s, "
               "+10 dB over Cadzow %s, within 10 dB of target %s, %.1f s (< 300 s)",
               cfg.trials, values.c_str(), increasing ? "yes" : "no", dominant ? "yes" : "no",
               banded ? "yes" : "no", t));
}

void completion_oracle() {
    Clock clk;
    cvec s(11);
    for (int l = 0; l < 11; ++l) s(l) = 2.0 * std::pow(0.5, l) + 3.0 * std::pow(0.25, l);
    cvec holes = s;
    holes(3) = 0.0;
    holes(7) = 0.0;
    const CompletionResult res = complete_channel(holes, {3, 7}, 6, 2, RecoveryParams{});
    const double e3 = std::abs(res.sequence(3) - s(3)) / std::abs(s(3));
    const double e7 = std::abs(res.sequence(7) - s(7)) / std::abs(s(7));
    const double t = clk.seconds();
    report(7, "Hankel completion oracle", e3 <= 1e-8 && e7 <= 1e-8 && t < 1.0,
           fmt("relative errors at l=3: %.3e, l=7: %.3e (<= 1e-8), %.3f s (< 1 s)", e3, e7, t));
}

void prony_oracle() {
    Clock clk;
    cvec c(2);
    c << 0.125, -0.75;
    std::vector<cplx> roots = polynomial_roots(c);
    double root_err = INFINITY;
    if (roots.size() == 2) {
        const double a = std::abs(roots[0] - 0.5) + std::abs(roots[1] - 0.25);
        const double b = std::abs(roots[0] - 0.25) + std::abs(roots[1] - 0.5);
        root_err = std::min(a, b);
    }
    cvec s(40);
    for (int l = 0; l < 40; ++l) s(l) = 2.0 * std::pow(0.5, l) + 3.0 * std::pow(0.25, l);
    const AnnihilatingFit fit = annihilating_coeffs(lift(s, 20), 2);
    double resid = 0;
    for (int k = 0; k + 2 < 40; ++k)
        resid = std::max(resid, std::abs(s(k + 2) + c(1) * s(k + 1) + c(0) * s(k)) / std::abs(s(k)));
    const double coeff_err = (fit.coeffs - c).cwiseAbs().maxCoeff();
    const double t = clk.seconds();
    report(8, "Prony micro-oracle", root_err <= 1e-10 && resid <= 1e-10 && coeff_err <= 1e-10 && t < 1.0,
           fmt("root error %.3e, recurrence residual %.3e, fitted coefficient error %.3e (all <= 1e-10), %.3f s",
               root_err, resid, coeff_err, t));
}

}  // namespace

int main() {
    const fs::path dir = fs::temp_directory_path() / ("dynspec_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    aliasing_oracle();
    rank_suite();
    noiseless_pipeline();
    support_identification();
    completion_oracle();
    prony_oracle();
    noise_table();
    alpha_sweep_and_determinism(dir);

    fs::remove_all(dir);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
