#include "dynspec/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "dynspec/hankel.hpp"
#include "dynspec/metrics.hpp"
#include "dynspec/rng.hpp"

namespace dynspec {

Instance make_instance(const Config& cfg, std::uint64_t seed, std::uint64_t noise_seed) {
    Instance inst;
    inst.config = cfg;
    inst.seed = seed;
    inst.noise_seed = noise_seed;
    Rng spec_rng = stream_rng(seed, Stream::spectrum);
    inst.truth = cfg.spectrum == SpectrumKind::monotone ? generate_monotone_spectrum(cfg.d)
                                                        : generate_symmetric_spectrum(cfg.d, spec_rng);
    Rng x_rng = stream_rng(seed, Stream::initial_state);
    inst.x0 = random_initial_state(cfg.d, x_rng);
    const rmat orbit = generate_orbit(inst.truth, inst.x0, cfg.L);
    inst.ms = measure(orbit, cfg.m);
    Rng o_rng = stream_rng(seed, Stream::outliers);
    inject_outliers(inst.ms, cfg.alpha, cfg.c, o_rng);
    Rng g_rng = stream_rng(noise_seed, Stream::noise);
    inject_gaussian(inst.ms, cfg.sigma, g_rng);
    return inst;
}

namespace {

std::vector<ChannelRoots> roots_from(const std::vector<HankelChannel>& channels, int m, const RecoveryParams& p,
                                     double tau_rel) {
    std::vector<ChannelRoots> out;
    for (const auto& ch : channels) {
        int cap = ch.j == 0 ? (p.rank0 > 0 ? p.rank0 : theoretical_rank(m, 0))
                            : (p.rankj > 0 ? p.rankj : theoretical_rank(m, ch.j));
        out.push_back(channel_roots(ch.sequence, ch.K, ch.j, cap, tau_rel));
    }
    return out;
}

std::vector<ChannelDiagnostics> diagnostics_for(const Instance& inst) {
    const Config& cfg = inst.config;
    const int J = cfg.J();
    const auto clean = channel_sequences(inst.ms.clean, cfg.m, cfg.lift_size());
    std::vector<ChannelDiagnostics> out;
    for (int j = 0; j < J; ++j) {
        ChannelDiagnostics dg;
        dg.j = j;
        std::vector<double> roots;
        for (int n = 0; n < cfg.m; ++n) {
            const double v = inst.truth.values(j + n * J);
            bool seen = false;
            for (double r : roots) seen = seen || std::abs(r - v) <= 1e-12;
            if (!seen) roots.push_back(v);
        }
        try {
            dg.mu = compute_incoherence(roots, cfg.lift_size());
        } catch (const std::exception&) {
            dg.mu = std::numeric_limits<double>::infinity();
        }
        try {
            dg.kappa = condition_number(lift(clean[j].sequence, cfg.lift_size()), int(roots.size()));
        } catch (const std::exception&) {
            dg.kappa = std::numeric_limits<double>::infinity();
        }
        out.push_back(dg);
    }
    return out;
}

}  // namespace

TrialResult run_trial(const Instance& inst, Method method, bool with_diagnostics) {
    const auto t0 = std::chrono::steady_clock::now();
    const Config& cfg = inst.config;
    TrialResult res;
    res.config = cfg;
    res.method = method;
    res.seed = inst.seed;
    const int K = cfg.lift_size();
    for (int l : inst.ms.outlier_support)
        if (l <= 2 * K - 2) res.true_support.push_back(l);
    std::tie(res.snr_outlier, res.snr_gauss) = measurement_snrs(inst.ms);

    const RecoveryParams p = effective_params(cfg);
    const auto channels = channel_sequences(inst.ms.corrupted, cfg.m, K);
    const Spectrum* truth = &inst.truth;
    try {
        const RecoveryOutput rec = recover_all_channels(channels, cfg.m, p, method);
        res.estimated_support = rec.estimated_support;
        res.detector = rec.detector;
        res.channel_iterations = rec.channel_iterations;
        res.estimate = assemble_spectrum(roots_from(rec.cleaned, cfg.m, p, cfg.tau_rel), cfg.d, cfg.m,
                                         cfg.assignment_mode, truth);
    } catch (const std::exception& e) {
        res.failed = true;
        res.failure = e.what();
        res.estimate = assemble_spectrum(roots_from(channels, cfg.m, p, cfg.tau_rel), cfg.d, cfg.m,
                                         cfg.assignment_mode, truth);
    }
    res.truth = inst.truth.values;
    res.re = relative_error(res.estimate.values, inst.truth.values);
    res.snr_spec = spectral_snr(res.re);
    if (with_diagnostics) res.diagnostics = diagnostics_for(inst);
    res.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

TrialResult run_trial(const Config& cfg, std::uint64_t seed) {
    return run_trial(make_instance(cfg, seed), cfg.method);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) fn(i);
        });
    for (auto& th : pool) th.join();
}

namespace {

SweepRow row_from(const TrialResult& r, int trial, bool timing) {
    SweepRow row;
    row.alpha = r.config.alpha;
    row.c = r.config.c;
    row.sigma = r.config.sigma;
    row.method = r.method;
    row.trial = trial;
    row.seed = r.seed;
    row.re = r.re;
    row.snr_spec = r.snr_spec;
    row.snr_outlier = r.snr_outlier;
    row.snr_gauss = r.snr_gauss;
    row.wall_time_s = timing ? r.wall_time_s : 0.0;
    row.failed = r.failed;
    return row;
}

// One aggregate row per (alpha, c, sigma, method) in first-seen order.
std::vector<SweepRow> aggregate(const std::vector<SweepRow>& rows) {
    std::vector<std::tuple<double, double, double, int>> keys;
    std::map<std::tuple<double, double, double, int>, std::vector<const SweepRow*>> groups;
    for (const auto& r : rows) {
        auto key = std::make_tuple(r.alpha, r.c, r.sigma, int(r.method));
        if (!groups.count(key)) keys.push_back(key);
        groups[key].push_back(&r);
    }
    std::vector<SweepRow> out;
    for (const auto& key : keys) {
        const auto& g = groups[key];
        std::vector<double> re, snr, so, sg, wt;
        bool failed = false;
        for (const SweepRow* r : g) {
            re.push_back(r->re);
            snr.push_back(r->snr_spec);
            so.push_back(r->snr_outlier);
            sg.push_back(r->snr_gauss);
            wt.push_back(r->wall_time_s);
            failed = failed || r->failed;
        }
        SweepRow a = *g.front();
        a.trial = -1;
        a.seed = 0;
        a.median_re = median(re);
        a.re = a.median_re;
        a.snr_spec = median(snr);
        a.snr_outlier = median(so);
        a.snr_gauss = median(sg);
        a.wall_time_s = median(wt);
        a.failed = failed;
        out.push_back(a);
    }
    return out;
}

}  // namespace

SweepOutput sweep_alpha(const Config& base) {
    validate(base);
    const int na = int(base.alphas.size()), nc = int(base.cs.size()), T = base.trials;
    const int n = na * nc * T;
    std::vector<TrialResult> prop(n), cad(n);
    parallel_for(n, base.threads, [&](int i) {
        const int ic = (i / T) % nc, ia = i / (T * nc);
        Config cfg = base;
        cfg.alpha = base.alphas[ia];
        cfg.c = base.cs[ic];
        const std::uint64_t seed = split_seed(base.seed, std::uint64_t(i));
        const Instance inst = make_instance(cfg, seed);
        prop[i] = run_trial(inst, Method::proposed);
        cad[i] = run_trial(inst, Method::cadzow);
    });
    SweepOutput out;
    for (int ia = 0; ia < na; ++ia)
        for (int ic = 0; ic < nc; ++ic)
            for (const auto* set : {&prop, &cad})
                for (int t = 0; t < T; ++t)
                    out.trials.push_back(row_from((*set)[(ia * nc + ic) * T + t], t, base.record_wall_time));
    out.aggregates = aggregate(out.trials);
    return out;
}

SweepOutput sweep_noise(const Config& base) {
    validate(base);
    const int ns = int(base.sigmas.size()), T = base.trials;
    const int n = ns * T;
    std::vector<TrialResult> prop(n), cad(n);
    std::vector<Instance> first(ns);
    parallel_for(n, base.threads, [&](int i) {
        const int t = i % T, is = i / T;
        Config cfg = base;
        cfg.sigma = base.sigmas[is];
        std::uint64_t seed, noise_seed;
        if (base.reuse_outliers) {
            seed = split_seed(base.seed, std::uint64_t(t));
            noise_seed = split_seed(seed, 1000 + std::uint64_t(is));
        } else {
            seed = split_seed(base.seed, std::uint64_t(i));
            noise_seed = seed;
        }
        const Instance inst = make_instance(cfg, seed, noise_seed);
        prop[i] = run_trial(inst, Method::proposed);
        cad[i] = run_trial(inst, Method::cadzow);
    });
    SweepOutput out;
    for (int is = 0; is < ns; ++is)
        for (const auto* set : {&prop, &cad}) {
            for (int t = 0; t < T; ++t)
                out.trials.push_back(row_from((*set)[is * T + t], t, base.record_wall_time));
            const TrialResult& r0 = (*set)[is * T];
            out.spectra.push_back({base.sigmas[is], r0.method, 0, r0.truth, r0.estimate.values});
        }
    out.aggregates = aggregate(out.trials);
    return out;
}

namespace {
std::string num(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace

void write_sweep_csv(std::ostream& os, const SweepOutput& out) {
    os << "alpha,c,sigma,method,trial,seed,RE,snr_spec,snr_outlier,snr_gauss,wall_time_s,failed,median_RE\n";
    auto emit = [&](const SweepRow& r, bool agg) {
        os << num(r.alpha) << ',' << num(r.c) << ',' << num(r.sigma) << ',' << to_string(r.method) << ','
           << r.trial << ',' << r.seed << ',' << num(r.re) << ',' << num(r.snr_spec) << ',' << num(r.snr_outlier)
           << ',' << num(r.snr_gauss) << ',' << num(r.wall_time_s) << ',' << (r.failed ? "true" : "false") << ','
           << (agg ? num(r.median_re) : "") << '\n';
    };
    for (const auto& r : out.trials) emit(r, false);
    for (const auto& r : out.aggregates) emit(r, true);
}

void write_spectra_csv(std::ostream& os, const SweepOutput& out) {
    os << "sigma,method,trial,k,truth,estimate\n";
    for (const auto& s : out.spectra)
        for (Eigen::Index k = 0; k < s.truth.size(); ++k)
            os << num(s.sigma) << ',' << to_string(s.method) << ',' << s.trial << ',' << k << ',' << num(s.truth(k))
               << ',' << num(s.estimate(k)) << '\n';
}

}  // namespace dynspec
