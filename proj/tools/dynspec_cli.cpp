// dynspec: simulate instances, recover spectra, and run the two experiment sweeps.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "dynspec/io.hpp"
#include "dynspec/metrics.hpp"

using namespace dynspec;

namespace {

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<int> trials;
    std::string out;
};

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

// file < environment < command line
Config load_config(Config cfg, const Common& c) {
    if (!c.config_path.empty()) apply_config_file(cfg, c.config_path);
    if (auto s = env("DYNSPEC_SEED")) apply_config_text(cfg, "seed = " + *s);
    if (auto t = env("DYNSPEC_THREADS")) apply_config_text(cfg, "threads = " + *t);
    if (c.seed) cfg.seed = *c.seed;
    if (c.threads) cfg.threads = *c.threads;
    if (c.trials) cfg.trials = *c.trials;
    validate(cfg);
    return cfg;
}

void print_summary(const SweepOutput& out, bool noise) {
    std::printf("%-8s %-8s %-10s %-9s %12s %10s\n", "alpha", "c", "sigma", "method", "median_RE",
                noise ? "SNR_spec" : "");
    for (const auto& a : out.aggregates) {
        std::printf("%-8.3g %-8.3g %-10.3g %-9s %12.4e", a.alpha, a.c, a.sigma, to_string(a.method).c_str(),
                    a.median_re);
        if (noise)
            std::printf(" %10.2f   (SNR_Gauss %.2f, SNR_Outlier %.2f)", a.snr_spec, a.snr_gauss, a.snr_outlier);
        std::printf("\n");
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Spectral recovery of circular-convolution dynamics from corrupted subsampled snapshots"};
    app.require_subcommand(1);

    Common simc, recc, sac, snc;
    std::string in_path, method_name;
    std::string spectra_path;
    bool timing = false;

    auto* sim = app.add_subcommand("simulate", "generate an instance file");
    sim->add_option("--config", simc.config_path, "key = value config file");
    sim->add_option("--seed", simc.seed, "instance seed");
    sim->add_option("--out", simc.out, "output instance JSON")->required();

    auto* rec = app.add_subcommand("recover", "recover the spectrum of an instance");
    rec->add_option("--in", in_path, "instance JSON")->required();
    rec->add_option("--method", method_name, "proposed | cadzow (default: the instance's config)");
    rec->add_option("--out", recc.out, "output results JSON")->required();

    auto add_sweep = [&](const char* name, const char* help, Common& c) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--config", c.config_path, "key = value config file");
        s->add_option("--seed", c.seed, "base seed");
        s->add_option("--trials", c.trials, "trials per grid point");
        s->add_option("--threads", c.threads, "worker threads");
        s->add_option("--out", c.out, "output CSV")->required();
        s->add_flag("--timing", timing, "record wall times in the CSV (breaks byte-identical reruns)");
        return s;
    };
    auto* sa = add_sweep("sweep-alpha", "median RE against outlier rate", sac);
    auto* sn = add_sweep("sweep-noise", "SNR table against Gaussian noise level", snc);
    sn->add_option("--spectra", spectra_path, "also write per-frequency spectra of the first trial");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*sim) {
        const Config cfg = load_config(Config{}, simc);
        const Instance inst = make_instance(cfg, cfg.seed);
        write_text_file(simc.out, instance_to_json(inst).dump(1) + "\n");
        return 0;
    }
    if (*rec) {
        json doc;
        const std::string text = read_text_file(in_path);
        try {
            doc = json::parse(text);
        } catch (const json::exception& e) {
            throw ValidationError(std::string("instance is not valid JSON: ") + e.what());
        }
        const Instance inst = instance_from_json(doc);
        Method method = inst.config.method;
        if (!method_name.empty()) {
            try {
                method = parse_method(method_name);
            } catch (const std::invalid_argument& e) {
                throw ValidationError(e.what());
            }
        }
        const TrialResult r = run_trial(inst, method, true);
        write_text_file(recc.out, trial_result_to_json(r).dump(1) + "\n");
        std::printf("method %s  RE %.6e  SNR_spec %.2f dB  support %zu/%zu%s\n", to_string(method).c_str(), r.re,
                    r.snr_spec, r.estimated_support.size(), r.true_support.size(), r.failed ? "  FAILED" : "");
        return 0;
    }
    const bool noise = bool(*sn);
    Config cfg = load_config(noise ? noise_sweep_defaults() : alpha_sweep_defaults(), noise ? snc : sac);
    cfg.record_wall_time = cfg.record_wall_time || timing;
    const SweepOutput out = noise ? sweep_noise(cfg) : sweep_alpha(cfg);
    std::ostringstream csv;
    write_sweep_csv(csv, out);
    write_text_file(noise ? snc.out : sac.out, csv.str());
    if (noise && !spectra_path.empty()) {
        std::ostringstream sp;
        write_spectra_csv(sp, out);
        write_text_file(spectra_path, sp.str());
    }
    print_summary(out, noise);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
