#include "dynspec/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dynspec {

namespace {

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json complex_list(const std::vector<cplx>& v) {
    json a = json::array();
    for (cplx z : v) a.push_back(complex_to_json(z));
    return a;
}

json vector_to_json(const rvec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

rvec vector_from_json(const json& j) {
    rvec v(Eigen::Index(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(Eigen::Index(i)) = j[i].get<double>();
    return v;
}

// JSON has no infinity; encode it as null.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json config_to_json(const Config& c) {
    json j;
    j["d"] = c.d;
    j["m"] = c.m;
    j["J"] = c.J();
    j["L"] = c.L;
    j["K"] = c.lift_size();
    j["alpha"] = c.alpha;
    j["c"] = c.c;
    j["sigma"] = c.sigma;
    j["method"] = to_string(c.method);
    j["assignment_mode"] = to_string(c.assignment_mode);
    j["spectrum"] = c.spectrum == SpectrumKind::monotone ? "monotone" : "random";
    const RecoveryParams p = effective_params(c);
    j["max_iters"] = p.max_iters;
    j["tol"] = p.tol;
    j["gamma"] = p.gamma;
    j["beta"] = p.beta;
    j["eta_rel"] = p.eta_rel;
    j["noise_floor"] = p.noise_floor;
    j["tau_rel"] = c.tau_rel;
    j["fast_svd"] = p.fast_svd;
    j["exponential_fit"] = p.exponential_fit;
    j["real_roots"] = p.real_roots;
    j["rank_noise_factor"] = p.rank_noise_factor;
    j["seed"] = c.seed;
    j["reuse_outliers"] = c.reuse_outliers;
    return j;
}

Config config_from_json(const json& j) {
    Config c;
    c.d = j.at("d").get<int>();
    c.m = j.at("m").get<int>();
    c.L = j.at("L").get<int>();
    c.K = j.value("K", 0);
    c.alpha = j.at("alpha").get<double>();
    c.c = j.at("c").get<double>();
    c.sigma = j.at("sigma").get<double>();
    c.method = parse_method(j.value("method", std::string("proposed")));
    c.assignment_mode = parse_assignment_mode(j.value("assignment_mode", std::string("oracle")));
    c.spectrum = j.value("spectrum", std::string("random")) == "monotone" ? SpectrumKind::monotone : SpectrumKind::random;
    c.params.max_iters = j.value("max_iters", c.params.max_iters);
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    c.params.gamma = j.value("gamma", c.params.gamma);
    c.params.beta = j.value("beta", c.params.beta);
    c.params.eta_rel = j.value("eta_rel", c.params.eta_rel);
    if (j.contains("noise_floor")) c.noise_floor = j["noise_floor"].get<double>();
    c.tau_rel = j.value("tau_rel", c.tau_rel);
    c.params.fast_svd = j.value("fast_svd", c.params.fast_svd);
    c.params.exponential_fit = j.value("exponential_fit", c.params.exponential_fit);
    c.params.real_roots = j.value("real_roots", c.params.real_roots);
    c.params.rank_noise_factor = j.value("rank_noise_factor", c.params.rank_noise_factor);
    c.seed = j.value("seed", std::uint64_t(0));
    c.reuse_outliers = j.value("reuse_outliers", true);
    return c;
}

json matrix_to_json(const rmat& M) {
    json data = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r)
        for (Eigen::Index c = 0; c < M.cols(); ++c) data.push_back(M(r, c));
    return json{{"dims", {M.rows(), M.cols()}}, {"data", data}};
}

rmat matrix_from_json(const json& j) {
    const auto rows = j.at("dims").at(0).get<Eigen::Index>();
    const auto cols = j.at("dims").at(1).get<Eigen::Index>();
    const json& data = j.at("data");
    if (Eigen::Index(data.size()) != rows * cols) throw ValidationError("matrix data does not match dims");
    rmat M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = data[std::size_t(r * cols + c)].get<double>();
    return M;
}

json instance_to_json(const Instance& inst) {
    json j;
    j["format_version"] = format_version;
    j["kind"] = "instance";
    j["config"] = config_to_json(inst.config);
    j["seed"] = inst.seed;
    j["noise_seed"] = inst.noise_seed;
    j["truth_spectrum"] = {{"d", inst.truth.d}, {"values", vector_to_json(inst.truth.values)}};
    j["x0"] = vector_to_json(inst.x0);
    j["clean"] = matrix_to_json(inst.ms.clean);
    j["corrupted"] = matrix_to_json(inst.ms.corrupted);
    j["outlier_matrix"] = matrix_to_json(inst.ms.E);
    j["noise_matrix"] = matrix_to_json(inst.ms.G);
    j["outlier_support"] = inst.ms.outlier_support;
    return j;
}

Instance instance_from_json(const json& j) {
    try {
        if (j.at("format_version").get<int>() != format_version) throw ValidationError("unsupported format_version");
        if (j.value("kind", std::string()) != "instance") throw ValidationError("not an instance document");
        Instance inst;
        inst.config = config_from_json(j.at("config"));
        validate(inst.config);
        inst.seed = j.at("seed").get<std::uint64_t>();
        inst.noise_seed = j.value("noise_seed", inst.seed);
        inst.truth.d = j.at("truth_spectrum").at("d").get<int>();
        inst.truth.values = vector_from_json(j.at("truth_spectrum").at("values"));
        inst.x0 = vector_from_json(j.at("x0"));
        inst.ms.clean = matrix_from_json(j.at("clean"));
        inst.ms.corrupted = matrix_from_json(j.at("corrupted"));
        inst.ms.E = matrix_from_json(j.at("outlier_matrix"));
        inst.ms.G = matrix_from_json(j.at("noise_matrix"));
        inst.ms.outlier_support = j.at("outlier_support").get<std::vector<int>>();
        inst.ms.J = int(inst.ms.clean.rows());
        inst.ms.L = int(inst.ms.clean.cols());
        const auto& c = inst.config;
        if (inst.truth.d != c.d || inst.truth.values.size() != c.d) throw ValidationError("truth spectrum length must equal d");
        auto same_shape = [&](const rmat& M) { return M.rows() == c.J() && M.cols() == c.L; };
        if (!same_shape(inst.ms.clean) || !same_shape(inst.ms.corrupted) || !same_shape(inst.ms.E) ||
            !same_shape(inst.ms.G))
            throw ValidationError("measurement arrays must be J x L");
        return inst;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed instance: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("malformed instance: ") + e.what());
    }
}

json trial_result_to_json(const TrialResult& r) {
    json j;
    j["format_version"] = format_version;
    j["kind"] = "trial_result";
    j["config"] = config_to_json(r.config);
    j["method"] = to_string(r.method);
    j["assignment_mode"] = to_string(r.estimate.mode);
    j["seed"] = r.seed;
    j["RE"] = r.re;
    j["snr_spec"] = finite_or_null(r.snr_spec);
    j["snr_outlier"] = finite_or_null(r.snr_outlier);
    j["snr_gauss"] = finite_or_null(r.snr_gauss);
    j["failed"] = r.failed;
    if (r.failed) j["failure"] = r.failure;
    j["wall_time_s"] = r.wall_time_s;
    j["truth_spectrum"] = vector_to_json(r.truth);
    j["estimated_spectrum"] = vector_to_json(r.estimate.values);
    json chans = json::array();
    for (const auto& ch : r.estimate.per_channel) {
        std::vector<cplx> coeffs(ch.coeffs.data(), ch.coeffs.data() + ch.coeffs.size());
        chans.push_back({{"j", ch.j},
                         {"order", ch.order},
                         {"coefficients", complex_list(coeffs)},
                         {"roots", complex_list(ch.roots)},
                         {"has_complex_roots", ch.has_complex},
                         {"fit_residual", ch.residual}});
    }
    j["channels"] = chans;
    j["true_support"] = r.true_support;
    j["estimated_support"] = r.estimated_support;
    json diag;
    diag["detector"] = r.detector;
    diag["channel_iterations"] = r.channel_iterations;
    json per = json::array();
    for (const auto& d : r.diagnostics)
        per.push_back({{"j", d.j}, {"mu", finite_or_null(d.mu)}, {"kappa", finite_or_null(d.kappa)}});
    diag["channels"] = per;
    j["diagnostics"] = diag;
    return j;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace dynspec
