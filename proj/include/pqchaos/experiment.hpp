#pragma once

// Configuration-driven experiment runner: JSON config schema, validation,
// the six pipelines (ed-sff, pqc-sff, spectrum, csr, phase-grid,
// depth-grid), artifact writing and the run manifest.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"
#include "pqchaos/core.hpp"
#include "pqchaos/dephasing.hpp"
#include "pqchaos/diagnostics.hpp"
#include "pqchaos/parallel.hpp"
#include "pqchaos/pqc.hpp"
#include "pqchaos/random.hpp"
#include "pqchaos/rmt.hpp"
#include "pqchaos/spectral.hpp"
#include "pqchaos/time_grid.hpp"
#include "pqchaos/version.hpp"

namespace pqchaos::experiment {

using nlohmann::json;

enum class Mode { EdSff, PqcSff, Spectrum, Csr, PhaseGrid, DepthGrid };

inline std::string to_string(Mode m) {
    switch (m) {
        case Mode::EdSff: return "ed-sff";
        case Mode::PqcSff: return "pqc-sff";
        case Mode::Spectrum: return "spectrum";
        case Mode::Csr: return "csr";
        case Mode::PhaseGrid: return "phase-grid";
        case Mode::DepthGrid: return "depth-grid";
    }
    return "unknown";
}

inline std::optional<Mode> parse_mode(const std::string& s) {
    for (Mode m : {Mode::EdSff, Mode::PqcSff, Mode::Spectrum, Mode::Csr, Mode::PhaseGrid, Mode::DepthGrid})
        if (to_string(m) == s) return m;
    return std::nullopt;
}

struct TimeGridSpec {
    std::string kind = "log";  // log | linear
    double t_min = 0.01;
    double t_max = 100.0;
    int points = 400;

    std::vector<double> build() const {
        return kind == "linear" ? linear_grid(t_min, t_max, points) : log_grid(t_min, t_max, points);
    }
};

struct ExperimentConfig {
    Mode mode = Mode::EdSff;
    int d = 32;
    double sigma = 1.0;
    int K = 3;
    int kraus_offset = 1;
    double beta = 0.0;
    double hbar = 1.0;
    std::vector<double> gamma{0.1};
    std::vector<double> tau{0.1};
    std::vector<double> epsilon{0.1};
    int realizations = 100;
    std::uint64_t master_seed = 20240101;
    TimeGridSpec time;
    std::string output_dir = "out";
    std::string prefix;
    int histogram_bins = 256;
    double containment_margin = 0.02;
    unsigned workers = 0;  // 0 = hardware concurrency
    bool allow_large = false;

    std::string stem() const { return prefix.empty() ? to_string(mode) : prefix; }
};

inline json to_json(const ExperimentConfig& c) {
    return {{"mode", to_string(c.mode)},
            {"d", c.d},
            {"sigma", c.sigma},
            {"K", c.K},
            {"kraus_offset", c.kraus_offset},
            {"beta", c.beta},
            {"hbar", c.hbar},
            {"gamma", c.gamma},
            {"tau", c.tau},
            {"epsilon", c.epsilon},
            {"realizations", c.realizations},
            {"master_seed", c.master_seed},
            {"time", {{"kind", c.time.kind}, {"t_min", c.time.t_min}, {"t_max", c.time.t_max}, {"points", c.time.points}}},
            {"output", {{"directory", c.output_dir}, {"prefix", c.prefix}}},
            {"histogram_bins", c.histogram_bins},
            {"containment_margin", c.containment_margin},
            {"workers", c.workers},
            {"allow_large", c.allow_large}};
}

struct ValidationReport {
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
    std::string summary() const {
        std::string s;
        for (const auto& e : errors) s += "  " + e + "\n";
        return s;
    }
};

/// Thrown by `parse_config` / `run` on an invalid configuration.
struct ValidationError : std::invalid_argument {
    ValidationReport report;
    explicit ValidationError(ValidationReport r)
        : std::invalid_argument("invalid configuration:\n" + r.summary()), report(std::move(r)) {}
};

namespace detail {

template <typename T>
void read_field(const json& j, const char* key, T& out, ValidationReport& rep, const std::string& path = "") {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        rep.errors.push_back(path + key + ": wrong type");
    }
}

template <typename T>
void read_list(const json& j, const char* key, std::vector<T>& out, ValidationReport& rep) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    try {
        if (v.is_array())
            out = v.get<std::vector<T>>();
        else
            out = {v.get<T>()};
    } catch (const json::exception&) {
        rep.errors.push_back(std::string(key) + ": expected a number or a list of numbers");
    }
}

}  // namespace detail

/// Side-effect-free check of every field against its documented domain.
inline ValidationReport validate(const ExperimentConfig& c) {
    ValidationReport r;
    auto err = [&](std::string s) { r.errors.push_back(std::move(s)); };
    if (c.d < 2) err("d: must be >= 2");
    if (c.d > 32 && !c.allow_large && (c.mode == Mode::Spectrum || c.mode == Mode::Csr))
        err("d: eigenproblems above d = 32 need allow_large (superoperator is d^2 x d^2)");
    if (!(c.sigma > 0.0)) err("sigma: must be positive");
    if (!(c.hbar > 0.0)) err("hbar: must be positive");
    if (!(c.beta >= 0.0)) err("beta: must be >= 0");
    if (c.realizations < 1) err("realizations: must be >= 1");
    const bool uses_kraus = c.mode != Mode::EdSff;
    if (uses_kraus) {
        if (c.K < 1 || (c.d >= 2 && c.K > std::max(1, c.d * c.d - 2))) err("K: must lie in [1, d^2 - 2]");
        if (c.K > 1 && (c.kraus_offset < 1 || c.kraus_offset > c.d * (c.K - 1)))
            err("kraus_offset: must lie in [1, d (K - 1)]");
    }
    if (c.mode == Mode::EdSff) {
        if (c.gamma.empty()) err("gamma: grid is empty");
        for (double g : c.gamma)
            if (!(g >= 0.0) || !std::isfinite(g)) err("gamma: values must be finite and >= 0");
    } else {
        if (c.tau.empty()) err("tau: grid is empty");
        if (c.epsilon.empty()) err("epsilon: grid is empty");
        for (double t : c.tau) {
            if (!std::isfinite(t) || t < 0.0) err("tau: values must be finite and >= 0");
            if ((c.mode == Mode::PqcSff || c.mode == Mode::DepthGrid) && !(t > 0.0))
                err("tau: time series need tau > 0");
        }
        for (double e : c.epsilon)
            if (!(e >= 0.0 && e <= 1.0)) err("epsilon: values must lie in [0, 1]");
    }
    if (c.mode == Mode::EdSff || c.mode == Mode::PqcSff || c.mode == Mode::DepthGrid) {
        if (c.time.kind != "log" && c.time.kind != "linear") err("time.kind: must be log or linear");
        if (c.time.points < 2) err("time.points: must be >= 2");
        if (!(c.time.t_max > c.time.t_min)) err("time: t_max must exceed t_min");
        if (c.time.kind == "log" && !(c.time.t_min > 0.0)) err("time.t_min: log grids need t_min > 0");
        if (c.time.kind == "linear" && !(c.time.t_min >= 0.0)) err("time.t_min: must be >= 0");
    }
    if (c.histogram_bins < 1) err("histogram_bins: must be >= 1");
    if (!(c.containment_margin >= 0.0)) err("containment_margin: must be >= 0");
    if (c.output_dir.empty()) err("output.directory: must not be empty");
    if (c.prefix.find('/') != std::string::npos) err("output.prefix: must not contain '/'");
    return r;
}

/// Parses a JSON config (unknown keys are errors) and validates it.
inline ExperimentConfig parse_config(const json& j, ValidationReport* report_out = nullptr) {
    ValidationReport rep;
    ExperimentConfig c;
    if (!j.is_object()) {
        rep.errors.push_back("config: top level must be an object");
        throw ValidationError(rep);
    }
    static const std::set<std::string> known{"mode",   "d",        "sigma",          "K",
                                             "kraus_offset", "beta", "hbar",     "gamma",
                                             "tau",    "epsilon",  "realizations",   "master_seed",
                                             "time",   "output",   "histogram_bins", "containment_margin",
                                             "workers", "allow_large"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) rep.errors.push_back(key + ": unknown field");
    if (!j.contains("mode")) {
        rep.errors.push_back("mode: required");
    } else if (!j["mode"].is_string() || !parse_mode(j["mode"].get<std::string>())) {
        rep.errors.push_back("mode: must be one of ed-sff, pqc-sff, spectrum, csr, phase-grid, depth-grid");
    } else {
        c.mode = *parse_mode(j["mode"].get<std::string>());
    }
    detail::read_field(j, "d", c.d, rep);
    detail::read_field(j, "sigma", c.sigma, rep);
    detail::read_field(j, "K", c.K, rep);
    detail::read_field(j, "kraus_offset", c.kraus_offset, rep);
    detail::read_field(j, "beta", c.beta, rep);
    detail::read_field(j, "hbar", c.hbar, rep);
    detail::read_list(j, "gamma", c.gamma, rep);
    detail::read_list(j, "tau", c.tau, rep);
    detail::read_list(j, "epsilon", c.epsilon, rep);
    detail::read_field(j, "realizations", c.realizations, rep);
    detail::read_field(j, "master_seed", c.master_seed, rep);
    detail::read_field(j, "histogram_bins", c.histogram_bins, rep);
    detail::read_field(j, "containment_margin", c.containment_margin, rep);
    detail::read_field(j, "workers", c.workers, rep);
    detail::read_field(j, "allow_large", c.allow_large, rep);
    if (j.contains("time")) {
        const auto& t = j["time"];
        if (!t.is_object()) {
            rep.errors.push_back("time: must be an object");
        } else {
            for (const auto& [key, _] : t.items())
                if (key != "kind" && key != "t_min" && key != "t_max" && key != "points")
                    rep.errors.push_back("time." + key + ": unknown field");
            detail::read_field(t, "kind", c.time.kind, rep, "time.");
            detail::read_field(t, "t_min", c.time.t_min, rep, "time.");
            detail::read_field(t, "t_max", c.time.t_max, rep, "time.");
            detail::read_field(t, "points", c.time.points, rep, "time.");
        }
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        if (!o.is_object()) {
            rep.errors.push_back("output: must be an object");
        } else {
            for (const auto& [key, _] : o.items())
                if (key != "directory" && key != "prefix") rep.errors.push_back("output." + key + ": unknown field");
            detail::read_field(o, "directory", c.output_dir, rep, "output.");
            detail::read_field(o, "prefix", c.prefix, rep, "output.");
        }
    }
    const auto v = validate(c);
    rep.errors.insert(rep.errors.end(), v.errors.begin(), v.errors.end());
    if (report_out) *report_out = rep;
    if (!rep.ok()) throw ValidationError(rep);
    return c;
}

/// Caption-scale overrides: d = 64 and the published ensemble sizes.
inline void apply_paper_scale(ExperimentConfig& c) {
    c.d = 64;
    switch (c.mode) {
        case Mode::EdSff: c.realizations = 500; break;
        case Mode::PqcSff:
        case Mode::DepthGrid: c.realizations = 100; break;
        case Mode::Spectrum:
        case Mode::Csr:
            c.realizations = 4;
            c.allow_large = true;
            break;
        case Mode::PhaseGrid: break;
    }
}

// ---------------------------------------------------------------------------
// Realizations

/// Seed of realization r; the Hamiltonian and the Kraus set draw from
/// independent purpose-tagged streams of the same seed.
inline std::uint64_t realization_seed(const ExperimentConfig& c, int r) {
    return derive_seed(c.master_seed, static_cast<std::uint64_t>(r));
}

inline rmt::HamiltonianSpectrum realization_hamiltonian(const ExperimentConfig& c, int r) {
    return rmt::sample_goe(c.d, c.sigma, realization_seed(c, r));
}

inline pqc::ParametricChannel realization_channel(const ExperimentConfig& c, int r, double tau, double eps) {
    const auto seed = realization_seed(c, r);
    return pqc::ParametricChannel(tau, eps, rmt::sample_goe(c.d, c.sigma, seed),
                                  rmt::sample_kraus(c.d, c.K, seed, c.kraus_offset), c.hbar);
}

// ---------------------------------------------------------------------------
// Artifacts and manifest

inline std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

struct Artifact {
    std::string path;
    std::string kind;
    std::string sha256;
    std::size_t bytes = 0;
};

struct RunResult {
    json manifest;
    std::vector<Artifact> artifacts;
    std::size_t failed_points = 0;
    bool ok() const { return failed_points == 0; }
};

class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    const std::filesystem::path& directory() const { return dir_; }

    void write(const std::string& name, const std::string& kind, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
        f << content;
        if (!f) throw std::runtime_error("write failed: " + path.string());
        artifacts_.push_back({name, kind, sha256_hex(content), content.size()});
    }

    const std::vector<Artifact>& artifacts() const { return artifacts_; }

private:
    std::filesystem::path dir_;
    std::vector<Artifact> artifacts_;
};

inline std::string number_tag(double x) {
    std::string s = diagnostics::format_number(x);
    for (auto& ch : s)
        if (ch == '-') ch = 'm';
    return s;
}

namespace detail {

using Clock = std::chrono::steady_clock;
using diagnostics::format_number;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Evaluates fn(r) for every realization on the worker pool and returns the
/// results in realization order.
template <typename T, typename Fn>
std::vector<T> per_realization(const ExperimentConfig& c, Fn&& fn) {
    std::vector<T> out(static_cast<std::size_t>(c.realizations));
    parallel_for(static_cast<std::size_t>(c.realizations), c.workers ? c.workers : default_workers(),
                 [&](std::size_t r) { out[r] = fn(static_cast<int>(r)); });
    return out;
}

inline diagnostics::DiagnosticSeries reduce(const std::vector<diagnostics::DiagnosticSeries>& v) {
    return diagnostics::ensemble_average(v);
}

inline std::string series_csv(const diagnostics::DiagnosticSeries& s) {
    std::ostringstream os;
    diagnostics::write_series_csv(os, s);
    return os.str();
}

struct GridPoint {
    explicit GridPoint(json l) : label(std::move(l)) {}

    json label;
    json summary = json::object();
    double seconds = 0.0;
    std::optional<std::string> error;
};

inline json point_json(const GridPoint& p) {
    json j = p.label;
    j["wall_seconds"] = p.seconds;
    j["summary"] = p.summary;
    if (p.error) j["error"] = *p.error;
    return j;
}

inline std::vector<double> sorted_times(const ExperimentConfig& c) { return c.time.build(); }

// -- ed-sff -----------------------------------------------------------------

inline void run_ed(const ExperimentConfig& c, ArtifactWriter& w, std::vector<GridPoint>& points) {
    const auto times = sorted_times(c);
    for (double g : c.gamma) {
        GridPoint p(json{{"gamma", g}});
        const auto t0 = Clock::now();
        try {
            const dephasing::EDParams params{g, c.hbar};
            auto runs = per_realization<diagnostics::DiagnosticSeries>(c, [&](int r) {
                return diagnostics::ed_series(realization_hamiltonian(c, r).energies, c.beta, params, times);
            });
            auto mean = reduce(runs);
            const std::string name = c.stem() + "_gamma_" + number_tag(g) + ".csv";
            w.write(name, "sff-series", series_csv(mean));
            p.summary = {{"artifact", name}, {"plateau", mean.plateau}, {"t_heisenberg",
                                                                          rmt::heisenberg_time(c.d, c.sigma, c.hbar)}};
        } catch (const std::exception& e) {
            p.error = e.what();
        }
        p.seconds = seconds_since(t0);
        points.push_back(std::move(p));
    }
}

// -- pqc-sff ----------------------------------------------------------------

inline void run_pqc(const ExperimentConfig& c, ArtifactWriter& w, std::vector<GridPoint>& points) {
    const auto times = sorted_times(c);
    for (double tau : c.tau) {
        for (double eps : c.epsilon) {
            GridPoint p(json{{"tau", tau}, {"epsilon", eps}});
            const auto t0 = Clock::now();
            try {
                const auto steps = step_grid(times, tau);
                if (steps.empty()) throw InsufficientData("time grid maps to no channel steps");
                auto runs = per_realization<diagnostics::DiagnosticSeries>(c, [&](int r) {
                    return diagnostics::pqc_series(realization_channel(c, r, tau, eps), c.beta, steps);
                });
                auto mean = reduce(runs);
                const std::string name = c.stem() + "_tau_" + number_tag(tau) + "_eps_" + number_tag(eps) + ".csv";
                w.write(name, "sff-series", series_csv(mean));
                p.summary = {{"artifact", name}, {"steps", steps.size()}, {"plateau", mean.plateau}};
            } catch (const std::exception& e) {
                p.error = e.what();
            }
            p.seconds = seconds_since(t0);
            points.push_back(std::move(p));
        }
    }
}

// -- spectrum / csr -----------------------------------------------------------

struct RealizationSpectrum {
    ComplexVector eigenvalues;
    Eigen::Index fixed_point = 0;
    std::vector<Complex> bulk;
};

inline RealizationSpectrum realization_spectrum(const ExperimentConfig& c, int r, double tau, double eps) {
    const auto ch = realization_channel(c, r, tau, eps);
    spectral::ChannelParameters params{tau, eps, c.K, c.d, c.sigma, c.hbar};
    RealizationSpectrum s;
    s.eigenvalues = spectral::eigenvalues(pqc::build_superoperator(ch),
                                          params.describe() + " realization=" + std::to_string(r));
    s.fixed_point = spectral::fixed_point_index(s.eigenvalues);
    s.bulk = spectral::spectral_bulk(s.eigenvalues);
    return s;
}

inline void run_spectral(const ExperimentConfig& c, ArtifactWriter& w, std::vector<GridPoint>& points, bool csr) {
    for (double tau : c.tau) {
        for (double eps : c.epsilon) {
            GridPoint p(json{{"tau", tau}, {"epsilon", eps}});
            const auto t0 = Clock::now();
            try {
                const spectral::ChannelParameters params{tau, eps, c.K, c.d, c.sigma, c.hbar};
                const auto spectra = per_realization<RealizationSpectrum>(
                    c, [&](int r) { return realization_spectrum(c, r, tau, eps); });
                const std::string tag = c.stem() + "_tau_" + number_tag(tau) + "_eps_" + number_tag(eps);
                const auto phase = spectral::classify_phase(params);
                p.summary["phase"] = spectral::to_string(phase);
                if (!csr) {
                    const auto boundary = spectral::boundary_for_phase(phase, params);
                    std::ostringstream os;
                    os << "realization,re,im,fixed_point\n";
                    spectral::Histogram2D hist;
                    hist.bins = c.histogram_bins;
                    std::size_t inside = 0, total = 0;
                    double max_mod = 0.0;
                    for (std::size_t r = 0; r < spectra.size(); ++r) {
                        const auto& s = spectra[r];
                        for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
                            os << r << ',' << diagnostics::format_number(s.eigenvalues(k).real()) << ','
                               << diagnostics::format_number(s.eigenvalues(k).imag()) << ','
                               << (k == s.fixed_point ? 1 : 0) << '\n';
                            max_mod = std::max(max_mod, std::abs(s.eigenvalues(k)));
                        }
                        for (const auto& z : s.bulk) {
                            hist.add(z);
                            inside += spectral::inside(boundary, z, c.containment_margin) ? 1 : 0;
                            ++total;
                        }
                    }
                    w.write(tag + "_eigenvalues.csv", "eigenvalues", os.str());
                    w.write(tag + "_histogram.json", "histogram", hist.to_json().dump());
                    const auto radii = spectral::annular_boundaries(eps, c.K);
                    p.summary["containment_fraction"] = static_cast<double>(inside) / static_cast<double>(total);
                    p.summary["containment_margin"] = c.containment_margin;
                    p.summary["max_modulus"] = max_mod;
                    p.summary["outer_radius"] = radii.outer;
                    p.summary["inner_radius"] = radii.inner ? json(*radii.inner) : json(nullptr);
                    p.summary["phi_max"] = spectral::phi_max(tau, c.d, c.sigma, c.hbar);
                } else {
                    std::ostringstream os;
                    os << "realization,index,re,im,abs,arg\n";
                    std::size_t small = 0, count = 0;
                    for (std::size_t r = 0; r < spectra.size(); ++r) {
                        const auto set = spectral::complex_spacing_ratios(spectra[r].bulk);
                        const auto dep = spectral::small_ratio_depletion(set);
                        small += dep.observed;
                        count += set.ratios.size();
                        for (std::size_t k = 0; k < set.ratios.size(); ++k) {
                            const Complex z = set.ratios[k];
                            os << r << ',' << set.indices[k][0] << ',' << diagnostics::format_number(z.real()) << ','
                               << diagnostics::format_number(z.imag()) << ','
                               << diagnostics::format_number(std::abs(z)) << ','
                               << diagnostics::format_number(std::arg(z)) << '\n';
                        }
                    }
                    w.write(tag + "_csr.csv", "spacing-ratios", os.str());
                    const double expected = 0.0025 * static_cast<double>(count);
                    p.summary["ratios"] = count;
                    p.summary["small_ratio_count"] = small;
                    p.summary["small_ratio_flat_expectation"] = expected;
                }
            } catch (const std::exception& e) {
                p.error = e.what();
            }
            p.seconds = seconds_since(t0);
            points.push_back(std::move(p));
        }
    }
}

// -- phase-grid ---------------------------------------------------------------

inline void run_phase_grid(const ExperimentConfig& c, ArtifactWriter& w, std::vector<GridPoint>& points) {
    GridPoint p(json{{"grid", "tau x epsilon"}});
    const auto t0 = Clock::now();
    try {
        std::ostringstream os;
        os << "tau,epsilon,phase,outer_radius,inner_radius,phi_max\n";
        for (double tau : c.tau) {
            for (double eps : c.epsilon) {
                const auto phase = spectral::classify_phase(eps, tau, c.K, c.d, c.sigma, c.hbar);
                const auto r = spectral::annular_boundaries(eps, c.K);
                os << diagnostics::format_number(tau) << ',' << diagnostics::format_number(eps) << ','
                   << spectral::to_string(phase) << ',' << diagnostics::format_number(r.outer) << ','
                   << (r.inner ? diagnostics::format_number(*r.inner) : std::string("nan")) << ','
                   << diagnostics::format_number(spectral::phi_max(tau, c.d, c.sigma, c.hbar)) << '\n';
            }
        }
        const std::string name = c.stem() + ".csv";
        w.write(name, "phase-grid", os.str());
        p.summary = {{"artifact", name},
                     {"critical_tau", rmt::critical_tau(c.d, c.sigma, c.hbar)},
                     {"critical_epsilon", spectral::critical_epsilon(c.K)}};
    } catch (const std::exception& e) {
        p.error = e.what();
    }
    p.seconds = seconds_since(t0);
    points.push_back(std::move(p));
}

// -- depth-grid ---------------------------------------------------------------

/// Ensemble-mean SFF of the isolated system (closed form) at t = j tau,
/// j = 0..last.
inline std::vector<double> isolated_mean_steps(const ExperimentConfig& c, double tau, long last) {
    const std::vector<std::vector<double>> runs = per_realization<std::vector<double>>(c, [&](int r) {
        const dephasing::PairTable table(realization_hamiltonian(c, r).energies, c.beta);
        std::vector<double> v(static_cast<std::size_t>(last) + 1);
        for (long j = 0; j <= last; ++j) v[j] = table.at({0.0, c.hbar}, j * tau).sff;
        return v;
    });
    std::vector<double> mean(static_cast<std::size_t>(last) + 1);
    for (long j = 0; j <= last; ++j) {
        diagnostics::CompensatedSum acc;
        for (const auto& v : runs) acc.add(v[j]);
        mean[j] = acc.value() / static_cast<double>(runs.size());
    }
    return mean;
}

inline diagnostics::DiagnosticSeries step_series(std::vector<double> sff, double tau, double plateau, int d,
                                                 double beta) {
    diagnostics::DiagnosticSeries s;
    s.dim = d;
    s.beta = beta;
    s.plateau = plateau;
    s.tau = tau;
    s.resize(sff.size());
    s.sff = std::move(sff);
    for (std::size_t j = 0; j < s.size(); ++j) {
        s.steps.push_back(static_cast<long>(j));
        s.times[j] = static_cast<double>(j) * tau;
    }
    return s;
}

}  // namespace detail

/// Thouless and Heisenberg times of the isolated ensemble that fix the
/// effective-depth window for a whole grid.
struct DepthWindowTimes {
    double t_thouless = 0.0;
    double t_heisenberg = 0.0;
    double plateau = 0.0;
};

inline DepthWindowTimes isolated_window(const ExperimentConfig& c) {
    const auto times = c.time.build();
    const dephasing::EDParams params{0.0, c.hbar};
    const auto runs = detail::per_realization<diagnostics::DiagnosticSeries>(c, [&](int r) {
        return diagnostics::ed_series(realization_hamiltonian(c, r).energies, c.beta, params, times);
    });
    const auto mean = diagnostics::ensemble_average(runs);
    DepthWindowTimes w;
    w.t_heisenberg = rmt::heisenberg_time(c.d, c.sigma, c.hbar);
    w.t_thouless = diagnostics::estimate_thouless(mean, w.t_heisenberg);
    w.plateau = mean.plateau;
    return w;
}

struct DepthPoint {
    double depth = 0.0;
    double isolated_depth = 0.0;
    double relative_depth = 0.0;
};

/// Effective depth of the ensemble-mean PQC SFF relative to the isolated
/// ensemble on the same window.
inline DepthPoint depth_point(const ExperimentConfig& c, const DepthWindowTimes& win, double tau, double eps) {
    const auto window = diagnostics::depth_window(win.t_thouless, win.t_heisenberg, tau);
    const long last = window.j_heisenberg;
    const auto runs = detail::per_realization<std::vector<double>>(c, [&](int r) {
        return diagnostics::pqc_sff_all_steps(realization_channel(c, r, tau, eps), c.beta, last);
    });
    std::vector<double> mean(static_cast<std::size_t>(last) + 1);
    for (long j = 0; j <= last; ++j) {
        diagnostics::CompensatedSum acc;
        for (const auto& v : runs) acc.add(v[j]);
        mean[j] = acc.value() / static_cast<double>(runs.size());
    }
    const auto pqc_series = detail::step_series(std::move(mean), tau, win.plateau, c.d, c.beta);
    const auto iso_series =
        detail::step_series(detail::isolated_mean_steps(c, tau, last), tau, win.plateau, c.d, c.beta);
    DepthPoint p;
    p.depth = diagnostics::effective_depth(pqc_series, win.t_thouless, win.t_heisenberg, tau);
    p.isolated_depth = diagnostics::effective_depth(iso_series, win.t_thouless, win.t_heisenberg, tau);
    if (!(p.isolated_depth > 0.0)) throw DomainError("isolated ensemble shows no correlation hole on this window");
    p.relative_depth = p.depth / p.isolated_depth;
    return p;
}

namespace detail {

inline void run_depth_grid(const ExperimentConfig& c, ArtifactWriter& w, std::vector<GridPoint>& points) {
    DepthWindowTimes win;
    {
        GridPoint p(json{{"window", "isolated"}});
        const auto t0 = Clock::now();
        try {
            win = isolated_window(c);
            p.summary = {{"t_thouless", win.t_thouless}, {"t_heisenberg", win.t_heisenberg}, {"plateau", win.plateau}};
        } catch (const std::exception& e) {
            p.error = e.what();
        }
        p.seconds = seconds_since(t0);
        const bool failed = p.error.has_value();
        points.push_back(std::move(p));
        if (failed) return;
    }
    std::ostringstream os;
    os << "tau,epsilon,depth,isolated_depth,relative_depth,t_thouless,t_heisenberg\n";
    for (double tau : c.tau) {
        for (double eps : c.epsilon) {
            GridPoint p(json{{"tau", tau}, {"epsilon", eps}});
            const auto t0 = Clock::now();
            try {
                const auto d = depth_point(c, win, tau, eps);
                os << format_number(tau) << ',' << format_number(eps) << ',' << format_number(d.depth) << ','
                   << format_number(d.isolated_depth) << ',' << format_number(d.relative_depth) << ','
                   << format_number(win.t_thouless) << ',' << format_number(win.t_heisenberg) << '\n';
                p.summary = {{"depth", d.depth}, {"isolated_depth", d.isolated_depth},
                             {"relative_depth", d.relative_depth}};
            } catch (const std::exception& e) {
                p.error = e.what();
            }
            p.seconds = seconds_since(t0);
            points.push_back(std::move(p));
        }
    }
    w.write(c.stem() + ".csv", "depth-grid", os.str());
}

}  // namespace detail

/// Runs the configured pipeline, writing artifacts and `<stem>_manifest.json`
/// into `c.output_dir`. Per-point failures are recorded in the manifest and
/// counted in `failed_points`.
inline RunResult run(const ExperimentConfig& c) {
    const auto report = validate(c);
    if (!report.ok()) throw ValidationError(report);
    const auto t0 = detail::Clock::now();
    ArtifactWriter w(c.output_dir);
    std::vector<detail::GridPoint> points;
    switch (c.mode) {
        case Mode::EdSff: detail::run_ed(c, w, points); break;
        case Mode::PqcSff: detail::run_pqc(c, w, points); break;
        case Mode::Spectrum: detail::run_spectral(c, w, points, false); break;
        case Mode::Csr: detail::run_spectral(c, w, points, true); break;
        case Mode::PhaseGrid: detail::run_phase_grid(c, w, points); break;
        case Mode::DepthGrid: detail::run_depth_grid(c, w, points); break;
    }
    RunResult res;
    res.artifacts = w.artifacts();
    json seeds = json::array();
    if (c.mode != Mode::PhaseGrid)
        for (int r = 0; r < c.realizations; ++r) seeds.push_back(realization_seed(c, r));
    json arts = json::array();
    for (const auto& a : res.artifacts)
        arts.push_back({{"path", a.path}, {"kind", a.kind}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    json pts = json::array();
    for (const auto& p : points) {
        if (p.error) ++res.failed_points;
        pts.push_back(detail::point_json(p));
    }
    res.manifest = {{"tool", "pqchaos"},
                    {"version", kVersion},
                    {"config", to_json(c)},
                    {"master_seed", c.master_seed},
                    {"realization_seeds", seeds},
                    {"workers", c.workers ? c.workers : default_workers()},
                    {"grid_points", pts},
                    {"failed_points", res.failed_points},
                    {"artifacts", arts},
                    {"wall_seconds", detail::seconds_since(t0)}};
    const auto manifest_path = std::filesystem::path(c.output_dir) / (c.stem() + "_manifest.json");
    std::ofstream(manifest_path) << res.manifest.dump(2) << '\n';
    return res;
}

// ---------------------------------------------------------------------------
// Plot scripts

/// Gnuplot script for an emitted CSV, chosen by its header row. The script
/// only reads `csv_path`.
inline std::string emit_gnuplot_script(const std::string& csv_path, const std::string& header) {
    std::ostringstream s;
    const std::string png = std::filesystem::path(csv_path).stem().string() + ".png";
    s << "set terminal pngcairo size 900,650\n"
      << "set output '" << png << "'\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n";
    if (header.rfind("t,sff", 0) == 0) {
        s << "set logscale xy\n"
          << "set format x '10^{%L}'\n"
          << "set format y '10^{%L}'\n"
          << "set xlabel 't'\n"
          << "set ylabel 'SFF'\n"
          << "plot '" << csv_path << "' using 1:2:3 with yerrorlines title 'SFF', \\\n"
          << "     '' using 1:6 with lines dt 2 title 'lower bound', \\\n"
          << "     '' using 1:7 with lines dt 3 title 'upper bound'\n";
    } else if (header.rfind("realization,re,im", 0) == 0) {
        s << "set size square\n"
          << "set xrange [-1.05:1.05]\nset yrange [-1.05:1.05]\n"
          << "set xlabel 'Re {/Symbol l}'\nset ylabel 'Im {/Symbol l}'\n"
          << "set object 1 circle at 0,0 size 1 fc rgb 'gray' lw 1\n"
          << "plot '" << csv_path << "' using 2:3 with dots notitle\n";
    } else if (header.rfind("realization,index,re,im", 0) == 0) {
        s << "set size square\n"
          << "set xrange [-1:1]\nset yrange [-1:1]\n"
          << "set xlabel 'Re z'\nset ylabel 'Im z'\n"
          << "plot '" << csv_path << "' using 3:4 with dots notitle\n";
    } else if (header.rfind("tau,epsilon,phase", 0) == 0) {
        s << "set logscale x\n"
          << "set xlabel '{/Symbol t}'\nset ylabel '{/Symbol e}'\n"
          << "plot '" << csv_path << "' using 1:2:3 with labels notitle\n";
    } else if (header.rfind("tau,epsilon,depth", 0) == 0) {
        s << "set logscale x\n"
          << "set xlabel '{/Symbol t}'\nset ylabel 'relative effective depth'\n"
          << "plot '" << csv_path << "' using 1:5 with linespoints title 'relative depth'\n";
    } else {
        throw DomainError("plot-script: unrecognised artifact header: " + header);
    }
    return s.str();
}

inline std::string emit_gnuplot_script(const std::string& csv_path) {
    std::ifstream f(csv_path);
    if (!f) throw std::runtime_error("cannot open " + csv_path);
    std::string header;
    std::getline(f, header);
    return emit_gnuplot_script(csv_path, header);
}

}  // namespace pqchaos::experiment
