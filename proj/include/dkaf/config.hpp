#pragma once

#include <cctype>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dkaf/errors.hpp"
#include "dkaf/rng.hpp"
#include "dkaf/simulation.hpp"

namespace dkaf {

enum class Preset { Fig1, Fig2, Fig3, Fig4, Fig5 };

inline std::optional<Preset> preset_from_name(std::string_view name) {
    if (name == "fig1") return Preset::Fig1;
    if (name == "fig2") return Preset::Fig2;
    if (name == "fig3") return Preset::Fig3;
    if (name == "fig4") return Preset::Fig4;
    if (name == "fig5") return Preset::Fig5;
    return std::nullopt;
}

// Figure-reproduction parameter sets. All of them share the denoising setup
// (two nodes unless swept, Gaussian kernel sigma 0.1, noise variance 0.16).
inline ExperimentConfig preset_config(Preset preset) {
    ExperimentConfig cfg; // defaults already match the fig1 setup
    switch (preset) {
        case Preset::Fig1:
            break;
        case Preset::Fig2: {
            Eigen::MatrixXd a(2, 2);
            a << 0.666, 0.333, 0.333, 0.666; // printed values; rows renormalize on validation
            cfg.a = MatrixChoice{MatrixChoice::Kind::Explicit, 0, a};
            break;
        }
        case Preset::Fig3:
            cfg.algorithms = {Algorithm::DiffusionKlms};
            break;
        case Preset::Fig4:
            cfg.mu_kernel = 0.12;
            cfg.monte_carlo_runs = 50;
            cfg.algorithms = {Algorithm::DiffusionKlms};
            break;
        case Preset::Fig5:
            cfg.algorithms = {Algorithm::DiffusionKlms};
            cfg.snr_db = 10.0;
            cfg.noise_variance.reset();
            break;
    }
    return cfg;
}

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline ParseError parse_error(int line, const std::string& msg) {
    std::ostringstream os;
    os << "line " << line << ": " << msg;
    return ParseError(os.str());
}

inline double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw parse_error(line, "expected a number, got '" + v + "'");
    }
}

inline std::uint64_t parse_uint(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return u;
    } catch (const std::exception&) {
        throw parse_error(line, "expected a non-negative integer, got '" + v + "'");
    }
}

inline bool parse_bool(const std::string& v, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw parse_error(line, "expected true/false, got '" + v + "'");
}

// Splits "[a, b, c]" at top-level commas; elements may be bracketed.
inline std::vector<std::string> split_list(const std::string& v, int line) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw parse_error(line, "expected a bracketed list, got '" + v + "'");
    std::vector<std::string> out;
    int depth = 0;
    std::string current;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        const char c = v[i];
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    const std::string last = trim(current);
    if (!last.empty()) out.push_back(last);
    return out;
}

inline Eigen::MatrixXd parse_matrix(const std::string& v, int line) {
    const auto rows = split_list(v, line);
    if (rows.empty()) throw parse_error(line, "matrix must have at least one row");
    Eigen::MatrixXd m;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto entries = split_list(rows[r], line);
        if (r == 0) m.resize(static_cast<Eigen::Index>(rows.size()),
                             static_cast<Eigen::Index>(entries.size()));
        if (static_cast<Eigen::Index>(entries.size()) != m.cols())
            throw parse_error(line, "ragged matrix rows");
        for (std::size_t c = 0; c < entries.size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_double(entries[c], line);
    }
    return m;
}

inline MatrixChoice parse_matrix_choice(const std::string& v, int line) {
    if (v == "uniform") return MatrixChoice{MatrixChoice::Kind::Uniform, 0, {}};
    if (v.rfind("random:", 0) == 0)
        return MatrixChoice{MatrixChoice::Kind::Random, parse_uint(v.substr(7), line), {}};
    if (!v.empty() && v.front() == '[')
        return MatrixChoice{MatrixChoice::Kind::Explicit, 0, parse_matrix(v, line)};
    throw parse_error(line, "expected 'uniform', 'random:<seed>' or a nested array");
}

inline Algorithm parse_algorithm(const std::string& v, int line) {
    for (Algorithm a : {Algorithm::Lms, Algorithm::DiffusionLms, Algorithm::Rls,
                        Algorithm::DiffusionRls, Algorithm::Klms, Algorithm::DiffusionKlms})
        if (v == algorithm_name(a)) return a;
    throw parse_error(line, "unknown algorithm '" + v + "'");
}

} // namespace detail

// Parses the dotted-key config document on top of `base` (typically a preset
// or the defaults). Unknown keys are errors.
inline ExperimentConfig parse_config(const std::string& text,
                                     ExperimentConfig base = ExperimentConfig{}) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool noise_set = false, snr_set = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw detail::parse_error(line_no, "expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (value.empty()) throw detail::parse_error(line_no, "missing value for '" + key + "'");

        if (key == "network.nodes") {
            base.node_count = static_cast<Eigen::Index>(detail::parse_uint(value, line_no));
        } else if (key == "network.a") {
            base.a = detail::parse_matrix_choice(value, line_no);
        } else if (key == "network.c") {
            base.c = detail::parse_matrix_choice(value, line_no);
        } else if (key == "kernel.family") {
            if (value == "gaussian") base.kernel.family = KernelFamily::Gaussian;
            else if (value == "polynomial") base.kernel.family = KernelFamily::Polynomial;
            else throw detail::parse_error(line_no, "unknown kernel family '" + value + "'");
        } else if (key == "kernel.sigma") {
            base.kernel.sigma = detail::parse_double(value, line_no);
        } else if (key == "kernel.degree") {
            base.kernel.degree = static_cast<int>(detail::parse_uint(value, line_no));
        } else if (key == "kernel.offset") {
            base.kernel.offset = detail::parse_double(value, line_no);
        } else if (key == "kernel.normalized") {
            base.kernel.normalized = detail::parse_bool(value, line_no);
        } else if (key == "filter.mu" || key == "filter.mu_klms") {
            base.mu_kernel = detail::parse_double(value, line_no);
        } else if (key == "filter.mu_lms") {
            base.mu_linear = detail::parse_double(value, line_no);
        } else if (key == "filter.lambda") {
            base.rls_lambda = detail::parse_double(value, line_no);
        } else if (key == "filter.p0") {
            base.rls_p0 = detail::parse_double(value, line_no);
        } else if (key == "filter.dictionary_budget") {
            base.dictionary_budget = (value == "unbounded")
                                         ? 0
                                         : static_cast<std::size_t>(detail::parse_uint(value, line_no));
        } else if (key == "simulation.embedding") {
            base.embedding = static_cast<Eigen::Index>(detail::parse_uint(value, line_no));
        } else if (key == "simulation.samples") {
            base.sample_count = static_cast<std::size_t>(detail::parse_uint(value, line_no));
        } else if (key == "simulation.runs") {
            base.monte_carlo_runs = static_cast<std::size_t>(detail::parse_uint(value, line_no));
        } else if (key == "simulation.noise_variance") {
            base.noise_variance = detail::parse_double(value, line_no);
            base.snr_db.reset();
            noise_set = true;
        } else if (key == "simulation.snr_db") {
            base.snr_db = detail::parse_double(value, line_no);
            base.noise_variance.reset();
            snr_set = true;
        } else if (key == "simulation.seed") {
            base.master_seed = detail::parse_uint(value, line_no);
        } else if (key == "simulation.algorithms") {
            base.algorithms.clear();
            for (const auto& name : detail::split_list(value, line_no))
                base.algorithms.push_back(detail::parse_algorithm(name, line_no));
        } else {
            throw detail::parse_error(line_no, "unknown key '" + key + "'");
        }
    }
    if (noise_set && snr_set)
        throw ConfigInvalid("exactly one of simulation.noise_variance and simulation.snr_db may be set");
    if (!(base.kernel.sigma > 0.0)) throw ConfigInvalid("kernel.sigma must be > 0");
    base.validate();
    return base;
}

namespace detail {

inline void write_matrix_choice(std::ostream& os, const MatrixChoice& m) {
    switch (m.kind) {
        case MatrixChoice::Kind::Uniform: os << "uniform"; return;
        case MatrixChoice::Kind::Random: os << "random:" << m.seed; return;
        case MatrixChoice::Kind::Explicit: {
            os << "[";
            for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
                if (r) os << ",";
                os << "[";
                for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
                    if (c) os << ",";
                    os << m.values(r, c);
                }
                os << "]";
            }
            os << "]";
            return;
        }
    }
}

} // namespace detail

// Canonical single-line serialization used for the manifest's config hash.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "network.nodes=" << cfg.node_count << ";network.a=";
    detail::write_matrix_choice(os, cfg.a);
    os << ";network.c=";
    detail::write_matrix_choice(os, cfg.c);
    os << ";kernel.family="
       << (cfg.kernel.family == KernelFamily::Gaussian ? "gaussian" : "polynomial")
       << ";kernel.sigma=" << cfg.kernel.sigma << ";kernel.degree=" << cfg.kernel.degree
       << ";kernel.offset=" << cfg.kernel.offset
       << ";kernel.normalized=" << (cfg.kernel.normalized ? "true" : "false")
       << ";filter.mu=" << cfg.mu_kernel << ";filter.mu_lms=" << cfg.mu_linear
       << ";filter.lambda=" << cfg.rls_lambda << ";filter.p0=" << cfg.rls_p0
       << ";filter.dictionary_budget=" << cfg.dictionary_budget
       << ";simulation.embedding=" << cfg.embedding
       << ";simulation.samples=" << cfg.sample_count
       << ";simulation.runs=" << cfg.monte_carlo_runs;
    if (cfg.noise_variance) os << ";simulation.noise_variance=" << *cfg.noise_variance;
    if (cfg.snr_db) os << ";simulation.snr_db=" << *cfg.snr_db;
    os << ";simulation.seed=" << cfg.master_seed << ";simulation.algorithms=[";
    for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
        if (i) os << ",";
        os << algorithm_name(cfg.algorithms[i]);
    }
    os << "]";
    return os.str();
}

inline std::string config_hash(const ExperimentConfig& cfg) {
    const std::string s = serialize_config(cfg);
    const std::uint64_t h = derive_seed(0xdca11ab5u, s);
    std::ostringstream os;
    os << std::hex << std::setfill('0') << std::setw(16) << h;
    return os.str();
}

} // namespace dkaf
