#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "dkaf/config.hpp"
#include "dkaf/errors.hpp"
#include "dkaf/simulation.hpp"

namespace dkaf {

inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

inline std::string format_value(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace detail

// One long-format file: iteration,algorithm,mse.
inline std::filesystem::path emit_traces_csv(const std::vector<MseTrace>& traces,
                                             const std::filesystem::path& output_dir,
                                             const std::string& filename = "traces.csv") {
    const auto path = output_dir / filename;
    auto out = detail::open_output(path);
    out << "iteration,algorithm,mse\n";
    for (const auto& trace : traces)
        for (std::size_t n = 0; n < trace.values.size(); ++n)
            out << n << "," << trace.algorithm << "," << detail::format_value(trace.values[n])
                << "\n";
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    return path;
}

inline std::filesystem::path emit_transient_csv(const TheoreticalCurve& curve,
                                                const std::filesystem::path& output_dir,
                                                const std::string& filename = "transient.csv") {
    const auto path = output_dir / filename;
    auto out = detail::open_output(path);
    out << "n,predicted_mse\n";
    for (std::size_t n = 0; n < curve.values.size(); ++n)
        out << n << "," << detail::format_value(curve.values[n]) << "\n";
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    return path;
}

inline std::filesystem::path emit_step_size_csv(const std::vector<StepSizeSweepRow>& rows,
                                                const std::filesystem::path& output_dir,
                                                const std::string& filename = "sweep_step_size.csv") {
    const auto path = output_dir / filename;
    auto out = detail::open_output(path);
    out << "mu,predicted_floor_eq21,predicted_floor_fixedpoint,empirical_floor\n";
    for (const auto& r : rows)
        out << detail::format_value(r.mu) << "," << detail::format_value(r.predicted_floor_eq21)
            << "," << detail::format_value(r.predicted_floor_fixedpoint) << ","
            << detail::format_value(r.empirical_floor) << "\n";
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    return path;
}

inline std::filesystem::path emit_network_sweep_csv(const std::vector<NetworkSweepRow>& rows,
                                                    const std::filesystem::path& output_dir,
                                                    const std::string& filename = "sweep_nodes.csv") {
    const auto path = output_dir / filename;
    auto out = detail::open_output(path);
    out << "size,snr_db,mean_floor,std_floor,theory_floor\n";
    for (const auto& r : rows)
        out << r.size << "," << detail::format_value(r.snr_db) << ","
            << detail::format_value(r.mean_floor) << "," << detail::format_value(r.std_floor)
            << "," << detail::format_value(r.theory_floor) << "\n";
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    return path;
}

// Records what produced the artifacts: config hash, master seed, version.
inline std::filesystem::path emit_manifest(const ExperimentConfig& config,
                                           const std::filesystem::path& output_dir,
                                           const std::string& filename = "manifest.txt") {
    const auto path = output_dir / filename;
    auto out = detail::open_output(path);
    out << "tool_version=" << kToolVersion << "\n";
    out << "config_hash=" << config_hash(config) << "\n";
    out << "master_seed=" << config.master_seed << "\n";
    out << "config=" << serialize_config(config) << "\n";
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    return path;
}

// Minimal gnuplot companion for the trace file.
inline std::filesystem::path emit_gnuplot_script(const std::filesystem::path& output_dir,
                                                 const std::string& traces_filename = "traces.csv",
                                                 const std::string& filename = "plot.gp") {
    const auto path = output_dir / filename;
    auto out = detail::open_output(path);
    out << "set datafile separator ','\n"
        << "set logscale y\n"
        << "set xlabel 'iteration'\n"
        << "set ylabel 'MSE'\n"
        << "set key outside\n"
        << "plot for [alg in 'lms diffusion-lms rls diffusion-rls klms diffusion-klms'] \\\n"
        << "  '" << traces_filename
        << "' using 1:(strcol(2) eq alg ? $3 : 1/0) with lines title alg\n";
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    return path;
}

} // namespace dkaf
