#include <diffagg/csv.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace diffagg {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_csv(const std::string& path, const char* kind) {
    std::ofstream out(path, std::ios::binary); // binary: byte-stable newlines
    if (!out)
        throw std::runtime_error("cannot open output file " + path);
    out << "# diffagg-csv v1 " << kind << "\n";
    return out;
}

} // namespace

void write_density_csv(const std::string& path, const std::vector<GridDensity>& frames) {
    auto out = open_csv(path, "density");
    out << "time,x_center,u\n";
    for (const auto& f : frames) {
        f.validate();
        for (std::size_t i = 0; i < f.values.size(); ++i)
            out << format_double(f.time) << ',' << format_double(f.grid.center(i)) << ','
                << format_double(f.values[i]) << "\n";
    }
}

void write_running_sup_csv(const std::string& path, std::span<const double> times,
                           std::span<const double> sup) {
    if (times.size() != sup.size())
        throw std::invalid_argument("write_running_sup_csv: size mismatch");
    auto out = open_csv(path, "running_sup");
    out << "time,sup\n";
    for (std::size_t k = 0; k < times.size(); ++k)
        out << format_double(times[k]) << ',' << format_double(sup[k]) << "\n";
}

void write_trajectory_csv(const std::string& path, const ParticleTrajectory& traj) {
    auto out = open_csv(path, "trajectory");
    out << "replica,time,particle_index,position\n";
    for (std::size_t m = 0; m < traj.replicas.size(); ++m)
        for (const auto& ens : traj.replicas[m])
            for (std::size_t i = 0; i < ens.positions.size(); ++i)
                out << m << ',' << format_double(ens.time) << ',' << i << ','
                    << format_double(ens.positions[i]) << "\n";
}

void write_errors_csv(const std::string& path, const ErrorReport& report) {
    const std::size_t rows = report.levels.size();
    if (report.err_inf.size() != rows || report.err_l1.size() != rows ||
        report.err_l2.size() != rows)
        throw std::invalid_argument("write_errors_csv: ragged report");
    auto out = open_csv(path, "errors");
    out << "level,err_inf,eoc_inf,err_l1,eoc_l1,err_l2,eoc_l2\n";
    auto eoc_cell = [&](const std::vector<double>& v, std::size_t row) -> std::string {
        return row == 0 || row - 1 >= v.size() ? std::string() : format_double(v[row - 1]);
    };
    for (std::size_t r = 0; r < rows; ++r)
        out << format_double(report.levels[r]) << ',' << format_double(report.err_inf[r])
            << ',' << eoc_cell(report.eoc_inf, r) << ',' << format_double(report.err_l1[r])
            << ',' << eoc_cell(report.eoc_l1, r) << ',' << format_double(report.err_l2[r])
            << ',' << eoc_cell(report.eoc_l2, r) << "\n";
}

} // namespace diffagg
