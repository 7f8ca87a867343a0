#include "roughdense/io.hpp"

#include "roughdense/increments.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace roughdense {

using nlohmann::json;

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

void write_path_csv(const std::string& path, const FbmSample& sample) {
    auto out = open_out(path);
    out << "t";
    for (int c = 0; c < sample.d; ++c) out << ",comp_" << c;
    out << "\n";
    for (std::size_t i = 0; i < sample.grid.points(); ++i) {
        out << format_full(sample.grid.t(i));
        for (int c = 0; c < sample.d; ++c) out << "," << format_full(sample.values(c, i));
        out << "\n";
    }
    json side{{"h", sample.hurst.h},
              {"T", sample.grid.horizon},
              {"m", sample.grid.level},
              {"seed", sample.seed},
              {"jitter_applied", sample.jitter_applied}};
    open_out(path + ".json") << side.dump(2) << "\n";
}

FbmSample read_path_csv(const std::string& path) {
    std::ifstream side_in(path + ".json");
    if (!side_in) throw std::runtime_error("missing sidecar: " + path + ".json");
    json side = json::parse(side_in);
    TimeGrid grid(side.at("T").get<double>(), side.at("m").get<int>());
    HurstParam hurst(side.at("h").get<double>());

    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.size() != grid.points()) throw std::runtime_error("path CSV row count mismatch");
    const int d = static_cast<int>(rows[0].size()) - 1;
    FbmSample sample{grid, hurst, d, side.at("seed").get<std::uint64_t>(),
                     Mat::Zero(d, static_cast<Eigen::Index>(grid.points())),
                     side.value("jitter_applied", false)};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int c = 0; c < d; ++c) sample.values(c, i) = rows[i][c + 1];
    }
    return sample;
}

void write_level2_csv(const std::string& path, const EnhancedDriver& driver) {
    auto out = open_out(path);
    out << "i,j,k,value\n";
    for (std::size_t i = 0; i + 1 < driver.grid.points(); ++i) {
        const Mat block = driver.b2(i, i + 1);
        for (int j = 0; j < driver.d; ++j) {
            for (int k = 0; k < driver.d; ++k) {
                out << i << "," << j << "," << k << "," << format_full(block(j, k)) << "\n";
            }
        }
    }
}

void write_increment_csv(const std::string& path, const Inc1& inc) {
    auto out = open_out(path);
    out << "s,t,value\n";
    for (std::size_t i = 0; i + 1 < inc.grid.points(); ++i) {
        out << format_full(inc.grid.t(i)) << "," << format_full(inc.grid.t(i + 1)) << ","
            << format_full(inc(i, i + 1)) << "\n";
    }
}

void write_solution_csv(const std::string& path, const SolutionPath& solution) {
    auto out = open_out(path);
    out << "t";
    for (Eigen::Index c = 0; c < solution.values.rows(); ++c) out << ",x_" << c;
    out << "\n";
    for (std::size_t i = 0; i < solution.grid.points(); ++i) {
        out << format_full(solution.grid.t(i));
        for (Eigen::Index c = 0; c < solution.values.rows(); ++c) {
            out << "," << format_full(solution.values(c, i));
        }
        out << "\n";
    }
}

void write_derivative_csv(const std::string& path, const DerivativeProcess& process) {
    auto out = open_out(path);
    const auto d = process.m[0].rows();
    out << "s";
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) out << ",m_" << r << c;
    out << "\n";
    for (std::size_t i = 0; i < process.grid.points(); ++i) {
        out << format_full(process.grid.t(i));
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) out << "," << format_full(process.m[i](r, c));
        }
        out << "\n";
    }
}

std::string report_json(const InequalityReport& report) {
    json j{{"name", report.name},
           {"lhs", report.lhs},
           {"rhs", report.rhs},
           {"stderr", report.std_error},
           {"params", json::parse(report.params.empty() ? "{}" : report.params)},
           {"verdict", report.pass ? "pass" : "fail"}};
    return j.dump(2);
}

void write_reports_json(const std::string& path, const std::vector<InequalityReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(json::parse(report_json(r)));
    open_out(path) << arr.dump(2) << "\n";
}

void write_plot_csv(const std::string& path, const Histogram& hist,
                    const std::function<double(double)>& envelope) {
    auto out = open_out(path);
    out << "y,p_hat,band_lo,band_hi,envelope\n";
    for (std::size_t b = 0; b + 1 < hist.edges.size(); ++b) {
        const double y = 0.5 * (hist.edges[b] + hist.edges[b + 1]);
        out << format_full(y) << "," << format_full(hist.density[b]) << ","
            << format_full(hist.band_lo[b]) << "," << format_full(hist.band_hi[b]) << ","
            << format_full(envelope ? envelope(y) : 0.0) << "\n";
    }
}

}  // namespace roughdense
