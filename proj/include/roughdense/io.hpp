#pragma once

#include <string>

#include "roughdense/density.hpp"
#include "roughdense/driver.hpp"
#include "roughdense/fbm.hpp"
#include "roughdense/malliavin.hpp"
#include "roughdense/rde.hpp"

namespace roughdense {

// Portable text formats. All numeric output is full-precision decimal
// (round-trips through double).

/// CSV `t,comp_0,...,comp_{d-1}` plus a JSON sidecar `{h, T, m, seed}`
/// written next to it as `<path>.json`.
void write_path_csv(const std::string& path, const FbmSample& sample);
FbmSample read_path_csv(const std::string& path);

/// Level-2 blocks per consecutive cell: CSV `i,j,k,value`.
void write_level2_csv(const std::string& path, const EnhancedDriver& driver);

/// Debug dump of a scalar 1-increment over consecutive cells: CSV `s,t,value`.
void write_increment_csv(const std::string& path, const Inc1& inc);

/// Solution dump `t,x_0..x_{d-1}`.
void write_solution_csv(const std::string& path, const SolutionPath& solution);

/// Derivative dump `s,m_00..m_{dd}` (row-major entries).
void write_derivative_csv(const std::string& path, const DerivativeProcess& process);

std::string report_json(const InequalityReport& report);
void write_reports_json(const std::string& path, const std::vector<InequalityReport>& reports);

/// Plot data `y,p_hat,band_lo,band_hi,envelope` per histogram bin.
void write_plot_csv(const std::string& path, const Histogram& hist,
                    const std::function<double(double)>& envelope);

std::string format_full(double v);

}  // namespace roughdense
