#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spectral/hooft.hpp"
#include "spectral/scaling.hpp"
#include "spectral/scan.hpp"
#include "spectral/whitham.hpp"

namespace spectral::cli {

inline constexpr int kOutputSchema = 1;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

/// Class-map table: x, y, q, sector, min_dist, disc_re, disc_im. Failed nodes keep their
/// coordinates, get sector "failed" and empty numeric fields.
void write_class_map_csv(const std::filesystem::path& path, const std::vector<ScanRow>& rows,
                         const std::string& x_name, const std::string& y_name);

/// step, one re/im pair per parameter, one re/im pair per branch point.
void write_trajectory_csv(const std::filesystem::path& path, const std::string& param,
                          const std::vector<CVec>& params, const std::vector<CVec>& betas);

/// x, then re/im pairs for u (and u' for second-order problems), named after `names`.
void write_ode_csv(const std::filesystem::path& path, const ODESolution& sol, const std::vector<std::string>& names);

/// A plain numeric table.
void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// Adds "schema_version" and writes indented JSON with a trailing newline.
void write_json(const std::filesystem::path& path, nlohmann::json j);
nlohmann::json read_json(const std::filesystem::path& path);

nlohmann::json to_json(const ODESolution& sol);

}  // namespace spectral::cli
