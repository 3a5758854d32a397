#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spectral/curve.hpp"
#include "spectral/cuts.hpp"
#include "spectral/scan.hpp"

namespace spectral::cli {

/// A schema violation. `field` is a JSON pointer such as /scan/x/count.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct Tolerances {
  double newton = 1e-10;
  double quadrature = 1e-11;  ///< periods and prepotential; Newton keeps its own 1e-13
  double classify = 1e-7;
  double ode = 1e-10;
  double contour = 1e-11;
};

struct PainleveSpec {
  double x_min = -16.0, x_max = 0.0, step = 0.01;
  int n = 1;
  std::optional<cplx> B, C;  ///< both set: the regularised equation instead of Painleve-I
};

struct ScalingSpec {
  CVec t_start, t_end;
  int per_decade = 30;
};

struct RunSpec {
  int schema_version = 1;
  std::string model = "custom";  ///< gaussian, cubic or custom
  Potential W = Potential::gaussian();
  cplx cubic_g = 1.0;  ///< the g of z^3/3 - g z when model == cubic
  Tolerances tol;
  double radius = 0.0;  ///< EPD contour radius, 0 = automatic
  int threads = 1;

  std::optional<CVec> t, s, betas;
  std::optional<CutSystem> pairing;
  std::vector<CVec> path;
  std::optional<ScanSpec> scan;
  std::optional<ScalingSpec> scaling;
  PainleveSpec painleve;
  std::string prefix = "run";
  std::string format = "both";  ///< csv, json or both

  nlohmann::json echo;  ///< the validated configuration with defaults filled in
};

RunSpec parse_config(const nlohmann::json& j);
/// Reads and parses `path`; JSON syntax errors carry the line and column.
RunSpec parse_config(const std::filesystem::path& path);

/// [re, im] pairs, with plain numbers accepted as real values.
cplx complex_from_json(const nlohmann::json& j, const std::string& field);
nlohmann::json complex_to_json(cplx z);
nlohmann::json cvec_to_json(const CVec& v);

}  // namespace spectral::cli
