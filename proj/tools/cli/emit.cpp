#include "cli/emit.hpp"

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cli/config.hpp"

namespace spectral::cli {

namespace {

class Csv {
 public:
  explicit Csv(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError(path.string() + ": " + std::strerror(errno));
  }
  ~Csv() = default;

  Csv& field(const std::string& s) {
    if (!first_) buf_ += ',';
    buf_ += s;
    first_ = false;
    return *this;
  }
  Csv& num(double v) { return field(format_double(v)); }
  Csv& cnum(cplx z) { return num(z.real()).num(z.imag()); }
  void end_row() {
    buf_ += '\n';
    first_ = true;
    if (buf_.size() > (1 << 16)) flush();
  }
  void close() {
    flush();
    out_.close();
    if (!out_) throw IoError(path_.string() + ": write failed");
  }

 private:
  void flush() {
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out_) throw IoError(path_.string() + ": " + std::strerror(errno));
    buf_.clear();
  }

  std::filesystem::path path_;
  std::ofstream out_;
  std::string buf_;
  bool first_ = true;
};

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_class_map_csv(const std::filesystem::path& path, const std::vector<ScanRow>& rows,
                         const std::string& x_name, const std::string& y_name) {
  Csv csv(path);
  csv.field(x_name).field(y_name).field("q").field("sector").field("min_dist").field("disc_re").field("disc_im");
  csv.end_row();
  for (const ScanRow& r : rows) {
    csv.num(r.x).num(r.y);
    if (r.error.empty())
      csv.field(std::to_string(r.q)).field(r.regular ? "reg" : "sing").num(r.min_dist).cnum(r.disc);
    else
      csv.field("").field("failed").field("").field("").field("");
    csv.end_row();
  }
  csv.close();
}

void write_trajectory_csv(const std::filesystem::path& path, const std::string& param,
                          const std::vector<CVec>& params, const std::vector<CVec>& betas) {
  if (params.size() != betas.size()) throw InvalidArgument("write_trajectory_csv: column lengths differ");
  Csv csv(path);
  csv.field("step");
  const std::size_t np = params.empty() ? 0 : params.front().size(), nb = betas.empty() ? 0 : betas.front().size();
  for (std::size_t k = 1; k <= np; ++k) csv.field(param + std::to_string(k) + "_re").field(param + std::to_string(k) + "_im");
  for (std::size_t k = 1; k <= nb; ++k) csv.field("beta" + std::to_string(k) + "_re").field("beta" + std::to_string(k) + "_im");
  csv.end_row();
  for (std::size_t i = 0; i < params.size(); ++i) {
    csv.field(std::to_string(i));
    for (cplx z : params[i]) csv.cnum(z);
    for (cplx z : betas[i]) csv.cnum(z);
    csv.end_row();
  }
  csv.close();
}

void write_ode_csv(const std::filesystem::path& path, const ODESolution& sol, const std::vector<std::string>& names) {
  Csv csv(path);
  csv.field("x");
  for (const std::string& n : names) csv.field(n + "_re").field(n + "_im");
  csv.end_row();
  for (std::size_t i = 0; i < sol.values.size(); ++i) {
    csv.num(sol.grid[i]);
    for (std::size_t k = 0; k < names.size() && k < sol.values[i].size(); ++k) csv.cnum(sol.values[i][k]);
    csv.end_row();
  }
  csv.close();
}

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  Csv csv(path);
  for (const std::string& h : header) csv.field(h);
  csv.end_row();
  for (const auto& r : rows) {
    for (double v : r) csv.num(v);
    csv.end_row();
  }
  csv.close();
}

void write_json(const std::filesystem::path& path, nlohmann::json j) {
  j["schema_version"] = kOutputSchema;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": " + std::strerror(errno));
  out << j.dump(2) << '\n';
  out.close();
  if (!out) throw IoError(path.string() + ": write failed");
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": " + std::strerror(errno));
  std::stringstream buf;
  buf << in.rdbuf();
  return nlohmann::json::parse(buf.str());
}

nlohmann::json to_json(const ODESolution& sol) {
  nlohmann::json j;
  j["grid"] = sol.grid;
  j["values"] = nlohmann::json::array();
  for (const CVec& v : sol.values) j["values"].push_back(cvec_to_json(v));
  j["residual_norm"] = sol.residual_norm;
  j["blew_up"] = sol.blew_up;
  j["blowup_x"] = sol.blew_up ? nlohmann::json(sol.blowup_x) : nlohmann::json(nullptr);
  return j;
}

}  // namespace spectral::cli
