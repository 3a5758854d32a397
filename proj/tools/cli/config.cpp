#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace spectral::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string join(const std::string& base, std::size_t k) { return base + "/" + std::to_string(k); }

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& field) {
  const double v = number(j, field);
  if (!(v > 0.0)) throw ConfigError(field, "expected a positive number");
  return v;
}

int integer(const json& j, const std::string& field, int lo) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > 1000000000LL) throw ConfigError(field, "integer out of range");
  return static_cast<int>(v);
}

CVec cvec(const json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "expected an array of complex numbers");
  CVec v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(complex_from_json(j[k], join(field, k)));
  return v;
}

void only_keys(const json& j, const std::string& field, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) throw ConfigError(join(field, item.key()), "unknown key");
  }
}

void parse_potential(const json& j, RunSpec& spec) {
  const std::string f = "/potential";
  only_keys(j, f, {"model", "g"});
  spec.model = j.value("model", std::string("custom"));
  if (spec.model == "gaussian") {
    if (j.contains("g")) throw ConfigError(join(f, "g"), "the gaussian model has no coefficients");
    spec.W = Potential::gaussian();
  } else if (spec.model == "cubic") {
    if (j.contains("g")) spec.cubic_g = complex_from_json(j["g"], join(f, "g"));
    spec.W = Potential::cubic(spec.cubic_g);
  } else if (spec.model == "custom") {
    if (!j.contains("g")) throw ConfigError(join(f, "g"), "required for a custom potential");
    const CVec g = cvec(j["g"], join(f, "g"));
    if (g.empty()) throw ConfigError(join(f, "g"), "need at least one coefficient");
    spec.W = Potential(g);
  } else {
    throw ConfigError(join(f, "model"), "expected gaussian, cubic or custom");
  }
}

ScanAxis parse_axis(const json& j, const std::string& f, int N) {
  only_keys(j, f, {"param", "min", "max", "count"});
  ScanAxis a;
  if (!j.contains("param") || !j["param"].is_string()) throw ConfigError(join(f, "param"), "expected s or t1..tN");
  a.name = j["param"].get<std::string>();
  if (a.name == "s") {
    a.t_index = 0;
    a.scale = -4.0;
  } else if (a.name.size() >= 2 && a.name[0] == 't' && a.name.find_first_not_of("0123456789", 1) == std::string::npos) {
    a.t_index = std::stoi(a.name.substr(1)) - 1;
    if (a.t_index < 0 || a.t_index >= N) throw ConfigError(join(f, "param"), "no such deformation parameter");
  } else {
    throw ConfigError(join(f, "param"), "expected s or t1..tN");
  }
  for (const char* k : {"min", "max", "count"})
    if (!j.contains(k)) throw ConfigError(join(f, k), "required");
  a.lo = number(j["min"], join(f, "min"));
  a.hi = number(j["max"], join(f, "max"));
  a.count = integer(j["count"], join(f, "count"), 0);
  if (a.count > 1 && !(a.hi > a.lo)) throw ConfigError(join(f, "max"), "must exceed min");
  return a;
}

}  // namespace

cplx complex_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return {number(j, field), 0.0};
  if (!j.is_array() || j.size() != 2) throw ConfigError(field, "expected a complex number [re, im]");
  return {number(j[0], join(field, std::size_t{0})), number(j[1], join(field, std::size_t{1}))};
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json cvec_to_json(const CVec& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(complex_to_json(z));
  return a;
}

RunSpec parse_config(const json& j) {
  only_keys(j, "", {"schema_version", "potential", "tolerances", "radius", "threads", "t", "s", "betas", "pairing",
                    "path", "scan", "scaling", "painleve", "output"});
  RunSpec spec;
  if (j.contains("schema_version")) {
    spec.schema_version = integer(j["schema_version"], "/schema_version", 1);
    if (spec.schema_version != 1) throw ConfigError("/schema_version", "unsupported version");
  }
  if (!j.contains("potential")) throw ConfigError("/potential", "required");
  parse_potential(j["potential"], spec);
  const int N = spec.W.N();

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    only_keys(t, "/tolerances", {"newton", "quadrature", "classify", "ode", "contour"});
    if (t.contains("newton")) spec.tol.newton = positive(t["newton"], "/tolerances/newton");
    if (t.contains("quadrature")) spec.tol.quadrature = positive(t["quadrature"], "/tolerances/quadrature");
    if (t.contains("classify")) spec.tol.classify = positive(t["classify"], "/tolerances/classify");
    if (t.contains("ode")) spec.tol.ode = positive(t["ode"], "/tolerances/ode");
    if (t.contains("contour")) spec.tol.contour = positive(t["contour"], "/tolerances/contour");
  }
  if (j.contains("radius")) {
    const json& r = j["radius"];
    if (!(r.is_string() && r.get<std::string>() == "auto")) spec.radius = positive(r, "/radius");
  }
  if (j.contains("threads")) spec.threads = integer(j["threads"], "/threads", 1);

  if (j.contains("t")) {
    spec.t = cvec(j["t"], "/t");
    if (static_cast<int>(spec.t->size()) > N) throw ConfigError("/t", "more than N deformation parameters");
  }
  if (j.contains("s")) spec.s = cvec(j["s"], "/s");
  if (j.contains("betas")) spec.betas = cvec(j["betas"], "/betas");
  if (j.contains("pairing")) {
    const json& p = j["pairing"];
    if (!p.is_array()) throw ConfigError("/pairing", "expected an array of index pairs");
    CutSystem cs;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const std::string f = join("/pairing", k);
      if (!p[k].is_array() || p[k].size() != 2) throw ConfigError(f, "expected [i, j]");
      cs.pairs.emplace_back(integer(p[k][0], join(f, std::size_t{0}), 0), integer(p[k][1], join(f, std::size_t{1}), 0));
    }
    if (!spec.betas) throw ConfigError("/pairing", "needs betas");
    try {
      cs.validate(spec.betas->size());
    } catch (const std::exception& e) {
      throw ConfigError("/pairing", e.what());
    }
    spec.pairing = cs;
  }
  if (j.contains("path")) {
    const json& p = j["path"];
    if (!p.is_array() || p.size() < 2) throw ConfigError("/path", "expected at least two parameter vectors");
    for (std::size_t k = 0; k < p.size(); ++k) {
      spec.path.push_back(cvec(p[k], join("/path", k)));
      if (spec.path.back().size() != spec.path.front().size()) throw ConfigError(join("/path", k), "length differs from /path/0");
    }
  }
  if (j.contains("scan")) {
    const json& s = j["scan"];
    only_keys(s, "/scan", {"x", "y", "t"});
    ScanSpec sc;
    sc.W = spec.W;
    sc.classify_tol = spec.tol.classify;
    if (!s.contains("x")) throw ConfigError("/scan/x", "required");
    sc.x = parse_axis(s["x"], "/scan/x", N);
    if (s.contains("y")) {
      sc.y = parse_axis(s["y"], "/scan/y", N);
      if (sc.y.t_index == sc.x.t_index) throw ConfigError("/scan/y/param", "both axes move the same parameter");
    } else {
      sc.y = {"none", -1, 1.0, 0.0, 0.0, sc.x.count > 0 ? 1 : 0};
    }
    if (s.contains("t")) {
      sc.t_base = cvec(s["t"], "/scan/t");
      if (static_cast<int>(sc.t_base.size()) > N) throw ConfigError("/scan/t", "more than N deformation parameters");
    }
    spec.scan = sc;
  }
  if (j.contains("scaling")) {
    const json& s = j["scaling"];
    only_keys(s, "/scaling", {"t_start", "t_end", "per_decade"});
    ScalingSpec sc;
    for (const char* k : {"t_start", "t_end"})
      if (!s.contains(k)) throw ConfigError(join("/scaling", k), "required");
    sc.t_start = cvec(s["t_start"], "/scaling/t_start");
    sc.t_end = cvec(s["t_end"], "/scaling/t_end");
    if (sc.t_start.size() != sc.t_end.size() || sc.t_start.empty())
      throw ConfigError("/scaling/t_end", "must have the same nonzero length as t_start");
    if (s.contains("per_decade")) sc.per_decade = integer(s["per_decade"], "/scaling/per_decade", 1);
    spec.scaling = sc;
  }
  if (j.contains("painleve")) {
    const json& p = j["painleve"];
    only_keys(p, "/painleve", {"x_min", "x_max", "step", "n", "B", "C"});
    PainleveSpec& pv = spec.painleve;
    if (p.contains("x_min")) pv.x_min = number(p["x_min"], "/painleve/x_min");
    if (p.contains("x_max")) pv.x_max = number(p["x_max"], "/painleve/x_max");
    if (p.contains("step")) pv.step = positive(p["step"], "/painleve/step");
    if (p.contains("n")) pv.n = integer(p["n"], "/painleve/n", 0);
    if (p.contains("B")) pv.B = complex_from_json(p["B"], "/painleve/B");
    if (p.contains("C")) pv.C = complex_from_json(p["C"], "/painleve/C");
    if (pv.B.has_value() != pv.C.has_value()) throw ConfigError("/painleve", "give both B and C or neither");
    if (!(pv.x_max > pv.x_min)) throw ConfigError("/painleve/x_max", "must exceed x_min");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    only_keys(o, "/output", {"prefix", "format"});
    if (o.contains("prefix")) {
      if (!o["prefix"].is_string() || o["prefix"].get<std::string>().empty())
        throw ConfigError("/output/prefix", "expected a non-empty string");
      spec.prefix = o["prefix"].get<std::string>();
      if (spec.prefix.find('/') != std::string::npos) throw ConfigError("/output/prefix", "must not contain '/'");
    }
    if (o.contains("format")) {
      spec.format = o["format"].is_string() ? o["format"].get<std::string>() : "";
      if (spec.format != "csv" && spec.format != "json" && spec.format != "both")
        throw ConfigError("/output/format", "expected csv, json or both");
    }
  }

  // Echo with every default spelled out.
  json& e = spec.echo;
  e["schema_version"] = spec.schema_version;
  e["potential"] = {{"model", spec.model}};
  if (spec.model == "cubic") e["potential"]["g"] = complex_to_json(spec.cubic_g);
  if (spec.model == "custom") e["potential"]["g"] = cvec_to_json(spec.W.g());
  e["tolerances"] = {{"newton", spec.tol.newton},
                     {"quadrature", spec.tol.quadrature},
                     {"classify", spec.tol.classify},
                     {"ode", spec.tol.ode},
                     {"contour", spec.tol.contour}};
  e["radius"] = spec.radius > 0.0 ? json(spec.radius) : json("auto");
  e["threads"] = spec.threads;
  if (spec.t) e["t"] = cvec_to_json(*spec.t);
  if (spec.s) e["s"] = cvec_to_json(*spec.s);
  if (spec.betas) e["betas"] = cvec_to_json(*spec.betas);
  if (spec.pairing) e["pairing"] = spec.pairing->pairs;
  if (!spec.path.empty()) {
    e["path"] = json::array();
    for (const CVec& p : spec.path) e["path"].push_back(cvec_to_json(p));
  }
  if (spec.scan) {
    auto axis = [](const ScanAxis& a) { return json{{"param", a.name}, {"min", a.lo}, {"max", a.hi}, {"count", a.count}}; };
    e["scan"] = {{"x", axis(spec.scan->x)}, {"t", cvec_to_json(spec.scan->t_base)}};
    if (spec.scan->y.t_index >= 0) e["scan"]["y"] = axis(spec.scan->y);
  }
  if (spec.scaling)
    e["scaling"] = {{"t_start", cvec_to_json(spec.scaling->t_start)},
                    {"t_end", cvec_to_json(spec.scaling->t_end)},
                    {"per_decade", spec.scaling->per_decade}};
  const PainleveSpec& pv = spec.painleve;
  e["painleve"] = {{"x_min", pv.x_min}, {"x_max", pv.x_max}, {"step", pv.step}, {"n", pv.n}};
  if (pv.B) {
    e["painleve"]["B"] = complex_to_json(*pv.B);
    e["painleve"]["C"] = complex_to_json(*pv.C);
  }
  e["output"] = {{"prefix", spec.prefix}, {"format", spec.format}};
  return spec;
}

RunSpec parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset to line and column.
    const std::size_t at = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < at; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("", path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace spectral::cli
