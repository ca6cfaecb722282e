#include "necrotic/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace necrotic {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
  }
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("bad integer value for " + key + ": '" + v + "'");
  }
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (v.empty()) return out;
  std::stringstream ss(v + ",");
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  return out;
}

// Shortest text that reads back to the same double.
std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string fmt(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt(xs[i]);
  return out;
}

struct Field {
  const char* key;
  enum Kind { Real, Integer, List, Text } kind;
  void* (*ptr)(RunConfig&);
};

#define NECROTIC_FIELD(name, member, kind) \
  Field { name, Field::kind, [](RunConfig& c) -> void* { return &c.member; } }

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      NECROTIC_FIELD("sigma_hat", params.sigma_hat, Real),
      NECROTIC_FIELD("mu", params.mu, Real),
      NECROTIC_FIELD("nu", params.nu, Real),
      NECROTIC_FIELD("gamma", params.gamma, Real),
      NECROTIC_FIELD("tol", tol, Real),
      NECROTIC_FIELD("R0", R0, Real),
      NECROTIC_FIELD("horizon", horizon, Real),
      NECROTIC_FIELD("rtol", rtol, Real),
      NECROTIC_FIELD("atol", atol, Real),
      NECROTIC_FIELD("samples", samples, Integer),
      NECROTIC_FIELD("k_max", k_max, Integer),
      NECROTIC_FIELD("k_max_cap", k_max_cap, Integer),
      NECROTIC_FIELD("table_k_max", table_k_max, Integer),
      NECROTIC_FIELD("crosscheck_up_to", crosscheck_up_to, Integer),
      NECROTIC_FIELD("vi_n", vi_n, Integer),
      NECROTIC_FIELD("vi_tol", vi_tol, Real),
      NECROTIC_FIELD("omega", omega, Real),
      NECROTIC_FIELD("radii", radii, List),
      NECROTIC_FIELD("mode", mode, Integer),
      NECROTIC_FIELD("eps", eps, List),
      NECROTIC_FIELD("n_r", n_r, Integer),
      NECROTIC_FIELD("n_theta", n_theta, Integer),
      NECROTIC_FIELD("axisym_tol", axisym_tol, Real),
      NECROTIC_FIELD("zeta_k_max", zeta_k_max, Integer),
      NECROTIC_FIELD("out_dir", out_dir, Text),
  };
  return f;
}

#undef NECROTIC_FIELD

const Field& find_field(const std::string& key) {
  for (const Field& f : fields()) {
    if (key == f.key) return f;
  }
  throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields()) k.emplace_back(f.key);
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const Field& f = find_field(key);
  const std::string v = trim(raw);
  void* p = f.ptr(cfg);
  switch (f.kind) {
    case Field::Real:
      *static_cast<double*>(p) = to_double(key, v);
      break;
    case Field::Integer: {
      const long x = to_long(key, v);
      if (x < 0 || x > 1000000000L) throw ConfigError("value out of range for " + key);
      *static_cast<int*>(p) = static_cast<int>(x);
      break;
    }
    case Field::List:
      *static_cast<std::vector<double>*>(p) = to_list(key, v);
      break;
    case Field::Text:
      if (v.empty()) throw ConfigError("empty value for " + key);
      *static_cast<std::string*>(p) = v;
      break;
  }
}

std::string get_config_value(const RunConfig& cfg, const std::string& key) {
  const Field& f = find_field(key);
  void* p = f.ptr(const_cast<RunConfig&>(cfg));
  switch (f.kind) {
    case Field::Real:
      return fmt(*static_cast<double*>(p));
    case Field::Integer:
      return std::to_string(*static_cast<int*>(p));
    case Field::List:
      return fmt(*static_cast<std::vector<double>*>(p));
    case Field::Text:
      return *static_cast<std::string*>(p);
  }
  return "";
}

RunConfig parse_config(const std::string& text, RunConfig cfg) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::vector<std::pair<std::string, std::string>> config_echo(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& k : config_keys()) out.emplace_back(k, get_config_value(cfg, k));
  return out;
}

}  // namespace necrotic
