#include "lref/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lref {

Method parse_method(const std::string& name) {
  if (name == "centralized") return Method::Centralized;
  if (name == "matching") return Method::Matching;
  if (name == "greedy-sghs") return Method::GreedySghs;
  if (name == "random-sghs") return Method::RandomSghs;
  if (name == "sqos-sghs") return Method::SqosSghs;
  if (name == "greedy-random") return Method::GreedyRandom;
  if (name == "random-random") return Method::RandomRandom;
  if (name == "sqos-random") return Method::SqosRandom;
  throw std::invalid_argument("unknown method: '" + name + "'");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Centralized: return "centralized";
    case Method::Matching: return "matching";
    case Method::GreedySghs: return "greedy-sghs";
    case Method::RandomSghs: return "random-sghs";
    case Method::SqosSghs: return "sqos-sghs";
    case Method::GreedyRandom: return "greedy-random";
    case Method::RandomRandom: return "random-random";
    case Method::SqosRandom: return "sqos-random";
  }
  throw std::logic_error("method_name: bad enum value");
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (num_rc < 1) fail("num_rc must be >= 1");
  if (num_unrc < 1) fail("num_unrc must be >= 1");
  if (!(bandwidth_hz > 0)) fail("bandwidth_hz must be > 0");
  if (!(p_rc_max_w > 0) || !(p_urc_max_w > 0)) fail("transmit powers must be > 0");
  if (!(f_rc > 0) || !(f_urc > 0)) fail("CPU frequencies must be > 0");
  if (!(rho > 0)) fail("rho must be > 0");
  if (!(zeta > 1)) fail("zeta must be > 1");
  if (!(q_mean >= 0)) fail("q_mean must be >= 0");
  if (!(b_cycles > 0)) fail("b_cycles must be > 0");
  if (!(model_bits > 0)) fail("model_bits must be > 0");
  if (!(t_max_cmp_s > 0)) fail("t_max_cmp_s must be > 0");
  if (!(area_radius_m > 0)) fail("area_radius_m must be > 0");
  if (!(s_max_m > 0)) fail("s_max_m must be > 0");
  if (!(c2c_dist_m > 0)) fail("c2c_dist_m must be > 0");
  if (!(r_min_c2c >= 0)) fail("r_min_c2c must be >= 0");
  if (!(trust_link_prob > 0 && trust_link_prob <= 1)) fail("trust_link_prob must be in (0,1]");
  if (!(trust_w_min >= 0 && trust_w_min <= 1)) fail("trust_w_min must be in [0,1]");
  if (!(idle_prob >= 0 && idle_prob <= 1)) fail("idle_prob must be in [0,1]");
  if (!(active_prob >= 0 && active_prob <= 1)) fail("active_prob must be in [0,1]");
  if (!(mobility.memory >= 0 && mobility.memory <= 1)) fail("mobility_memory must be in [0,1]");
  if (!(mobility.mean_speed >= 0)) fail("mobility_mean_speed must be >= 0");
  if (!(mobility.speed_std >= 0) || !(mobility.dir_std >= 0)) fail("mobility stds must be >= 0");
  if (!(v > 0)) fail("v must be > 0");
  if (!(lambda_t >= 0 && lambda_e >= 0)) fail("lambda weights must be >= 0");
  if (std::abs(lambda_t + lambda_e - 1.0) > 1e-9) fail("lambda_t + lambda_e must equal 1");
  if (rounds < 1) fail("rounds must be >= 1");
  if (enum_cap < 1) fail("enum_cap must be >= 1");
  if (sghs.hms < 1) fail("hms must be >= 1");
  if (sghs.ni < 1) fail("ni must be >= 1");
  if (sghs.update_period < 1) fail("update_period must be >= 1");
  if (!(sghs.bw_min > 0 && sghs.bw_min <= sghs.bw_max)) fail("need 0 < bw_min <= bw_max");
  if (!(sghs.theta_min > 0 && sghs.theta_min < sghs.theta_max && sghs.theta_max < 1))
    fail("need 0 < theta_min < theta_max < 1");
  if (!(sghs.sigma_hmcr >= 0 && sghs.sigma_par >= 0)) fail("sghs sigmas must be >= 0");
}

namespace {

// Field table: name -> setter/getter pair. One place to add a key.
struct Field {
  std::function<void(SimConfig&, const std::string&)> set;
  std::function<std::string(const SimConfig&)> get;
};

double to_double(const std::string& s) {
  size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing junk in number '" + s + "'");
  return v;
}

std::int64_t to_int(const std::string& s) {
  size_t pos = 0;
  long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing junk in integer '" + s + "'");
  return v;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

const std::map<std::string, Field>& field_table() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    auto dbl = [&t](const std::string& key, auto member) {
      t[key] = {[member](SimConfig& c, const std::string& s) { c.*member = to_double(s); },
                [member](const SimConfig& c) { return fmt_double(c.*member); }};
    };
    auto num = [&t](const std::string& key, auto member) {
      t[key] = {[member](SimConfig& c, const std::string& s) {
                  c.*member = static_cast<std::remove_reference_t<decltype(std::declval<SimConfig&>().*member)>>(to_int(s));
                },
                [member](const SimConfig& c) { return std::to_string(c.*member); }};
    };
    num("num_rc", &SimConfig::num_rc);
    num("num_unrc", &SimConfig::num_unrc);
    dbl("bandwidth_hz", &SimConfig::bandwidth_hz);
    dbl("carrier_hz", &SimConfig::carrier_hz);
    dbl("p_rc_max_w", &SimConfig::p_rc_max_w);
    dbl("p_urc_max_w", &SimConfig::p_urc_max_w);
    dbl("n0_dbm_hz", &SimConfig::n0_dbm_hz);
    dbl("r_min_c2c", &SimConfig::r_min_c2c);
    dbl("f_rc", &SimConfig::f_rc);
    dbl("f_urc", &SimConfig::f_urc);
    dbl("rho", &SimConfig::rho);
    dbl("zeta", &SimConfig::zeta);
    dbl("q_mean", &SimConfig::q_mean);
    dbl("b_cycles", &SimConfig::b_cycles);
    dbl("model_bits", &SimConfig::model_bits);
    dbl("t_max_cmp_s", &SimConfig::t_max_cmp_s);
    dbl("area_radius_m", &SimConfig::area_radius_m);
    dbl("s_max_m", &SimConfig::s_max_m);
    dbl("c2c_dist_m", &SimConfig::c2c_dist_m);
    dbl("trust_link_prob", &SimConfig::trust_link_prob);
    dbl("trust_w_min", &SimConfig::trust_w_min);
    dbl("idle_prob", &SimConfig::idle_prob);
    dbl("active_prob", &SimConfig::active_prob);
    dbl("v", &SimConfig::v);
    dbl("lambda_t", &SimConfig::lambda_t);
    dbl("lambda_e", &SimConfig::lambda_e);
    num("rounds", &SimConfig::rounds);
    num("enum_cap", &SimConfig::enum_cap);

    // nested: mobility
    t["mobility_memory"] = {[](SimConfig& c, const std::string& s) { c.mobility.memory = to_double(s); },
                            [](const SimConfig& c) { return fmt_double(c.mobility.memory); }};
    t["mobility_mean_speed"] = {[](SimConfig& c, const std::string& s) { c.mobility.mean_speed = to_double(s); },
                                [](const SimConfig& c) { return fmt_double(c.mobility.mean_speed); }};
    t["mobility_speed_std"] = {[](SimConfig& c, const std::string& s) { c.mobility.speed_std = to_double(s); },
                               [](const SimConfig& c) { return fmt_double(c.mobility.speed_std); }};
    t["mobility_dir_std"] = {[](SimConfig& c, const std::string& s) { c.mobility.dir_std = to_double(s); },
                             [](const SimConfig& c) { return fmt_double(c.mobility.dir_std); }};

    // nested: harmony search
    t["hms"] = {[](SimConfig& c, const std::string& s) { c.sghs.hms = int(to_int(s)); },
                [](const SimConfig& c) { return std::to_string(c.sghs.hms); }};
    t["ni"] = {[](SimConfig& c, const std::string& s) { c.sghs.ni = int(to_int(s)); },
               [](const SimConfig& c) { return std::to_string(c.sghs.ni); }};
    t["update_period"] = {[](SimConfig& c, const std::string& s) { c.sghs.update_period = int(to_int(s)); },
                          [](const SimConfig& c) { return std::to_string(c.sghs.update_period); }};
    t["bw_min"] = {[](SimConfig& c, const std::string& s) { c.sghs.bw_min = to_double(s); },
                   [](const SimConfig& c) { return fmt_double(c.sghs.bw_min); }};
    t["bw_max"] = {[](SimConfig& c, const std::string& s) { c.sghs.bw_max = to_double(s); },
                   [](const SimConfig& c) { return fmt_double(c.sghs.bw_max); }};
    t["mu_hmcr"] = {[](SimConfig& c, const std::string& s) { c.sghs.mu_hmcr = to_double(s); },
                    [](const SimConfig& c) { return fmt_double(c.sghs.mu_hmcr); }};
    t["sigma_hmcr"] = {[](SimConfig& c, const std::string& s) { c.sghs.sigma_hmcr = to_double(s); },
                       [](const SimConfig& c) { return fmt_double(c.sghs.sigma_hmcr); }};
    t["mu_par"] = {[](SimConfig& c, const std::string& s) { c.sghs.mu_par = to_double(s); },
                   [](const SimConfig& c) { return fmt_double(c.sghs.mu_par); }};
    t["sigma_par"] = {[](SimConfig& c, const std::string& s) { c.sghs.sigma_par = to_double(s); },
                      [](const SimConfig& c) { return fmt_double(c.sghs.sigma_par); }};
    t["theta_min"] = {[](SimConfig& c, const std::string& s) { c.sghs.theta_min = to_double(s); },
                      [](const SimConfig& c) { return fmt_double(c.sghs.theta_min); }};
    t["theta_max"] = {[](SimConfig& c, const std::string& s) { c.sghs.theta_max = to_double(s); },
                      [](const SimConfig& c) { return fmt_double(c.sghs.theta_max); }};

    // non-numeric
    t["seed"] = {[](SimConfig& c, const std::string& s) {
                   size_t pos = 0;
                   c.seed = std::stoull(s, &pos);
                   if (pos != s.size()) throw std::invalid_argument("bad seed '" + s + "'");
                 },
                 [](const SimConfig& c) { return std::to_string(c.seed); }};
    t["method"] = {[](SimConfig& c, const std::string& s) { c.method = parse_method(s); },
                   [](const SimConfig& c) { return method_name(c.method); }};
    return t;
  }();
  return table;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  SimConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string key, value, extra;
    if (!(ls >> key)) continue;  // blank / comment-only line
    if (!(ls >> value) || (ls >> extra))
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key value', got '" + line + "'");
    auto it = field_table().find(key);
    if (it == field_table().end())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    if (seen.count(key))
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": duplicate key '" + key + "' (first at line " +
                                  std::to_string(seen[key]) + ")");
    seen[key] = lineno;
    try {
      it->second.set(cfg, value);
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + " (" + key +
                                  "): " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open config file: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const SimConfig& c) {
  std::ostringstream out;
  for (const auto& [key, field] : field_table()) out << key << ' ' << field.get(c) << '\n';
  return out.str();
}

std::vector<std::pair<std::string, std::string>> config_items(const SimConfig& c) {
  std::vector<std::pair<std::string, std::string>> items;
  for (const auto& [key, field] : field_table()) items.emplace_back(key, field.get(c));
  return items;
}

}  // namespace lref
