#ifndef KOSTKA_IO_HPP
#define KOSTKA_IO_HPP

// Instance and config parsing plus result rendering. Inputs stay exact:
// array entries are JSON integers, quoted decimal strings, or quoted
// "p/q" fractions, and floating point literals are rejected rather than
// silently rounded. Every numeric output carries both the exact
// rational and a 12 significant digit decimal; bracket ends round the
// decimal outward so a reader of decimals alone still holds a valid
// enclosure.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kostka/bounds.hpp"

namespace kostka {

using ordered_json = nlohmann::ordered_json;

struct RunConfig {
  Rational eps_opt = Rational(1, 1000);
  Rational delta_eval = Rational(1, Integer(1) << 40);
  long precision_bit_cap = kDefaultPrecisionBitCap;
  int max_domain_doublings = 8;
  long max_iterations = 512;
  std::size_t postnikov_threshold = 8;
  std::size_t oracle_dim_cap = 6;
  std::string output_format = "json";

  void validate() const {
    if (!(eps_opt > 0 && eps_opt < 1)) throw input_error("config: eps_opt must lie in (0,1)");
    if (!(delta_eval > 0 && delta_eval < 1))
      throw input_error("config: delta_eval must lie in (0,1)");
    if (precision_bit_cap <= 0) throw input_error("config: precision_bit_cap must be positive");
    if (max_domain_doublings < 0) throw input_error("config: max_domain_doublings negative");
    if (max_iterations <= 0) throw input_error("config: max_iterations must be positive");
    if (output_format != "json" && output_format != "csv")
      throw input_error("config: output_format must be json or csv");
  }
};

namespace detail {

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;  // truncates toward zero
  if (q * b != a && a < 0) --q;
  return q;
}

}  // namespace detail

// Largest 12 significant digit decimal not exceeding x, rendered as
// d.dddddddddddEk. Exact zero stays "0".
inline std::string decimal_down(const Rational& x);
inline std::string decimal_up(const Rational& x);

namespace detail {

inline std::string decimal_directed(const Rational& x, bool up) {
  static const int kSig = 12;
  if (x == 0) return "0";
  if (x < 0) return "-" + (up ? decimal_down(Rational(-x)) : decimal_up(Rational(-x)));
  Integer num = numerator(x), den = denominator(x);
  long e;
  Integer ip = num / den;
  if (ip > 0) {
    e = static_cast<long>(ip.str().size()) - 1;
  } else {
    e = -1;
    Rational t = x * 10;
    while (t < 1) {
      t *= 10;
      --e;
    }
  }
  long shift = (kSig - 1) - e;
  Rational scaled = shift >= 0
                        ? Rational(x * pow_int(Integer(10), static_cast<unsigned long>(shift)))
                        : x / pow_int(Integer(10), static_cast<unsigned long>(-shift));
  Integer m = floor_div(numerator(scaled), denominator(scaled));
  if (up && Rational(m) != scaled) ++m;
  Integer cap = pow_int(Integer(10), kSig);
  if (m >= cap) {
    m = cap / 10;
    ++e;
  }
  std::string digits = m.str();
  return digits.substr(0, 1) + "." + digits.substr(1) + "e" + std::to_string(e);
}

}  // namespace detail

inline std::string decimal_down(const Rational& x) { return detail::decimal_directed(x, false); }
inline std::string decimal_up(const Rational& x) { return detail::decimal_directed(x, true); }

// Exact rational plus a directed decimal: dir < 0 rounds the decimal
// down, dir > 0 up, dir = 0 toward zero (the rational carries exactness
// either way).
inline ordered_json number_pair(const Rational& x, int dir = 0) {
  ordered_json j;
  j["rational"] = x.str();
  if (dir > 0)
    j["decimal"] = decimal_up(x);
  else if (dir < 0)
    j["decimal"] = decimal_down(x);
  else
    j["decimal"] = x < 0 ? decimal_up(x) : decimal_down(x);
  return j;
}

inline ordered_json interval_json(const Interval& v) {
  ordered_json j;
  j["lo"] = number_pair(v.lo, -1);
  j["hi"] = number_pair(v.hi, +1);
  return j;
}

// ---- instance and config parsing ----------------------------------

inline Rational parse_entry(const nlohmann::json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(Integer(v.get<long long>()));
  if (v.is_number())
    throw input_error(where + ": floating point literals lose exactness; quote the value");
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw input_error(where + ": entries must be integers or quoted exact numbers");
}

inline std::vector<Rational> parse_vector(const nlohmann::json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) throw input_error(where + ": expected a nonempty array");
  std::vector<Rational> out;
  out.reserve(arr.size());
  for (const auto& v : arr) out.push_back(parse_entry(v, where));
  return out;
}

inline Instance parse_instance_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("instance JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("lambda") || !j.contains("mu"))
    throw input_error("instance JSON: need an object with lambda and mu arrays");
  Partition lambda{};
  lambda.parts = parse_vector(j["lambda"], "lambda");
  lambda.validate();
  return Instance(lambda, Weight(parse_vector(j["mu"], "mu")));
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw input_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Instance parse_instance_file(const std::string& path) {
  return parse_instance_text(read_file(path));
}

// Optional second weight for segment probes; defaults to the
// permutohedron center when the file does not carry one.
inline Weight parse_mu2_or_center(const std::string& path, const Instance& inst) {
  nlohmann::json j = nlohmann::json::parse(read_file(path));
  if (j.is_object() && j.contains("mu2")) return Weight(parse_vector(j["mu2"], "mu2"));
  Rational total = 0;
  for (const auto& p : inst.lambda.parts) total += p;
  return Weight(std::vector<Rational>(inst.n(), total / Integer(inst.n())));
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = RunConfig()) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) throw input_error("config JSON: expected an object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "eps_opt")
        base.eps_opt = parse_entry(value, key);
      else if (key == "delta_eval")
        base.delta_eval = parse_entry(value, key);
      else if (key == "precision_bit_cap")
        base.precision_bit_cap = value.get<long>();
      else if (key == "max_domain_doublings")
        base.max_domain_doublings = value.get<int>();
      else if (key == "max_iterations")
        base.max_iterations = value.get<long>();
      else if (key == "postnikov_threshold")
        base.postnikov_threshold = value.get<std::size_t>();
      else if (key == "oracle_dim_cap")
        base.oracle_dim_cap = value.get<std::size_t>();
      else if (key == "output_format")
        base.output_format = value.get<std::string>();
      else
        throw input_error("config JSON: unknown key " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("config JSON: ") + e.what());
  }
  return base;
}

// ---- record rendering ----------------------------------------------

inline ordered_json render_instance(const Instance& inst) {
  ordered_json j;
  ordered_json lam = ordered_json::array(), mu = ordered_json::array();
  for (const auto& p : inst.lambda.parts) lam.push_back(p.str());
  for (const auto& w : inst.mu.w) mu.push_back(w.str());
  j["lambda"] = lam;
  j["mu"] = mu;
  j["n"] = inst.n();
  j["dim"] = (inst.n() - 1) * (inst.n() - 2) / 2;
  return j;
}

inline ordered_json render_normalization(const NormalizedInstance& ni) {
  ordered_json j;
  j["beta"] = ni.beta.str();
  j["alpha"] = ni.alpha.str();
  j["volume_factor"] = number_pair(ni.volume_factor());
  ordered_json lam = ordered_json::array();
  for (const auto& p : ni.lambda.parts) lam.push_back(p.str());
  j["lambda"] = lam;
  return j;
}

inline ordered_json render_conditioning(const ConditioningRecord& r) {
  ordered_json j;
  j["n"] = r.n;
  j["lambda_gap"] = number_pair(r.lambda_gap);
  j["tau"] = number_pair(r.tau);
  j["d_mu"] = interval_json(r.d_mu);
  j["r0"] = interval_json(r.r0);
  j["r"] = number_pair(r.r);
  j["delta_prime"] = interval_json(r.delta_prime);
  j["epsilon"] = interval_json(r.epsilon);
  j["epsilon_exact"] = r.epsilon_exact;
  j["domain_radius"] = interval_json(r.domain_radius);
  return j;
}

inline ordered_json render_optimization(const OptimizationResult& opt) {
  ordered_json j;
  j["g_star"] = interval_json(opt.g_star.to_interval().rounded_out_rel(128));
  ordered_json y = ordered_json::array();
  for (const auto& v : opt.y_star) y.push_back(v.str());
  j["y_star"] = y;
  j["iterations"] = opt.iterations;
  j["domain_doublings"] = opt.domain_doublings;
  j["stationarity_residual"] =
      interval_json(opt.stationarity_residual.to_interval().rounded_out_rel(128));
  j["eps_opt"] = opt.eps_opt.str();
  return j;
}

inline ordered_json render_bracket(const VolumeBracket& b) {
  ordered_json j;
  j["lower"] = number_pair(b.lower, -1);
  j["upper_finite"] = b.upper_finite;
  if (b.upper_finite) {
    j["upper"] = number_pair(b.upper, +1);
    j["F_estimate"] = interval_json(b.F_estimate);
    j["approximation_ratio_log"] = interval_json(b.approximation_ratio_log);
  } else {
    j["upper"] = nullptr;
  }
  ordered_json psh;
  psh["value"] = number_pair(b.psh_volume.value);
  psh["exact"] = b.psh_volume.exact;
  j["psh_volume"] = psh;
  return j;
}

// Key,value flattening of the JSON record; arrays index with [i]. The
// traversal order is the insertion order, so csv output is as
// deterministic as the json it mirrors.
inline void flatten_csv(const ordered_json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten_csv(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const auto& v : j) flatten_csv(v, prefix + "[" + std::to_string(i++) + "]", out);
  } else if (j.is_null()) {
    out += prefix + ",\n";
  } else if (j.is_string()) {
    out += prefix + "," + j.get<std::string>() + "\n";
  } else {
    out += prefix + "," + j.dump() + "\n";
  }
}

inline std::string render_output(const ordered_json& record, const RunConfig& cfg) {
  if (cfg.output_format == "csv") {
    std::string out;
    flatten_csv(record, "", out);
    return out;
  }
  return record.dump(2) + "\n";
}

}  // namespace kostka

#endif  // KOSTKA_IO_HPP
