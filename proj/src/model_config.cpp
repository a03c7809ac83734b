#include "replicaflow/model_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace rflow {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool parse_bool(std::string_view text) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("malformed boolean '" + std::string(t) + "'");
}

double* field_ptr(ModelParams& p, std::string_view name) {
  if (name == "delta") return &p.delta;
  if (name == "Omega") return &p.omega;
  if (name == "theta_e") return &p.theta_e;
  if (name == "theta_b") return &p.theta_b;
  if (name == "gamma_b") return &p.gamma_b;
  if (name == "gamma_e") return &p.gamma_e;
  if (name == "lamb_e") return &p.lamb_e;
  if (name == "lamb_b") return &p.lamb_b;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& param_names() {
  static const std::vector<std::string> names{"delta",   "Omega",   "theta_e", "theta_b",
                                              "gamma_b", "gamma_e", "lamb_e",  "lamb_b"};
  return names;
}

bool is_param_name(std::string_view name) {
  const auto& names = param_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

void set_param(ModelParams& p, std::string_view name, double value) {
  double* f = field_ptr(p, name);
  if (f == nullptr) throw ConfigError("unknown key '" + std::string(name) + "'");
  *f = value;
}

double get_param(const ModelParams& p, std::string_view name) {
  ModelParams copy = p;
  const double* f = field_ptr(copy, name);
  if (f == nullptr) throw ConfigError("unknown key '" + std::string(name) + "'");
  return *f;
}

double parse_number(std::string_view text) {
  const auto t = trim(text);
  double value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError("malformed number '" + std::string(t) + "'");
  }
  return value;
}

int parse_replica_count(std::string_view text) {
  const auto t = trim(text);
  int value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    throw ConfigError("malformed replica count '" + std::string(t) + "'");
  }
  if (value < 1) throw ConfigError("M must be >= 1");
  return value;
}

std::vector<double> parse_value_list(std::string_view text) {
  const auto t = trim(text);
  if (t.empty()) throw ConfigError("empty axis");

  if (t.find(':') != std::string_view::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ConfigError("malformed range '" + std::string(t) + "'");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);

    auto tail = trim(parts[2]);
    bool log_spaced = false;
    if (const auto sp = tail.find_first_of(" \t"); sp != std::string_view::npos) {
      if (trim(tail.substr(sp)) != "log") {
        throw ConfigError("malformed range '" + std::string(t) + "'");
      }
      log_spaced = true;
      tail = trim(tail.substr(0, sp));
    }
    int count = 0;
    const auto res = std::from_chars(tail.data(), tail.data() + tail.size(), count);
    if (tail.empty() || res.ec != std::errc{} || res.ptr != tail.data() + tail.size() || count < 1) {
      throw ConfigError("malformed range '" + std::string(t) + "'");
    }
    if (log_spaced && !(start > 0 && stop > 0)) {
      throw ConfigError("log range needs positive endpoints '" + std::string(t) + "'");
    }

    std::vector<double> values(static_cast<std::size_t>(count));
    if (count == 1) {
      values[0] = start;
      return values;
    }
    for (int i = 0; i < count; ++i) {
      const double frac = static_cast<double>(i) / (count - 1);
      values[i] = log_spaced ? std::exp(std::log(start) + frac * (std::log(stop) - std::log(start)))
                             : start + frac * (stop - start);
    }
    values.front() = start;
    values.back() = stop;
    return values;
  }

  std::vector<double> values;
  for (const auto tok : split(t, ',')) {
    if (trim(tok).empty()) throw ConfigError("empty list entry in '" + std::string(t) + "'");
    values.push_back(parse_number(tok));
  }
  return values;
}

std::size_t SweepSpec::cardinality() const {
  std::size_t n = replica_list.size();
  for (const auto& axis : axes) n *= axis.values.size();
  return n;
}

SweepSpec parse_sweep(std::string_view text) {
  SweepSpec spec;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;

  for (auto raw : split(text, '\n')) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto where = "line " + std::to_string(line_no) + ": ";

    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");

    try {
      if (key == "M") {
        spec.replica_list.clear();
        for (const double v : parse_value_list(value)) {
          if (v != std::floor(v)) throw ConfigError("M values must be integers");
          if (v < 1) throw ConfigError("M must be >= 1");
          spec.replica_list.push_back(static_cast<int>(v));
        }
      } else if (key == "output") {
        spec.output_path = std::string(value);
      } else if (key == "include_weak") {
        spec.include_weak = parse_bool(value);
      } else if (key == "dump_spectra") {
        spec.dump_spectra = parse_bool(value);
      } else if (is_param_name(key)) {
        SweepAxis axis{key, parse_value_list(value)};
        for (const double v : axis.values) {
          ModelParams probe;
          set_param(probe, key, v);
          validate_params(probe);
        }
        spec.axes.push_back(std::move(axis));
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return spec;
}

std::string serialize_sweep(const SweepSpec& spec) {
  std::string out;
  for (const auto& axis : spec.axes) {
    out += axis.name + " = ";
    for (std::size_t i = 0; i < axis.values.size(); ++i) {
      if (i) out += ',';
      out += format_shortest(axis.values[i]);
    }
    out += '\n';
  }
  out += "M = ";
  for (std::size_t i = 0; i < spec.replica_list.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(spec.replica_list[i]);
  }
  out += '\n';
  if (!spec.output_path.empty()) out += "output = " + spec.output_path + '\n';
  out += std::string("include_weak = ") + (spec.include_weak ? "true" : "false") + '\n';
  out += std::string("dump_spectra = ") + (spec.dump_spectra ? "true" : "false") + '\n';
  return out;
}

}  // namespace rflow
