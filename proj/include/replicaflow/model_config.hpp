#ifndef REPLICAFLOW_MODEL_CONFIG_HPP
#define REPLICAFLOW_MODEL_CONFIG_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rflow {

/// Physical parameters of the driven qubit between an environment (e) and a
/// probe reservoir (b). Units: hbar = k_B = 1, rates and drive in units of
/// the environment rate Gamma_e. Temperatures enter only as theta = omega/T.
template <typename Real>
struct BasicModelParams {
  Real delta = 0;     // detuning omega - omega_dr
  Real omega = 1;     // drive amplitude Omega
  Real theta_e = 1;   // omega / T_e
  Real theta_b = 20;  // omega / T_b (cold probe)
  Real gamma_b = 1;   // Gamma_b / Gamma_e
  Real gamma_e = 1;
  Real lamb_e = 0;    // Lamb shift from the environment
  Real lamb_b = 0;    // Lamb shift from the probe

  template <typename Other>
  BasicModelParams<Other> cast() const {
    return {Other(delta),   Other(omega),   Other(theta_e), Other(theta_b),
            Other(gamma_b), Other(gamma_e), Other(lamb_e),  Other(lamb_b)};
  }

  bool operator==(const BasicModelParams&) const = default;
};

using ModelParams = BasicModelParams<double>;

/// Thrown for any violated parameter invariant or malformed configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Returns `p` unchanged if every invariant holds, otherwise throws a
/// ConfigError naming the first offending field.
template <typename Real>
const BasicModelParams<Real>& validate_params(const BasicModelParams<Real>& p) {
  using std::isfinite;
  const std::pair<const char*, Real> fields[] = {
      {"delta", p.delta},     {"Omega", p.omega},     {"theta_e", p.theta_e},
      {"theta_b", p.theta_b}, {"gamma_b", p.gamma_b}, {"gamma_e", p.gamma_e},
      {"lamb_e", p.lamb_e},   {"lamb_b", p.lamb_b}};
  for (const auto& [name, value] : fields) {
    if (!isfinite(value)) throw ConfigError(std::string(name) + " must be finite");
  }
  if (!(p.omega >= 0)) throw ConfigError("Omega must be >= 0");
  if (!(p.theta_e > 0)) throw ConfigError("theta_e must be > 0");
  if (!(p.theta_b > 0)) throw ConfigError("theta_b must be > 0");
  if (!(p.gamma_b >= 0)) throw ConfigError("gamma_b must be >= 0");
  if (!(p.gamma_e > 0)) throw ConfigError("gamma_e must be > 0");
  return p;
}

/// Names accepted by set_param / the config grammar, in ModelParams order.
const std::vector<std::string>& param_names();

bool is_param_name(std::string_view name);

/// Assigns a field by its config name. Does not validate; callers run
/// validate_params on the finished struct.
void set_param(ModelParams& p, std::string_view name, double value);
double get_param(const ModelParams& p, std::string_view name);

/// Strict number parsing shared by the config reader and the CLI: the whole
/// token must be consumed.
double parse_number(std::string_view text);
int parse_replica_count(std::string_view text);

struct SweepAxis {
  std::string name;
  std::vector<double> values;
  bool operator==(const SweepAxis&) const = default;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;     // document order, outermost first
  std::vector<int> replica_list{2};
  std::string output_path;
  bool include_weak = true;
  bool dump_spectra = false;

  /// Number of rows a sweep produces.
  std::size_t cardinality() const;
  bool operator==(const SweepSpec&) const = default;
};

/// Parses the `key = value` sweep grammar: `#` comments, lists `a,b,c`,
/// ranges `start:stop:count` with optional trailing `log`, and `M` for the
/// replica list. Throws ConfigError on unknown keys, malformed values, empty
/// axes, repeated keys, or values violating ModelParams invariants.
SweepSpec parse_sweep(std::string_view text);

/// Inverse of parse_sweep: every axis is written as an explicit list with
/// round-trip precision.
std::string serialize_sweep(const SweepSpec& spec);

/// Expands a single range or list token ("0.1:10:25 log", "1,2,3").
std::vector<double> parse_value_list(std::string_view text);

}  // namespace rflow

#endif  // REPLICAFLOW_MODEL_CONFIG_HPP
