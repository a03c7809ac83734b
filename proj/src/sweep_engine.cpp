#include "replicaflow/sweep_engine.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "replicaflow/spectral_flow.hpp"
#include "replicaflow/weak_reference.hpp"

namespace rflow {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void enumerate(const SweepSpec& spec, std::size_t axis, ModelParams current,
               std::vector<std::pair<ModelParams, int>>& out) {
  if (axis == spec.axes.size()) {
    for (const int m : spec.replica_list) out.emplace_back(current, m);
    return;
  }
  for (const double v : spec.axes[axis].values) {
    set_param(current, spec.axes[axis].name, v);
    enumerate(spec, axis + 1, current, out);
  }
}

std::vector<std::string_view> split_view(std::string_view s, char sep) {
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

double parse_csv_double(std::string_view s) {
  if (s == "nan") return kNaN;
  return parse_number(s);
}

}  // namespace

const std::vector<std::string_view>& warn_token_registry() {
  static const std::vector<std::string_view> tokens{
      warn::kComplexLeading, warn::kPositiveRealPart, warn::kPairingDefect,     warn::kAssemblyFailed,
      warn::kEigensolverFailed, warn::kWeakFailed,    warn::kWeakSkipped,       warn::kWeakRenyiUndefined};
  return tokens;
}

bool is_failure_token(std::string_view token) {
  return token == warn::kAssemblyFailed || token == warn::kEigensolverFailed || token == warn::kWeakFailed;
}

bool SweepRow::failed() const {
  return std::any_of(warn_flags.begin(), warn_flags.end(), [](const std::string& t) { return is_failure_token(t); });
}

std::vector<std::pair<ModelParams, int>> enumerate_grid(const SweepSpec& spec, const ModelParams& base) {
  std::vector<std::pair<ModelParams, int>> out;
  out.reserve(spec.cardinality());
  enumerate(spec, 0, base, out);
  return out;
}

SweepRow compute_row(const ModelParams& params, int replicas, bool include_weak, bool keep_spectrum) {
  SweepRow row;
  row.replicas = replicas;
  row.params = params;

  std::optional<LiouvillianParts<double>> parts;
  try {
    parts = assemble(replicas, params);
  } catch (const std::exception&) {
    row.warn_flags.emplace_back(warn::kAssemblyFailed);
  }

  if (parts) {
    try {
      const auto s = spectrum<double>(parts->total);
      row.lambda0_re = s.leading_re;
      row.lambda0_im = s.leading.imag();
      row.flow = -s.leading_re;
      const double scale = s.norm1;
      if (s.complex_leading) row.warn_flags.emplace_back(warn::kComplexLeading);
      if (s.max_positive_real_part > 1e-10 * scale) row.warn_flags.emplace_back(warn::kPositiveRealPart);
      if (s.pairing_defect > 1e-9 * scale) row.warn_flags.emplace_back(warn::kPairingDefect);
      if (keep_spectrum) row.spectrum.assign(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
    } catch (const std::exception&) {
      row.warn_flags.emplace_back(warn::kEigensolverFailed);
    }
  }
  if (!parts || row.failed()) {
    row.lambda0_re = row.lambda0_im = row.flow = kNaN;
  }

  if (!include_weak) {
    row.warn_flags.emplace_back(warn::kWeakSkipped);
    return row;
  }
  try {
    const auto state = steady_state_qubit(params);
    row.weak_vN = weak_flow_vN_qubit(params, state);
    if (replicas >= 2) {
      row.weak_flow = weak_flow_renyi(params, replicas, state);
    } else {
      row.warn_flags.emplace_back(warn::kWeakRenyiUndefined);
    }
  } catch (const std::exception&) {
    row.warn_flags.emplace_back(warn::kWeakFailed);
    row.weak_flow = row.weak_vN = kNaN;
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  const auto grid = enumerate_grid(spec, options.base);
  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      rows[i] = compute_row(grid[i].first, grid[i].second, spec.include_weak, spec.dump_spectra);
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(grid.size())));
  if (n <= 1) {
    worker();
    return rows;
  }
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return rows;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.replicas << ',' << format_double(r.params.gamma_b) << ',' << format_double(r.params.omega) << ','
        << format_double(r.params.theta_e) << ',' << format_double(r.params.theta_b) << ','
        << format_double(r.params.delta) << ',' << format_double(r.lambda0_re) << ','
        << format_double(r.lambda0_im) << ',' << format_double(r.flow) << ',' << format_double(r.weak_flow) << ','
        << format_double(r.weak_vN) << ',';
    for (std::size_t i = 0; i < r.warn_flags.size(); ++i) {
      if (i) out << ';';
      out << r.warn_flags[i];
    }
    out << '\n';
  }
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(rows, file);
  file.flush();
  if (!file) throw std::runtime_error("write to '" + path + "' failed");
}

void write_spectrum_csv(const std::vector<std::complex<double>>& eigenvalues, std::ostream& out) {
  out << "re,im\n";
  for (const auto& z : eigenvalues) out << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
}

void write_spectra_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "row,re,im\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& z : rows[i].spectrum) {
      out << i << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
    }
  }
}

std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("sweep CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepCsvHeader) throw std::runtime_error("unexpected sweep CSV header");

  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_view(line, ',');
    if (f.size() != 12) {
      throw std::runtime_error("sweep CSV line " + std::to_string(line_no) + ": expected 12 fields");
    }
    try {
      SweepRow r;
      r.replicas = parse_replica_count(f[0]);
      r.params.gamma_b = parse_csv_double(f[1]);
      r.params.omega = parse_csv_double(f[2]);
      r.params.theta_e = parse_csv_double(f[3]);
      r.params.theta_b = parse_csv_double(f[4]);
      r.params.delta = parse_csv_double(f[5]);
      r.lambda0_re = parse_csv_double(f[6]);
      r.lambda0_im = parse_csv_double(f[7]);
      r.flow = parse_csv_double(f[8]);
      r.weak_flow = parse_csv_double(f[9]);
      r.weak_vN = parse_csv_double(f[10]);
      if (!f[11].empty()) {
        for (const auto tok : split_view(f[11], ';')) r.warn_flags.emplace_back(tok);
      }
      rows.push_back(std::move(r));
    } catch (const ConfigError& e) {
      throw std::runtime_error("sweep CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace rflow
