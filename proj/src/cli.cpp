#include "replicaflow/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "replicaflow/liouvillian.hpp"
#include "replicaflow/model_config.hpp"
#include "replicaflow/replica_fit.hpp"
#include "replicaflow/spectral_flow.hpp"
#include "replicaflow/sweep_engine.hpp"
#include "replicaflow/weak_reference.hpp"

namespace rflow::cli {

namespace {

// A computational failure, as opposed to bad input.
class ComputeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter flags shared by every single-point subcommand. Values are kept as
// text so that they go through the same parser as config files.
struct PointOptions {
  std::map<std::string, std::string> overrides;
  std::string replicas = "2";

  void attach(CLI::App& app) {
    for (const auto& name : param_names()) {
      app.add_option("--" + name, overrides[name], "model parameter " + name);
    }
    app.add_option("--M", replicas, "replica count M")->capture_default_str();
  }

  ModelParams params() const {
    ModelParams p;
    for (const auto& [name, text] : overrides) {
      if (!text.empty()) set_param(p, name, parse_number(text));
    }
    validate_params(p);
    return p;
  }

  int m() const { return parse_replica_count(replicas); }
};

std::vector<std::complex<double>> to_std(const ComplexVector<double>& v) {
  return {v.data(), v.data() + v.size()};
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::trunc) {
  std::ofstream f(path, std::ios::binary | mode);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  return f;
}

void print_kv(std::ostream& out, std::string_view key, double value) {
  out << key << " = " << format_double(value) << '\n';
}

void print_kv(std::ostream& out, std::string_view key, std::string_view value) {
  out << key << " = " << value << '\n';
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string s;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) s += ';';
    s += tokens[i];
  }
  return s;
}

// --- build ----------------------------------------------------------------

struct BuildCmd {
  PointOptions point;
  std::string part = "total";
  std::string format = "csv";
  std::string out_path;

  void attach(CLI::App& app) {
    point.attach(app);
    app.add_option("--part", part, "total, unitary, environment, probe_same or probe_cross")
        ->check(CLI::IsMember({"total", "unitary", "environment", "probe_same", "probe_cross"}))
        ->capture_default_str();
    app.add_option("--format", format, "csv (row,col,re,im for non-zero entries) or dense")
        ->check(CLI::IsMember({"csv", "dense"}))
        ->capture_default_str();
    app.add_option("--out", out_path, "output file (default: stdout)");
  }

  int run(std::ostream& out) const {
    const auto parts = assemble(point.m(), point.params());
    const std::map<std::string, const SuperOperator<double>*> lookup{
        {"total", &parts.total},           {"unitary", &parts.unitary},
        {"environment", &parts.environment}, {"probe_same", &parts.probe_same},
        {"probe_cross", &parts.probe_cross}};
    const auto& l = *lookup.at(part);

    std::ofstream file;
    if (!out_path.empty()) file = open_out(out_path);
    std::ostream& sink = out_path.empty() ? out : file;

    if (format == "csv") {
      sink << "row,col,re,im\n";
      for (Eigen::Index r = 0; r < l.rows(); ++r) {
        for (Eigen::Index c = 0; c < l.cols(); ++c) {
          const auto z = l(r, c);
          if (z == std::complex<double>{}) continue;
          sink << r << ',' << c << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
        }
      }
    } else {
      for (Eigen::Index r = 0; r < l.rows(); ++r) {
        for (Eigen::Index c = 0; c < l.cols(); ++c) {
          const auto z = l(r, c);
          if (c) sink << ' ';
          sink << '(' << format_double(z.real()) << ',' << format_double(z.imag()) << ')';
        }
        sink << '\n';
      }
    }
    return kExitOk;
  }
};

// --- flow / spectrum ------------------------------------------------------

struct FlowCmd {
  PointOptions point;
  std::string dump_path;

  void attach(CLI::App& app) {
    point.attach(app);
    app.add_option("--dump-spectrum", dump_path, "write every eigenvalue as re,im CSV");
  }

  int run(std::ostream& out) const {
    const auto p = point.params();
    const int m = point.m();
    assemble(m, p);  // surfaces size and parameter errors as validation failures
    const auto row = compute_row(p, m, true, true);
    if (row.failed()) throw ComputeError("flow computation failed: " + join_tokens(row.warn_flags));
    const ComplexVector<double> eigs =
        Eigen::Map<const ComplexVector<double>>(row.spectrum.data(), static_cast<Eigen::Index>(row.spectrum.size()));

    out << "M = " << m << '\n';
    print_kv(out, "lambda0_re", row.lambda0_re);
    print_kv(out, "lambda0_im", row.lambda0_im);
    print_kv(out, "F_M", row.flow);
    print_kv(out, "F_weak_M", row.weak_flow);
    print_kv(out, "F_vN_weak", row.weak_vN);
    print_kv(out, "max_re", eigs.real().maxCoeff());
    print_kv(out, "pairing_defect", pairing_defect<double>(eigs));
    out << "eigenvalues = " << eigs.size() << '\n';
    print_kv(out, "warn_flags", join_tokens(row.warn_flags));

    if (!dump_path.empty()) {
      auto file = open_out(dump_path);
      write_spectrum_csv(row.spectrum, file);
    }
    return kExitOk;
  }
};

struct SpectrumCmd {
  PointOptions point;
  std::string out_path;

  void attach(CLI::App& app) {
    point.attach(app);
    app.add_option("--out", out_path, "output file (default: stdout)");
  }

  int run(std::ostream& out) const {
    const auto parts = assemble(point.m(), point.params());
    SpectrumResult<double> s;
    try {
      s = spectrum<double>(parts.total);
    } catch (const std::runtime_error& e) {
      throw ComputeError(e.what());
    }
    if (out_path.empty()) {
      write_spectrum_csv(to_std(s.eigenvalues), out);
    } else {
      auto file = open_out(out_path);
      write_spectrum_csv(to_std(s.eigenvalues), file);
    }
    return kExitOk;
  }
};

// --- reference ------------------------------------------------------------

struct ReferenceCmd {
  PointOptions point;
  bool exclude_probe = false;
  bool literal_omega = false;
  double qubit_omega = 1.0;

  void attach(CLI::App& app) {
    point.attach(app);
    app.add_flag("--exclude-probe", exclude_probe, "steady state without the probe dissipator");
    app.add_flag("--literal-omega", literal_omega, "multiply the Renyi flow by the qubit frequency");
    app.add_option("--qubit-omega", qubit_omega, "qubit frequency used with --literal-omega")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  int run(std::ostream& out) const {
    const auto p = point.params();
    const int m = point.m();
    QubitState<double> s;
    try {
      s = steady_state_qubit(p, !exclude_probe);
    } catch (const std::runtime_error& e) {
      throw ComputeError(e.what());
    }
    print_kv(out, "p0", s.p0);
    print_kv(out, "p1", s.p1);
    print_kv(out, "rho01_re", s.rho01.real());
    print_kv(out, "rho01_im", s.rho01.imag());
    out << "M = " << m << '\n';
    if (m >= 2) {
      print_kv(out, "F_weak_M", weak_flow_renyi(p, m, s, WeakFlowOptions{literal_omega, qubit_omega}));
    } else {
      print_kv(out, "F_weak_M", "undefined");
    }
    print_kv(out, "F_vN_weak", weak_flow_vN_qubit(p, s));
    print_kv(out, "F_vN_incoherent", weak_flow_vN_qubit_incoherent(p, s));
    return kExitOk;
  }
};

// --- sweep ----------------------------------------------------------------

struct SweepCmd {
  std::string config_path;
  std::string out_path;
  unsigned workers = 1;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "sweep configuration file")->required();
    app.add_option("--out", out_path, "output CSV (overrides the config's output key)");
    app.add_option("--workers", workers, "worker threads (0 = hardware concurrency)")->capture_default_str();
  }

  int run(std::ostream& out, std::ostream& err) const {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read '" + config_path + "'");
    std::stringstream text;
    text << in.rdbuf();
    SweepSpec spec = parse_sweep(text.str());
    if (!out_path.empty()) spec.output_path = out_path;

    SweepOptions opts;
    opts.workers = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
    const auto rows = run_sweep(spec, opts);

    if (spec.output_path.empty() || spec.output_path == "-") {
      write_csv(rows, out);
    } else {
      emit_csv(rows, spec.output_path);
    }
    if (spec.dump_spectra) {
      if (spec.output_path.empty() || spec.output_path == "-") {
        throw std::runtime_error("dump_spectra needs an output path");
      }
      auto file = open_out(spec.output_path + ".spectra.csv");
      write_spectra_csv(rows, file);
    }

    int failed = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].failed()) continue;
      ++failed;
      err << "row " << i << " (M=" << rows[i].replicas << ") failed: " << join_tokens(rows[i].warn_flags) << '\n';
    }
    return failed ? kExitComputation : kExitOk;
  }
};

// --- fit ------------------------------------------------------------------

constexpr const char* kFitCsvHeader = "gamma_b,Omega,theta_e,theta_b,delta,a,b,c,rms_residual,s_vN,M_used";

std::map<std::string, double> parse_selection(const std::string& text) {
  static const std::vector<std::string> allowed{"gamma_b", "Omega", "theta_e", "theta_b", "delta"};
  std::map<std::string, double> sel;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("selection item '" + item + "' is not key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(item.substr(0, eq));
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("cannot select on '" + key + "'");
    }
    if (!sel.emplace(key, parse_number(trim(item.substr(eq + 1)))).second) {
      throw ConfigError("duplicate selection key '" + key + "'");
    }
  }
  return sel;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

struct FitCmd {
  std::string in_path;
  std::string selection;
  std::string append_path;

  void attach(CLI::App& app) {
    app.add_option("--in", in_path, "sweep CSV")->required();
    app.add_option("--select", selection, "filter, e.g. \"gamma_b=1,Omega=2,theta_e=4\"");
    app.add_option("--append", append_path, "append the result to this fit-results CSV");
  }

  int run(std::ostream& out, std::ostream& err) const {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot read '" + in_path + "'");
    const auto rows = read_csv(in);
    const auto sel = parse_selection(selection);

    std::vector<SweepRow> picked;
    for (const auto& r : rows) {
      bool ok = true;
      for (const auto& [k, v] : sel) ok = ok && close(get_param(r.params, k), v);
      if (ok) picked.push_back(r);
    }
    if (picked.empty()) throw ConfigError("selection matches no rows");
    const auto& ref = picked.front().params;
    for (const auto& r : picked) {
      for (const char* k : {"gamma_b", "Omega", "theta_e", "theta_b", "delta"}) {
        if (!close(get_param(r.params, k), get_param(ref, k))) {
          throw ConfigError("selection matches more than one parameter point (differs in " + std::string(k) + ")");
        }
      }
    }

    std::vector<FlowPoint> points;
    for (const auto& r : picked) {
      if (r.replicas < 2) continue;
      if (r.failed() || !std::isfinite(r.flow)) {
        err << "skipping failed row at M=" << r.replicas << '\n';
        continue;
      }
      points.push_back({r.replicas, r.flow});
    }

    FitResult fit;
    try {
      fit = fit_flow_vs_M(points);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    } catch (const std::domain_error& e) {
      throw ComputeError(e.what());
    }

    print_kv(out, "a", fit.a);
    print_kv(out, "b", fit.b);
    print_kv(out, "c", fit.c);
    print_kv(out, "rms_residual", fit.rms_residual);
    print_kv(out, "s_vN", fit.s_vN);
    out << "points = " << fit.points_used.size() << '\n';
    if (fit.degenerate) print_kv(out, "note", "degenerate");

    if (!append_path.empty()) {
      const bool fresh = !std::filesystem::exists(append_path) || std::filesystem::file_size(append_path) == 0;
      auto file = open_out(append_path, std::ios::app);
      if (fresh) file << kFitCsvHeader << '\n';
      std::string ms;
      for (const auto& p : fit.points_used) ms += (ms.empty() ? "" : ";") + std::to_string(p.replicas);
      file << format_double(ref.gamma_b) << ',' << format_double(ref.omega) << ',' << format_double(ref.theta_e)
           << ',' << format_double(ref.theta_b) << ',' << format_double(ref.delta) << ',' << format_double(fit.a)
           << ',' << format_double(fit.b) << ',' << format_double(fit.c) << ','
           << format_double(fit.rms_residual) << ',' << format_double(fit.s_vN) << ',' << ms << '\n';
      if (!file) throw std::runtime_error("write to '" + append_path + "' failed");
    }
    return kExitOk;
  }
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Renyi entropy flow of a driven qubit coupled to a probe reservoir", "replicaflow"};
  app.require_subcommand(1, 1);

  BuildCmd build;
  FlowCmd flow;
  SpectrumCmd spec;
  ReferenceCmd reference;
  SweepCmd sweep;
  FitCmd fit;
  build.attach(*app.add_subcommand("build", "dump the M-replica Liouvillian or one of its parts"));
  flow.attach(*app.add_subcommand("flow", "leading eigenvalue and Renyi flow for one parameter point"));
  spec.attach(*app.add_subcommand("spectrum", "all eigenvalues of the Liouvillian as re,im CSV"));
  reference.attach(*app.add_subcommand("reference", "weak-coupling steady state and flows"));
  sweep.attach(*app.add_subcommand("sweep", "run a parameter grid and write the sweep CSV"));
  fit.attach(*app.add_subcommand("fit", "fit flows across M and extrapolate to von Neumann"));

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("replicaflow");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitValidation;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "build") return build.run(out);
    if (name == "flow") return flow.run(out);
    if (name == "spectrum") return spec.run(out);
    if (name == "reference") return reference.run(out);
    if (name == "sweep") return sweep.run(out, err);
    return fit.run(out, err);
  } catch (const ComputeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace rflow::cli
