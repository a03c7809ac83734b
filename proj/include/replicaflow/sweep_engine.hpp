#ifndef REPLICAFLOW_SWEEP_ENGINE_HPP
#define REPLICAFLOW_SWEEP_ENGINE_HPP

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "replicaflow/model_config.hpp"

namespace rflow {

/// Tokens that may appear in SweepRow::warn_flags.
namespace warn {
inline constexpr std::string_view kComplexLeading = "complex_leading";
inline constexpr std::string_view kPositiveRealPart = "positive_real_part";
inline constexpr std::string_view kPairingDefect = "pairing_defect";
inline constexpr std::string_view kAssemblyFailed = "assembly_failed";
inline constexpr std::string_view kEigensolverFailed = "eigensolver_failed";
inline constexpr std::string_view kWeakFailed = "weak_failed";
inline constexpr std::string_view kWeakSkipped = "weak_skipped";
inline constexpr std::string_view kWeakRenyiUndefined = "weak_renyi_undefined";
}  // namespace warn

const std::vector<std::string_view>& warn_token_registry();

/// Tokens that mark a row as failed (computed columns are NaN).
bool is_failure_token(std::string_view token);

struct SweepRow {
  int replicas = 0;
  ModelParams params;
  double lambda0_re = 0;
  double lambda0_im = 0;
  double flow = 0;       // F_M
  double weak_flow = 0;  // F_weak_M
  double weak_vN = 0;    // F_vN_weak
  std::vector<std::string> warn_flags;
  std::vector<std::complex<double>> spectrum;  // filled only when dumping

  bool failed() const;
};

/// Grid points in document order, the replica list innermost.
std::vector<std::pair<ModelParams, int>> enumerate_grid(const SweepSpec& spec,
                                                        const ModelParams& base = {});

/// Full pipeline for one grid point. Never throws for computational
/// failures; they are recorded in warn_flags.
SweepRow compute_row(const ModelParams& params, int replicas, bool include_weak, bool keep_spectrum);

struct SweepOptions {
  unsigned workers = 1;
  ModelParams base;  // values for parameters without an axis
};

/// Runs every grid point; output order is independent of the worker count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

inline constexpr std::string_view kSweepCsvHeader =
    "M,gamma_b,Omega,theta_e,theta_b,delta,lambda0_re,lambda0_im,F_M,F_weak_M,F_vN_weak,warn_flags";

/// Shortest-form-independent rendering: 17 significant digits, '.' decimal point.
std::string format_double(double v);

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);
/// Writes the CSV to `path`; throws std::runtime_error naming the path on I/O failure.
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// `row,re,im` for every row that carries a spectrum.
void write_spectra_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_spectrum_csv(const std::vector<std::complex<double>>& eigenvalues, std::ostream& out);

/// Parses a sweep CSV produced by write_csv.
std::vector<SweepRow> read_csv(std::istream& in);

}  // namespace rflow

#endif  // REPLICAFLOW_SWEEP_ENGINE_HPP
