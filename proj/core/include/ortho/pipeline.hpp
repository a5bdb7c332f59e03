#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "ortho/cluster_eval.hpp"
#include "ortho/datagen.hpp"
#include "ortho/kernel.hpp"
#include "ortho/orthogonalize.hpp"
#include "ortho/types.hpp"

namespace ortho {

enum class InputKind { points, distance, affinity };

const char* to_string(InputKind kind) noexcept;
InputKind parse_input_kind(std::string_view text);

/// Exit statuses shared by the library entry points and the CLI.
enum ExitCode : int { exit_ok = 0, exit_error = 1, exit_bad_input = 2, exit_nonconvergence = 3 };

struct PipelineConfig {
  std::filesystem::path input;
  /// Unset: taken from a "#kind=" line in the input file.
  std::optional<InputKind> input_kind;
  std::optional<std::filesystem::path> truth;

  /// Adaptive bandwidth neighbour count; default min(200, n - 1). Ignored
  /// when epsilon is set or the input is an affinity.
  std::optional<std::size_t> neighbors;
  std::optional<double> epsilon;
  double alpha = 0.0;
  bool symmetrize = true;

  OrthoConfig ortho;

  /// Unset means `auto`: the trace estimate of the p* spectrum.
  std::optional<int> k;
  double t = 1.0;
  Index embed_dims = 10;
  int kmeans_restarts = 10;
  std::uint64_t seed = 0;

  std::filesystem::path output_dir = "ortho_out";
  /// Dump every n-th iterate as snapshots/iter_<n>.csv; 0 disables.
  std::size_t snapshot_every = 0;

  void validate() const;
};

/// Round-trippable JSON. Parsing overlays the keys present in `text` onto
/// `base`; unknown keys are rejected.
std::string to_json(const PipelineConfig& cfg, int indent = 2);
PipelineConfig pipeline_config_from_json(std::string_view text, PipelineConfig base = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path, PipelineConfig base = {});

std::string to_json(const SyntheticSpec& spec, int indent = 2);
SyntheticSpec synthetic_spec_from_json(std::string_view text, SyntheticSpec base = {});

std::string to_json(const MetricReport& report, int indent = 2);

/// Input file -> affinity -> alpha normalization -> row normalization.
StochasticKernel build_kernel(const PipelineConfig& cfg);

struct PipelineOutcome {
  int exit_code = exit_ok;
  std::string message;
  double effective_c2 = 0.0;
  int k = 0;
  std::optional<OrthoTrace> trace;
  std::optional<MetricReport> metrics;
};

/// Full run. Writes run_manifest.json first, then embedding.csv,
/// labels.csv, spectrum.csv, trace.csv, scatter.svg and, when truth labels
/// are configured, metrics.json. On nonconvergence only the trace and the
/// manifest are written. Errors are reported through the outcome, never
/// thrown.
PipelineOutcome run_pipeline(const PipelineConfig& cfg);

/// Writes the affinity matrix (with a "#kind=affinity" line) and the truth
/// labels of noisy_blocks(spec). spec_json, when given, receives the
/// generator settings as JSON.
void run_gen(const SyntheticSpec& spec, const std::filesystem::path& matrix_out,
             const std::filesystem::path& truth_out, const std::optional<std::filesystem::path>& spec_json = {});

/// Eigenvalues of the kernel built from cfg (spectrum.csv) and its
/// diffusion coordinates without the trivial column (coordinates.csv).
void run_spectrum(const PipelineConfig& cfg, const std::filesystem::path& out_dir);

MetricReport run_eval(const std::filesystem::path& pred, const std::filesystem::path& truth,
                      const std::optional<std::filesystem::path>& out_json = {});

/// First two columns of an embedding CSV as an SVG scatter.
void run_plot(const std::filesystem::path& embedding, const std::optional<std::filesystem::path>& labels,
              const std::filesystem::path& out_svg, const std::string& title = {});

/// Writes `contents` to a sibling temporary and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace ortho
