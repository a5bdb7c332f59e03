#include "ortho/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ortho/csv_io.hpp"
#include "ortho/errors.hpp"
#include "ortho/spectral.hpp"
#include "ortho/svg.hpp"

namespace ortho {

using nlohmann::json;

const char* to_string(InputKind kind) noexcept {
  switch (kind) {
    case InputKind::points: return "points";
    case InputKind::distance: return "distance";
    case InputKind::affinity: return "affinity";
  }
  return "points";
}

InputKind parse_input_kind(std::string_view text) {
  if (text == "points") return InputKind::points;
  if (text == "distance") return InputKind::distance;
  if (text == "affinity") return InputKind::affinity;
  throw InvalidInput("unknown input kind '" + std::string(text) + "' (expected points, distance or affinity)");
}

void PipelineConfig::validate() const {
  if (input.empty()) throw InvalidInput("pipeline config: input path is required");
  if (neighbors && *neighbors < 1) throw InvalidInput("pipeline config: neighbors must be >= 1");
  if (epsilon && !(*epsilon > 0.0 && std::isfinite(*epsilon)))
    throw InvalidInput("pipeline config: epsilon must be finite and > 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidInput("pipeline config: alpha must be >= 0");
  if (k && *k < 1) throw InvalidInput("pipeline config: k must be >= 1 or auto");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("pipeline config: t must be finite and >= 0");
  if (embed_dims < 1) throw InvalidInput("pipeline config: embed_dims must be >= 1");
  if (kmeans_restarts < 1) throw InvalidInput("pipeline config: kmeans_restarts must be >= 1");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json ortho_to_json(const OrthoConfig& c) {
  return json{{"c2", c.c2},
              {"c2_mode", to_string(c.c2_mode)},
              {"variant", to_string(c.variant)},
              {"truncation", c.truncation ? json(*c.truncation) : json(nullptr)},
              {"tol", c.tol},
              {"max_iter", c.max_iter},
              {"sinkhorn_tol", c.sinkhorn_tol},
              {"sinkhorn_max_iter", c.sinkhorn_max_iter},
              {"exponent_floor", c.exponent_floor},
              {"max_restarts", c.max_restarts},
              {"divergence_window", c.divergence_window}};
}

json config_to_json(const PipelineConfig& cfg) {
  json j;
  j["input"] = cfg.input.generic_string();
  j["input_kind"] = cfg.input_kind ? json(to_string(*cfg.input_kind)) : json(nullptr);
  j["truth"] = cfg.truth ? json(cfg.truth->generic_string()) : json(nullptr);
  j["neighbors"] = cfg.neighbors ? json(*cfg.neighbors) : json(nullptr);
  j["epsilon"] = cfg.epsilon ? json(*cfg.epsilon) : json(nullptr);
  j["alpha"] = cfg.alpha;
  j["symmetrize"] = cfg.symmetrize;
  j["ortho"] = ortho_to_json(cfg.ortho);
  j["k"] = cfg.k ? json(*cfg.k) : json("auto");
  j["t"] = cfg.t;
  j["embed_dims"] = cfg.embed_dims;
  j["kmeans_restarts"] = cfg.kmeans_restarts;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir.generic_string();
  j["snapshot_every"] = cfg.snapshot_every;
  return j;
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(what + ": " + e.what());
  }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& what) {
  if (!j.is_object()) throw InvalidInput(what + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw InvalidInput(what + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_as(const json& j, const std::string& key, const std::string& what) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(what + ": key '" + key + "' has the wrong type");
  }
}

template <class T>
void read_into(const json& j, const char* key, T& out, const std::string& what) {
  if (j.contains(key)) out = get_as<T>(j, key, what);
}

template <class T>
void read_optional(const json& j, const char* key, std::optional<T>& out, const std::string& what) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
  } else {
    out = get_as<T>(j, key, what);
  }
}

void ortho_from_json(const json& j, OrthoConfig& c) {
  const std::string what = "ortho config";
  reject_unknown(j,
                 {"c2", "c2_mode", "variant", "truncation", "tol", "max_iter", "sinkhorn_tol", "sinkhorn_max_iter",
                  "exponent_floor", "max_restarts", "divergence_window"},
                 what);
  read_into(j, "c2", c.c2, what);
  if (j.contains("c2_mode")) {
    const auto mode = get_as<std::string>(j, "c2_mode", what);
    if (mode == "relative") {
      c.c2_mode = C2Mode::relative;
    } else if (mode == "absolute") {
      c.c2_mode = C2Mode::absolute;
    } else {
      throw InvalidInput(what + ": c2_mode must be relative or absolute");
    }
  }
  if (j.contains("variant")) {
    const auto v = get_as<std::string>(j, "variant", what);
    if (v == "row_stochastic") {
      c.variant = Variant::row_stochastic;
    } else if (v == "doubly_stochastic") {
      c.variant = Variant::doubly_stochastic;
    } else {
      throw InvalidInput(what + ": variant must be row_stochastic or doubly_stochastic");
    }
  }
  read_optional(j, "truncation", c.truncation, what);
  read_into(j, "tol", c.tol, what);
  read_into(j, "max_iter", c.max_iter, what);
  read_into(j, "sinkhorn_tol", c.sinkhorn_tol, what);
  read_into(j, "sinkhorn_max_iter", c.sinkhorn_max_iter, what);
  read_into(j, "exponent_floor", c.exponent_floor, what);
  read_into(j, "max_restarts", c.max_restarts, what);
  read_into(j, "divergence_window", c.divergence_window, what);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string to_json(const PipelineConfig& cfg, int indent) { return config_to_json(cfg).dump(indent) + "\n"; }

PipelineConfig pipeline_config_from_json(std::string_view text, PipelineConfig cfg) {
  const std::string what = "pipeline config";
  const json j = parse_json(text, what);
  reject_unknown(j,
                 {"input", "input_kind", "truth", "neighbors", "epsilon", "alpha", "symmetrize", "ortho", "k", "t",
                  "embed_dims", "kmeans_restarts", "seed", "output_dir", "snapshot_every"},
                 what);
  if (j.contains("input")) cfg.input = get_as<std::string>(j, "input", what);
  if (j.contains("input_kind")) {
    if (j["input_kind"].is_null()) {
      cfg.input_kind.reset();
    } else {
      cfg.input_kind = parse_input_kind(get_as<std::string>(j, "input_kind", what));
    }
  }
  if (j.contains("truth")) {
    if (j["truth"].is_null()) {
      cfg.truth.reset();
    } else {
      cfg.truth = get_as<std::string>(j, "truth", what);
    }
  }
  read_optional(j, "neighbors", cfg.neighbors, what);
  read_optional(j, "epsilon", cfg.epsilon, what);
  read_into(j, "alpha", cfg.alpha, what);
  read_into(j, "symmetrize", cfg.symmetrize, what);
  if (j.contains("ortho")) ortho_from_json(j["ortho"], cfg.ortho);
  if (j.contains("k")) {
    const json& k = j["k"];
    if (k.is_string() && k.get<std::string>() == "auto") {
      cfg.k.reset();
    } else if (k.is_number_integer()) {
      cfg.k = k.get<int>();
    } else {
      throw InvalidInput(what + ": k must be an integer or \"auto\"");
    }
  }
  read_into(j, "t", cfg.t, what);
  read_into(j, "embed_dims", cfg.embed_dims, what);
  read_into(j, "kmeans_restarts", cfg.kmeans_restarts, what);
  read_into(j, "seed", cfg.seed, what);
  if (j.contains("output_dir")) cfg.output_dir = get_as<std::string>(j, "output_dir", what);
  read_into(j, "snapshot_every", cfg.snapshot_every, what);
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path, PipelineConfig base) {
  try {
    return pipeline_config_from_json(read_text(path), std::move(base));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

std::string to_json(const SyntheticSpec& spec, int indent) {
  const json j{{"block_size", spec.block_size},
               {"num_blocks", spec.num_blocks},
               {"noise_scale", spec.noise_scale},
               {"seed", spec.seed}};
  return j.dump(indent) + "\n";
}

SyntheticSpec synthetic_spec_from_json(std::string_view text, SyntheticSpec spec) {
  const std::string what = "synthetic spec";
  const json j = parse_json(text, what);
  reject_unknown(j, {"block_size", "num_blocks", "noise_scale", "seed"}, what);
  read_into(j, "block_size", spec.block_size, what);
  read_into(j, "num_blocks", spec.num_blocks, what);
  read_into(j, "noise_scale", spec.noise_scale, what);
  read_into(j, "seed", spec.seed, what);
  return spec;
}

std::string to_json(const MetricReport& report, int indent) {
  const json j{{"ari", report.ari}, {"nmi", report.nmi}, {"purity", report.purity}};
  return j.dump(indent) + "\n";
}

// ---------------------------------------------------------------------------
// Kernel construction

namespace {

struct LoadedInput {
  InputKind kind;
  Matrix values;
};

LoadedInput load_input(const PipelineConfig& cfg) {
  if (cfg.input_kind == InputKind::points) return {InputKind::points, read_points_csv(cfg.input)};
  MatrixFile file = read_matrix_csv(cfg.input);
  InputKind kind;
  if (cfg.input_kind) {
    kind = *cfg.input_kind;
  } else if (file.kind == MatrixKind::distance) {
    kind = InputKind::distance;
  } else if (file.kind == MatrixKind::affinity) {
    kind = InputKind::affinity;
  } else {
    throw InvalidInput(cfg.input.string() + ": input kind not given and no #kind= line in the file");
  }
  return {kind, std::move(file.values)};
}

SquareMatrix affinity_from_input(const PipelineConfig& cfg, LoadedInput in) {
  if (in.kind == InputKind::affinity) {
    Matrix k = floor_affinity(std::move(in.values));
    if (is_symmetric(k)) return SquareMatrix::affinity(std::move(k));
    if (cfg.symmetrize) return SquareMatrix::affinity(0.5 * (k + k.transpose()));
    return SquareMatrix::positive(std::move(k));
  }
  const SquareMatrix d = in.kind == InputKind::points ? pairwise_sq_distances(in.values)
                                                      : SquareMatrix::distance(std::move(in.values));
  if (cfg.epsilon) return affinity_kernel(d, *cfg.epsilon);
  const std::size_t n = static_cast<std::size_t>(d.size());
  const std::size_t neighbors = cfg.neighbors ? *cfg.neighbors : std::min<std::size_t>(200, n > 1 ? n - 1 : 1);
  return affinity_kernel(d, adaptive_bandwidths(d, neighbors), cfg.symmetrize);
}

std::size_t resolved_neighbors(const PipelineConfig& cfg, Index n) {
  if (cfg.neighbors) return *cfg.neighbors;
  return std::min<std::size_t>(200, n > 1 ? static_cast<std::size_t>(n - 1) : 1);
}

std::string matrix_to_csv(const Matrix& m, const std::vector<std::string>& header) {
  std::ostringstream out;
  write_matrix_csv(out, m, std::nullopt, header);
  return out.str();
}

std::vector<std::string> numbered(const std::string& prefix, Index count) {
  std::vector<std::string> out;
  for (Index c = 1; c <= count; ++c) out.push_back(prefix + std::to_string(c));
  return out;
}

Matrix embedding_of(const SpectralDecomposition& s, double t, Index embed_dims) {
  const Index dims = std::min<Index>(embed_dims, s.size() - 1);
  if (dims < 1) return Matrix::Zero(s.size(), 0);
  return diffusion_coordinates(s, t, dims + 1, true).values;
}

std::string spectrum_csv(const Vector& lambda_p0, const Vector& lambda_star) {
  std::ostringstream out;
  out << "l,lambda_p0,lambda_pstar\n";
  for (Index l = 0; l < lambda_p0.size(); ++l) {
    out << (l + 1) << ',' << format_double(lambda_p0[l]) << ',' << format_double(lambda_star[l]) << '\n';
  }
  return out.str();
}

std::string trace_csv(const OrthoTrace& trace) {
  std::ostringstream out;
  out << "iter,residual,functional,spectral_sum,restarts\n";
  for (std::size_t k = 0; k < trace.residuals.size(); ++k) {
    out << (k + 1) << ',' << format_double(trace.residuals[k]) << ',' << format_double(trace.functional_values[k])
        << ',' << format_double(trace.spectral_sums[k]) << ',' << trace.restarts[k] << '\n';
  }
  return out.str();
}

std::string labels_csv(const Labeling& labels) {
  std::ostringstream out;
  out << "label\n";
  for (int id : labels.labels()) out << id << '\n';
  return out.str();
}

struct Manifest {
  json config;
  std::string status = "running";
  std::string message;
  std::optional<Index> n;
  std::optional<std::size_t> neighbors;
  std::optional<double> initial_c2;
  std::optional<double> effective_c2;
  std::optional<int> k;
  std::optional<std::size_t> iterations;
  std::optional<int> restarts;
  std::optional<bool> converged;

  std::string dump() const {
    json j;
    j["status"] = status;
    if (!message.empty()) j["message"] = message;
    j["config"] = config;
    auto put = [&j](const char* key, const auto& v) {
      if (v) j[key] = *v;
    };
    put("n", n);
    put("neighbors", neighbors);
    put("initial_c2", initial_c2);
    put("effective_c2", effective_c2);
    put("k", k);
    put("iterations", iterations);
    put("restarts", restarts);
    put("converged", converged);
    return j.dump(2) + "\n";
  }
};

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConvergenceFailure*>(&e)) return exit_nonconvergence;
  if (dynamic_cast<const InvalidInput*>(&e) || dynamic_cast<const DegenerateNeighborhood*>(&e) ||
      dynamic_cast<const NotConjugateSymmetric*>(&e) || dynamic_cast<const RowUnderflow*>(&e))
    return exit_bad_input;
  return exit_error;
}

}  // namespace

StochasticKernel build_kernel(const PipelineConfig& cfg) {
  SquareMatrix k = affinity_from_input(cfg, load_input(cfg));
  return row_normalize(alpha_normalize(k, cfg.alpha));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// Run

PipelineOutcome run_pipeline(const PipelineConfig& cfg) {
  PipelineOutcome outcome;
  Manifest manifest;
  manifest.config = config_to_json(cfg);
  const auto& dir = cfg.output_dir;
  const auto manifest_path = dir / "run_manifest.json";
  bool manifest_written = false;

  auto finish = [&](int code, std::string status, std::string message) {
    outcome.exit_code = code;
    outcome.message = message;
    manifest.status = std::move(status);
    manifest.message = std::move(message);
    if (manifest_written) {
      try {
        write_file_atomic(manifest_path, manifest.dump());
      } catch (const std::exception& e) {
        outcome.exit_code = exit_error;
        outcome.message += std::string("; ") + e.what();
      }
    }
    return outcome;
  };

  try {
    cfg.validate();
    std::filesystem::create_directories(dir);
    write_file_atomic(manifest_path, manifest.dump());
    manifest_written = true;

    std::optional<Labeling> truth;
    if (cfg.truth) truth = read_labels_csv(*cfg.truth);

    LoadedInput input = load_input(cfg);
    const Index n = input.values.rows();
    manifest.n = n;
    if (input.kind != InputKind::affinity && !cfg.epsilon) manifest.neighbors = resolved_neighbors(cfg, n);
    if (truth && truth->size() != static_cast<std::size_t>(n)) {
      throw InvalidInput(cfg.truth->string() + ": " + std::to_string(truth->size()) + " labels for " +
                         std::to_string(n) + " points");
    }
    const StochasticKernel q = row_normalize(alpha_normalize(affinity_from_input(cfg, std::move(input)), cfg.alpha));
    // Record the neighbour count actually used.
    manifest.config = config_to_json(cfg);
    if (manifest.neighbors) manifest.config["neighbors"] = *manifest.neighbors;

    IterateObserver observer;
    if (cfg.snapshot_every > 0) {
      std::filesystem::create_directories(dir / "snapshots");
      observer = [&](std::size_t iter, const StochasticKernel& p) {
        if (iter % cfg.snapshot_every != 0) return;
        char name[32];
        std::snprintf(name, sizeof name, "iter_%06zu.csv", iter);
        write_file_atomic(dir / "snapshots" / name, matrix_to_csv(p.matrix(), {}));
      };
    }

    std::optional<OrthoResult> result;
    try {
      result = ortho_fixpoint(q, cfg.ortho, std::nullopt, observer);
    } catch (const ConvergenceFailure& e) {
      if (e.trace()) {
        outcome.trace = *e.trace();
        write_file_atomic(dir / "trace.csv", trace_csv(*e.trace()));
        manifest.initial_c2 = e.trace()->initial_c2;
        manifest.effective_c2 = e.trace()->effective_c2;
        manifest.iterations = e.trace()->iterations;
        manifest.restarts = e.trace()->restart_count;
        manifest.converged = false;
      }
      return finish(exit_nonconvergence, "not_converged", e.what());
    }

    const OrthoTrace& trace = result->trace;
    outcome.trace = trace;
    outcome.effective_c2 = trace.effective_c2;
    manifest.initial_c2 = trace.initial_c2;
    manifest.effective_c2 = trace.effective_c2;
    manifest.iterations = trace.iterations;
    manifest.restarts = trace.restart_count;
    manifest.converged = trace.converged;
    write_file_atomic(dir / "trace.csv", trace_csv(trace));
    if (!trace.converged) {
      return finish(exit_nonconvergence, "not_converged",
                    "ortho_fixpoint: no convergence within " + std::to_string(cfg.ortho.max_iter) + " iterations");
    }

    const SpectralDecomposition s0 = decompose(result->p0);
    const SpectralDecomposition s_star = decompose(result->p_star);
    write_file_atomic(dir / "spectrum.csv", spectrum_csv(s0.eigenvalues, s_star.eigenvalues));

    const Matrix embedding = embedding_of(s_star, cfg.t, cfg.embed_dims);
    write_file_atomic(dir / "embedding.csv", matrix_to_csv(embedding, numbered("dc", embedding.cols())));

    const int k = cfg.k ? *cfg.k : static_cast<int>(estimate_num_clusters(s_star).trace_estimate);
    if (k > n) throw InvalidInput("k=" + std::to_string(k) + " exceeds the number of points " + std::to_string(n));
    outcome.k = k;
    manifest.k = k;
    const Matrix cluster_coords = diffusion_coordinates(s_star, 1.0, std::max(k, 2), true).values;
    const KMeansResult km = kmeans(cluster_coords, k, cfg.seed, cfg.kmeans_restarts);
    write_file_atomic(dir / "labels.csv", labels_csv(km.labeling));

    if (truth) {
      outcome.metrics = evaluate(km.labeling, *truth);
      write_file_atomic(dir / "metrics.json", to_json(*outcome.metrics));
    }

    std::ostringstream svg;
    const Matrix plot = embedding.cols() >= 2 ? Matrix(embedding.leftCols(2)) : embedding;
    write_scatter_svg(svg, plot, km.labeling);
    write_file_atomic(dir / "scatter.svg", svg.str());

    return finish(exit_ok, "ok", "");
  } catch (const std::exception& e) {
    return finish(exit_code_for(e), "failed", e.what());
  }
}

void run_gen(const SyntheticSpec& spec, const std::filesystem::path& matrix_out,
             const std::filesystem::path& truth_out, const std::optional<std::filesystem::path>& spec_json) {
  const SyntheticData data = noisy_blocks(spec);
  std::ostringstream m;
  write_matrix_csv(m, data.affinity, MatrixKind::affinity);
  write_file_atomic(matrix_out, m.str());
  write_file_atomic(truth_out, labels_csv(data.truth));
  if (spec_json) write_file_atomic(*spec_json, to_json(spec));
}

void run_spectrum(const PipelineConfig& cfg, const std::filesystem::path& out_dir) {
  if (!(cfg.t >= 0.0) || cfg.embed_dims < 1) throw InvalidInput("spectrum: invalid t or embed_dims");
  const SpectralDecomposition s = decompose(build_kernel(cfg));
  std::filesystem::create_directories(out_dir);
  std::ostringstream spec;
  spec << "l,lambda\n";
  for (Index l = 0; l < s.size(); ++l) spec << (l + 1) << ',' << format_double(s.eigenvalues[l]) << '\n';
  write_file_atomic(out_dir / "spectrum.csv", spec.str());
  const Matrix coords = embedding_of(s, cfg.t, cfg.embed_dims);
  write_file_atomic(out_dir / "coordinates.csv", matrix_to_csv(coords, numbered("dc", coords.cols())));
}

MetricReport run_eval(const std::filesystem::path& pred, const std::filesystem::path& truth,
                      const std::optional<std::filesystem::path>& out_json) {
  const MetricReport report = evaluate(read_labels_csv(pred), read_labels_csv(truth));
  if (out_json) write_file_atomic(*out_json, to_json(report));
  return report;
}

void run_plot(const std::filesystem::path& embedding, const std::optional<std::filesystem::path>& labels,
              const std::filesystem::path& out_svg, const std::string& title) {
  const CsvTable table = read_csv(embedding);
  if (table.values.rows() == 0) throw InvalidInput(embedding.string() + ": no data rows");
  std::optional<Labeling> lab;
  if (labels) lab = read_labels_csv(*labels);
  const Matrix coords = table.values.cols() >= 2 ? Matrix(table.values.leftCols(2)) : table.values;
  ScatterStyle style;
  style.title = title;
  std::ostringstream svg;
  write_scatter_svg(svg, coords, lab, style);
  write_file_atomic(out_svg, svg.str());
}

}  // namespace ortho
