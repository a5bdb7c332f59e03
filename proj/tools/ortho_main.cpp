// ortho: diffusion-map orthogonalization from the command line.
//
//   ortho gen      --matrix q.csv --truth truth.csv [--block-size 50 ...]
//   ortho run      --input q.csv [--truth truth.csv] [--k 3] --out run/
//   ortho spectrum --input q.csv --out spec/
//   ortho eval     --pred labels.csv --truth truth.csv [--out metrics.json]
//   ortho plot     --embedding embedding.csv [--labels labels.csv] --out plot.svg
//
// Every subcommand accepts --config <json>; flags given on the command line
// override values from the file. ORTHO_THREADS caps internal parallelism.

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "ortho/errors.hpp"
#include "ortho/parallel.hpp"
#include "ortho/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ortho::InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ortho::ConvergenceFailure*>(&e)) return ortho::exit_nonconvergence;
  if (dynamic_cast<const ortho::InvalidInput*>(&e) || dynamic_cast<const ortho::DegenerateNeighborhood*>(&e) ||
      dynamic_cast<const ortho::NotConjugateSymmetric*>(&e))
    return ortho::exit_bad_input;
  return ortho::exit_error;
}

// Flags shared by `run` and `spectrum`; unset optionals leave the config
// file (or built-in default) alone.
struct KernelFlags {
  std::optional<std::string> config;
  std::optional<std::string> input;
  std::optional<std::string> input_kind;
  std::optional<std::size_t> neighbors;
  std::optional<double> epsilon;
  std::optional<double> alpha;
  bool no_symmetrize = false;
  std::optional<double> t;
  std::optional<long> embed_dims;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--input", input, "Input CSV (points, distance or affinity matrix)");
    app->add_option("--input-kind", input_kind, "points | distance | affinity (default: #kind= line)")
        ->check(CLI::IsMember({"points", "distance", "affinity"}));
    app->add_option("--neighbors", neighbors, "Neighbour count for adaptive bandwidths");
    app->add_option("--epsilon", epsilon, "Fixed kernel scale (replaces adaptive bandwidths)");
    app->add_option("--alpha", alpha, "Density normalization exponent");
    app->add_flag("--no-symmetrize", no_symmetrize, "Keep the asymmetric bandwidth kernel");
    app->add_option("--t", t, "Diffusion time for exported coordinates");
    app->add_option("--embed-dims", embed_dims, "Number of exported diffusion coordinates");
  }

  ortho::PipelineConfig resolve() const {
    ortho::PipelineConfig cfg;
    if (config) cfg = ortho::load_pipeline_config(*config);
    if (input) cfg.input = *input;
    if (input_kind) cfg.input_kind = ortho::parse_input_kind(*input_kind);
    if (neighbors) cfg.neighbors = *neighbors;
    if (epsilon) cfg.epsilon = *epsilon;
    if (alpha) cfg.alpha = *alpha;
    if (no_symmetrize) cfg.symmetrize = false;
    if (t) cfg.t = *t;
    if (embed_dims) cfg.embed_dims = *embed_dims;
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion-map orthogonalization for clustering and embedding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ortho 0.1.0");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a noisy block affinity matrix with truth labels");
  std::optional<std::string> gen_config;
  std::optional<int> block_size, num_blocks;
  std::optional<double> noise_scale;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_matrix = "affinity.csv", gen_truth = "truth.csv";
  std::optional<std::string> gen_spec_out;
  gen->add_option("--config", gen_config, "JSON synthetic spec")->check(CLI::ExistingFile);
  gen->add_option("--block-size", block_size, "Points per block");
  gen->add_option("--num-blocks", num_blocks, "Number of blocks");
  gen->add_option("--noise-scale", noise_scale, "Weight of the global noise matrix");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--matrix", gen_matrix, "Output affinity CSV")->capture_default_str();
  gen->add_option("--truth", gen_truth, "Output truth-label CSV")->capture_default_str();
  gen->add_option("--spec-out", gen_spec_out, "Also write the resolved spec as JSON");

  // run
  auto* run = app.add_subcommand("run", "Full pipeline: kernel, fixed point, clustering, exports");
  KernelFlags run_flags;
  run_flags.attach(run);
  std::optional<std::string> truth, k_text, c2_mode, variant, out_dir;
  std::optional<double> c2, tol;
  std::optional<long> truncation;
  std::optional<std::size_t> max_iter, snapshot_every;
  std::optional<std::uint64_t> seed;
  std::optional<int> kmeans_restarts;
  bool full = false;
  run->add_option("--truth", truth, "Truth labels; enables metrics.json");
  run->add_option("--k", k_text, "Cluster count or 'auto'");
  run->add_option("--c2", c2, "Orthogonalization weight");
  run->add_option("--c2-mode", c2_mode, "relative | absolute")->check(CLI::IsMember({"relative", "absolute"}));
  run->add_option("--variant", variant, "row_stochastic | doubly_stochastic")
      ->check(CLI::IsMember({"row_stochastic", "doubly_stochastic"}));
  run->add_option("--truncation", truncation, "Eigenpairs used for distances (default: exact)");
  run->add_flag("--full", full, "Use exact distances even if the config sets a truncation");
  run->add_option("--tol", tol, "Sup-norm stopping tolerance");
  run->add_option("--max-iter", max_iter, "Iteration cap");
  run->add_option("--seed", seed, "k-means seed");
  run->add_option("--kmeans-restarts", kmeans_restarts, "k-means restarts");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--snapshot-every", snapshot_every, "Dump every n-th iterate (0 = off)");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues and diffusion coordinates of the kernel");
  KernelFlags spec_flags;
  spec_flags.attach(spectrum);
  std::string spectrum_out = ".";
  spectrum->add_option("--out", spectrum_out, "Output directory")->capture_default_str();

  // eval
  auto* eval = app.add_subcommand("eval", "ARI, NMI and purity of two label files");
  std::string eval_pred, eval_truth;
  std::optional<std::string> eval_out;
  eval->add_option("--pred", eval_pred, "Predicted labels CSV")->required();
  eval->add_option("--truth", eval_truth, "Truth labels CSV")->required();
  eval->add_option("--out", eval_out, "Write metrics JSON here (always printed)");

  // plot
  auto* plot = app.add_subcommand("plot", "SVG scatter of the first two embedding columns");
  std::string plot_embedding, plot_out = "scatter.svg", plot_title;
  std::optional<std::string> plot_labels;
  plot->add_option("--embedding", plot_embedding, "Embedding CSV")->required();
  plot->add_option("--labels", plot_labels, "Labels CSV used for colours");
  plot->add_option("--out", plot_out, "Output SVG")->capture_default_str();
  plot->add_option("--title", plot_title, "Plot title");

  CLI11_PARSE(app, argc, argv);

  ortho::configure_threads_from_env();

  try {
    if (*gen) {
      ortho::SyntheticSpec spec;
      if (gen_config) spec = ortho::synthetic_spec_from_json(slurp(*gen_config));
      if (block_size) spec.block_size = *block_size;
      if (num_blocks) spec.num_blocks = *num_blocks;
      if (noise_scale) spec.noise_scale = *noise_scale;
      if (gen_seed) spec.seed = *gen_seed;
      std::optional<fs::path> spec_out;
      if (gen_spec_out) spec_out = *gen_spec_out;
      ortho::run_gen(spec, gen_matrix, gen_truth, spec_out);
      return ortho::exit_ok;
    }

    if (*run) {
      ortho::PipelineConfig cfg = run_flags.resolve();
      if (truth) cfg.truth = *truth;
      if (k_text) {
        if (*k_text == "auto") {
          cfg.k.reset();
        } else {
          try {
            std::size_t used = 0;
            cfg.k = std::stoi(*k_text, &used);
            if (used != k_text->size()) throw std::invalid_argument(*k_text);
          } catch (const std::exception&) {
            throw ortho::InvalidInput("--k: expected an integer or 'auto', got '" + *k_text + "'");
          }
        }
      }
      if (c2) cfg.ortho.c2 = *c2;
      if (c2_mode) cfg.ortho.c2_mode = *c2_mode == "absolute" ? ortho::C2Mode::absolute : ortho::C2Mode::relative;
      if (variant) {
        cfg.ortho.variant =
            *variant == "doubly_stochastic" ? ortho::Variant::doubly_stochastic : ortho::Variant::row_stochastic;
      }
      if (truncation) cfg.ortho.truncation = *truncation;
      if (full) cfg.ortho.truncation.reset();
      if (tol) cfg.ortho.tol = *tol;
      if (max_iter) cfg.ortho.max_iter = *max_iter;
      if (seed) cfg.seed = *seed;
      if (kmeans_restarts) cfg.kmeans_restarts = *kmeans_restarts;
      if (out_dir) cfg.output_dir = *out_dir;
      if (snapshot_every) cfg.snapshot_every = *snapshot_every;

      const ortho::PipelineOutcome outcome = ortho::run_pipeline(cfg);
      if (outcome.exit_code != ortho::exit_ok) {
        std::cerr << "ortho run: " << outcome.message << '\n';
        return outcome.exit_code;
      }
      std::cout << "k=" << outcome.k << " iterations=" << outcome.trace->iterations
                << " effective_c2=" << outcome.effective_c2;
      if (outcome.metrics) {
        std::cout << " ari=" << outcome.metrics->ari << " nmi=" << outcome.metrics->nmi
                  << " purity=" << outcome.metrics->purity;
      }
      std::cout << '\n';
      return ortho::exit_ok;
    }

    if (*spectrum) {
      ortho::run_spectrum(spec_flags.resolve(), spectrum_out);
      return ortho::exit_ok;
    }

    if (*eval) {
      std::optional<fs::path> out;
      if (eval_out) out = *eval_out;
      std::cout << ortho::to_json(ortho::run_eval(eval_pred, eval_truth, out));
      return ortho::exit_ok;
    }

    if (*plot) {
      std::optional<fs::path> labels;
      if (plot_labels) labels = *plot_labels;
      ortho::run_plot(plot_embedding, labels, plot_out, plot_title);
      return ortho::exit_ok;
    }
  } catch (const std::exception& e) {
    std::cerr << "ortho: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return ortho::exit_error;
}
