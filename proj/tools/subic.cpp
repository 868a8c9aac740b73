// subic: fit / predict / simulate / evaluate / heatmap for supervised
// convex biclustering on CSV datasets.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "subic/biclusters.hpp"
#include "subic/csv.hpp"
#include "subic/data_model.hpp"
#include "subic/errors.hpp"
#include "subic/heatmap.hpp"
#include "subic/metrics.hpp"
#include "subic/parallel.hpp"
#include "subic/predict.hpp"
#include "subic/simulate.hpp"
#include "subic/solver.hpp"
#include "subic/weights.hpp"

using nlohmann::ordered_json;

namespace {

struct FitArgs {
  std::string data_path;
  std::string target = "y";
  std::string out_dir = ".";
  std::string scenario = "subic";
  bool zscore = false;
  bool dump_weights = false;
  subic::FitConfig cfg;
};

void apply_scenario(const std::string& name, subic::FitConfig& cfg) {
  if (name == "subic") {
    cfg.supervised = true;
    cfg.use_l2 = true;
  } else if (name == "supervised-l1") {
    cfg.supervised = true;
    cfg.use_l2 = false;
  } else if (name == "unsupervised-elastic") {
    cfg.supervised = false;
    cfg.use_l2 = true;
  } else if (name == "cobra") {
    cfg.supervised = false;
    cfg.use_l2 = false;
  } else {
    throw subic::ConfigError("unknown scenario '" + name + "'");
  }
}

void add_fit_flags(CLI::App* cmd, FitArgs& a) {
  cmd->add_option("--lambda1", a.cfg.lambda1, "quadratic fusion strength");
  cmd->add_option("--lambda2", a.cfg.lambda2, "l1 fusion strength");
  cmd->add_option("--phi", a.cfg.phi, "weight kernel bandwidth in [0,1]");
  cmd->add_option("--knn", a.cfg.knn, "neighbors kept per item in the fusion graph");
  cmd->add_option("--mu1", a.cfg.mu1, "column penalty parameter (0 = auto)");
  cmd->add_option("--mu2", a.cfg.mu2, "row penalty parameter (0 = auto)");
  cmd->add_option("--delta1", a.cfg.delta1, "column dual step (0 = same as mu1)");
  cmd->add_option("--delta2", a.cfg.delta2, "row dual step (0 = same as mu2)");
  cmd->add_option("--tol", a.cfg.tol, "residual tolerance");
  cmd->add_option("--max-iter", a.cfg.max_iter, "iteration cap");
  cmd->add_option("--group-tol", a.cfg.group_tol,
                  "centroid merge tolerance for extraction (0 = auto)");
  cmd->add_option("--seed", a.cfg.seed, "recorded in the model for provenance");
  cmd->add_option("--scenario", a.scenario,
                  "subic | supervised-l1 | unsupervised-elastic | cobra");
  cmd->add_flag("--zscore", a.zscore, "scale features to unit variance after centering");
  cmd->add_option("--target", a.target, "target column name");
  cmd->add_option("--out-dir", a.out_dir, "directory for artifacts");
  cmd->add_flag("--dump-weights", a.dump_weights, "also write the fusion weights CSV");
  cmd->set_config("--config", "", "key=value file; flags take precedence");
}

void write_trace_csv(const subic::FitResult& fr, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < fr.objective_trace.size(); ++i) {
    rows.push_back({std::to_string(i + 1), subic::format_double(fr.objective_trace[i]),
                    subic::format_double(fr.residual_trace[i].first),
                    subic::format_double(fr.residual_trace[i].second)});
  }
  subic::write_csv(path, {"iter", "objective", "primal", "dual"}, rows);
}

void write_assignments(const subic::BiclusterModel& m, const std::string& dir) {
  std::vector<std::vector<std::string>> rows;
  for (size_t i = 0; i < m.row_ids.size(); ++i)
    rows.push_back({m.row_ids[i], std::to_string(m.row_partition.labels[i])});
  subic::write_csv(dir + "/row_assignments.csv", {"id", "cluster"}, rows);

  rows.clear();
  for (size_t j = 0; j < m.column_names.size(); ++j)
    rows.push_back({m.column_names[j], std::to_string(m.col_partition.labels[j])});
  subic::write_csv(dir + "/col_assignments.csv", {"column", "cluster"}, rows);
}

int cmd_fit(const FitArgs& a) {
  apply_scenario(a.scenario, const_cast<subic::FitConfig&>(a.cfg));
  subic::Dataset d = subic::load_dataset(a.data_path, a.target);
  subic::DataMatrix Xc = a.zscore ? subic::zscore_columns(d.X) : subic::center_columns(d.X);

  subic::WeightSet ws = subic::build_weights(Xc, d.y, a.cfg);
  subic::FitResult fr = subic::fit_with_weights(Xc.values, ws, a.cfg);
  subic::BiclusterModel m = subic::extract(fr, Xc, d.y, a.cfg);
  m.scenario = a.scenario;
  m.target_name = a.target;

  std::filesystem::create_directories(a.out_dir);
  subic::save_model(m, a.out_dir + "/model.json");
  write_assignments(m, a.out_dir);
  write_trace_csv(fr, a.out_dir + "/trace.csv");
  if (a.dump_weights) subic::dump_weights_csv(ws, a.out_dir + "/weights.csv");

  std::printf("fit: %d x %d, scenario %s, %d iterations, %s\n", Xc.n(), Xc.p(),
              a.scenario.c_str(), fr.iterations, fr.converged ? "converged" : "NOT converged");
  std::printf("fit: %d row clusters x %d column clusters, objective %.6g\n", m.k_rows(),
              m.k_cols(), fr.state.objective);
  std::printf("fit: mu1 %.6g mu2 %.6g group_tol %.6g\n", fr.params.mu1, fr.params.mu2,
              m.group_tol_resolved);
  if (!fr.converged)
    std::fprintf(stderr,
                 "warning: residuals %.3g/%.3g above tol %.3g after %d iterations; "
                 "results may be loose\n",
                 fr.state.primal_residual, fr.state.dual_residual, a.cfg.tol, fr.iterations);
  if (d.truth_rows) {
    double ri = subic::rand_index(m.row_partition, *d.truth_rows);
    double ari = subic::adjusted_rand_index(m.row_partition, *d.truth_rows);
    std::printf("fit: row RI vs truth %.4f, ARI %.4f\n", ri, ari);
  }
  std::printf("fit: artifacts in %s (model.json, row/col_assignments.csv, trace.csv)\n",
              a.out_dir.c_str());
  return 0;
}

// features must line up with the model, by name when the file has a header
// that matches, else by position
subic::DataMatrix load_features_for(const subic::BiclusterModel& m, const std::string& path,
                                    subic::TargetVector* y_out, bool* has_target) {
  subic::CsvTable t = subic::read_csv(path);
  bool target_present = false;
  if (!m.target_name.empty())
    for (const auto& h : t.header) target_present |= (h == m.target_name);
  auto [X, y] = subic::load_csv(path, target_present ? m.target_name : "");
  if (X.p() != m.col_partition.m())
    throw subic::DataError("feature count " + std::to_string(X.p()) + " does not match model (" +
                           std::to_string(m.col_partition.m()) + ")");
  if (X.column_names != m.column_names)
    throw subic::DataError("feature names do not match the model's columns");
  if (y_out) *y_out = y;
  if (has_target) *has_target = target_present;
  return X;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
  subic::BiclusterModel m = subic::load_model(model_path);
  subic::TargetVector y;
  bool has_target = false;
  subic::DataMatrix X = load_features_for(m, data_path, &y, &has_target);

  auto preds = subic::predict_batch(X.values, m);
  std::vector<std::string> header = {"id", "y_hat"};
  for (int r = 0; r < m.k_rows(); ++r) header.push_back("q" + std::to_string(r));
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < X.n(); ++i) {
    std::vector<std::string> row = {X.row_ids[i], subic::format_double(preds[i].y_hat)};
    for (int r = 0; r < m.k_rows(); ++r) row.push_back(subic::format_double(preds[i].q(r)));
    rows.push_back(std::move(row));
  }
  subic::write_csv(out_path, header, rows);
  std::printf("predict: %d rows -> %s\n", X.n(), out_path.c_str());
  if (has_target) {
    double mae = 0.0;
    for (int i = 0; i < X.n(); ++i) mae += std::fabs(preds[i].y_hat - y.values(i));
    std::printf("predict: MAE vs '%s' %.6g\n", m.target_name.c_str(), mae / X.n());
  }
  return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& truth_path,
                 const std::string& out_path) {
  subic::BiclusterModel m = subic::load_model(model_path);
  std::ifstream in(truth_path);
  if (!in) throw subic::DataError("cannot open " + truth_path);
  ordered_json tj;
  try {
    in >> tj;
  } catch (const nlohmann::json::exception& e) {
    throw subic::DataError("truth json parse error: " + std::string(e.what()));
  }
  if (!tj.contains("row_labels") || !tj.contains("col_labels"))
    throw subic::DataError("truth json must contain row_labels and col_labels");
  auto truth_rows = subic::Partition::from_labels(tj["row_labels"].get<std::vector<int>>());
  auto truth_cols = subic::Partition::from_labels(tj["col_labels"].get<std::vector<int>>());
  if (truth_rows.m() != m.row_partition.m() || truth_cols.m() != m.col_partition.m())
    throw subic::DataError("truth dimensions do not match the model");

  auto cell_model = subic::cell_partition(m.row_partition, m.col_partition);
  auto cell_truth = subic::cell_partition(truth_rows, truth_cols);
  ordered_json rep;
  rep["rows"] = {{"ri", subic::rand_index(m.row_partition, truth_rows)},
                 {"ari", subic::adjusted_rand_index(m.row_partition, truth_rows)},
                 {"k_model", m.k_rows()},
                 {"k_truth", truth_rows.k}};
  rep["cols"] = {{"ri", subic::rand_index(m.col_partition, truth_cols)},
                 {"ari", subic::adjusted_rand_index(m.col_partition, truth_cols)},
                 {"k_model", m.k_cols()},
                 {"k_truth", truth_cols.k}};
  rep["cells"] = {{"ri", subic::rand_index(cell_model, cell_truth)},
                  {"ari", subic::adjusted_rand_index(cell_model, cell_truth)}};
  std::cout << rep.dump(2) << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw subic::DataError("cannot write " + out_path);
    out << rep.dump(2) << "\n";
  }
  return 0;
}

int cmd_heatmap(const std::string& data_path, const std::string& model_path,
                const std::string& out_path) {
  subic::BiclusterModel m = subic::load_model(model_path);
  subic::DataMatrix X = load_features_for(m, data_path, nullptr, nullptr);
  std::string svg = subic::render_heatmap_svg(X, m);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw subic::DataError("cannot write " + out_path);
  out << svg;
  std::printf("heatmap: %d x %d -> %s\n", X.n(), X.p(), out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supervised convex biclustering"};
  app.require_subcommand(1);

  int threads = 0;
  bool serial = false;
  app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");
  app.add_flag("--serial", serial, "run the serial reference kernels");
  app.fallthrough();  // lets --threads/--serial appear after the subcommand

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "fit a bicluster model to a CSV dataset");
  fit->add_option("data", fa.data_path, "input CSV")->required();
  add_fit_flags(fit, fa);

  std::string model_path, data_path, out_path, truth_path;
  auto* predict = app.add_subcommand("predict", "predict targets for new rows");
  predict->add_option("model", model_path, "model.json from fit")->required();
  predict->add_option("data", data_path, "CSV with the model's feature columns")->required();
  predict->add_option("--out", out_path, "output CSV")->default_val("predictions.csv");

  subic::SimDesign sd;
  std::string sim_out_dir = ".", preset;
  bool no_shuffle = false;
  auto* sim = app.add_subcommand("simulate", "generate a checkerboard dataset");
  sim->add_option("--n", sd.n, "rows");
  sim->add_option("--p", sd.p, "feature columns");
  sim->add_option("--row-clusters", sd.row_clusters, "true row clusters");
  sim->add_option("--col-clusters", sd.col_clusters, "true column clusters");
  sim->add_option("--sigma", sd.sigma, "noise std dev of X");
  sim->add_option("--sigma-y", sd.sigma_y, "noise std dev of the target");
  sim->add_option("--block-scale", sd.block_mean_scale, "block mean magnitude");
  sim->add_option("--y-scale", sd.y_mean_scale, "target mean magnitude");
  sim->add_option("--seed", sd.seed, "noise and shuffle seed");
  sim->add_flag("--no-shuffle", no_shuffle, "keep rows/columns in block order");
  sim->add_option("--row-sizes", sd.row_sizes, "explicit row block sizes")->delimiter(',');
  sim->add_option("--col-sizes", sd.col_sizes, "explicit column block sizes")->delimiter(',');
  sim->add_option("--preset", preset, "named design: fig2 (uneven 20x20, 4x4 blocks)");
  sim->add_option("--out-dir", sim_out_dir, "directory for dataset.csv + truth.json");

  auto* eval = app.add_subcommand("evaluate", "score a model against truth labels");
  std::string eval_model, eval_truth, eval_out;
  eval->add_option("model", eval_model, "model.json from fit")->required();
  eval->add_option("truth", eval_truth, "truth.json from simulate")->required();
  eval->add_option("--out", eval_out, "also write the report here");

  auto* heat = app.add_subcommand("heatmap", "render the clustered data as SVG");
  std::string heat_data, heat_model, heat_out;
  heat->add_option("data", heat_data, "input CSV")->required();
  heat->add_option("model", heat_model, "model.json from fit")->required();
  heat->add_option("--out", heat_out, "output SVG")->default_val("heatmap.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Eigen::setNbThreads(1);  // kernels own the parallelism; keeps runs bit-stable
  subic::par::set_mode(serial ? subic::par::Mode::serial : subic::par::Mode::openmp);
  if (threads > 0) subic::par::set_threads(threads);

  try {
    if (app.got_subcommand(fit)) return cmd_fit(fa);
    if (app.got_subcommand(predict)) return cmd_predict(model_path, data_path, out_path);
    if (app.got_subcommand(sim)) {
      if (!preset.empty()) {
        if (preset != "fig2") throw subic::ConfigError("unknown preset '" + preset + "'");
        long seed = sd.seed;
        subic::SimDesign base = subic::fig2_preset(seed);
        // explicit flags still win over the preset
        if (!sim->count("--n")) sd.n = base.n;
        if (!sim->count("--p")) sd.p = base.p;
        if (!sim->count("--row-clusters")) sd.row_clusters = base.row_clusters;
        if (!sim->count("--col-clusters")) sd.col_clusters = base.col_clusters;
        if (!sim->count("--sigma")) sd.sigma = base.sigma;
        if (!sim->count("--sigma-y")) sd.sigma_y = base.sigma_y;
        if (!sim->count("--row-sizes")) sd.row_sizes = base.row_sizes;
        if (!sim->count("--col-sizes")) sd.col_sizes = base.col_sizes;
      }
      sd.shuffle = !no_shuffle;
      subic::SimData s = subic::generate(sd);
      std::filesystem::create_directories(sim_out_dir);
      subic::write_dataset_csv(s, sim_out_dir + "/dataset.csv");
      subic::write_truth_json(s, sd, sim_out_dir + "/truth.json");
      std::printf("simulate: %d x %d (%d x %d blocks, sigma %.3g) -> %s/dataset.csv\n", sd.n,
                  sd.p, sd.row_clusters, sd.col_clusters, sd.sigma, sim_out_dir.c_str());
      return 0;
    }
    if (app.got_subcommand(eval)) return cmd_evaluate(eval_model, eval_truth, eval_out);
    if (app.got_subcommand(heat)) return cmd_heatmap(heat_data, heat_model, heat_out);
  } catch (const subic::ConfigError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const subic::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const subic::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
