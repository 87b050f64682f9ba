// rbvnet: train, quantize, analyze and serve blood-value diagnosis models.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rbv/analysis.hpp"
#include "rbv/csv.hpp"
#include "rbv/folds.hpp"
#include "rbv/hgb.hpp"
#include "rbv/lognnet.hpp"
#include "rbv/model_io.hpp"
#include "rbv/net/cloud_server.hpp"
#include "rbv/net/edge_router.hpp"
#include "rbv/quantize.hpp"
#include "rbv/rambudget.hpp"
#include "rbv/synthetic.hpp"
#include "rbv/wire.hpp"

namespace {

using namespace rbv;

Topology parse_topology(const std::string& spec) {
  // network notation in,reservoir,hidden,out; e.g. 51,50,20,2
  int v[4];
  if (std::sscanf(spec.c_str(), "%d,%d,%d,%d", &v[0], &v[1], &v[2], &v[3]) != 4)
    throw std::runtime_error("bad topology '" + spec + "', expected in,reservoir,hidden,out");
  Topology t{v[0], v[1], v[2], v[3] - 1};
  validate(t);
  return t;
}

std::vector<std::string> schema_for(const std::string& path) {
  // header drives the schema; order is the file's own
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string header;
  std::getline(in, header);
  std::vector<std::string> names;
  std::string cell;
  std::istringstream is(header);
  while (std::getline(is, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    if (cell != "label") names.push_back(cell);
  }
  return names;
}

Dataset load_any_csv(const std::string& path) { return load_csv(path, schema_for(path)); }

InformativePair parse_pair(const std::string& spec) {
  // a:b:shape:offset, e.g. 0:1:cross:3.0
  std::istringstream is(spec);
  std::string a, b, shape, offset;
  if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, shape, ':'))
    throw std::runtime_error("bad pair '" + spec + "', expected a:b:shape[:offset]");
  InformativePair p;
  p.feature_a = std::stoi(a);
  p.feature_b = std::stoi(b);
  p.shape = shape_from_string(shape);
  if (std::getline(is, offset, ':')) p.class1_offset = std::stod(offset);
  return p;
}

net::RoutePolicy parse_endpoint(std::string addr, net::RoutePolicy policy) {
  if (const char* env = std::getenv("SENSOR_CLOUD_ADDR"); env && addr.empty()) addr = env;
  if (!addr.empty()) {
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos)
      throw std::runtime_error("bad endpoint '" + addr + "', expected host:port");
    policy.host = addr.substr(0, colon);
    policy.port = std::stoi(addr.substr(colon + 1));
  }
  return policy;
}

int cmd_gen_data(const std::string& out, std::uint64_t seed, int features,
                 std::size_t n_per_class, double noise,
                 const std::vector<std::string>& pair_specs) {
  SyntheticSpec spec;
  spec.n_features = features;
  spec.noise = noise;
  for (const auto& ps : pair_specs) spec.pairs.push_back(parse_pair(ps));
  save_csv(out, generate_synthetic(spec, n_per_class, seed));
  return 0;
}

Trainer hgb_trainer(HgbParams params) {
  return [params](const Dataset& train, std::uint64_t seed) -> Predictor {
    HgbParams p = params;
    p.seed = seed;
    auto model = train_hgb(train, p);
    return [model](const RbvRecord& r) { return predict_hgb(model, r).predicted_class; };
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blood-value diagnosis toolkit: reservoir and boosted-tree models for "
               "edge and cloud inference"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string data_path, model_path, out_path, in_path;

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset");
  int gen_features = 2;
  std::size_t gen_n = 500;
  double gen_noise = 0.0;
  std::vector<std::string> gen_pairs;
  gen->add_option("--out", out_path, "Output CSV")->required();
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--features", gen_features, "Total feature count");
  gen->add_option("--n-per-class", gen_n, "Records per class");
  gen->add_option("--noise", gen_noise, "Gaussian noise sigma");
  gen->add_option("--pair", gen_pairs,
                  "Informative pair a:b:shape[:offset]; shapes: line, cross, cloud, xor");

  // train-lognnet
  auto* tl = app.add_subcommand("train-lognnet", "Train a float reservoir model");
  std::string tl_topology;
  int tl_epochs = 30, tl_batch = 32;
  double tl_lr = 0.1;
  tl->add_option("--data", data_path, "Training CSV")->required();
  tl->add_option("--out", out_path, "Output model file (LOGNNETF1)")->required();
  tl->add_option("--seed", seed, "RNG seed");
  tl->add_option("--topology", tl_topology, "in,reservoir,hidden,out (default <nf>,50,20,2)");
  tl->add_option("--epochs", tl_epochs, "Training epochs");
  tl->add_option("--lr", tl_lr, "Learning rate");
  tl->add_option("--batch", tl_batch, "Mini-batch size");

  // train-hgb
  auto* th = app.add_subcommand("train-hgb", "Train the boosted-tree model");
  HgbParams hgb_params;
  bool th_grid = false;
  th->add_option("--data", data_path, "Training CSV")->required();
  th->add_option("--out", out_path, "Output model file (HGB1)")->required();
  th->add_option("--seed", seed, "RNG seed");
  th->add_option("--trees", hgb_params.trees, "Boosting rounds");
  th->add_option("--lr", hgb_params.learning_rate, "Learning rate");
  th->add_option("--max-leaves", hgb_params.max_leaves, "Leaves per tree");
  th->add_option("--min-samples-leaf", hgb_params.min_samples_leaf, "Minimum leaf size");
  th->add_option("--l2", hgb_params.l2, "L2 regularization");
  th->add_option("--max-bins", hgb_params.max_bins, "Histogram bins");
  th->add_flag("--grid", th_grid, "Pick lr x trees x leaves by 5-fold CV");

  // quantize
  auto* qz = app.add_subcommand("quantize", "Quantize a float model to LOGNNET1");
  std::int32_t qz_scale = 1000;
  qz->add_option("--in", in_path, "Float model (LOGNNETF1)")->required();
  qz->add_option("--out", out_path, "Output model file (LOGNNET1)")->required();
  qz->add_option("--scale", qz_scale, "Scale factor");

  // export-model / import-model
  auto* ex = app.add_subcommand("export-model", "Rewrite a model file canonically");
  ex->add_option("--in", in_path, "Model file")->required();
  ex->add_option("--out", out_path, "Output file")->required();
  auto* im = app.add_subcommand("import-model", "Validate a model file and print a summary");
  im->add_option("--in", in_path, "Model file")->required();

  // predict
  auto* pr = app.add_subcommand("predict", "Batch predictions from a model file");
  pr->add_option("--model", model_path, "LOGNNET1 or HGB1 model")->required();
  pr->add_option("--data", data_path, "Input CSV")->required();
  pr->add_option("--out", out_path, "Predictions CSV")->required();

  // analyze
  auto* an = app.add_subcommand("analyze", "Correlation and threshold reports");
  std::string an_dir = ".";
  an->add_option("--data", data_path, "Input CSV")->required();
  an->add_option("--out-dir", an_dir, "Report directory");

  // search
  auto* se = app.add_subcommand("search", "Feature subset sweep");
  int se_size = 2, se_workers = 1, se_folds = 5;
  std::size_t se_topk = 20;
  bool se_full = false;
  HgbParams se_params;
  se->add_option("--data", data_path, "Input CSV")->required();
  se->add_option("--out", out_path, "Ranking CSV")->required();
  se->add_option("--size", se_size, "Tuple size (1, 2 or 3)");
  se->add_option("--top-k", se_topk, "Results to keep");
  se->add_option("--workers", se_workers, "Worker threads");
  se->add_option("--folds", se_folds, "Cross-validation folds");
  se->add_option("--seed", seed, "Fold seed");
  se->add_option("--trees", se_params.trees, "Boosting rounds per evaluation");
  se->add_option("--min-samples-leaf", se_params.min_samples_leaf, "Minimum leaf size");
  se->add_flag("--full-sweep", se_full, "Allow the size-3 sweep on more than 15 features");

  // serve
  auto* sv = app.add_subcommand("serve", "Run the cloud prediction service");
  std::string sv_bind = "127.0.0.1";
  int sv_port = 9750;
  sv->add_option("--model", model_path, "HGB1 model")->required();
  sv->add_option("--bind", sv_bind, "Bind address");
  sv->add_option("--port", sv_port, "Port (0 = ephemeral)");

  // edge
  auto* ed = app.add_subcommand("edge", "Edge router: frames on stdin, diagnoses on stdout");
  std::string ed_cloud;
  net::RoutePolicy ed_policy;
  ed->add_option("--model", model_path, "LOGNNET1 model")->required();
  ed->add_option("--cloud", ed_cloud, "Cloud endpoint host:port (or SENSOR_CLOUD_ADDR)");
  ed->add_option("--connect-timeout", ed_policy.connect_timeout_ms, "Connect timeout, ms");
  ed->add_option("--response-timeout", ed_policy.response_timeout_ms, "Response timeout, ms");
  ed->add_option("--retries", ed_policy.retries, "Remote retries");

  // rambudget
  auto* rb = app.add_subcommand("rambudget", "Print the RAM accounting table");
  std::string rb_topology = "51,50,20,2";
  rb->add_option("--topology", rb_topology, "in,reservoir,hidden,out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n' << app.help() << '\n';
    return 2;
  }

  try {
    if (gen->parsed())
      return cmd_gen_data(out_path, seed, gen_features, gen_n, gen_noise, gen_pairs);

    if (tl->parsed()) {
      const auto d = load_any_csv(data_path);
      Topology t{static_cast<int>(d.feature_count()), 50, 20, 1};
      if (!tl_topology.empty()) t = parse_topology(tl_topology);
      LogNNetTrainParams h{tl_epochs, tl_lr, tl_batch, seed};
      export_lognnet_float(train_lognnet(d, t, ChaosParams{}, h), out_path);
      return 0;
    }

    if (th->parsed()) {
      const auto d = load_any_csv(data_path);
      hgb_params.seed = seed;
      if (th_grid) {
        const auto folds = stratified_folds(d, 5, seed);
        double best = -1.0;
        HgbParams best_params = hgb_params;
        for (double lr : {0.05, 0.1, 0.3})
          for (int trees : {50, 100, 200})
            for (int leaves : {15, 31, 63}) {
              HgbParams p = hgb_params;
              p.learning_rate = lr;
              p.trees = trees;
              p.max_leaves = leaves;
              const auto cv = cross_validate(d, folds, hgb_trainer(p), seed);
              if (cv.mean_accuracy > best) {
                best = cv.mean_accuracy;
                best_params = p;
              }
            }
        std::cerr << "grid best 5-fold accuracy " << best << '\n';
        hgb_params = best_params;
      }
      export_hgb(train_hgb(d, hgb_params), out_path);
      return 0;
    }

    if (qz->parsed()) {
      export_lognnet(quantize(import_lognnet_float(in_path), qz_scale), out_path);
      return 0;
    }

    if (ex->parsed()) {
      const auto magic = sniff_model_magic(in_path);
      if (magic == "LOGNNET1")
        export_lognnet(import_lognnet(in_path), out_path);
      else if (magic == "LOGNNETF1")
        export_lognnet_float(import_lognnet_float(in_path), out_path);
      else if (magic == "HGB1")
        export_hgb(import_hgb(in_path), out_path);
      else
        throw std::runtime_error("unknown model magic '" + magic + "'");
      return 0;
    }

    if (im->parsed()) {
      const auto magic = sniff_model_magic(in_path);
      if (magic == "LOGNNET1") {
        const auto q = import_lognnet(in_path);
        std::cout << "LOGNNET1 model: topology " << q.topology.s << ':' << q.topology.p << ':'
                  << q.topology.m << ':' << q.topology.n + 1 << ", scale " << q.scale_factor
                  << ", " << q.q_w1.size() + q.q_w2.size() << " weights\n";
      } else if (magic == "LOGNNETF1") {
        const auto m = import_lognnet_float(in_path);
        std::cout << "LOGNNETF1 model: topology " << m.topology.s << ':' << m.topology.p
                  << ':' << m.topology.m << ':' << m.topology.n + 1 << '\n';
      } else if (magic == "HGB1") {
        const auto m = import_hgb(in_path);
        std::cout << "HGB1 model: " << m.n_features << " features, " << m.trees.size()
                  << " trees\n";
      } else {
        throw std::runtime_error("unknown model magic '" + magic + "'");
      }
      return 0;
    }

    if (pr->parsed()) {
      const auto d = load_any_csv(data_path);
      const auto magic = sniff_model_magic(model_path);
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write file: " + out_path);
      out << "row,class,confidence,model\n";
      char buf[64];
      if (magic == "LOGNNET1") {
        const auto q = import_lognnet(model_path);
        for (std::size_t i = 0; i < d.records.size(); ++i) {
          const auto o = emulate_edge_inference(q, d.records[i].values);
          std::snprintf(buf, sizeof(buf), "%.6f",
                        o.activations[static_cast<std::size_t>(o.predicted_class)]);
          out << i << ',' << o.predicted_class << ',' << buf << ",edge-lognnet\n";
        }
      } else if (magic == "HGB1") {
        const auto m = import_hgb(model_path);
        for (std::size_t i = 0; i < d.records.size(); ++i) {
          const auto p = predict_hgb(m, d.records[i]);
          std::snprintf(buf, sizeof(buf), "%.6f",
                        p.predicted_class == 1 ? p.probability : 1.0 - p.probability);
          out << i << ',' << p.predicted_class << ',' << buf << ",cloud-hgb\n";
        }
      } else {
        throw std::runtime_error("unknown model magic '" + magic + "'");
      }
      return 0;
    }

    if (an->parsed()) {
      const auto d = load_any_csv(data_path);
      auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(an_dir + "/" + name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report: " + an_dir + "/" + name);
        out << content;
      };
      write("correlation_all.csv", correlation_csv(pearson_matrix(d)));
      if (d.all_labeled() && !d.records.empty()) {
        write("correlation_positive.csv",
              correlation_csv(pearson_matrix(d, CorrelationScope::PositiveClass)));
        write("correlation_negative.csv",
              correlation_csv(pearson_matrix(d, CorrelationScope::NegativeClass)));
        std::ostringstream th_csv;
        th_csv << "feature,threshold,direction,accuracy\n";
        char buf[64];
        for (std::size_t f = 0; f < d.feature_count(); ++f) {
          try {
            const auto rule = threshold_classify(d, f);
            std::snprintf(buf, sizeof(buf), "%.17g,%s,%.6f", rule.threshold,
                          rule.predict_one_above ? "above" : "below", rule.accuracy);
            th_csv << d.feature_names[f] << ',' << buf << '\n';
          } catch (const std::exception&) {
            th_csv << d.feature_names[f] << ",,," << "constant\n";
          }
        }
        write("thresholds.csv", th_csv.str());
      }
      return 0;
    }

    if (se->parsed()) {
      const auto d = load_any_csv(data_path);
      if (se_size == 3 && d.feature_count() > 15 && !se_full)
        throw std::runtime_error(
            "size-3 sweep over more than 15 features needs --full-sweep");
      const auto folds = stratified_folds(d, se_folds, seed);
      const auto results =
          subset_search(d, se_size, hgb_trainer(se_params), folds, se_topk, se_workers);
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write file: " + out_path);
      out << subset_results_csv(results, d.feature_names);
      return 0;
    }

    if (sv->parsed()) {
      net::CloudServer server(import_hgb(model_path), sv_bind, sv_port);
      server.start();
      std::cout << "listening on " << sv_bind << ':' << server.port() << std::endl;
      // runs until stdin closes
      std::string line;
      while (std::getline(std::cin, line)) {
      }
      server.stop();
      return 0;
    }

    if (ed->parsed()) {
      const auto q = import_lognnet(model_path);
      const auto policy = parse_endpoint(ed_cloud, ed_policy);
      FrameParser parser;
      std::string chunk(4096, '\0');
      while (std::cin.read(chunk.data(), static_cast<std::streamsize>(chunk.size())) ||
             std::cin.gcount() > 0) {
        const auto frames =
            parser.feed(std::string_view(chunk.data(), static_cast<std::size_t>(std::cin.gcount())));
        for (const auto& frame : frames) {
          if (frame.malformed) std::cerr << "warning: malformed token in frame\n";
          const auto resp = net::edge_predict(q, RbvRecord{frame.payload, std::nullopt}, policy);
          std::cout << "DIAG " << resp.diagnosis << " CONF " << resp.confidence << " MODEL "
                    << resp.model_tag << std::endl;
        }
      }
      return 0;
    }

    if (rb->parsed()) {
      std::cout << format_ram_budget(ram_budget(parse_topology(rb_topology)));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
