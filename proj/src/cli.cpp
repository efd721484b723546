/*
Copyright 2026 The commfeat Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "commfeat/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "commfeat/classical_features.hpp"
#include "commfeat/community_features.hpp"
#include "commfeat/csv.hpp"
#include "commfeat/detection.hpp"
#include "commfeat/error.hpp"
#include "commfeat/generator.hpp"
#include "commfeat/graph.hpp"
#include "commfeat/modularity.hpp"
#include "commfeat/partition.hpp"

namespace commfeat::cli {

using nlohmann::ordered_json;

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return hex.str();
}

namespace {

std::size_t default_threads() {
  if (const char* env = std::getenv("COMMFEAT_THREADS")) {
    try {
      const long k = std::stol(env);
      if (k > 0) return static_cast<std::size_t>(k);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

// Everything a subcommand needs to describe its run.
struct Run {
  CLI::App* app = nullptr;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::uint64_t> seeds;

  void write_manifest(const std::string& path) const {
    ordered_json manifest;
    manifest["tool"] = "commfeat";
    manifest["version"] = kToolVersion;
    manifest["subcommand"] = app->get_name();
    ordered_json flags = ordered_json::object();
    for (const CLI::Option* opt : app->get_options()) {
      const std::string name = opt->get_single_name();
      if (name == "help") continue;
      if (opt->count() > 0) {
        const auto& results = opt->results();
        flags[name] = results.size() == 1 ? ordered_json(results[0]) : ordered_json(results);
      } else {
        flags[name] = opt->get_default_str();
      }
    }
    manifest["flags"] = flags;
    manifest["seeds"] = seeds;
    ordered_json digests = ordered_json::object();
    for (const auto& in : inputs) digests[in] = file_sha256(in);
    manifest["inputs"] = digests;
    manifest["outputs"] = outputs;
    auto out = open_output(path);
    out << manifest.dump(2) << '\n';
  }
};

struct CommonFlags {
  std::size_t threads = default_threads();
  bool json = false;

  void attach(CLI::App* app) {
    app->add_option("--threads", threads, "Worker threads (default: $COMMFEAT_THREADS or 1)")->check(CLI::PositiveNumber);
    app->add_flag("--json", json, "Print a machine-readable JSON summary");
  }
};

Graph load_graph(const std::string& path, bool giant, ordered_json& info) {
  CleaningReport report;
  Graph g = load_edge_list_file(path, {}, &report);
  info["self_loops_dropped"] = report.self_loops;
  info["duplicate_edges_dropped"] = report.duplicate_edges;
  info["isolated_nodes_dropped"] = report.isolated_nodes;
  if (giant) {
    const std::size_t before = g.num_nodes();
    g = largest_component(g);
    info["nodes_outside_giant_component"] = before - g.num_nodes();
  }
  return g;
}

// ---------------------------------------------------------------- generate

struct GenerateCommand {
  GenSpec spec;
  std::optional<std::uint64_t> seed;
  std::string prefix;
  CommonFlags common;

  void attach(CLI::App* app) {
    app->add_option("--n", spec.n, "Number of nodes")->capture_default_str();
    app->add_option("--outliers", spec.outliers, "Number of outliers (s0)")->capture_default_str();
    app->add_option("--gamma", spec.degree_exponent, "Degree power-law exponent")->capture_default_str();
    app->add_option("--min-degree", spec.min_degree, "Minimum degree")->capture_default_str();
    app->add_option("--max-degree", spec.max_degree, "Maximum degree")->capture_default_str();
    app->add_option("--beta", spec.size_exponent, "Community-size power-law exponent")->capture_default_str();
    app->add_option("--min-size", spec.min_size, "Minimum community size")->capture_default_str();
    app->add_option("--max-size", spec.max_size, "Maximum community size")->capture_default_str();
    app->add_option("--xi", spec.xi, "Mixing parameter in [0, 1]")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->required();
    app->add_option("--out", prefix, "Output prefix")->required();
    common.attach(app);
  }

  int execute(Run& run, std::ostream& out) {
    spec.seed = *seed;
    run.seeds = {*seed};
    GenOutput gen = generate(spec);
    const std::string edges_path = prefix + ".edges";
    const std::string partition_path = prefix + ".partition.csv";
    const std::string labels_path = prefix + ".labels.csv";
    const std::string meta_path = prefix + ".meta.json";
    {
      auto f = open_output(edges_path);
      write_edge_list(f, gen.graph);
    }
    {
      auto f = open_output(partition_path);
      f << "internal_id,community\n";
      for (NodeId v = 0; v < gen.graph.num_nodes(); ++v) f << v << ',' << gen.planted[v] << '\n';
    }
    {
      auto f = open_output(labels_path);
      f << "node,label\n";
      for (NodeId v = 0; v < gen.graph.num_nodes(); ++v) {
        f << csv::escape(gen.graph.label(v)) << ',' << int{gen.labels[v]} << '\n';
      }
    }
    const GenReport& r = gen.report;
    ordered_json meta;
    meta["target_volume"] = r.target_volume;
    meta["communities"] = r.communities;
    meta["internal_parity_drops"] = r.internal_parity_drops;
    meta["external_parity_drops"] = r.external_parity_drops;
    meta["rewired_pairs"] = r.rewired_pairs;
    meta["self_loops_dropped"] = r.self_loops;
    meta["multi_edges_dropped"] = r.multi_edges;
    meta["isolated_nodes_dropped"] = r.isolated_nodes;
    meta["nodes"] = r.realized_nodes;
    meta["edges"] = r.realized_edges;
    meta["outliers"] = r.realized_outliers;
    meta["mean_internal_fraction"] = r.mean_internal_fraction;
    {
      auto f = open_output(meta_path);
      f << meta.dump(2) << '\n';
    }
    run.outputs = {edges_path, partition_path, labels_path, meta_path};
    run.write_manifest(prefix + ".manifest.json");
    if (common.json) {
      out << meta.dump() << '\n';
    } else {
      out << "nodes=" << r.realized_nodes << " edges=" << r.realized_edges << " outliers=" << r.realized_outliers
          << " communities=" << r.communities << '\n';
    }
    return kOk;
  }
};

// ------------------------------------------------------------------ detect

struct DetectCommand {
  std::string graph_path;
  DetectConfig cfg;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string mapping_path;
  bool giant = false;
  CommonFlags common;

  void attach(CLI::App* app) {
    app->add_option("--graph", graph_path, "Edge list")->required();
    app->add_option("--lambda", cfg.resolution, "Resolution parameter")->capture_default_str();
    app->add_option("--restarts", cfg.restarts, "Independent runs; the best is kept")->capture_default_str();
    app->add_option("--max-levels", cfg.max_levels, "Aggregation levels per run")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->required();
    app->add_option("--out", out_path, "Partition CSV to write");
    app->add_option("--mapping", mapping_path, "Write the external_id,internal_id mapping here");
    app->add_flag("--giant-component", giant, "Keep only the largest connected component");
    common.attach(app);
  }

  int execute(Run& run, std::ostream& out) {
    ordered_json info;
    const Graph g = load_graph(graph_path, giant, info);
    run.inputs = {graph_path};
    cfg.seed = *seed;
    cfg.threads = common.threads;
    run.seeds = {*seed};
    const DetectResult result = detect(g, cfg);
    if (!out_path.empty()) {
      auto f = open_output(out_path);
      write_partition_csv(f, result.partition);
      run.outputs.push_back(out_path);
    }
    if (!mapping_path.empty()) {
      auto f = open_output(mapping_path);
      write_id_mapping(f, g);
      run.outputs.push_back(mapping_path);
    }
    if (!run.outputs.empty()) run.write_manifest(run.outputs.front() + ".manifest.json");
    if (common.json) {
      ordered_json j;
      j["quality"] = result.quality;
      j["lambda"] = cfg.resolution;
      j["communities"] = result.partition.num_communities();
      j["best_restart"] = result.best_restart;
      j["restarts"] = cfg.restarts;
      j["nodes"] = g.num_nodes();
      j["edges"] = g.num_edges();
      j["cleaning"] = info;
      out << j.dump() << '\n';
    } else {
      out << "q=" << csv::format_double(result.quality) << " communities=" << result.partition.num_communities()
          << '\n';
    }
    return kOk;
  }
};

// ---------------------------------------------------------------- features

struct FeaturesCommand {
  std::string graph_path;
  std::string partition_path;
  double resolution = 1.0;
  std::string set = "all";
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::size_t restarts = DetectConfig{}.restarts;
  std::optional<std::size_t> bc_sample;
  bool per_component = false;
  bool giant = false;
  CommonFlags common;

  void attach(CLI::App* app) {
    app->add_option("--graph", graph_path, "Edge list")->required();
    app->add_option("--partition", partition_path, "Partition CSV (detection runs when absent)");
    app->add_option("--lambda", resolution, "Resolution parameter for detection and CAS")->capture_default_str();
    app->add_option("--set", set, "Feature set")
        ->check(CLI::IsMember({"community", "classical", "all"}))
        ->capture_default_str();
    app->add_option("--out", out_path, "Features CSV to write")->required();
    app->add_option("--seed", seed, "Random seed (needed for detection or --bc-sample)");
    app->add_option("--restarts", restarts, "Detection restarts")->capture_default_str();
    app->add_option("--bc-sample", bc_sample, "Approximate betweenness from this many pivots");
    app->add_flag("--per-component", per_component, "Closeness/eccentricity within each component");
    app->add_flag("--giant-component", giant, "Keep only the largest connected component");
    common.attach(app);
  }

  int execute(Run& run, std::ostream& out) {
    ordered_json info;
    const Graph g = load_graph(graph_path, giant, info);
    run.inputs = {graph_path};
    const bool want_community = set != "classical";
    const bool want_classical = set != "community";
    const bool needs_seed = (want_community && partition_path.empty()) || (want_classical && bc_sample);
    if (needs_seed && !seed) {
      throw CLI::RequiredError("--seed (required for community detection or --bc-sample)");
    }
    if (seed) run.seeds = {*seed};

    FeatureMatrix features;
    std::optional<double> quality;
    std::size_t communities = 0;
    if (want_community) {
      Partition p;
      if (!partition_path.empty()) {
        p = read_partition_file(partition_path, g);
        run.inputs.push_back(partition_path);
      } else {
        DetectConfig cfg;
        cfg.resolution = resolution;
        cfg.restarts = restarts;
        cfg.seed = *seed;
        cfg.threads = common.threads;
        DetectResult result = detect(g, cfg);
        quality = result.quality;
        p = std::move(result.partition);
      }
      communities = p.num_communities();
      features.append(compute_community_features(g, p, resolution, common.threads));
    }
    if (want_classical) {
      ClassicalSpec spec;
      spec.per_component = per_component;
      spec.bc_sample = bc_sample;
      spec.bc_seed = seed.value_or(0);
      spec.threads = common.threads;
      features.append(compute_classical_features(g, spec));
    }
    {
      auto f = open_output(out_path);
      write_features_csv(f, g, features);
    }
    run.outputs = {out_path};
    run.write_manifest(out_path + ".manifest.json");
    if (common.json) {
      ordered_json j;
      j["rows"] = features.rows();
      j["columns"] = features.names();
      j["communities"] = communities;
      if (quality) j["quality"] = *quality;
      j["normalizations"] = {
          {"dc", "deg/(n-1)"},
          {"bc", bc_sample ? "pivot-sampled Brandes, 2/((n-1)(n-2))" : "Brandes, 2/((n-1)(n-2))"},
          {"cc", "(|C|-1)/sum of distances"},
          {"ec", "power iteration on A+I, max entry 1"},
          {"CD_KL", "natural log"},
          {"WMD", "population standard deviation"}};
      j["cleaning"] = info;
      out << j.dump() << '\n';
    } else {
      out << "rows=" << features.rows() << " columns=" << features.cols() << " out=" << out_path << '\n';
    }
    return kOk;
  }
};

// -------------------------------------------------------------- modularity

struct ModularityCommand {
  std::string graph_path;
  std::string partition_path;
  double resolution = 1.0;
  std::optional<double> beta;
  bool giant = false;
  CommonFlags common;

  void attach(CLI::App* app) {
    app->add_option("--graph", graph_path, "Edge list")->required();
    app->add_option("--partition", partition_path, "Partition CSV")->required();
    app->add_option("--lambda", resolution, "Resolution parameter")->capture_default_str();
    app->add_option("--beta", beta, "Outlier regularization (uses the regularized objective)");
    app->add_flag("--giant-component", giant, "Keep only the largest connected component");
    common.attach(app);
  }

  int execute(Run&, std::ostream& out) {
    ordered_json info;
    const Graph g = load_graph(graph_path, giant, info);
    const Partition p = read_partition_file(partition_path, g);
    const double q = beta ? regularized_modularity(g, p, resolution, *beta) : generalized_modularity(g, p, resolution);
    if (common.json) {
      ordered_json j;
      j["q"] = q;
      j["lambda"] = resolution;
      if (beta) j["beta"] = *beta;
      j["communities"] = p.num_communities();
      j["outliers"] = p.outliers().size();
      out << j.dump() << '\n';
    } else {
      out << "q=" << csv::format_double(q) << '\n';
    }
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Community-aware node features for sparse graphs", "commfeat"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  GenerateCommand generate_cmd;
  DetectCommand detect_cmd;
  FeaturesCommand features_cmd;
  ModularityCommand modularity_cmd;
  CLI::App* gen_app = app.add_subcommand("generate", "Synthetic planted-partition graph with outliers");
  CLI::App* det_app = app.add_subcommand("detect", "Modularity-based community detection");
  CLI::App* feat_app = app.add_subcommand("features", "Compute node features");
  CLI::App* mod_app = app.add_subcommand("modularity", "Evaluate a partition");
  generate_cmd.attach(gen_app);
  detect_cmd.attach(det_app);
  features_cmd.attach(feat_app);
  modularity_cmd.attach(mod_app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  Run run;
  try {
    if (*gen_app) {
      run.app = gen_app;
      return generate_cmd.execute(run, out);
    }
    if (*det_app) {
      run.app = det_app;
      return detect_cmd.execute(run, out);
    }
    if (*feat_app) {
      run.app = feat_app;
      return features_cmd.execute(run, out);
    }
    run.app = mod_app;
    return modularity_cmd.execute(run, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << run.app->help();
    return kUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace commfeat::cli
