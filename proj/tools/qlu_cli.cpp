// Command-line runner: trains repeated networks from a config file and writes
// an artifact bundle of partitions, traces, metrics and consensus results.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "config.hpp"
#include "qlustering/qlustering.h"

namespace fs = std::filesystem;
using qlucli::ConfigError;
using qlucli::Experiment;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(qlu_status status, const std::string& context) {
  if (status != QLU_OK) throw Failure(context + ": " + qlu_status_name(status) + ": " + qlu_last_error());
}

struct DatasetDeleter {
  void operator()(qlu_dataset* d) const { qlu_dataset_free(d); }
};
struct MoleculesDeleter {
  void operator()(qlu_molecules* m) const { qlu_molecules_free(m); }
};
struct ModelDeleter {
  void operator()(qlu_model* m) const { qlu_model_free(m); }
};
using DatasetPtr = std::unique_ptr<qlu_dataset, DatasetDeleter>;
using MoleculesPtr = std::unique_ptr<qlu_molecules, MoleculesDeleter>;
using ModelPtr = std::unique_ptr<qlu_model, ModelDeleter>;

using Labels = std::vector<int>;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  // Shortest text that reads back to the same double.
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw Failure("cannot write " + p.string());
  return os;
}

// ---------------------------------------------------------------------------
// Data

const std::vector<std::string> kScanDefault = {"A", "B", "C", "mu", "alpha", "homo", "lumo",
                                               "gap", "r2", "zpve", "U", "H", "G", "Cv"};

struct Problem {
  DatasetPtr data;
  std::optional<Labels> truth;
  MoleculesPtr molecules;
  int dim = 0;
};

Labels descriptor_tags(qlu_molecules* mols, const std::string& key) {
  const int n = qlu_molecules_count(mols);
  std::vector<double> values(static_cast<std::size_t>(n));
  check(qlu_molecules_descriptor(mols, key.c_str(), values.data()), "descriptor " + key);
  Labels tags(static_cast<std::size_t>(n));
  check(qlu_binarize_by_mean(values.data(), n, tags.data()), "binarize " + key);
  for (int& t : tags) t += 1;
  return tags;
}

Problem build_problem(const Experiment& e) {
  Problem p;
  qlu_dataset* raw = nullptr;
  if (e.task == "synthetic") {
    const double* base = e.base_points.empty() ? nullptr : e.base_points.data();
    const int q = e.outputs > 0 ? e.outputs : 4;
    const int dim = e.base_points.empty() ? 3 : static_cast<int>(e.base_points.size()) / q;
    if (!e.base_points.empty() && dim * q != static_cast<int>(e.base_points.size())) {
      throw ConfigError("base_points: expected " + std::to_string(q) + " rows (one per output)");
    }
    check(qlu_dataset_synthetic(base, q, dim, e.omega, e.n > 0 ? e.n : 60, e.data_seed, &raw), "synthetic data");
  } else if (e.task == "localization") {
    check(qlu_dataset_ipr(e.inputs > 0 ? e.inputs : 10, e.n > 0 ? e.n : 50, e.delta_ipr, e.data_seed, &raw),
          "localization data");
  } else if (e.task == "iris") {
    if (e.iris_path.empty()) throw ConfigError("iris_path: required for task = iris");
    check(qlu_dataset_iris(e.iris_path.c_str(), e.drop_sepal_width ? 1 : 0, &raw), "iris data");
  } else if (e.task == "qm9") {
    if (e.qm9_path.empty()) throw ConfigError("qm9_path: required for task = qm9");
    qlu_molecules* mols = nullptr;
    check(qlu_molecules_load(e.qm9_path.c_str(), &mols), "molecules");
    p.molecules.reset(mols);
    for (int i = 0; i < qlu_molecules_error_count(mols); ++i) {
      std::cerr << "warning: skipped " << qlu_molecules_error(mols, i) << '\n';
    }
    check(qlu_molecules_fingerprints(mols, e.pad_len, &raw), "fingerprints");
    p.data.reset(raw);
    p.truth = descriptor_tags(mols, e.label_descriptor);
  } else {
    if (e.dataset_path.empty()) throw ConfigError("dataset_path: required for task = custom");
    check(qlu_dataset_read_csv(e.dataset_path.c_str(), &raw), "dataset");
  }
  if (!p.data) p.data.reset(raw);
  if (!p.truth && qlu_dataset_has_labels(p.data.get())) {
    Labels l(static_cast<std::size_t>(qlu_dataset_size(p.data.get())));
    check(qlu_dataset_labels(p.data.get(), l.data()), "labels");
    p.truth = l;
  }
  p.dim = qlu_dataset_dim(p.data.get());
  return p;
}

qlu_train_options train_options(const Experiment& e, int dim) {
  qlu_train_options o;
  qlu_train_options_default(&o);
  const bool localization = e.cost.empty() ? e.task == "localization" : e.cost == "localization";
  o.inputs = dim;
  if (e.inputs > 0 && e.inputs != dim) {
    throw ConfigError("inputs: " + std::to_string(e.inputs) + " does not match the data dimension " +
                      std::to_string(dim));
  }
  int hidden = 2;
  int outputs = 4;
  if (e.task == "localization") {
    hidden = 3;
    outputs = 2;
  } else if (e.task == "iris") {
    outputs = 3;
  } else if (e.task == "qm9") {
    hidden = 3;
    outputs = 2;
  }
  o.hidden = e.hidden > 0 ? e.hidden : hidden;
  o.outputs = e.outputs > 0 ? e.outputs : outputs;
  o.mask = e.mask == "layered" ? QLU_MASK_LAYERED : QLU_MASK_NO_DIRECT_IO;
  o.allow_onsite = e.allow_onsite ? 1 : 0;
  if (e.iterations > 0) o.max_iterations = e.iterations;
  if (e.particles > 0) o.particles = e.particles;
  if (e.h_max > 0) o.h_max = e.h_max;
  o.mutation = e.mutation == "constant"   ? QLU_MUTATION_CONSTANT
               : e.mutation == "gaussian" ? QLU_MUTATION_GAUSSIAN
                                          : QLU_MUTATION_UNIFORM;
  o.mutation_value = e.mutation_value;
  o.cost_mode = localization ? QLU_COST_LOCALIZATION : QLU_COST_CLUSTERING;
  if (e.window > 0) o.window = e.window;
  if (e.min_delta >= 0) o.min_delta = e.min_delta;
  if (e.init_retries > 0) o.init_retries = e.init_retries;
  if (e.gamma_in >= 0) o.gamma_in = e.gamma_in;
  if (e.gamma_out >= 0) o.gamma_out = e.gamma_out;
  o.gamma_dephase = e.gamma_dephase;
  o.threads = 1;
  return o;
}

// ---------------------------------------------------------------------------
// Metrics

struct MetricSet {
  std::vector<std::pair<std::string, double>> values;
  void add(const std::string& k, double v) { values.emplace_back(k, v); }
};

double try_metric(qlu_status (*f)(const qlu_dataset*, const int*, double*), const qlu_dataset* d, const Labels& l) {
  double v = 0.0;
  return f(d, l.data(), &v) == QLU_OK ? v : std::nan("");
}

MetricSet score(const qlu_dataset* data, const Labels& labels, const std::optional<Labels>& truth) {
  MetricSet m;
  const int n = static_cast<int>(labels.size());
  if (truth) {
    double ri = 0.0;
    double ari = 0.0;
    check(qlu_rand_index(truth->data(), labels.data(), n, &ri), "rand index");
    check(qlu_adjusted_rand_index(truth->data(), labels.data(), n, &ari), "adjusted rand index");
    m.add("ri", ri);
    m.add("ari", ari);
  }
  m.add("cp", try_metric(qlu_compactness, data, labels));
  m.add("dvi", try_metric(qlu_dunn_index, data, labels));
  m.add("silhouette", try_metric(qlu_silhouette, data, labels));
  std::vector<int> distinct = labels;
  std::sort(distinct.begin(), distinct.end());
  m.add("clusters", static_cast<double>(std::unique(distinct.begin(), distinct.end()) - distinct.begin()));
  return m;
}

void write_partition(const fs::path& path, const Labels& labels) {
  auto os = open_out(path);
  os << "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) os << i << ',' << labels[i] << '\n';
}

Labels read_partition(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Failure("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "index,label") throw Failure(path.string() + ": bad header");
  Labels out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("missing comma");
      const auto idx = std::stoul(line.substr(0, comma));
      if (idx != out.size()) throw std::invalid_argument("indices out of order");
      out.push_back(std::stoi(line.substr(comma + 1)));
    } catch (const std::exception& ex) {
      throw Failure(path.string() + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bundle

struct RunOutcome {
  bool ok = false;
  std::string error;
  Labels labels;
  double final_cost = 0.0;
  int iterations = 0;
  int accepted = 0;
  long long network_solves = 0;
  long long input_solves = 0;
};

struct BundleSummary {
  std::map<std::string, double> mean;
  std::map<std::string, double> consensus;
  double stability = std::nan("");
  int succeeded = 0;
  Labels consensus_labels;
  std::vector<RunOutcome> runs;
};

template <class F>
void parallel_for(int count, int threads, F&& body) {
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) body(i);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

// Aggregates per-run partitions into metrics.csv, consensus.csv and
// consensus_partition.csv. Shared by `run` and `metrics`.
BundleSummary aggregate(const fs::path& out, const qlu_dataset* data, const std::optional<Labels>& truth, int q,
                        std::vector<RunOutcome> runs) {
  BundleSummary s;
  s.runs = std::move(runs);
  const int n = qlu_dataset_size(data);
  auto metrics = open_out(out / "metrics.csv");
  metrics << "run,metric,value\n";
  std::map<std::string, std::vector<double>> columns;
  std::vector<int> stacked;
  for (std::size_t i = 0; i < s.runs.size(); ++i) {
    const auto& r = s.runs[i];
    if (!r.ok) {
      metrics << i << ",status,failed\n";
      continue;
    }
    ++s.succeeded;
    stacked.insert(stacked.end(), r.labels.begin(), r.labels.end());
    for (const auto& [k, v] : score(data, r.labels, truth).values) {
      metrics << i << ',' << k << ',' << fmt(v) << '\n';
      columns[k].push_back(v);
    }
    if (r.iterations > 0) {
      metrics << i << ",final_cost," << fmt(r.final_cost) << '\n';
      metrics << i << ",iterations," << r.iterations << '\n';
      metrics << i << ",accepted," << r.accepted << '\n';
    }
  }
  if (s.succeeded == 0) throw Failure("every run failed");

  for (const auto& [k, vs] : columns) {
    // Non-finite entries (DVI of a one-cluster run) are left out of the mean.
    double sum = 0.0;
    int finite = 0;
    for (double v : vs) {
      if (!std::isfinite(v)) continue;
      sum += v;
      ++finite;
    }
    s.mean[k] = finite > 0 ? sum / finite : std::numeric_limits<double>::quiet_NaN();
    metrics << "mean," << k << ',' << fmt(s.mean[k]) << '\n';
  }
  if (s.succeeded >= 2) {
    check(qlu_stability(stacked.data(), s.succeeded, n, &s.stability), "stability");
    metrics << "all,stability," << fmt(s.stability) << '\n';
  }

  std::vector<double> c(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  check(qlu_consensus(stacked.data(), s.succeeded, n, c.data()), "consensus");
  // Points that shared a cluster in every run are never split by the cut.
  int unanimous = 0;
  check(qlu_unanimous_groups(c.data(), n, &unanimous), "consensus");
  s.consensus_labels.resize(static_cast<std::size_t>(n));
  check(qlu_consensus_clusters(c.data(), n, std::min({q, n, unanimous}), s.consensus_labels.data()),
        "consensus clusters");
  for (const auto& [k, v] : score(data, s.consensus_labels, truth).values) {
    s.consensus[k] = v;
    metrics << "consensus," << k << ',' << fmt(v) << '\n';
  }

  auto grid = open_out(out / "consensus.csv");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) grid << (j ? "," : "") << fmt(c[static_cast<std::size_t>(i) * n + j]);
    grid << '\n';
  }
  write_partition(out / "consensus_partition.csv", s.consensus_labels);
  return s;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_manifest(const fs::path& out, const std::string& command, const Experiment& e,
                    const qlu_train_options& o, const std::vector<std::uint64_t>& seeds) {
  auto m = open_out(out / "manifest");
  m << "tool=qlu " << qlu_version() << '\n'
    << "command=" << command << '\n'
    << "created=" << timestamp() << '\n'
    << "task=" << e.task << '\n'
    << "inputs=" << o.inputs << "\nhidden=" << o.hidden << "\noutputs=" << o.outputs << '\n'
    << "gamma_in=" << fmt(o.gamma_in) << "\ngamma_out=" << fmt(o.gamma_out)
    << "\ngamma_dephase=" << fmt(o.gamma_dephase) << '\n'
    << "iterations=" << o.max_iterations << "\nparticles=" << o.particles << "\nh_max=" << fmt(o.h_max) << '\n'
    << "data_seed=" << e.data_seed << '\n'
    << "seeds=";
  for (std::size_t i = 0; i < seeds.size(); ++i) m << (i ? "," : "") << seeds[i];
  m << '\n';
}

BundleSummary run_bundle(const Experiment& e, const fs::path& out, const std::string& command) {
  const Problem p = build_problem(e);
  const auto base = train_options(e, p.dim);
  const auto seeds = e.run_seeds();
  fs::create_directories(out / "runs");
  write_manifest(out, command, e, base, seeds);
  check(qlu_dataset_write_csv(p.data.get(), (out / "dataset.csv").c_str()), "dataset.csv");
  if (p.truth) write_partition(out / "truth.csv", *p.truth);

  std::vector<RunOutcome> runs(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), e.threads, [&](int i) {
    const fs::path dir = out / "runs" / std::to_string(i);
    fs::create_directories(dir);
    auto& r = runs[static_cast<std::size_t>(i)];
    qlu_train_options o = base;
    o.seed = seeds[static_cast<std::size_t>(i)];
    qlu_model* raw = nullptr;
    if (qlu_train(p.data.get(), &o, &raw) != QLU_OK) {
      r.error = qlu_last_error();
      std::ofstream(dir / "error.txt") << r.error << '\n';
      return;
    }
    const ModelPtr model(raw);
    r.labels.resize(static_cast<std::size_t>(qlu_model_size(raw)));
    qlu_model_partition(raw, r.labels.data());
    std::vector<double> costs(static_cast<std::size_t>(qlu_model_accepted_count(raw)));
    qlu_model_accepted_costs(raw, costs.data(), nullptr);
    r.final_cost = costs.back();
    r.accepted = static_cast<int>(costs.size()) - 1;
    r.iterations = qlu_model_iterations(raw);
    r.network_solves = qlu_model_network_solves(raw);
    r.input_solves = qlu_model_input_solves(raw);
    write_partition(dir / "partition.csv", r.labels);
    if (qlu_model_write_trace(raw, (dir / "trace.log").c_str()) != QLU_OK) {
      r.error = qlu_last_error();
      return;
    }
    r.ok = true;
  });
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].ok) std::cerr << "run " << i << " failed: " << runs[i].error << '\n';
  }
  return aggregate(out, p.data.get(), p.truth, base.outputs, std::move(runs));
}

void print_summary(const BundleSummary& s) {
  std::cout << "runs " << s.succeeded << '/' << s.runs.size();
  if (s.consensus.count("ri")) {
    std::cout << "  mean RI " << fmt(s.mean.at("ri")) << " ARI " << fmt(s.mean.at("ari")) << "  consensus RI "
              << fmt(s.consensus.at("ri")) << " ARI " << fmt(s.consensus.at("ari"));
  }
  if (!std::isnan(s.stability)) std::cout << "  stability " << fmt(s.stability);
  std::cout << '\n';
}

// ---------------------------------------------------------------------------
// Subcommands

struct Common {
  std::string config;
  std::string out;
  std::string seeds;
  int repeats = -1;
  int threads = 0;
};

Experiment load(const Common& c) {
  Experiment e = qlucli::load_experiment(c.config);
  if (!c.seeds.empty()) e.seeds = qlucli::parse_seed_list(c.seeds);
  if (c.repeats >= 0) e.repeats = c.repeats;
  if (c.threads > 0) e.threads = c.threads;
  if (!c.out.empty()) e.output = c.out;
  if (e.output.empty()) throw ConfigError("output: no output directory (set 'output' or pass --out)");
  return e;
}

int cmd_run(const Common& c) {
  const Experiment e = load(c);
  print_summary(run_bundle(e, e.output, "run"));
  return 0;
}

int cmd_sweep(const Common& c) {
  const Experiment e = load(c);
  if (e.sweep_axis.empty()) throw ConfigError("sweep_axis: required for sweep");
  if (e.sweep_values.empty()) throw ConfigError("sweep_values: required for sweep");
  fs::create_directories(e.output);
  auto table = open_out(fs::path(e.output) / "sweep.csv");
  table << "axis,value,metric,mean,consensus\n";
  for (double v : e.sweep_values) {
    Experiment point = e;
    if (e.sweep_axis == "omega") point.omega = v;
    if (e.sweep_axis == "delta_ipr") point.delta_ipr = v;
    if (e.sweep_axis == "dephasing") point.gamma_dephase = v;
    const fs::path dir = fs::path(e.output) / (e.sweep_axis + "_" + fmt(v));
    const auto s = run_bundle(point, dir, "sweep");
    std::cout << e.sweep_axis << '=' << fmt(v) << ": ";
    print_summary(s);
    for (const auto& [k, mean] : s.mean) {
      const auto it = s.consensus.find(k);
      table << e.sweep_axis << ',' << fmt(v) << ',' << k << ',' << fmt(mean) << ','
            << (it == s.consensus.end() ? "nan" : fmt(it->second)) << '\n';
    }
    if (!std::isnan(s.stability)) {
      table << e.sweep_axis << ',' << fmt(v) << ",stability," << fmt(s.stability) << ",nan\n";
    }
  }
  return 0;
}

int cmd_baseline(const Common& c) {
  const Experiment e = load(c);
  const Problem p = build_problem(e);
  const auto o = train_options(e, p.dim);
  qlu_kmeans_options k;
  qlu_kmeans_options_default(&k);
  k.k = o.outputs;
  k.restarts = e.kmeans_restarts;
  k.seed = e.kmeans_seed;
  k.init = e.kmeans_init == "random" ? QLU_KMEANS_RANDOM : QLU_KMEANS_PLUS_PLUS;
  k.threads = e.threads;
  Labels labels(static_cast<std::size_t>(qlu_dataset_size(p.data.get())));
  double inertia = 0.0;
  check(qlu_kmeans(p.data.get(), &k, labels.data(), &inertia), "kmeans");

  const fs::path out(e.output);
  fs::create_directories(out);
  write_partition(out / "kmeans_partition.csv", labels);
  auto metrics = open_out(out / "baseline_metrics.csv");
  metrics << "run,metric,value\n";
  for (const auto& [key, v] : score(p.data.get(), labels, p.truth).values) {
    metrics << "kmeans," << key << ',' << fmt(v) << '\n';
    std::cout << key << ' ' << fmt(v) << '\n';
  }
  metrics << "kmeans,inertia," << fmt(inertia) << '\n';
  return 0;
}

int cmd_qm9_scan(const Common& c) {
  const Experiment e = load(c);
  if (e.task != "qm9") throw ConfigError("task: qm9-scan needs task = qm9");
  const auto s = run_bundle(e, e.output, "qm9-scan");
  const Labels& partition = e.scan_partition == "first" ? s.runs.front().labels : s.consensus_labels;
  if (partition.empty()) throw Failure("the first run failed; no partition to scan");

  const Problem p = build_problem(e);
  const auto& names = e.scan_descriptors.empty() ? kScanDefault : e.scan_descriptors;
  struct Row {
    std::string name;
    double ri, ari;
    bool degenerate;
  };
  std::vector<Row> rows;
  const int n = static_cast<int>(partition.size());
  for (const auto& name : names) {
    const Labels tags = descriptor_tags(p.molecules.get(), name);
    Row r{name, 0.0, 0.0, std::all_of(tags.begin(), tags.end(), [&](int t) { return t == tags.front(); })};
    check(qlu_rand_index(tags.data(), partition.data(), n, &r.ri), "rand index");
    check(qlu_adjusted_rand_index(tags.data(), partition.data(), n, &r.ari), "adjusted rand index");
    rows.push_back(r);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.ri > b.ri; });
  auto table = open_out(fs::path(e.output) / "descriptor_ranking.csv");
  table << "rank,descriptor,ri,ari,degenerate\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    table << i + 1 << ',' << rows[i].name << ',' << fmt(rows[i].ri) << ',' << fmt(rows[i].ari) << ','
          << (rows[i].degenerate ? 1 : 0) << '\n';
    std::cout << std::setw(3) << i + 1 << "  " << std::setw(6) << rows[i].name << "  RI " << fmt(rows[i].ri)
              << "  ARI " << fmt(rows[i].ari) << (rows[i].degenerate ? "  (degenerate)" : "") << '\n';
  }
  return 0;
}

std::map<std::string, std::string> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Failure("cannot open " + path.string());
  std::map<std::string, std::string> m;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

int cmd_metrics(const Common& c) {
  if (c.out.empty()) throw ConfigError("metrics: pass the bundle directory with --out");
  const fs::path out(c.out);
  const auto manifest = read_manifest(out / "manifest");
  const auto q_it = manifest.find("outputs");
  if (q_it == manifest.end()) throw Failure("manifest has no 'outputs' entry");
  const int q = std::stoi(q_it->second);

  qlu_dataset* raw = nullptr;
  check(qlu_dataset_read_csv((out / "dataset.csv").c_str(), &raw), "dataset.csv");
  const DatasetPtr data(raw);
  std::optional<Labels> truth;
  if (fs::exists(out / "truth.csv")) truth = read_partition(out / "truth.csv");

  std::vector<RunOutcome> runs;
  for (int i = 0; fs::exists(out / "runs" / std::to_string(i)); ++i) {
    const fs::path dir = out / "runs" / std::to_string(i);
    RunOutcome r;
    if (fs::exists(dir / "partition.csv") && !fs::exists(dir / "error.txt")) {
      r.ok = true;
      r.labels = read_partition(dir / "partition.csv");
      if (static_cast<int>(r.labels.size()) != qlu_dataset_size(raw)) {
        throw Failure((dir / "partition.csv").string() + ": length does not match dataset.csv");
      }
      // Training statistics come from the trace.
      std::ifstream trace(dir / "trace.log");
      std::string line;
      while (std::getline(trace, line)) {
        if (line.rfind("iteration=", 0) == 0) ++r.iterations;
        if (line.find(" accepted=1 ") != std::string::npos) ++r.accepted;
        const auto at = line.find(" cost=");
        if (at != std::string::npos) r.final_cost = std::stod(line.substr(at + 6));
      }
    }
    runs.push_back(std::move(r));
  }
  if (runs.empty()) throw Failure("no runs under " + (out / "runs").string());
  print_summary(aggregate(out, raw, truth, q, std::move(runs)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustering with steady-state currents of trained open quantum networks"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", common.config, "experiment config (key = value lines)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--seeds", common.seeds, "training seeds, e.g. 1..10");
    sub->add_option("--repeats", common.repeats, "number of runs R")->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", common.threads, "concurrent runs")->check(CLI::PositiveNumber);
  };
  auto* run = app.add_subcommand("run", "train R networks and write the artifact bundle");
  auto* sweep = app.add_subcommand("sweep", "repeat `run` across sweep_values of sweep_axis");
  auto* baseline = app.add_subcommand("baseline", "k-means on the same data instance");
  auto* scan = app.add_subcommand("qm9-scan", "rank molecule descriptors against a trained partition");
  auto* metrics = app.add_subcommand("metrics", "recompute metrics of an existing bundle (--out)");
  auto* keys = app.add_subcommand("keys", "list accepted config keys");
  for (auto* s : {run, sweep, baseline, scan}) add_common(s, true);
  add_common(metrics, false);

  CLI11_PARSE(app, argc, argv);
  try {
    if (keys->parsed()) {
      for (const auto& [k, help] : qlucli::documented_keys()) std::cout << std::left << std::setw(18) << k << help << '\n';
      return 0;
    }
    if (run->parsed()) return cmd_run(common);
    if (sweep->parsed()) return cmd_sweep(common);
    if (baseline->parsed()) return cmd_baseline(common);
    if (scan->parsed()) return cmd_qm9_scan(common);
    if (metrics->parsed()) return cmd_metrics(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
