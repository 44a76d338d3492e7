#include "qlustering/qlustering.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <vector>

#include "baseline.hpp"
#include "encoders.hpp"
#include "engine.hpp"
#include "errors.hpp"
#include "validation.hpp"

struct qlu_dataset {
  qlu::Dataset data;
};

struct qlu_molecules {
  std::vector<qlu::MoleculeRecord> records;
  std::vector<std::string> errors;
};

struct qlu_model {
  qlu::TrainingResult result;
  qlu::LindbladSpec spec;
  int n = 0;
};

namespace {

thread_local std::string g_last_error;

qlu_status fail(qlu_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

qlu_status to_status(qlu::ErrorCode code) {
  switch (code) {
    case qlu::ErrorCode::invalid_argument: return QLU_ERR_INVALID_ARGUMENT;
    case qlu::ErrorCode::dimension_mismatch: return QLU_ERR_DIMENSION_MISMATCH;
    case qlu::ErrorCode::degenerate_steady_state: return QLU_ERR_DEGENERATE_STEADY_STATE;
    case qlu::ErrorCode::no_steady_state: return QLU_ERR_NO_STEADY_STATE;
    case qlu::ErrorCode::parse_error: return QLU_ERR_PARSE;
    case qlu::ErrorCode::io_error: return QLU_ERR_IO;
    case qlu::ErrorCode::infeasible: return QLU_ERR_INFEASIBLE;
  }
  return QLU_ERR_INTERNAL;
}

template <class F>
qlu_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return QLU_OK;
  } catch (const qlu::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QLU_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QLU_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw qlu::InvalidArgument(what);
}

qlu::Partition partition_from(const int* labels, int n) {
  require(labels != nullptr, "labels must not be null");
  require(n >= 0, "negative length");
  return qlu::Partition{std::vector<int>(labels, labels + n)};
}

std::vector<qlu::Partition> runs_from(const int* runs, int r, int n) {
  require(runs != nullptr, "runs must not be null");
  require(r >= 1 && n >= 1, "need at least one run and one point");
  std::vector<qlu::Partition> out;
  for (int i = 0; i < r; ++i) out.push_back(partition_from(runs + static_cast<std::ptrdiff_t>(i) * n, n));
  return out;
}

void write_labels(const qlu::Partition& p, int* out) {
  require(out != nullptr, "output buffer must not be null");
  std::copy(p.labels.begin(), p.labels.end(), out);
}

void write_matrix(const qlu::RealMatrix& m, double* out) {
  require(out != nullptr, "output buffer must not be null");
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out, m.rows(), m.cols()) = m;
}

qlu::RealMatrix read_matrix(const double* in, int rows, int cols) {
  require(in != nullptr, "input matrix must not be null");
  require(rows >= 0 && cols >= 0, "negative matrix size");
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(in, rows, cols);
}

const qlu::Dataset& checked(const qlu_dataset* d) {
  require(d != nullptr, "dataset handle is null");
  return d->data;
}

const qlu_model& checked(const qlu_model* m) {
  require(m != nullptr, "model handle is null");
  return *m;
}

qlu::TrainingConfig config_from(const qlu_train_options& o) {
  qlu::TrainingConfig cfg;
  cfg.architecture = {o.inputs, o.hidden, o.outputs};
  require(o.inputs >= 1 && o.hidden >= 0 && o.outputs >= 1, "architecture sizes must be positive");
  require(o.mask == QLU_MASK_NO_DIRECT_IO || o.mask == QLU_MASK_LAYERED, "unknown mask policy");
  cfg.mask = o.mask == QLU_MASK_LAYERED ? qlu::MaskPolicy::layered : qlu::MaskPolicy::no_direct_io;
  cfg.allow_onsite = o.allow_onsite != 0;
  cfg.max_iterations = o.max_iterations;
  cfg.particles = o.particles;
  cfg.h_max = o.h_max;
  switch (o.mutation) {
    case QLU_MUTATION_UNIFORM: cfg.mutation.kind = qlu::MutationLaw::Kind::uniform; break;
    case QLU_MUTATION_CONSTANT: cfg.mutation.kind = qlu::MutationLaw::Kind::constant; break;
    case QLU_MUTATION_GAUSSIAN: cfg.mutation.kind = qlu::MutationLaw::Kind::gaussian; break;
    default: throw qlu::InvalidArgument("unknown mutation law");
  }
  cfg.mutation.value = o.mutation_value;
  cfg.seed = o.seed;
  require(o.cost_mode == QLU_COST_CLUSTERING || o.cost_mode == QLU_COST_LOCALIZATION, "unknown cost mode");
  cfg.cost_mode = o.cost_mode == QLU_COST_LOCALIZATION ? qlu::CostMode::localization : qlu::CostMode::clustering;
  cfg.window = o.window;
  cfg.min_delta = o.min_delta;
  cfg.threads = o.threads;
  cfg.init_retries = o.init_retries;
  return cfg;
}

}  // namespace

extern "C" {

const char* qlu_version(void) { return "0.1.0"; }

const char* qlu_last_error(void) { return g_last_error.c_str(); }

const char* qlu_status_name(qlu_status status) {
  switch (status) {
    case QLU_OK: return "ok";
    case QLU_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QLU_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case QLU_ERR_DEGENERATE_STEADY_STATE: return "degenerate steady state";
    case QLU_ERR_NO_STEADY_STATE: return "no steady state";
    case QLU_ERR_PARSE: return "parse error";
    case QLU_ERR_IO: return "i/o error";
    case QLU_ERR_INFEASIBLE: return "infeasible";
    case QLU_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// --- datasets ---------------------------------------------------------------

qlu_status qlu_dataset_synthetic(const double* base_points, int q, int dim, double omega, int n, uint64_t seed,
                                 qlu_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "output handle pointer is null");
    qlu::SyntheticSpec spec;
    if (base_points == nullptr) {
      spec.base_points = qlu::default_base_points();
    } else {
      require(q >= 1 && dim >= 1, "base point shape must be positive");
      const qlu::RealMatrix b = read_matrix(base_points, q, dim);
      for (int i = 0; i < q; ++i) spec.base_points.push_back(b.row(i).transpose());
    }
    spec.omega = omega;
    spec.n = n;
    spec.seed = seed;
    *out = new qlu_dataset{qlu::synthetic_sphere(spec)};
  });
}

qlu_status qlu_dataset_ipr(int dim, int n, double delta, uint64_t seed, qlu_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "output handle pointer is null");
    qlu::IprSpec spec;
    spec.dim = dim;
    spec.n = n;
    spec.delta = delta;
    spec.seed = seed;
    *out = new qlu_dataset{qlu::ipr_dataset(spec)};
  });
}

qlu_status qlu_dataset_iris(const char* path, int drop_sepal_width, qlu_dataset** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    *out = new qlu_dataset{qlu::load_iris(path, drop_sepal_width != 0)};
  });
}

qlu_status qlu_dataset_from_rows(const double* rows, int n, int dim, const int* labels, qlu_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "output handle pointer is null");
    std::optional<std::vector<int>> l;
    if (labels != nullptr) l = std::vector<int>(labels, labels + n);
    *out = new qlu_dataset{qlu::dataset_from_rows(read_matrix(rows, n, dim), std::move(l))};
  });
}

qlu_status qlu_dataset_read_csv(const char* path, qlu_dataset** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    std::ifstream in(path);
    if (!in) throw qlu::IoError(std::string("cannot open ") + path);
    *out = new qlu_dataset{qlu::read_dataset_csv(in, path)};
  });
}

qlu_status qlu_dataset_write_csv(const qlu_dataset* data, const char* path) {
  return guarded([&] {
    require(path != nullptr, "null path");
    std::ofstream os(path);
    if (!os) throw qlu::IoError(std::string("cannot write ") + path);
    qlu::write_dataset_csv(os, checked(data));
    if (!os) throw qlu::IoError(std::string("write failed: ") + path);
  });
}

int qlu_dataset_size(const qlu_dataset* data) { return data ? data->data.size() : 0; }
int qlu_dataset_dim(const qlu_dataset* data) { return data ? data->data.dim() : 0; }
int qlu_dataset_has_labels(const qlu_dataset* data) { return data && data->data.labels ? 1 : 0; }

qlu_status qlu_dataset_labels(const qlu_dataset* data, int* labels) {
  return guarded([&] {
    const auto& d = checked(data);
    if (!d.labels) throw qlu::InvalidArgument("dataset has no labels");
    write_labels(qlu::Partition{*d.labels}, labels);
  });
}

int qlu_dataset_embedding_dim(const qlu_dataset* data) {
  if (!data) return 0;
  return data->data.is_real() ? data->data.dim() : 2 * data->data.dim();
}

qlu_status qlu_dataset_embedding(const qlu_dataset* data, double* out) {
  return guarded([&] { write_matrix(checked(data).embedding(), out); });
}

void qlu_dataset_free(qlu_dataset* data) { delete data; }

// --- molecules --------------------------------------------------------------

qlu_status qlu_molecules_load(const char* path, qlu_molecules** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    auto batch = qlu::load_xyz_batch(path);
    auto* m = new qlu_molecules;
    m->records = std::move(batch.records);
    for (const auto& e : batch.errors) {
      m->errors.push_back(e.file + (e.line > 0 ? ":" + std::to_string(e.line) : std::string()) + ": " +
                          e.message);
    }
    *out = m;
  });
}

int qlu_molecules_count(const qlu_molecules* mols) { return mols ? static_cast<int>(mols->records.size()) : 0; }

const char* qlu_molecules_name(const qlu_molecules* mols, int index) {
  if (!mols || index < 0 || index >= static_cast<int>(mols->records.size())) return nullptr;
  return mols->records[static_cast<std::size_t>(index)].name.c_str();
}

int qlu_molecules_error_count(const qlu_molecules* mols) { return mols ? static_cast<int>(mols->errors.size()) : 0; }

const char* qlu_molecules_error(const qlu_molecules* mols, int index) {
  if (!mols || index < 0 || index >= static_cast<int>(mols->errors.size())) return nullptr;
  return mols->errors[static_cast<std::size_t>(index)].c_str();
}

int qlu_molecules_max_heavy_pairs(const qlu_molecules* mols) {
  int best = 0;
  if (mols) {
    for (const auto& r : mols->records) best = std::max(best, r.heavy_pairs());
  }
  return best;
}

int qlu_molecules_descriptor_count(const qlu_molecules* mols) {
  return mols && !mols->records.empty() ? static_cast<int>(mols->records.front().descriptors.size()) : 0;
}

const char* qlu_molecules_descriptor_name(const qlu_molecules* mols, int index) {
  if (index < 0 || index >= qlu_molecules_descriptor_count(mols)) return nullptr;
  return mols->records.front().descriptors[static_cast<std::size_t>(index)].first.c_str();
}

qlu_status qlu_molecules_descriptor(const qlu_molecules* mols, const char* key, double* values) {
  return guarded([&] {
    require(mols != nullptr && key != nullptr && values != nullptr, "null argument");
    for (std::size_t i = 0; i < mols->records.size(); ++i) {
      const auto v = mols->records[i].descriptor(key);
      if (!v) throw qlu::InvalidArgument(mols->records[i].name + ": missing descriptor '" + key + "'");
      values[i] = *v;
    }
  });
}

qlu_status qlu_molecules_fingerprints(const qlu_molecules* mols, int pad_len, qlu_dataset** out) {
  return guarded([&] {
    require(mols != nullptr && out != nullptr, "null argument");
    const int pad = pad_len > 0 ? pad_len : qlu_molecules_max_heavy_pairs(mols);
    qlu::Dataset d;
    for (const auto& r : mols->records) d.vectors.push_back(qlu::sid_fingerprint(r, pad));
    *out = new qlu_dataset{std::move(d)};
  });
}

void qlu_molecules_free(qlu_molecules* mols) { delete mols; }

qlu_status qlu_binarize_by_mean(const double* values, int n, int* labels) {
  return guarded([&] {
    require(values != nullptr && labels != nullptr, "null argument");
    require(n >= 2, "need at least two values");
    const auto tags = qlu::binarize_by_mean(std::vector<double>(values, values + n));
    std::copy(tags.begin(), tags.end(), labels);
  });
}

// --- training ---------------------------------------------------------------

void qlu_train_options_default(qlu_train_options* o) {
  if (!o) return;
  const qlu::TrainingConfig cfg;
  const qlu::LindbladSpec spec;
  o->inputs = cfg.architecture.inputs;
  o->hidden = cfg.architecture.hidden;
  o->outputs = cfg.architecture.outputs;
  o->mask = QLU_MASK_NO_DIRECT_IO;
  o->allow_onsite = cfg.allow_onsite ? 1 : 0;
  o->max_iterations = cfg.max_iterations;
  o->particles = cfg.particles;
  o->h_max = cfg.h_max;
  o->mutation = QLU_MUTATION_UNIFORM;
  o->mutation_value = cfg.mutation.value;
  o->seed = cfg.seed;
  o->cost_mode = QLU_COST_CLUSTERING;
  o->window = cfg.window;
  o->min_delta = cfg.min_delta;
  o->threads = cfg.threads;
  o->init_retries = cfg.init_retries;
  o->gamma_in = spec.gamma_in;
  o->gamma_out = spec.gamma_out;
  o->gamma_dephase = spec.gamma_dephase;
}

qlu_status qlu_train(const qlu_dataset* data, const qlu_train_options* options, qlu_model** out) {
  return guarded([&] {
    require(options != nullptr && out != nullptr, "null argument");
    const auto& d = checked(data);
    const auto cfg = config_from(*options);
    auto spec = qlu::LindbladSpec::for_architecture(cfg.architecture, options->gamma_in, options->gamma_out,
                                                    options->gamma_dephase);
    auto* m = new qlu_model{qlu::train(d, spec, cfg), spec, d.size()};
    *out = m;
  });
}

int qlu_model_size(const qlu_model* m) { return m ? m->n : 0; }
int qlu_model_sites(const qlu_model* m) { return m ? m->result.hamiltonian.sites() : 0; }
int qlu_model_outputs(const qlu_model* m) { return m ? static_cast<int>(m->spec.output_sites.size()) : 0; }
int qlu_model_iterations(const qlu_model* m) { return m ? static_cast<int>(m->result.trace.steps.size()) : 0; }
int qlu_model_converged(const qlu_model* m) { return m && m->result.trace.converged ? 1 : 0; }
long long qlu_model_network_solves(const qlu_model* m) { return m ? m->result.trace.network_solves : 0; }
long long qlu_model_input_solves(const qlu_model* m) { return m ? m->result.trace.input_solves : 0; }

qlu_status qlu_model_partition(const qlu_model* model, int* labels) {
  return guarded([&] { write_labels(checked(model).result.partition, labels); });
}

qlu_status qlu_model_hamiltonian(const qlu_model* model, double* out) {
  return guarded([&] { write_matrix(checked(model).result.hamiltonian.matrix(), out); });
}

int qlu_model_accepted_count(const qlu_model* m) {
  return m ? static_cast<int>(m->result.trace.accepted_costs.size()) : 0;
}

qlu_status qlu_model_accepted_costs(const qlu_model* model, double* costs, int* iterations) {
  return guarded([&] {
    const auto& t = checked(model).result.trace;
    require(costs != nullptr, "costs buffer is null");
    std::copy(t.accepted_costs.begin(), t.accepted_costs.end(), costs);
    if (iterations) std::copy(t.accepted_iterations.begin(), t.accepted_iterations.end(), iterations);
  });
}

qlu_status qlu_model_write_trace(const qlu_model* model, const char* path) {
  return guarded([&] {
    require(path != nullptr, "null path");
    const auto& m = checked(model);
    std::ofstream os(path);
    if (!os) throw qlu::IoError(std::string("cannot write ") + path);
    m.result.trace.write_log(os);
    if (!os) throw qlu::IoError(std::string("write failed: ") + path);
  });
}

qlu_status qlu_model_assign(const qlu_model* model, const qlu_dataset* data, int* labels) {
  return guarded([&] {
    const auto& m = checked(model);
    write_labels(qlu::assign(m.result.hamiltonian, checked(data), m.spec), labels);
  });
}

qlu_status qlu_model_currents(const qlu_model* model, const qlu_dataset* data, double* out) {
  return guarded([&] {
    const auto& m = checked(model);
    write_matrix(qlu::current_matrix(m.result.hamiltonian, checked(data), m.spec), out);
  });
}

void qlu_model_free(qlu_model* model) { delete model; }

qlu_status qlu_steady_currents(const double* h, int inputs, int hidden, int outputs, const double* psi_re,
                               const double* psi_im, double gamma_in, double gamma_out, double gamma_dephase,
                               double* currents, double* injection) {
  return guarded([&] {
    require(psi_re != nullptr && currents != nullptr, "null argument");
    require(inputs >= 1 && hidden >= 0 && outputs >= 1, "architecture sizes must be positive");
    const qlu::Architecture arch{inputs, hidden, outputs};
    const int d = arch.sites();
    const std::vector<std::vector<bool>> all(static_cast<std::size_t>(d), std::vector<bool>(static_cast<std::size_t>(d), true));
    const qlu::Hamiltonian ham(qlu::NetworkTopology(arch, all, true), read_matrix(h, d, d));
    qlu::ComplexVector psi(inputs);
    for (int i = 0; i < inputs; ++i) psi(i) = qlu::Complex(psi_re[i], psi_im ? psi_im[i] : 0.0);
    auto spec = qlu::LindbladSpec::for_architecture(arch, gamma_in, gamma_out, gamma_dephase).with_input(psi);
    const auto rho = qlu::steady_state(qlu::build_liouvillian(ham, spec));
    const auto j = qlu::output_currents(rho, spec);
    for (int r = 0; r < outputs; ++r) currents[r] = j(r);
    if (injection) *injection = qlu::injection_current(rho, spec);
  });
}

// --- validation -------------------------------------------------------------

qlu_status qlu_rand_index(const int* a, const int* b, int n, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = qlu::rand_index(partition_from(a, n), partition_from(b, n));
  });
}

qlu_status qlu_adjusted_rand_index(const int* a, const int* b, int n, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = qlu::adjusted_rand_index(partition_from(a, n), partition_from(b, n));
  });
}

qlu_status qlu_compactness(const qlu_dataset* data, const int* labels, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto& d = checked(data);
    *out = qlu::compactness(d.embedding(), partition_from(labels, d.size()));
  });
}

qlu_status qlu_dunn_index(const qlu_dataset* data, const int* labels, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto& d = checked(data);
    *out = qlu::dunn_index(d.embedding(), partition_from(labels, d.size()));
  });
}

qlu_status qlu_silhouette(const qlu_dataset* data, const int* labels, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto& d = checked(data);
    *out = qlu::silhouette(d.embedding(), partition_from(labels, d.size()));
  });
}

qlu_status qlu_hungarian(const double* cost, int q, int* assignment) {
  return guarded([&] {
    require(assignment != nullptr, "null output");
    const auto a = qlu::hungarian(read_matrix(cost, q, q));
    std::copy(a.begin(), a.end(), assignment);
  });
}

qlu_status qlu_stability(const int* runs, int r, int n, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    *out = qlu::stability(runs_from(runs, r, n));
  });
}

qlu_status qlu_consensus(const int* runs, int r, int n, double* out) {
  return guarded([&] { write_matrix(qlu::consensus(runs_from(runs, r, n)), out); });
}

qlu_status qlu_consensus_clusters(const double* c, int n, int q, int* labels) {
  return guarded([&] { write_labels(qlu::consensus_clusters(read_matrix(c, n, n), q), labels); });
}

qlu_status qlu_unanimous_groups(const double* c, int n, int* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = qlu::unanimous_groups(read_matrix(c, n, n));
  });
}

// --- k-means ----------------------------------------------------------------

void qlu_kmeans_options_default(qlu_kmeans_options* o) {
  if (!o) return;
  const qlu::KMeansConfig cfg;
  o->k = cfg.k;
  o->restarts = cfg.restarts;
  o->max_iters = cfg.max_iters;
  o->seed = cfg.seed;
  o->init = QLU_KMEANS_PLUS_PLUS;
  o->threads = cfg.threads;
}

qlu_status qlu_kmeans(const qlu_dataset* data, const qlu_kmeans_options* options, int* labels, double* inertia) {
  return guarded([&] {
    require(options != nullptr, "null options");
    require(options->init == QLU_KMEANS_PLUS_PLUS || options->init == QLU_KMEANS_RANDOM, "unknown init");
    qlu::KMeansConfig cfg;
    cfg.k = options->k;
    cfg.restarts = options->restarts;
    cfg.max_iters = options->max_iters;
    cfg.seed = options->seed;
    cfg.init = options->init == QLU_KMEANS_RANDOM ? qlu::KMeansInit::random : qlu::KMeansInit::plus_plus;
    cfg.threads = options->threads;
    const auto result = qlu::kmeans(checked(data), cfg);
    write_labels(result.partition, labels);
    if (inertia) *inertia = result.inertia;
  });
}

}  // extern "C"
