/*
 * qlustering: clustering by steady-state currents of an open quantum network.
 *
 * C interface. Objects are opaque handles released with the matching
 * *_free function. Every fallible call returns a qlu_status; on failure the
 * message is available from qlu_last_error() on the same thread.
 *
 * Matrices cross the boundary as row-major double arrays. Cluster labels
 * are 1-based. Caller-provided output buffers must have the documented size.
 */
#ifndef QLUSTERING_QLUSTERING_H
#define QLUSTERING_QLUSTERING_H

#include <stdint.h>

#if defined(_WIN32)
#  if defined(QLU_BUILDING_LIBRARY)
#    define QLU_API __declspec(dllexport)
#  else
#    define QLU_API __declspec(dllimport)
#  endif
#else
#  define QLU_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qlu_status {
  QLU_OK = 0,
  QLU_ERR_INVALID_ARGUMENT = 1,
  QLU_ERR_DIMENSION_MISMATCH = 2,
  QLU_ERR_DEGENERATE_STEADY_STATE = 3,
  QLU_ERR_NO_STEADY_STATE = 4,
  QLU_ERR_PARSE = 5,
  QLU_ERR_IO = 6,
  QLU_ERR_INFEASIBLE = 7,
  QLU_ERR_INTERNAL = 99
} qlu_status;

QLU_API const char* qlu_version(void);

/* Message of the last failed call on this thread; "" if none. */
QLU_API const char* qlu_last_error(void);

QLU_API const char* qlu_status_name(qlu_status status);

/* ------------------------------------------------------------------------ */
/* Datasets: unit-norm state vectors with optional ground-truth labels.     */

typedef struct qlu_dataset qlu_dataset;

/* base_points: q x dim, or NULL for the built-in four 3-d base points. */
QLU_API qlu_status qlu_dataset_synthetic(const double* base_points, int q, int dim, double omega, int n,
                                         uint64_t seed, qlu_dataset** out);

/* Localized/extended bands separated by an IPR gap of delta. */
QLU_API qlu_status qlu_dataset_ipr(int dim, int n, double delta, uint64_t seed, qlu_dataset** out);

QLU_API qlu_status qlu_dataset_iris(const char* path, int drop_sepal_width, qlu_dataset** out);

/* rows: n x dim, each row normalized on input; labels may be NULL. */
QLU_API qlu_status qlu_dataset_from_rows(const double* rows, int n, int dim, const int* labels,
                                         qlu_dataset** out);

QLU_API qlu_status qlu_dataset_read_csv(const char* path, qlu_dataset** out);
QLU_API qlu_status qlu_dataset_write_csv(const qlu_dataset* data, const char* path);

QLU_API int qlu_dataset_size(const qlu_dataset* data);
QLU_API int qlu_dataset_dim(const qlu_dataset* data);
QLU_API int qlu_dataset_has_labels(const qlu_dataset* data);

/* labels: size(data) entries. */
QLU_API qlu_status qlu_dataset_labels(const qlu_dataset* data, int* labels);

/* Columns of the real embedding: dim for real data, 2*dim otherwise. */
QLU_API int qlu_dataset_embedding_dim(const qlu_dataset* data);
QLU_API qlu_status qlu_dataset_embedding(const qlu_dataset* data, double* out);

QLU_API void qlu_dataset_free(qlu_dataset* data);

/* ------------------------------------------------------------------------ */
/* Molecules from extended-XYZ files.                                       */

typedef struct qlu_molecules qlu_molecules;

/* path: a directory of *.xyz files or a single file. Unparseable files are
 * skipped and listed by qlu_molecules_error. */
QLU_API qlu_status qlu_molecules_load(const char* path, qlu_molecules** out);

QLU_API int qlu_molecules_count(const qlu_molecules* mols);
QLU_API const char* qlu_molecules_name(const qlu_molecules* mols, int index);
QLU_API int qlu_molecules_error_count(const qlu_molecules* mols);
QLU_API const char* qlu_molecules_error(const qlu_molecules* mols, int index);
QLU_API int qlu_molecules_max_heavy_pairs(const qlu_molecules* mols);

/* Number and names of the descriptors of the first record. */
QLU_API int qlu_molecules_descriptor_count(const qlu_molecules* mols);
QLU_API const char* qlu_molecules_descriptor_name(const qlu_molecules* mols, int index);

/* values: count(mols) entries. */
QLU_API qlu_status qlu_molecules_descriptor(const qlu_molecules* mols, const char* key, double* values);

/* Sorted heavy-atom distance fingerprints; pad_len <= 0 uses the maximum
 * heavy-pair count. */
QLU_API qlu_status qlu_molecules_fingerprints(const qlu_molecules* mols, int pad_len, qlu_dataset** out);

QLU_API void qlu_molecules_free(qlu_molecules* mols);

/* labels[i] = 1 if values[i] > mean else 0. */
QLU_API qlu_status qlu_binarize_by_mean(const double* values, int n, int* labels);

/* ------------------------------------------------------------------------ */
/* Training.                                                                */

enum { QLU_MASK_NO_DIRECT_IO = 0, QLU_MASK_LAYERED = 1 };
enum { QLU_MUTATION_UNIFORM = 0, QLU_MUTATION_CONSTANT = 1, QLU_MUTATION_GAUSSIAN = 2 };
enum { QLU_COST_CLUSTERING = 0, QLU_COST_LOCALIZATION = 1 };

typedef struct qlu_train_options {
  int inputs;
  int hidden;
  int outputs;
  int mask;
  int allow_onsite;
  int max_iterations;
  int particles;
  double h_max;
  int mutation;
  double mutation_value;
  uint64_t seed;
  int cost_mode;
  int window;
  double min_delta;
  int threads;
  int init_retries;
  double gamma_in;
  double gamma_out;
  double gamma_dephase;
} qlu_train_options;

QLU_API void qlu_train_options_default(qlu_train_options* options);

typedef struct qlu_model qlu_model;

QLU_API qlu_status qlu_train(const qlu_dataset* data, const qlu_train_options* options, qlu_model** out);

/* Number of inputs the model was trained on. */
QLU_API int qlu_model_size(const qlu_model* model);
QLU_API int qlu_model_sites(const qlu_model* model);
QLU_API int qlu_model_outputs(const qlu_model* model);
QLU_API int qlu_model_iterations(const qlu_model* model);
QLU_API int qlu_model_converged(const qlu_model* model);
QLU_API long long qlu_model_network_solves(const qlu_model* model);
QLU_API long long qlu_model_input_solves(const qlu_model* model);

/* labels: size(model) entries. */
QLU_API qlu_status qlu_model_partition(const qlu_model* model, int* labels);

/* out: sites x sites. */
QLU_API qlu_status qlu_model_hamiltonian(const qlu_model* model, double* out);

/* Initial cost followed by every accepted cost; iterations may be NULL. */
QLU_API int qlu_model_accepted_count(const qlu_model* model);
QLU_API qlu_status qlu_model_accepted_costs(const qlu_model* model, double* costs, int* iterations);

/* Initial cost line, then one line per iteration: entry, acceptance,
 * incumbent cost, candidate values and costs. */
QLU_API qlu_status qlu_model_write_trace(const qlu_model* model, const char* path);

QLU_API qlu_status qlu_model_assign(const qlu_model* model, const qlu_dataset* data, int* labels);

/* out: size(data) x outputs. */
QLU_API qlu_status qlu_model_currents(const qlu_model* model, const qlu_dataset* data, double* out);

QLU_API void qlu_model_free(qlu_model* model);

/* Steady-state output currents of one input via the full Liouvillian null
 * space. h: sites x sites symmetric; psi_im may be NULL; injection may be
 * NULL. currents: outputs entries. */
QLU_API qlu_status qlu_steady_currents(const double* h, int inputs, int hidden, int outputs,
                                       const double* psi_re, const double* psi_im, double gamma_in,
                                       double gamma_out, double gamma_dephase, double* currents,
                                       double* injection);

/* ------------------------------------------------------------------------ */
/* Validation.                                                              */

QLU_API qlu_status qlu_rand_index(const int* a, const int* b, int n, double* out);
QLU_API qlu_status qlu_adjusted_rand_index(const int* a, const int* b, int n, double* out);
QLU_API qlu_status qlu_compactness(const qlu_dataset* data, const int* labels, double* out);
QLU_API qlu_status qlu_dunn_index(const qlu_dataset* data, const int* labels, double* out);
QLU_API qlu_status qlu_silhouette(const qlu_dataset* data, const int* labels, double* out);

/* cost: q x q; assignment[row] = column (0-based). */
QLU_API qlu_status qlu_hungarian(const double* cost, int q, int* assignment);

/* runs: r x n labels. */
QLU_API qlu_status qlu_stability(const int* runs, int r, int n, double* out);

/* out: n x n co-clustering frequencies. */
QLU_API qlu_status qlu_consensus(const int* runs, int r, int n, double* out);

/* Average linkage on 1 - c, cut at q clusters. */
QLU_API qlu_status qlu_consensus_clusters(const double* c, int n, int q, int* labels);

/* Classes of points co-clustered in every run (c_ij = 1). */
QLU_API qlu_status qlu_unanimous_groups(const double* c, int n, int* out);

/* ------------------------------------------------------------------------ */
/* k-means baseline.                                                        */

enum { QLU_KMEANS_PLUS_PLUS = 0, QLU_KMEANS_RANDOM = 1 };

typedef struct qlu_kmeans_options {
  int k;
  int restarts;
  int max_iters;
  uint64_t seed;
  int init;
  int threads;
} qlu_kmeans_options;

QLU_API void qlu_kmeans_options_default(qlu_kmeans_options* options);

/* labels: size(data) entries; inertia may be NULL. */
QLU_API qlu_status qlu_kmeans(const qlu_dataset* data, const qlu_kmeans_options* options, int* labels,
                              double* inertia);

#ifdef __cplusplus
}
#endif

#endif /* QLUSTERING_QLUSTERING_H */
