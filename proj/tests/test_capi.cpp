#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "qlustering/qlustering.h"

namespace {

struct Dataset {
  qlu_dataset* p = nullptr;
  ~Dataset() { qlu_dataset_free(p); }
};

struct Model {
  qlu_model* p = nullptr;
  ~Model() { qlu_model_free(p); }
};

qlu_train_options small_options() {
  qlu_train_options o;
  qlu_train_options_default(&o);
  o.inputs = 3;
  o.hidden = 1;
  o.outputs = 4;
  o.max_iterations = 30;
  o.particles = 3;
  o.window = 30;
  o.seed = 5;
  return o;
}

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("version and status names") {
    CHECK(std::string(qlu_version()).size() > 0);
    CHECK(std::string(qlu_status_name(QLU_OK)) != std::string(qlu_status_name(QLU_ERR_PARSE)));
  }

  TEST_CASE("errors carry a status and a message") {
    qlu_dataset* d = nullptr;
    CHECK(qlu_dataset_synthetic(nullptr, 4, 3, 1.5, 10, 0, &d) == QLU_ERR_INVALID_ARGUMENT);
    CHECK(d == nullptr);
    CHECK(std::string(qlu_last_error()).size() > 0);
    CHECK(qlu_dataset_iris("/nonexistent/iris.csv", 0, &d) == QLU_ERR_IO);
    CHECK(qlu_dataset_ipr(10, 50, 9.5, 0, &d) == QLU_ERR_INVALID_ARGUMENT);
    CHECK(qlu_dataset_synthetic(nullptr, 4, 3, 0.1, 10, 0, nullptr) == QLU_ERR_INVALID_ARGUMENT);

    const int a[] = {1, 2}, b[] = {1, 1};
    double out = 0;
    CHECK(qlu_rand_index(a, b, 1, &out) == QLU_ERR_INVALID_ARGUMENT);
    const double nan_cost[] = {NAN, 0, 0, 0};
    int assignment[2];
    CHECK(qlu_hungarian(nan_cost, 2, assignment) == QLU_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("synthetic dataset round trip through CSV") {
    Dataset d;
    REQUIRE(qlu_dataset_synthetic(nullptr, 4, 3, 0.15, 20, 3, &d.p) == QLU_OK);
    CHECK(qlu_dataset_size(d.p) == 20);
    CHECK(qlu_dataset_dim(d.p) == 3);
    CHECK(qlu_dataset_has_labels(d.p) == 1);
    CHECK(qlu_dataset_embedding_dim(d.p) == 3);
    std::vector<double> emb(60);
    REQUIRE(qlu_dataset_embedding(d.p, emb.data()) == QLU_OK);
    for (int i = 0; i < 20; ++i) {
      const double n2 = emb[3 * i] * emb[3 * i] + emb[3 * i + 1] * emb[3 * i + 1] + emb[3 * i + 2] * emb[3 * i + 2];
      CHECK(n2 == doctest::Approx(1.0).epsilon(1e-12));
    }

    const auto path = (std::filesystem::temp_directory_path() / "qlu_capi_roundtrip.csv").string();
    REQUIRE(qlu_dataset_write_csv(d.p, path.c_str()) == QLU_OK);
    Dataset back;
    REQUIRE(qlu_dataset_read_csv(path.c_str(), &back.p) == QLU_OK);
    std::vector<double> emb2(60);
    REQUIRE(qlu_dataset_embedding(back.p, emb2.data()) == QLU_OK);
    CHECK(emb == emb2);
    std::vector<int> l1(20), l2(20);
    qlu_dataset_labels(d.p, l1.data());
    qlu_dataset_labels(back.p, l2.data());
    CHECK(l1 == l2);
    std::remove(path.c_str());
  }

  TEST_CASE("from_rows validates and keeps labels") {
    const double rows[] = {1, 0, 0, 1};
    const int labels[] = {1, 2};
    Dataset d;
    REQUIRE(qlu_dataset_from_rows(rows, 2, 2, labels, &d.p) == QLU_OK);
    int got[2];
    qlu_dataset_labels(d.p, got);
    CHECK(got[1] == 2);
    const double unnormalized[] = {3, 4, 0, 1};
    Dataset scaled;
    REQUIRE(qlu_dataset_from_rows(unnormalized, 2, 2, nullptr, &scaled.p) == QLU_OK);
    double emb[4];
    qlu_dataset_embedding(scaled.p, emb);
    CHECK(emb[0] == doctest::Approx(0.6));
    CHECK(emb[1] == doctest::Approx(0.8));
    const double zero[] = {0, 0, 0, 1};
    qlu_dataset* bad = nullptr;
    CHECK(qlu_dataset_from_rows(zero, 2, 2, nullptr, &bad) == QLU_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("training, partition, currents and trace") {
    Dataset d;
    REQUIRE(qlu_dataset_synthetic(nullptr, 4, 3, 0.15, 12, 0, &d.p) == QLU_OK);
    const qlu_train_options o = small_options();
    Model m;
    REQUIRE(qlu_train(d.p, &o, &m.p) == QLU_OK);
    CHECK(qlu_model_size(m.p) == 12);
    CHECK(qlu_model_sites(m.p) == 8);
    CHECK(qlu_model_outputs(m.p) == 4);
    CHECK(qlu_model_iterations(m.p) == 30);
    CHECK(qlu_model_input_solves(m.p) >= 12LL * 3 * 30);

    std::vector<int> labels(12), assigned(12);
    REQUIRE(qlu_model_partition(m.p, labels.data()) == QLU_OK);
    REQUIRE(qlu_model_assign(m.p, d.p, assigned.data()) == QLU_OK);
    CHECK(labels == assigned);

    std::vector<double> currents(12 * 4);
    REQUIRE(qlu_model_currents(m.p, d.p, currents.data()) == QLU_OK);
    for (int i = 0; i < 12; ++i) {
      int best = 0;
      for (int r = 1; r < 4; ++r)
        if (currents[4 * i + r] > currents[4 * i + best]) best = r;
      CHECK(labels[static_cast<std::size_t>(i)] == best + 1);
    }

    // currents agree with the dense solver on the trained Hamiltonian
    std::vector<double> h(64);
    REQUIRE(qlu_model_hamiltonian(m.p, h.data()) == QLU_OK);
    std::vector<double> emb(36);
    qlu_dataset_embedding(d.p, emb.data());
    double dense[4], injection = 0;
    REQUIRE(qlu_steady_currents(h.data(), 3, 1, 4, emb.data(), nullptr, o.gamma_in, o.gamma_out, o.gamma_dephase,
                                dense, &injection) == QLU_OK);
    double sum = 0;
    for (int r = 0; r < 4; ++r) {
      CHECK(dense[r] == doctest::Approx(currents[static_cast<std::size_t>(r)]).epsilon(1e-8));
      sum += dense[r];
    }
    CHECK(sum == doctest::Approx(injection).epsilon(1e-8));

    const int n_acc = qlu_model_accepted_count(m.p);
    REQUIRE(n_acc >= 1);
    std::vector<double> costs(static_cast<std::size_t>(n_acc));
    std::vector<int> its(static_cast<std::size_t>(n_acc));
    REQUIRE(qlu_model_accepted_costs(m.p, costs.data(), its.data()) == QLU_OK);
    for (int k = 1; k < n_acc; ++k) CHECK(costs[static_cast<std::size_t>(k)] < costs[static_cast<std::size_t>(k - 1)]);

    const auto path = (std::filesystem::temp_directory_path() / "qlu_capi_trace.log").string();
    REQUIRE(qlu_model_write_trace(m.p, path.c_str()) == QLU_OK);
    CHECK(std::filesystem::file_size(path) > 0);
    std::remove(path.c_str());
  }

  TEST_CASE("training rejects mismatched inputs") {
    Dataset d;
    REQUIRE(qlu_dataset_synthetic(nullptr, 4, 3, 0.15, 12, 0, &d.p) == QLU_OK);
    qlu_train_options o = small_options();
    o.inputs = 4;
    qlu_model* m = nullptr;
    CHECK(qlu_train(d.p, &o, &m) == QLU_ERR_DIMENSION_MISMATCH);
    o = small_options();
    o.particles = 0;
    CHECK(qlu_train(d.p, &o, &m) == QLU_ERR_INVALID_ARGUMENT);
    CHECK(m == nullptr);
  }

  TEST_CASE("a disconnected network reports a degenerate steady state") {
    const double h[16] = {};
    const double psi[1] = {1.0};
    double currents[2];
    CHECK(qlu_steady_currents(h, 1, 1, 2, psi, nullptr, 1, 1, 0, currents, nullptr) ==
          QLU_ERR_DEGENERATE_STEADY_STATE);
  }

  TEST_CASE("validation entry points") {
    const int a[] = {1, 1, 2, 2}, b[] = {1, 2, 1, 2};
    double ri = 0, ari = 0;
    REQUIRE(qlu_rand_index(a, b, 4, &ri) == QLU_OK);
    REQUIRE(qlu_adjusted_rand_index(a, b, 4, &ari) == QLU_OK);
    CHECK(ri == doctest::Approx(1.0 / 3.0));
    CHECK(ari == doctest::Approx(-0.5));

    const int runs[] = {1, 1, 2, 2, 1, 2, 2, 2};
    double stab = 0;
    REQUIRE(qlu_stability(runs, 2, 4, &stab) == QLU_OK);
    CHECK(stab == 0.75);
    std::vector<double> c(16);
    REQUIRE(qlu_consensus(runs, 2, 4, c.data()) == QLU_OK);
    CHECK(c[1] == 0.5);
    int cut[4];
    REQUIRE(qlu_consensus_clusters(c.data(), 4, 2, cut) == QLU_OK);
    CHECK(cut[2] == cut[3]);

    const double cost[] = {1, 0, 0, 1};
    int assignment[2];
    REQUIRE(qlu_hungarian(cost, 2, assignment) == QLU_OK);
    CHECK(assignment[0] == 1);
    CHECK(assignment[1] == 0);

    const double rows[] = {1, 0, 0.99498743710662, 0.1, 0, 1, 0.1, 0.99498743710662};
    Dataset d;
    REQUIRE(qlu_dataset_from_rows(rows, 4, 2, nullptr, &d.p) == QLU_OK);
    const int labels[] = {1, 1, 2, 2};
    double cp = 0, dvi = 0, sil = 0;
    CHECK(qlu_compactness(d.p, labels, &cp) == QLU_OK);
    CHECK(qlu_dunn_index(d.p, labels, &dvi) == QLU_OK);
    CHECK(qlu_silhouette(d.p, labels, &sil) == QLU_OK);
    CHECK(dvi > 1.0);
    CHECK(sil > 0.8);
    const int one[] = {1, 1, 1, 1};
    CHECK(qlu_dunn_index(d.p, one, &dvi) == QLU_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("k-means entry point") {
    Dataset d;
    REQUIRE(qlu_dataset_synthetic(nullptr, 4, 3, 0.1, 40, 1, &d.p) == QLU_OK);
    qlu_kmeans_options o;
    qlu_kmeans_options_default(&o);
    o.k = 4;
    std::vector<int> labels(40), truth(40);
    double inertia = -1;
    REQUIRE(qlu_kmeans(d.p, &o, labels.data(), &inertia) == QLU_OK);
    qlu_dataset_labels(d.p, truth.data());
    double ri = 0;
    qlu_rand_index(labels.data(), truth.data(), 40, &ri);
    CHECK(ri == 1.0);
    CHECK(inertia >= 0);
    o.k = 41;
    CHECK(qlu_kmeans(d.p, &o, labels.data(), nullptr) == QLU_ERR_INVALID_ARGUMENT);
  }

  TEST_CASE("molecule loading and descriptors") {
    qlu_molecules* m = nullptr;
    REQUIRE(qlu_molecules_load(QLU_TEST_DATA_DIR "/qm9_subset", &m) == QLU_OK);
    CHECK(qlu_molecules_count(m) == 97);
    CHECK(qlu_molecules_error_count(m) == 0);
    CHECK(qlu_molecules_max_heavy_pairs(m) == 10);
    std::vector<double> cv(97);
    REQUIRE(qlu_molecules_descriptor(m, "Cv", cv.data()) == QLU_OK);
    std::vector<int> bits(97);
    REQUIRE(qlu_binarize_by_mean(cv.data(), 97, bits.data()) == QLU_OK);
    int ones = 0;
    for (int x : bits) ones += x;
    CHECK(ones > 0);
    CHECK(ones < 97);
    CHECK(qlu_molecules_descriptor(m, "nope", cv.data()) == QLU_ERR_INVALID_ARGUMENT);
    qlu_dataset* fp = nullptr;
    REQUIRE(qlu_molecules_fingerprints(m, 0, &fp) == QLU_OK);
    CHECK(qlu_dataset_dim(fp) == 10);
    qlu_dataset_free(fp);
    qlu_molecules_free(m);
  }
}
