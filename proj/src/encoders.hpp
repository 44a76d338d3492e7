#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dataset.hpp"

namespace qlu {

// ---------------------------------------------------------------------------
// Synthetic position task

struct SyntheticSpec {
  std::vector<RealVector> base_points;  // q vectors of length L; normalized on use
  double omega = 0.15;
  int n = 60;
  std::uint64_t seed = 0;
};

/// The four 3-d base points of the position benchmark, unit-normalized.
std::vector<RealVector> default_base_points();

/// Points (1-w) b_i + w u_n renormalized, u_n uniform on the sphere. Group i
/// gets n/q points (the first n%q groups one more); labels are 1..q in order.
Dataset synthetic_sphere(const SyntheticSpec& spec);

// ---------------------------------------------------------------------------
// Localization task

/// (sum_i |v_i|^4)^-1; throws unless ||v|| = 1 within 1e-9.
double ipr(const ComplexVector& v);

struct IprSpec {
  int dim = 10;
  int n = 50;
  double delta = 7.0;
  std::uint64_t seed = 0;
  long max_draws = 400000;  // rejection budget per vector
};

/// n/2 localized vectors (label 1) with IPR <= xi and the rest extended
/// (label 2) with IPR >= L - xi, xi = (L - delta)/2. One vector of each band
/// is pinned within 0.05 of its threshold, so the measured gap lies in
/// [delta, delta + 0.1]. Amplitudes are square roots of Dirichlet draws.
Dataset ipr_dataset(const IprSpec& spec);

// ---------------------------------------------------------------------------
// Molecules

struct Atom {
  std::string symbol;
  int z = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // Angstrom
};

struct MoleculeRecord {
  std::string name;
  std::vector<Atom> atoms;
  std::vector<std::pair<std::string, double>> descriptors;

  int heavy_atoms() const;
  int heavy_pairs() const;
  std::optional<double> descriptor(const std::string& key) const;
};

/// Atomic number for an element symbol; 0 when unknown.
int atomic_number(const std::string& symbol);

/// Sorted heavy-atom distances, zero-padded to pad_len and normalized.
ComplexVector sid_fingerprint(const MoleculeRecord& mol, int pad_len);

/// 1 where value > mean, else 0.
std::vector<int> binarize_by_mean(const std::vector<double>& values);

struct XyzError {
  std::string file;
  int line = 0;
  std::string message;
};

struct XyzBatch {
  std::vector<MoleculeRecord> records;
  std::vector<XyzError> errors;
};

/// Column names of the QM9 property line, after the "gdb <idx>" prefix.
const std::vector<std::string>& qm9_property_names();

/// Parses one extended-XYZ stream; throws ParseError with the line number.
MoleculeRecord read_xyz(std::istream& in, const std::string& name);

/// Reads every *.xyz file of a directory in name order (or a single file).
/// Files that fail to parse are reported in `errors` and skipped.
XyzBatch load_xyz_batch(const std::string& path);

// ---------------------------------------------------------------------------
// Tabular data

/// Four numeric features plus a species column; header optional. Species
/// are numbered 1.. in order of first appearance.
Dataset load_iris(const std::string& path, bool drop_sepal_width);

/// Normalizes each row of `rows` into a state vector.
Dataset dataset_from_rows(const RealMatrix& rows, std::optional<std::vector<int>> labels = std::nullopt);

/// Header "re_1..re_L[,im_1..im_L],label"; the label field is empty when absent.
void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in, const std::string& name = "<stream>");

}  // namespace qlu
