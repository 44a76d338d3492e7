#include "encoders.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "errors.hpp"
#include "random.hpp"

namespace qlu {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

// Accepts Mathematica-style exponents ("1.5*^-6") as written by some QM9 dumps.
std::optional<double> parse_number(std::string s) {
  if (const auto pos = s.find("*^"); pos != std::string::npos) s.replace(pos, 2, "e");
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

bool is_heavy(const Atom& a) { return a.z != 1; }

// Dirichlet(alpha) draw returned as probabilities, sampled in log space so
// tiny concentrations do not underflow.
RealVector dirichlet(Rng& rng, int dim, double alpha) {
  RealVector logs(dim);
  for (int i = 0; i < dim; ++i) {
    double u;
    do {
      u = uniform(rng, 0.0, 1.0);
    } while (u <= 0.0);
    logs(i) = std::log(gamma_variate(rng, alpha + 1.0)) + std::log(u) / alpha;
  }
  const RealVector w = (logs.array() - logs.maxCoeff()).exp();
  return w / w.sum();
}

ComplexVector draw_band(Rng& rng, int dim, double lo, double hi, long budget) {
  static constexpr double kAlphas[] = {0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 200.0};
  constexpr long n_alpha = sizeof(kAlphas) / sizeof(kAlphas[0]);
  for (long draw = 0; draw < budget; ++draw) {
    const RealVector p = dirichlet(rng, dim, kAlphas[draw % n_alpha]);
    const double value = 1.0 / p.squaredNorm();
    if (value >= lo && value <= hi) {
      ComplexVector v = p.array().sqrt().matrix().cast<Complex>();
      return v / v.norm();
    }
  }
  throw Infeasible("IPR band [" + std::to_string(lo) + ", " + std::to_string(hi) +
                   "] not reached within the rejection budget");
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<RealVector> default_base_points() {
  std::vector<RealVector> b(4, RealVector(3));
  b[0] << 0.99, 0.11, 0.11;
  b[1] << 0.11, 0.99, 0.11;
  b[2] << 0.11, 0.11, 0.99;
  b[3] << 1.0, 1.0, 1.0;
  for (auto& v : b) v.normalize();
  return b;
}

Dataset synthetic_sphere(const SyntheticSpec& spec) {
  if (!(spec.omega > 0.0 && spec.omega <= 1.0)) {
    throw InvalidArgument("omega must lie in (0, 1]");
  }
  const int q = static_cast<int>(spec.base_points.size());
  if (q < 1) throw InvalidArgument("need at least one base point");
  if (spec.n < q) throw InvalidArgument("need at least one point per group");
  const auto dim = spec.base_points.front().size();
  for (const auto& b : spec.base_points) {
    if (b.size() != dim) throw DimensionMismatch("base points differ in length");
    if (!(b.norm() > 0.0)) throw InvalidArgument("zero base point");
  }

  Rng rng = substream(spec.seed, "data");
  Dataset out;
  out.labels.emplace();
  for (int g = 0; g < q; ++g) {
    const RealVector base = spec.base_points[static_cast<std::size_t>(g)].normalized();
    const int count = spec.n / q + (g < spec.n % q ? 1 : 0);
    for (int k = 0; k < count; ++k) {
      RealVector u(dim);
      do {
        for (Eigen::Index i = 0; i < dim; ++i) u(i) = standard_normal(rng);
      } while (!(u.norm() > 0.0));
      u.normalize();
      RealVector x = (1.0 - spec.omega) * base + spec.omega * u;
      out.vectors.push_back(normalized_state(x));
      out.labels->push_back(g + 1);
    }
  }
  return out;
}

double ipr(const ComplexVector& v) {
  if (v.size() == 0 || std::abs(v.norm() - 1.0) > 1e-9) throw InvalidArgument("ipr needs a unit-norm vector");
  return 1.0 / v.cwiseAbs2().squaredNorm();
}

Dataset ipr_dataset(const IprSpec& spec) {
  const double l = spec.dim;
  if (spec.dim < 2) throw InvalidArgument("ipr_dataset: dimension must be >= 2");
  if (!(spec.delta > 0.0 && spec.delta < l - 1.0)) throw InvalidArgument("ipr_dataset: need 0 < delta < L - 1");
  if (spec.n < 2) throw InvalidArgument("ipr_dataset: need at least two vectors");
  if (spec.max_draws < 1) throw InvalidArgument("ipr_dataset: rejection budget must be positive");

  const double xi = (l - spec.delta) / 2.0;
  const double strip = 0.05;
  Rng rng = substream(spec.seed, "data");
  Dataset out;
  out.labels.emplace();
  const int n_local = spec.n / 2;
  for (int k = 0; k < n_local; ++k) {
    const double lo = k == 0 ? std::max(1.0, xi - strip) : 1.0;
    out.vectors.push_back(draw_band(rng, spec.dim, lo, xi, spec.max_draws));
    out.labels->push_back(1);
  }
  for (int k = n_local; k < spec.n; ++k) {
    const double hi = k == n_local ? std::min(l, l - xi + strip) : l;
    out.vectors.push_back(draw_band(rng, spec.dim, l - xi, hi, spec.max_draws));
    out.labels->push_back(2);
  }
  return out;
}

// ---------------------------------------------------------------------------

int atomic_number(const std::string& symbol) {
  static const std::map<std::string, int> table = {
      {"H", 1},   {"He", 2},  {"Li", 3},  {"Be", 4},  {"B", 5},   {"C", 6},  {"N", 7},
      {"O", 8},   {"F", 9},   {"Ne", 10}, {"Na", 11}, {"Mg", 12}, {"Al", 13}, {"Si", 14},
      {"P", 15},  {"S", 16},  {"Cl", 17}, {"Ar", 18}, {"K", 19},  {"Ca", 20}, {"Br", 35},
      {"I", 53}};
  const auto it = table.find(symbol);
  return it == table.end() ? 0 : it->second;
}

int MoleculeRecord::heavy_atoms() const {
  return static_cast<int>(std::count_if(atoms.begin(), atoms.end(), is_heavy));
}

int MoleculeRecord::heavy_pairs() const {
  const int h = heavy_atoms();
  return h * (h - 1) / 2;
}

std::optional<double> MoleculeRecord::descriptor(const std::string& key) const {
  for (const auto& [k, v] : descriptors) {
    if (k == key) return v;
  }
  return std::nullopt;
}

ComplexVector sid_fingerprint(const MoleculeRecord& mol, int pad_len) {
  std::vector<Eigen::Vector3d> heavy;
  for (const auto& a : mol.atoms) {
    if (is_heavy(a)) heavy.push_back(a.position);
  }
  if (heavy.size() < 2) throw InvalidArgument(mol.name + ": fewer than two heavy atoms");
  std::vector<double> d;
  for (std::size_t i = 0; i < heavy.size(); ++i) {
    for (std::size_t j = i + 1; j < heavy.size(); ++j) d.push_back((heavy[i] - heavy[j]).norm());
  }
  if (pad_len < static_cast<int>(d.size())) {
    throw InvalidArgument(mol.name + ": pad length " + std::to_string(pad_len) + " < " +
                          std::to_string(d.size()) + " heavy-atom pairs");
  }
  std::sort(d.begin(), d.end());
  RealVector v = RealVector::Zero(pad_len);
  for (std::size_t i = 0; i < d.size(); ++i) v(static_cast<Eigen::Index>(i)) = d[i];
  return normalized_state(v);
}

std::vector<int> binarize_by_mean(const std::vector<double>& values) {
  if (values.empty()) return {};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  std::vector<int> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(v > mean ? 1 : 0);
  return out;
}

const std::vector<std::string>& qm9_property_names() {
  static const std::vector<std::string> names = {"A",  "B",    "C",   "mu", "alpha", "homo", "lumo", "gap",
                                                 "r2", "zpve", "U0",  "U",  "H",     "G",    "Cv"};
  return names;
}

MoleculeRecord read_xyz(std::istream& in, const std::string& name) {
  MoleculeRecord mol;
  mol.name = name;
  std::string line;
  int line_no = 0;
  auto next = [&](const char* what) {
    if (!std::getline(in, line)) throw ParseError(name, line_no + 1, std::string("missing ") + what);
    ++line_no;
  };

  next("atom count");
  const auto count_tokens = tokens(line);
  const auto count = count_tokens.size() == 1 ? parse_number(count_tokens[0]) : std::nullopt;
  if (!count || *count < 1 || *count != std::floor(*count)) throw ParseError(name, line_no, "invalid atom count");
  const int n_atoms = static_cast<int>(*count);

  next("descriptor line");
  const auto desc = tokens(line);
  if (!desc.empty() && desc[0].find('=') != std::string::npos) {
    for (const auto& t : desc) {
      const auto eq = t.find('=');
      const auto value = eq == std::string::npos ? std::nullopt : parse_number(t.substr(eq + 1));
      if (!value) throw ParseError(name, line_no, "bad descriptor '" + t + "'");
      mol.descriptors.emplace_back(t.substr(0, eq), *value);
    }
  } else if (!desc.empty()) {
    const auto& names = qm9_property_names();
    if (desc.size() != names.size() + 2) {
      throw ParseError(name, line_no,
                       "expected 'gdb <idx>' and " + std::to_string(names.size()) + " properties");
    }
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto value = parse_number(desc[k + 2]);
      if (!value) throw ParseError(name, line_no, "non-numeric property '" + desc[k + 2] + "'");
      mol.descriptors.emplace_back(names[k], *value);
    }
  }

  for (int a = 0; a < n_atoms; ++a) {
    next("atom line");
    const auto t = tokens(line);
    if (t.size() < 4) throw ParseError(name, line_no, "atom line needs an element and three coordinates");
    Atom atom;
    atom.symbol = t[0];
    atom.z = atomic_number(t[0]);
    if (atom.z == 0) throw ParseError(name, line_no, "unknown element '" + t[0] + "'");
    for (int c = 0; c < 3; ++c) {
      const auto value = parse_number(t[static_cast<std::size_t>(c) + 1]);
      if (!value || !std::isfinite(*value)) {
        throw ParseError(name, line_no, "non-numeric coordinate '" + t[static_cast<std::size_t>(c) + 1] + "'");
      }
      atom.position(c) = *value;
    }
    mol.atoms.push_back(std::move(atom));
  }
  if (mol.heavy_atoms() < 1) throw ParseError(name, line_no, "no heavy atoms");
  return mol;
}

XyzBatch load_xyz_batch(const std::string& path) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".xyz") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else if (fs::is_regular_file(path, ec)) {
    files.emplace_back(path);
  } else {
    throw IoError("no such file or directory: " + path);
  }

  XyzBatch batch;
  for (const auto& file : files) {
    const std::string name = file.filename().string();
    std::ifstream in(file);
    if (!in) {
      batch.errors.push_back({name, 0, "cannot open"});
      continue;
    }
    try {
      batch.records.push_back(read_xyz(in, name));
    } catch (const ParseError& e) {
      batch.errors.push_back({e.file(), e.line(), e.what()});
    }
  }
  return batch;
}

// ---------------------------------------------------------------------------

Dataset load_iris(const std::string& path, bool drop_sepal_width) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::array<double, 4>> rows;
  std::vector<int> labels;
  std::vector<std::string> species;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 5) throw ParseError(path, line_no, "expected 4 features and a class column");
    std::array<double, 4> row{};
    bool numeric = true;
    for (int c = 0; c < 4; ++c) {
      const auto v = parse_number(f[static_cast<std::size_t>(c)]);
      if (!v || !std::isfinite(*v)) {
        numeric = false;
        break;
      }
      row[static_cast<std::size_t>(c)] = *v;
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw ParseError(path, line_no, "non-numeric feature");
    }
    const auto it = std::find(species.begin(), species.end(), f[4]);
    labels.push_back(static_cast<int>(it - species.begin()) + 1);
    if (it == species.end()) species.push_back(f[4]);
    rows.push_back(row);
  }
  if (rows.size() < 2) throw ParseError(path, line_no, "too few rows");

  const int dim = drop_sepal_width ? 3 : 4;
  RealMatrix m(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    int c_out = 0;
    for (int c = 0; c < 4; ++c) {
      if (drop_sepal_width && c == 1) continue;
      m(static_cast<Eigen::Index>(r), c_out++) = rows[r][static_cast<std::size_t>(c)];
    }
  }
  return dataset_from_rows(m, std::move(labels));
}

Dataset dataset_from_rows(const RealMatrix& rows, std::optional<std::vector<int>> labels) {
  if (labels && labels->size() != static_cast<std::size_t>(rows.rows())) {
    throw DimensionMismatch("label count != row count");
  }
  Dataset d;
  for (Eigen::Index r = 0; r < rows.rows(); ++r) d.vectors.push_back(normalized_state(rows.row(r).transpose()));
  d.labels = std::move(labels);
  return d;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  const int l = data.dim();
  const bool real = data.is_real();
  for (int i = 1; i <= l; ++i) out << "re_" << i << ',';
  if (!real) {
    for (int i = 1; i <= l; ++i) out << "im_" << i << ',';
  }
  out << "label\n";
  const auto old = out.precision(17);
  for (int n = 0; n < data.size(); ++n) {
    const auto& v = data.vectors[static_cast<std::size_t>(n)];
    for (int i = 0; i < l; ++i) out << v(i).real() << ',';
    if (!real) {
      for (int i = 0; i < l; ++i) out << v(i).imag() << ',';
    }
    if (data.labels) out << (*data.labels)[static_cast<std::size_t>(n)];
    out << '\n';
  }
  out.precision(old);
}

Dataset read_dataset_csv(std::istream& in, const std::string& name) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError(name, 1, "empty dataset file");
  ++line_no;
  const auto header = split(line, ',');
  if (header.size() < 2 || header.back() != "label") throw ParseError(name, 1, "header must end with 'label'");
  int n_re = 0;
  int n_im = 0;
  for (std::size_t c = 0; c + 1 < header.size(); ++c) {
    const auto& h = header[c];
    if (h.rfind("re_", 0) == 0 && n_im == 0) {
      ++n_re;
    } else if (h.rfind("im_", 0) == 0) {
      ++n_im;
    } else {
      throw ParseError(name, 1, "unexpected column '" + h + "'");
    }
  }
  if (n_re == 0 || (n_im != 0 && n_im != n_re)) throw ParseError(name, 1, "inconsistent re_/im_ columns");

  Dataset d;
  std::vector<int> labels;
  bool any_label = false;
  bool any_missing = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw ParseError(name, line_no, "wrong number of fields");
    ComplexVector v(n_re);
    for (int i = 0; i < n_re; ++i) {
      const auto re = parse_number(f[static_cast<std::size_t>(i)]);
      const auto im = n_im ? parse_number(f[static_cast<std::size_t>(n_re + i)]) : std::optional<double>(0.0);
      if (!re || !im) throw ParseError(name, line_no, "non-numeric amplitude");
      v(i) = Complex(*re, *im);
    }
    if (std::abs(v.norm() - 1.0) > 1e-9) throw ParseError(name, line_no, "vector is not unit-norm");
    d.vectors.push_back(v);
    if (f.back().empty()) {
      any_missing = true;
      labels.push_back(0);
    } else {
      const auto lab = parse_number(f.back());
      if (!lab || *lab != std::floor(*lab)) throw ParseError(name, line_no, "non-integer label");
      any_label = true;
      labels.push_back(static_cast<int>(*lab));
    }
  }
  if (any_label && any_missing) throw ParseError(name, line_no, "labels present on some rows only");
  if (any_label) d.labels = std::move(labels);
  return d;
}

}  // namespace qlu
