#include "config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace qlucli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

long long to_int(const std::string& s) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

std::uint64_t to_seed(const std::string& s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) throw ConfigError("not a seed: '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

std::string one_of(const std::string& s, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (s == a) return s;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ConfigError("'" + s + "' is not one of: " + list);
}

struct Key {
  std::string help;
  std::function<void(Experiment&, const std::string&, const std::string&)> apply;
};

int positive(long long v) {
  if (v < 1 || v > 1'000'000'000) throw ConfigError("expected a positive integer");
  return static_cast<int>(v);
}

int non_negative(long long v) {
  if (v < 0 || v > 1'000'000'000) throw ConfigError("expected a non-negative integer");
  return static_cast<int>(v);
}

std::string resolve(const std::string& base, const std::string& value) {
  const std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? value : (std::filesystem::path(base) / p).lexically_normal().string();
}

const std::map<std::string, Key>& keys() {
  using E = Experiment;
  using S = const std::string&;
  static const std::map<std::string, Key> table = {
      {"task", {"synthetic | localization | qm9 | iris | custom",
                [](E& e, S v, S) { e.task = one_of(v, {"synthetic", "localization", "qm9", "iris", "custom"}); }}},
      {"inputs", {"input nodes L (default: dataset dimension)", [](E& e, S v, S) { e.inputs = positive(to_int(v)); }}},
      {"hidden", {"hidden nodes M", [](E& e, S v, S) { e.hidden = non_negative(to_int(v)); }}},
      {"outputs", {"output nodes q (= cluster count)", [](E& e, S v, S) { e.outputs = positive(to_int(v)); }}},
      {"mask", {"no_direct_io | layered",
                [](E& e, S v, S) { e.mask = one_of(v, {"no_direct_io", "layered"}); }}},
      {"allow_onsite", {"train diagonal entries too (bool)", [](E& e, S v, S) { e.allow_onsite = to_bool(v); }}},
      {"data_seed", {"seed of the data stream", [](E& e, S v, S) { e.data_seed = to_seed(v); }}},
      {"n", {"number of generated points", [](E& e, S v, S) { e.n = positive(to_int(v)); }}},
      {"omega", {"group width of the synthetic task", [](E& e, S v, S) { e.omega = to_double(v); }}},
      {"base_points", {"synthetic base points 'x,y,z; x,y,z; ...'",
                       [](E& e, S v, S) {
                         e.base_points.clear();
                         std::size_t width = 0;
                         for (const auto& row : split(v, ';')) {
                           const auto r = parse_number_list(row);
                           if (width && r.size() != width) throw ConfigError("base points differ in length");
                           width = r.size();
                           e.base_points.insert(e.base_points.end(), r.begin(), r.end());
                         }
                         if (e.base_points.empty()) throw ConfigError("no base points given");
                       }}},
      {"delta_ipr", {"IPR gap of the localization task", [](E& e, S v, S) { e.delta_ipr = to_double(v); }}},
      {"drop_sepal_width", {"drop the second Iris feature (bool)",
                            [](E& e, S v, S) { e.drop_sepal_width = to_bool(v); }}},
      {"iris_path", {"Iris CSV", [](E& e, S v, S b) { e.iris_path = resolve(b, v); }}},
      {"qm9_path", {"directory of molecule .xyz files", [](E& e, S v, S b) { e.qm9_path = resolve(b, v); }}},
      {"dataset_path", {"dataset CSV for task = custom", [](E& e, S v, S b) { e.dataset_path = resolve(b, v); }}},
      {"pad_len", {"fingerprint length (0: largest heavy-pair count)",
                   [](E& e, S v, S) { e.pad_len = non_negative(to_int(v)); }}},
      {"label_descriptor", {"molecule descriptor binarized into reference tags",
                            [](E& e, S v, S) { e.label_descriptor = v; }}},
      {"scan_descriptors", {"descriptors ranked by qm9-scan (comma list)",
                            [](E& e, S v, S) { e.scan_descriptors = split(v, ','); }}},
      {"scan_partition", {"consensus | first", [](E& e, S v, S) { e.scan_partition = one_of(v, {"consensus", "first"}); }}},
      {"gamma_in", {"injection rate", [](E& e, S v, S) { e.gamma_in = to_double(v); }}},
      {"gamma_out", {"extraction rate", [](E& e, S v, S) { e.gamma_out = to_double(v); }}},
      {"gamma_dephase", {"dephasing rate", [](E& e, S v, S) { e.gamma_dephase = to_double(v); }}},
      {"iterations", {"maximum iterations T", [](E& e, S v, S) { e.iterations = positive(to_int(v)); }}},
      {"particles", {"candidates per iteration P", [](E& e, S v, S) { e.particles = positive(to_int(v)); }}},
      {"h_max", {"hopping bound", [](E& e, S v, S) { e.h_max = to_double(v); }}},
      {"mutation", {"uniform | constant:<v> | gaussian:<sigma>",
                    [](E& e, S v, S) {
                      const auto colon = v.find(':');
                      e.mutation = one_of(v.substr(0, colon), {"uniform", "constant", "gaussian"});
                      e.mutation_value = colon == std::string::npos ? 0.0 : to_double(trim(v.substr(colon + 1)));
                      if (e.mutation != "uniform" && colon == std::string::npos) {
                        throw ConfigError("mutation '" + e.mutation + "' needs a value");
                      }
                    }}},
      {"cost", {"clustering | localization",
                [](E& e, S v, S) { e.cost = one_of(v, {"clustering", "localization"}); }}},
      {"window", {"convergence window in iterations", [](E& e, S v, S) { e.window = positive(to_int(v)); }}},
      {"min_delta", {"relative improvement required per window", [](E& e, S v, S) { e.min_delta = to_double(v); }}},
      {"init_retries", {"initial draws before giving up", [](E& e, S v, S) { e.init_retries = positive(to_int(v)); }}},
      {"seeds", {"training seeds, e.g. '1..10' or '3,5,8'", [](E& e, S v, S) { e.seeds = parse_seed_list(v); }}},
      {"repeats", {"runs R (0: one per seed)", [](E& e, S v, S) { e.repeats = non_negative(to_int(v)); }}},
      {"threads", {"concurrent runs", [](E& e, S v, S) { e.threads = positive(to_int(v)); }}},
      {"sweep_axis", {"omega | delta_ipr | dephasing",
                      [](E& e, S v, S) { e.sweep_axis = one_of(v, {"omega", "delta_ipr", "dephasing"}); }}},
      {"sweep_values", {"comma list of axis values", [](E& e, S v, S) { e.sweep_values = parse_number_list(v); }}},
      {"kmeans_restarts", {"k-means restarts", [](E& e, S v, S) { e.kmeans_restarts = positive(to_int(v)); }}},
      {"kmeans_init", {"plus_plus | random",
                       [](E& e, S v, S) { e.kmeans_init = one_of(v, {"plus_plus", "random"}); }}},
      {"kmeans_seed", {"k-means seed", [](E& e, S v, S) { e.kmeans_seed = to_seed(v); }}},
      {"output", {"output directory", [](E& e, S v, S b) { e.output = resolve(b, v); }}},
  };
  return table;
}

}  // namespace

std::vector<std::uint64_t> Experiment::run_seeds() const {
  std::vector<std::uint64_t> out = seeds;
  if (out.empty()) throw ConfigError("seeds: the seed list is empty");
  if (repeats > 0) {
    while (static_cast<int>(out.size()) < repeats) out.push_back(out.back() + 1);
    out.resize(static_cast<std::size_t>(repeats));
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_seed(item));
      continue;
    }
    const auto lo = to_seed(trim(item.substr(0, dots)));
    const auto hi = to_seed(trim(item.substr(dots + 2)));
    if (hi < lo || hi - lo > 100000) throw ConfigError("bad seed range '" + item + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  if (out.empty()) throw ConfigError("the seed list is empty");
  return out;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

const std::map<std::string, std::string>& documented_keys() {
  static const std::map<std::string, std::string> docs = [] {
    std::map<std::string, std::string> m;
    for (const auto& [k, v] : keys()) m[k] = v.help;
    return m;
  }();
  return docs;
}

Experiment parse_experiment(const std::string& text, const std::string& name, const std::string& base_dir) {
  Experiment e;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = name + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = keys().find(key);
    if (it == keys().end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      it->second.apply(e, value, base_dir);
    } catch (const ConfigError& err) {
      throw ConfigError(where + key + ": " + err.what());
    }
  }
  return e;
}

Experiment load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str(), path, std::filesystem::path(path).parent_path().string());
}

}  // namespace qlucli
