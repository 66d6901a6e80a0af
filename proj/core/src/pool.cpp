#include "seqpareto/pool.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>

#include "seqpareto/error.hpp"
#include "seqpareto/random.hpp"

namespace seqpareto {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sha256_hex(const std::string& data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

std::string pool_digest(const std::vector<std::string>& input_names,
                        const std::vector<std::string>& objective_names,
                        const std::vector<std::vector<double>>& raw, const std::vector<ObjectiveVector>& obj) {
  std::string text = "seqpareto-pool-v1\n";
  for (const auto& n : input_names) text += n + ",";
  text += "|";
  for (const auto& n : objective_names) text += n + ",";
  text += "\n";
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (double v : raw[i]) text += format_double(v) + ",";
    text += "|";
    for (double v : obj[i]) text += format_double(v) + ",";
    text += "\n";
  }
  return sha256_hex(text);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& cell) {
  const std::string t = trim(cell);
  if (t.empty()) return std::nullopt;
  const char* first = t.data();
  if (*first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open CSV file '" + path.string() + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("CSV file '" + path.string() + "' has no header row");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
  for (auto& h : split_csv_line(line)) table.header.push_back(trim(h));
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    table.rows.push_back(split_csv_line(line));
  }
  return table;
}

std::vector<std::size_t> column_positions(const CsvTable& table, const std::vector<std::string>& names) {
  std::vector<std::size_t> pos;
  for (const auto& name : names) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) throw SchemaError("CSV is missing column '" + name + "'");
    pos.push_back(static_cast<std::size_t>(it - table.header.begin()));
  }
  return pos;
}

std::optional<std::vector<double>> parse_row(const std::vector<std::string>& row,
                                             const std::vector<std::size_t>& pos) {
  std::vector<double> out;
  out.reserve(pos.size());
  for (std::size_t p : pos) {
    if (p >= row.size()) return std::nullopt;
    const auto v = parse_number(row[p]);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const PoolManifest& m) {
  std::vector<std::string> dirs;
  for (auto d : m.directions) dirs.emplace_back(to_string(d));
  j = nlohmann::json{{"schema_version", kManifestSchemaVersion},
                     {"source", m.source},
                     {"input_columns", m.input_columns},
                     {"objective_columns", m.objective_columns},
                     {"directions", dirs},
                     {"rows", m.rows},
                     {"dropped_rows", m.dropped_rows},
                     {"digest", m.digest},
                     {"generator", m.generator},
                     {"input_min", m.input_scaling.min},
                     {"input_max", m.input_scaling.max}};
}

void from_json(const nlohmann::json& j, PoolManifest& m) {
  if (j.at("schema_version").get<int>() != kManifestSchemaVersion) {
    throw MigrationError("unsupported manifest schema version");
  }
  j.at("source").get_to(m.source);
  j.at("input_columns").get_to(m.input_columns);
  j.at("objective_columns").get_to(m.objective_columns);
  m.directions.clear();
  for (const auto& d : j.at("directions")) m.directions.push_back(parse_direction(d.get<std::string>()));
  j.at("rows").get_to(m.rows);
  j.at("dropped_rows").get_to(m.dropped_rows);
  j.at("digest").get_to(m.digest);
  m.generator = j.value("generator", nlohmann::json());
  j.at("input_min").get_to(m.input_scaling.min);
  j.at("input_max").get_to(m.input_scaling.max);
}

CandidatePool::CandidatePool(std::vector<std::vector<double>> raw_inputs, std::vector<ObjectiveVector> objectives,
                             std::vector<std::string> input_names, std::vector<std::string> objective_names,
                             std::vector<Direction> directions)
    : raw_inputs_(std::move(raw_inputs)),
      objectives_(std::move(objectives)),
      input_names_(std::move(input_names)),
      objective_names_(std::move(objective_names)),
      directions_(std::move(directions)) {
  if (raw_inputs_.size() != objectives_.size()) throw DimensionError("input and objective row counts differ");
  if (objectives_.size() < 2) throw DataError("a candidate pool needs at least two rows");
  if (objective_names_.size() != directions_.size()) {
    throw DimensionError("objective names and directions differ in length");
  }
  for (const auto& y : objectives_) {
    if (y.size() != directions_.size()) throw DimensionError("objective row has wrong length");
    for (double v : y) {
      if (!std::isfinite(v)) throw DataError("non-finite objective value in pool");
    }
  }
  auto normalized = normalize_inputs(raw_inputs_);
  inputs_ = std::move(normalized.points);
  scaling_ = std::move(normalized.scaling);
  if (input_names_.size() != scaling_.dims()) throw DimensionError("input names and columns differ in length");

  true_front_ = extract_pareto_front(inputs_, objectives_, ObjectiveSpec{directions_, {}});
  consumed_.assign(objectives_.size(), false);
  digest_ = pool_digest(input_names_, objective_names_, raw_inputs_, objectives_);

  manifest_.input_columns = input_names_;
  manifest_.objective_columns = objective_names_;
  manifest_.directions = directions_;
  manifest_.rows = objectives_.size();
  manifest_.digest = digest_;
  manifest_.input_scaling = scaling_;
}

CandidatePool CandidatePool::with_directions(std::vector<Direction> directions) const {
  CandidatePool copy(raw_inputs_, objectives_, input_names_, objective_names_, std::move(directions));
  PoolManifest manifest = manifest_;
  manifest.directions = copy.directions_;
  copy.manifest_ = std::move(manifest);
  return copy;
}

ObjectiveSpec CandidatePool::default_spec() const {
  return ObjectiveSpec{directions_, ObjectiveSpec::worst_corner(objectives_, directions_)};
}

void CandidatePool::consume(std::size_t i) {
  if (consumed_.at(i)) throw StateError("pool row " + std::to_string(i) + " already consumed");
  consumed_[i] = true;
  ++consumed_count_;
}

void CandidatePool::reset_consumption() {
  std::fill(consumed_.begin(), consumed_.end(), false);
  consumed_count_ = 0;
}

std::size_t CandidatePool::nearest_impl(std::span<const double> x, bool skip_consumed) const {
  if (x.size() != dims()) throw DimensionError("query point has wrong dimensionality");
  std::size_t best = size();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) {
    if (skip_consumed && consumed_[i]) continue;
    double s = 0.0;
    const auto& p = inputs_[i];
    for (std::size_t k = 0; k < x.size() && s < best_d; ++k) s += (x[k] - p[k]) * (x[k] - p[k]);
    if (s < best_d) {
      best_d = s;
      best = i;
    }
  }
  if (best == size()) throw CapacityError("candidate pool exhausted");
  return best;
}

std::size_t CandidatePool::nearest_unconsumed(std::span<const double> x) const {
  return nearest_impl(x, true);
}

std::size_t CandidatePool::nearest(std::span<const double> x) const { return nearest_impl(x, false); }

CandidatePool ingest_csv(const std::filesystem::path& path, const std::vector<std::string>& input_columns,
                         const std::vector<std::string>& objective_columns,
                         const std::vector<Direction>& directions) {
  if (input_columns.empty()) throw SchemaError("no input columns selected");
  if (objective_columns.empty()) throw SchemaError("no objective columns selected");
  if (directions.size() != objective_columns.size()) {
    throw ConfigError("need one direction per objective column");
  }
  const CsvTable table = read_csv(path);
  const auto in_pos = column_positions(table, input_columns);
  const auto obj_pos = column_positions(table, objective_columns);

  std::vector<std::vector<double>> raw;
  std::vector<ObjectiveVector> obj;
  std::size_t dropped = 0;
  for (const auto& row : table.rows) {
    auto x = parse_row(row, in_pos);
    auto y = parse_row(row, obj_pos);
    if (!x || !y) {
      ++dropped;
      continue;
    }
    raw.push_back(std::move(*x));
    obj.push_back(std::move(*y));
  }
  if (raw.size() < 2) {
    throw DataError("CSV '" + path.string() + "' has fewer than two valid rows");
  }
  CandidatePool pool(std::move(raw), std::move(obj), input_columns, objective_columns, directions);
  pool.manifest().source = path.string();
  pool.manifest().dropped_rows = dropped;
  return pool;
}

void write_pool_csv(const CandidatePool& pool, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write CSV file '" + path.string() + "'");
  bool first = true;
  for (const auto& n : pool.input_names()) {
    out << (first ? "" : ",") << n;
    first = false;
  }
  for (const auto& n : pool.objective_names()) out << "," << n;
  out << "\n";
  for (std::size_t i = 0; i < pool.size(); ++i) {
    first = true;
    for (double v : pool.raw_inputs()[i]) {
      out << (first ? "" : ",") << format_double(v);
      first = false;
    }
    for (double v : pool.objectives()[i]) out << "," << format_double(v);
    out << "\n";
  }
}

std::vector<ObjectiveVector> read_objectives_csv(const std::filesystem::path& path,
                                                 const std::vector<std::string>& objective_columns) {
  const CsvTable table = read_csv(path);
  const auto pos = column_positions(table, objective_columns);
  std::vector<ObjectiveVector> out;
  for (const auto& row : table.rows) {
    auto y = parse_row(row, pos);
    if (!y) throw DataError("non-numeric objective value in '" + path.string() + "'");
    out.push_back(std::move(*y));
  }
  return out;
}

std::string_view to_string(SyntheticFamily f) noexcept {
  switch (f) {
    case SyntheticFamily::ConcaveFront: return "concave";
    case SyntheticFamily::ConvexFront: return "convex";
    case SyntheticFamily::DisconnectedFront: return "disconnected";
  }
  return "?";
}

SyntheticFamily parse_family(std::string_view text) {
  if (text == "concave") return SyntheticFamily::ConcaveFront;
  if (text == "convex") return SyntheticFamily::ConvexFront;
  if (text == "disconnected") return SyntheticFamily::DisconnectedFront;
  throw ConfigError("unknown synthetic family '" + std::string(text) + "'");
}

namespace {

constexpr double kThetaLow = std::numbers::pi / 12.0;
constexpr double kThetaHigh = 5.0 * std::numbers::pi / 12.0;
// Fraction of the trailing-coordinate cube occupied by the plateau.
constexpr double kPlateauFraction = 0.04;
constexpr double kStepPenalty = 0.15;
constexpr double kSlopePenalty = 1.5;

double smoothstep(double lo, double hi, double t) {
  const double u = std::clamp((t - lo) / (hi - lo), 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

}  // namespace

double synthetic_plateau_distance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double half_width = 0.5 * std::pow(kPlateauFraction, 1.0 / static_cast<double>(x.size() - 1));
  double s = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double excess = std::max(0.0, std::abs(x[k] - 0.5) - half_width);
    s += excess * excess;
  }
  return std::sqrt(s);
}

ObjectiveVector synthetic_objectives(SyntheticFamily family, std::span<const double> x) {
  if (x.empty()) throw DimensionError("synthetic landscape needs at least one input");
  const double t = std::clamp(x[0], 0.0, 1.0);
  const double p = synthetic_plateau_distance(x);
  // Leaving the plateau costs a fixed step plus a linear slope, so only
  // plateau points can be non-dominated.
  const double penalty = p > 0.0 ? kStepPenalty + kSlopePenalty * p : 0.0;
  const double theta = kThetaLow + t * (kThetaHigh - kThetaLow);
  ObjectiveVector y;
  switch (family) {
    case SyntheticFamily::ConcaveFront:
      y = {std::cos(theta), std::sin(theta)};
      break;
    case SyntheticFamily::ConvexFront: {
      const double s = 0.1 + 0.8 * t;
      y = {(1.0 - s) * (1.0 - s), s * s};
      break;
    }
    case SyntheticFamily::DisconnectedFront: {
      const double r = 1.0 - 0.45 * (smoothstep(0.3, 0.4, t) - smoothstep(0.6, 0.7, t));
      y = {r * std::cos(theta), r * std::sin(theta)};
      break;
    }
  }
  for (double& v : y) v -= penalty;
  return y;
}

CandidatePool generate_synthetic_pool(const SyntheticSpec& spec) {
  if (spec.n < 20) throw DataError("synthetic pools need n >= 20");
  if (spec.d < 1) throw DataError("synthetic pools need d >= 1");
  if (!(spec.noise >= 0.0)) throw DataError("noise scale must be non-negative");

  ScrambledSobol sobol(spec.d, derive_seed(spec.seed, 0x706f6f6c));
  std::vector<std::vector<double>> raw = sobol.take(spec.n);
  Rng rng(derive_seed(spec.seed, 0x6e6f6973));
  std::normal_distribution<double> normal;
  std::vector<ObjectiveVector> obj;
  obj.reserve(spec.n);
  for (const auto& x : raw) {
    ObjectiveVector y = synthetic_objectives(spec.family, x);
    if (spec.noise > 0.0) {
      for (double& v : y) v += spec.noise * normal(rng);
    }
    obj.push_back(std::move(y));
  }

  std::vector<std::string> in_names;
  for (std::size_t k = 0; k < spec.d; ++k) in_names.push_back("x" + std::to_string(k + 1));
  CandidatePool pool(std::move(raw), std::move(obj), std::move(in_names), {"f1", "f2"},
                     {Direction::Maximize, Direction::Maximize});
  pool.manifest().source = "synthetic:" + std::string(to_string(spec.family));
  pool.manifest().generator = {{"family", to_string(spec.family)},
                               {"n", spec.n},
                               {"d", spec.d},
                               {"noise", spec.noise},
                               {"seed", spec.seed}};
  return pool;
}

CandidatePool subsample(const CandidatePool& pool, std::size_t cap, std::uint64_t seed) {
  if (cap < 2) throw DataError("subsample size must be >= 2");
  if (cap > pool.size()) throw DataError("subsample size exceeds pool size");
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0x63617070));
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());

  std::vector<std::vector<double>> raw;
  std::vector<ObjectiveVector> obj;
  for (std::size_t i : idx) {
    raw.push_back(pool.raw_inputs()[i]);
    obj.push_back(pool.objectives()[i]);
  }
  CandidatePool sub(std::move(raw), std::move(obj), pool.input_names(), pool.objective_names(),
                    pool.directions());
  PoolManifest manifest = pool.manifest();
  manifest.rows = sub.size();
  manifest.digest = sub.digest();
  manifest.input_scaling = sub.scaling();
  manifest.generator = {{"subsample_of", pool.digest()}, {"cap", cap}, {"seed", seed},
                        {"parent", pool.manifest().generator}};
  sub.manifest() = std::move(manifest);
  return sub;
}

}  // namespace seqpareto
