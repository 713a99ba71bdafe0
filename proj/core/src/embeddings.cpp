#include "textcoherence/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "textcoherence/error.hpp"
#include "textcoherence/format.hpp"
#include "textcoherence/text.hpp"

namespace textcoherence {

namespace {

void require_finite(std::span<const double> v, const char* where) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string(where) + ": non-finite component");
  }
}

}  // namespace

DenseVector::DenseVector(std::vector<double> components) : components_(std::move(components)) {
  require_finite(components_, "DenseVector");
}

DenseVector::DenseVector(std::initializer_list<double> components)
    : DenseVector(std::vector<double>(components)) {}

bool DenseVector::is_zero() const noexcept {
  return std::all_of(components_.begin(), components_.end(), [](double x) { return x == 0.0; });
}

// ---------------------------------------------------------------------------

EmbeddingTable::EmbeddingTable(std::string name, std::size_t dim)
    : name_(std::move(name)), dim_(dim) {
  if (dim_ == 0) throw InvalidArgument("EmbeddingTable: dimension must be positive");
}

bool EmbeddingTable::insert(std::string token, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw InvalidArgument("EmbeddingTable::insert: expected " + std::to_string(dim_) +
                          " components for '" + token + "', got " + std::to_string(vector.size()));
  }
  require_finite(vector, "EmbeddingTable::insert");
  if (const auto it = rows_.find(token); it != rows_.end()) {
    std::copy(vector.begin(), vector.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
    return true;
  }
  const std::size_t row = tokens_.size();
  data_.insert(data_.end(), vector.begin(), vector.end());
  rows_.emplace(token, row);

  std::string folded = ascii_lower(token);
  const auto [it, inserted] = folded_.emplace(std::move(folded), row);
  if (!inserted && token < tokens_[it->second]) it->second = row;

  tokens_.push_back(std::move(token));
  return false;
}

bool EmbeddingTable::contains(std::string_view token) const {
  return rows_.find(std::string(token)) != rows_.end();
}

std::span<const double> EmbeddingTable::vector_at(std::size_t row) const {
  return std::span<const double>(data_).subspan(row * dim_, dim_);
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view token) const {
  const auto it = rows_.find(std::string(token));
  if (it == rows_.end()) return std::nullopt;
  return vector_at(it->second);
}

std::optional<std::span<const double>> EmbeddingTable::lookup(std::string_view token) const {
  if (auto v = find(token)) return v;
  const std::string lower = ascii_lower(token);
  if (lower != token) {
    if (auto v = find(lower)) return v;
  }
  if (const auto it = folded_.find(lower); it != folded_.end()) return vector_at(it->second);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

EmbeddingTable read_vectors_text(std::istream& in, std::string name, VectorLoadReport* report) {
  VectorLoadReport local;
  VectorLoadReport& rep = report ? *report : local;
  rep = VectorLoadReport{};

  std::string line;
  if (!std::getline(in, line)) throw DataError(name + ": empty vector file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  std::size_t count = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_number(header[0], count) || !parse_number(header[1], dim) ||
      dim == 0) {
    throw DataError(name + ": line 1: expected header \"count dim\"");
  }
  rep.declared_count = count;

  EmbeddingTable table(name, dim);
  std::vector<double> values(dim);
  std::size_t line_no = 1;
  std::size_t entries = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    const std::string where = name + ": line " + std::to_string(line_no);
    if (fields.size() != dim + 1) {
      throw DataError(where + ": expected " + std::to_string(dim) + " components, found " +
                      std::to_string(fields.size() - 1));
    }
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_number(fields[k + 1], values[k]) || !std::isfinite(values[k])) {
        throw DataError(where + ": non-numeric component '" + std::string(fields[k + 1]) + "'");
      }
    }
    ++entries;
    if (table.insert(std::string(fields[0]), values)) {
      ++rep.duplicate_tokens;
      rep.warnings.push_back(where + ": duplicate token '" + std::string(fields[0]) +
                             "' overwrites earlier vector");
    }
  }
  if (entries != count) {
    throw DataError(name + ": header declares " + std::to_string(count) + " entries but file has " +
                    std::to_string(entries));
  }
  return table;
}

EmbeddingTable load_vectors_text(const std::filesystem::path& path, VectorLoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open vector file: " + path.string());
  return read_vectors_text(in, path.string(), report);
}

void write_vectors_text(const EmbeddingTable& table, std::ostream& out) {
  out << table.size() << ' ' << table.dim() << '\n';
  for (std::size_t row = 0; row < table.size(); ++row) {
    out << table.tokens()[row];
    for (double x : table.vector_at(row)) out << ' ' << format_roundtrip(x);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Arithmetic

DenseVector mean_vector(std::span<const std::span<const double>> vectors) {
  if (vectors.empty()) throw InvalidArgument("mean_vector: empty list");
  const std::size_t dim = vectors.front().size();
  std::vector<double> sum(dim, 0.0);
  for (const auto& v : vectors) {
    if (v.size() != dim) throw InvalidArgument("mean_vector: mixed dimensions");
    for (std::size_t i = 0; i < dim; ++i) sum[i] += v[i];
  }
  const double n = static_cast<double>(vectors.size());
  for (double& x : sum) x /= n;
  return DenseVector(std::move(sum));
}

DenseVector mean_vector(std::span<const DenseVector> vectors) {
  std::vector<std::span<const double>> views;
  views.reserve(vectors.size());
  for (const DenseVector& v : vectors) views.push_back(v.view());
  return mean_vector(std::span<const std::span<const double>>(views));
}

double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw InvalidArgument("dot: mixed dimensions");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw InvalidArgument("cosine: mixed dimensions");
  const double uu = dot(u, u);
  const double vv = dot(v, v);
  if (uu == 0.0 || vv == 0.0) throw InvalidArgument("cosine: zero-norm vector");
  // sqrt(uu * vv) keeps cosine(u, u) exactly 1.
  const double c = dot(u, v) / std::sqrt(uu * vv);
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace textcoherence
