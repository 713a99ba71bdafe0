#pragma once

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace textcoherence {

// Owning dense vector of finite doubles.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::vector<double> components);
  DenseVector(std::initializer_list<double> components);

  std::size_t dim() const noexcept { return components_.size(); }
  std::span<const double> view() const noexcept { return components_; }
  double operator[](std::size_t i) const { return components_[i]; }

  bool is_zero() const noexcept;

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> components_;
};

// Token -> vector map with one shared dimension. Vectors are stored
// contiguously; lookups hand out views valid for the table's lifetime.
class EmbeddingTable {
 public:
  EmbeddingTable(std::string name, std::size_t dim);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }

  // Inserts or overwrites. Returns true if the token was already present.
  // Throws InvalidArgument on a dimension mismatch or non-finite component.
  bool insert(std::string token, std::span<const double> vector);

  bool contains(std::string_view token) const;

  // Exact match, then the lowercased token, then any case variant of it
  // (the lexicographically smallest one). Absent otherwise.
  std::optional<std::span<const double>> lookup(std::string_view token) const;

  // Exact match only.
  std::optional<std::span<const double>> find(std::string_view token) const;

  // Tokens in insertion order.
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::span<const double> vector_at(std::size_t row) const;

 private:
  std::string name_;
  std::size_t dim_;
  std::vector<std::string> tokens_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> rows_;
  // lowercase -> row of the smallest case variant
  std::unordered_map<std::string, std::size_t> folded_;
};

struct VectorLoadReport {
  std::size_t declared_count = 0;
  std::size_t duplicate_tokens = 0;
  std::vector<std::string> warnings;
};

// word2vec text interchange format: header "count dim", then one
// "token v1 ... v_dim" line per entry. Later duplicates overwrite earlier ones.
// Throws DataError naming the offending line.
EmbeddingTable load_vectors_text(const std::filesystem::path& path,
                                 VectorLoadReport* report = nullptr);
EmbeddingTable read_vectors_text(std::istream& in, std::string name,
                                 VectorLoadReport* report = nullptr);

// Writes every entry in insertion order with round-trip precision.
void write_vectors_text(const EmbeddingTable& table, std::ostream& out);

DenseVector mean_vector(std::span<const std::span<const double>> vectors);
DenseVector mean_vector(std::span<const DenseVector> vectors);

double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> v);

// Cosine similarity. Throws InvalidArgument on mixed dimensions or a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);
inline double cosine(const DenseVector& u, const DenseVector& v) {
  return cosine(u.view(), v.view());
}

}  // namespace textcoherence
