#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gek/error.hpp"
#include "gek/io.hpp"
#include "gek/log.hpp"

namespace gek {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

/// Lemma -> dense vector of a fixed dimension. Absent lemmas are a miss
/// (`find` returns nullptr), never a default vector.
template <typename Scalar = double>
class EmbeddingStore {
 public:
  using VectorType = Vector<Scalar>;

  explicit EmbeddingStore(Eigen::Index dimension) : dimension_(dimension) {
    if (dimension <= 0) throw Error("embeddings", "dimension must be positive");
  }

  Eigen::Index dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return vectors_.size(); }

  /// Adds `word`; returns false (and keeps the existing vector) on a duplicate.
  template <typename Derived>
  bool insert(std::string word, const Eigen::MatrixBase<Derived>& v) {
    if (v.size() != dimension_) {
      throw Error("embeddings", "vector for '" + word + "' has dimension " +
                                    std::to_string(v.size()) + ", expected " +
                                    std::to_string(dimension_));
    }
    if (!v.allFinite()) throw Error("embeddings", "vector for '" + word + "' is not finite");
    if (index_.contains(word)) return false;
    index_.emplace(word, vectors_.size());
    words_.push_back(std::move(word));
    vectors_.emplace_back(v.template cast<Scalar>());
    return true;
  }

  const VectorType* find(std::string_view word) const {
    auto it = index_.find(word);
    return it == index_.end() ? nullptr : &vectors_[it->second];
  }

  /// Throws UncoveredItem for a missing word.
  const VectorType& at(std::string_view word) const {
    if (const auto* v = find(word)) return *v;
    throw UncoveredItem(std::string(word));
  }

  bool contains(std::string_view word) const { return index_.contains(word); }
  const std::vector<std::string>& words() const noexcept { return words_; }

 private:
  Eigen::Index dimension_;
  std::vector<VectorType> vectors_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> index_;
};

/// Reads word2vec text format ("count dim" header, then a word and `dim`
/// numbers per line); gzip input is decompressed transparently. With a filter,
/// only listed words are kept. Duplicate words keep their first vector.
template <typename Scalar = double>
EmbeddingStore<Scalar> load_vectors(const std::filesystem::path& path,
                                    const std::unordered_set<std::string>* filter = nullptr) {
  LineReader reader(path);
  std::string line;
  auto where = [&] { return path.string() + " line " + std::to_string(reader.line_number()); };
  if (!reader.getline(line)) throw Error("embeddings", path.string() + ": empty vector file");
  auto header = split(trim(line), ' ');
  std::optional<std::uint64_t> declared_count, dim;
  if (header.size() == 2) {
    declared_count = parse_uint(header[0]);
    dim = parse_uint(header[1]);
  }
  if (!declared_count || !dim || *dim == 0) {
    throw Error("embeddings", where() + ": expected header 'count dim'");
  }

  EmbeddingStore<Scalar> store(static_cast<Eigen::Index>(*dim));
  Vector<Scalar> v(store.dimension());
  std::size_t rows = 0;
  while (reader.getline(line)) {
    auto text = trim(line);
    if (text.empty()) continue;
    ++rows;
    auto space = text.find(' ');
    std::string word(text.substr(0, space));
    if (filter && !filter->contains(word)) continue;
    std::string_view rest = space == std::string_view::npos ? std::string_view{} : text.substr(space);
    Eigen::Index filled = 0;
    while (true) {
      rest = trim(rest);
      if (rest.empty()) break;
      if (filled == store.dimension()) {
        throw Error("embeddings", where() + ": more than " + std::to_string(*dim) +
                                      " components for '" + word + "'");
      }
      Scalar x{};
      auto [end, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), x);
      if (ec != std::errc{}) throw Error("embeddings", where() + ": bad number for '" + word + "'");
      v[filled++] = x;
      rest.remove_prefix(static_cast<std::size_t>(end - rest.data()));
    }
    if (filled != store.dimension()) {
      throw Error("embeddings", where() + ": '" + word + "' has " + std::to_string(filled) +
                                    " components, header says " + std::to_string(*dim));
    }
    if (!store.insert(word, v)) warn(where() + ": duplicate word '" + word + "' ignored");
  }
  if (rows != *declared_count) {
    warn(path.string() + ": header declares " + std::to_string(*declared_count) +
         " vectors, found " + std::to_string(rows));
  }
  return store;
}

/// word2vec text format, words in insertion order.
template <typename Scalar>
void write_vectors(std::ostream& out, const EmbeddingStore<Scalar>& store) {
  out << store.size() << ' ' << store.dimension() << '\n';
  for (const auto& word : store.words()) {
    out << word;
    for (auto x : *store.find(word)) out << ' ' << format_double(static_cast<double>(x));
    out << '\n';
  }
}

/// Cosine similarity in [-1, 1]. Throws ZeroVectorError for a zero operand.
template <typename DA, typename DB>
typename DA::Scalar cosine(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename DA::Scalar;
  if (a.size() != b.size()) throw Error("embeddings", "cosine of vectors with different dimensions");
  const Scalar na = a.norm();
  const Scalar nb = b.norm();
  if (na == Scalar(0) || nb == Scalar(0)) throw ZeroVectorError();
  return std::clamp<Scalar>(a.dot(b) / (na * nb), Scalar(-1), Scalar(1));
}

template <typename Scalar>
Vector<Scalar> sum_vectors(std::span<const Vector<Scalar>> vs) {
  if (vs.empty()) throw Error("embeddings", "sum of an empty vector list");
  Vector<Scalar> total = vs.front();
  for (const auto& v : vs.subspan(1)) {
    if (v.size() != total.size()) throw Error("embeddings", "summing vectors of different dimensions");
    total += v;
  }
  return total;
}

template <typename Scalar>
Vector<Scalar> centroid(std::span<const Vector<Scalar>> vs) {
  return sum_vectors(vs) / static_cast<Scalar>(vs.size());
}

}  // namespace gek
