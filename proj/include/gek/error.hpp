#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gek {

/// Base class for everything the library throws. `module()` names the
/// component that raised the error ("datasets", "corpus-graph", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// A lemma needed for scoring has no embedding. Scoring code catches this
/// per item and reports the item as uncovered.
class UncoveredItem : public Error {
 public:
  explicit UncoveredItem(std::string lemma)
      : Error("embeddings", "no embedding for '" + lemma + "'"),
        lemma_(std::move(lemma)) {}

  const std::string& lemma() const noexcept { return lemma_; }

 private:
  std::string lemma_;
};

/// Cosine (or normalization) of an all-zero vector.
class ZeroVectorError : public Error {
 public:
  ZeroVectorError() : Error("embeddings", "cosine undefined for a zero vector") {}
};

class GraphFormatError : public Error {
 public:
  enum class Kind { io, bad_magic, version_mismatch, checksum, malformed };

  GraphFormatError(Kind kind, const std::string& what)
      : Error("corpus-graph", what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace gek
