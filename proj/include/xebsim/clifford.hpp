#ifndef XEBSIM_CLIFFORD_HPP_
#define XEBSIM_CLIFFORD_HPP_

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "xebsim/matrix.hpp"
#include "xebsim/rng.hpp"

namespace xebsim {

// One element of a Clifford group table: phase-canonical matrix plus its
// position in the table. index <-> matrix is a bijection within one table.
struct CliffordElement {
  std::size_t index = 0;
  Matrix matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

// The single- or two-qubit Clifford group modulo global phase, built once by
// breadth-first closure over {H, S} (n=1) or {H x I, I x H, S x I, I x S, CZ}
// (n=2). Element ordering is BFS discovery order, so indices are reproducible
// across runs and platforms. Tables are immutable after construction and safe
// for concurrent reads.
class CliffordGroup {
 public:
  // Shared per-process tables. Throws std::invalid_argument unless n in {1,2};
  // larger systems must compose factorized layers instead.
  static const CliffordGroup& instance(int num_qubits);

  explicit CliffordGroup(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  int dim() const { return 1 << num_qubits_; }
  std::size_t order() const { return elements_.size(); }

  const CliffordElement& element(std::size_t index) const { return elements_.at(index); }
  const CliffordElement& identity() const { return elements_.front(); }

  const CliffordElement& sample_uniform(RngStream& rng) const {
    return elements_[rng.uniform_index(order())];
  }

  // Group product b after a (apply a first). Throws CanonicalizationError if
  // the numerical product cannot be located in the table.
  const CliffordElement& compose(const CliffordElement& a, const CliffordElement& b) const;

  const CliffordElement& invert(const CliffordElement& g) const;

  // Locate an externally supplied unitary in the table (up to global phase).
  // Returns order() when absent.
  std::size_t find(const Matrix& u) const;
  const CliffordElement& locate(const Matrix& u) const;

 private:
  using Key = std::vector<std::int64_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  static Key make_key(const Matrix& canonical);

  int num_qubits_;
  std::vector<CliffordElement> elements_;
  std::vector<std::size_t> inverse_index_;
  std::unordered_map<Key, std::size_t, KeyHash> lookup_;
};

// One circuit layer: either n single-qubit elements (factorized) or a single
// n-qubit element.
struct CliffordLayer {
  int num_qubits = 1;
  std::vector<CliffordElement> elements;

  bool is_factorized() const { return elements.size() == static_cast<std::size_t>(num_qubits); }
  // Full 2^n x 2^n unitary of the layer.
  Matrix full_matrix() const;
};

}  // namespace xebsim

#endif  // XEBSIM_CLIFFORD_HPP_
