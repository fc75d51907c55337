#include "xebsim/clifford.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <stdexcept>

#include "xebsim/errors.hpp"

namespace xebsim {

namespace {

// Entry quantization for table lookup. Clifford matrix entries are separated
// by far more than this after phase canonicalization.
constexpr double kKeyResolution = 1e-9;
constexpr double kMatchTol = 1e-6;

std::vector<Matrix> generators(int n) {
  Matrix h = gates::hadamard();
  Matrix s = gates::phase_s();
  if (n == 1) return {h, s};
  Matrix i2 = gates::identity(2);
  return {kron(h, i2), kron(i2, h), kron(s, i2), kron(i2, s), gates::cz()};
}

}  // namespace

std::size_t CliffordGroup::KeyHash::operator()(const Key& k) const {
  // FNV-1a over the rounded entries.
  std::uint64_t h = 1469598103934665603ull;
  for (std::int64_t v : k) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

CliffordGroup::Key CliffordGroup::make_key(const Matrix& canonical) {
  Key key;
  key.reserve(2 * canonical.size());
  for (Eigen::Index i = 0; i < canonical.rows(); ++i) {
    for (Eigen::Index j = 0; j < canonical.cols(); ++j) {
      key.push_back(std::llround(canonical(i, j).real() / kKeyResolution));
      key.push_back(std::llround(canonical(i, j).imag() / kKeyResolution));
    }
  }
  return key;
}

const CliffordGroup& CliffordGroup::instance(int num_qubits) {
  static std::mutex mu;
  static std::unordered_map<int, const CliffordGroup*> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(num_qubits);
  if (it == cache.end()) {
    it = cache.emplace(num_qubits, new CliffordGroup(num_qubits)).first;
  }
  return *it->second;
}

CliffordGroup::CliffordGroup(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits != 1 && num_qubits != 2) {
    throw std::invalid_argument(
        "CliffordGroup: monolithic tables exist only for 1 and 2 qubits; "
        "compose factorized layers for larger systems");
  }
  const std::vector<Matrix> gens = generators(num_qubits);
  const int d = dim();

  Matrix ident = canonicalize_phase(gates::identity(d));
  elements_.push_back({0, ident});
  lookup_.emplace(make_key(ident), 0);

  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    for (const Matrix& g : gens) {
      Matrix prod = canonicalize_phase(g * elements_[cur].matrix);
      Key key = make_key(prod);
      if (lookup_.find(key) == lookup_.end()) {
        std::size_t idx = elements_.size();
        elements_.push_back({idx, std::move(prod)});
        lookup_.emplace(std::move(key), idx);
        queue.push_back(idx);
      }
    }
  }

  inverse_index_.resize(elements_.size());
  for (const CliffordElement& g : elements_) {
    Matrix inv = canonicalize_phase(g.matrix.adjoint());
    std::size_t idx = find(inv);
    if (idx == order()) {
      throw CanonicalizationError("CliffordGroup: inverse not found during table build");
    }
    inverse_index_[g.index] = idx;
  }
}

std::size_t CliffordGroup::find(const Matrix& u) const {
  if (u.rows() != dim() || u.cols() != dim()) return order();
  Matrix canonical = canonicalize_phase(u);
  auto it = lookup_.find(make_key(canonical));
  if (it != lookup_.end()) {
    // Guard against hash-bucket collisions with an entrywise check.
    if ((elements_[it->second].matrix - canonical).cwiseAbs().maxCoeff() < kMatchTol) {
      return it->second;
    }
  }
  // An entry may straddle a quantization boundary; fall back to a scan.
  for (const CliffordElement& g : elements_) {
    if ((g.matrix - canonical).cwiseAbs().maxCoeff() < kMatchTol) return g.index;
  }
  return order();
}

const CliffordElement& CliffordGroup::locate(const Matrix& u) const {
  std::size_t idx = find(u);
  if (idx == order()) {
    throw CanonicalizationError("CliffordGroup: matrix not found in group table");
  }
  return elements_[idx];
}

const CliffordElement& CliffordGroup::compose(const CliffordElement& a,
                                              const CliffordElement& b) const {
  if (a.dim() != dim() || b.dim() != dim()) {
    throw std::invalid_argument("CliffordGroup::compose: dimension mismatch");
  }
  return locate(b.matrix * a.matrix);
}

const CliffordElement& CliffordGroup::invert(const CliffordElement& g) const {
  if (g.index >= order()) throw std::invalid_argument("CliffordGroup::invert: bad index");
  return elements_[inverse_index_[g.index]];
}

Matrix CliffordLayer::full_matrix() const {
  if (elements.size() != 1 && elements.size() != static_cast<std::size_t>(num_qubits)) {
    throw std::invalid_argument("CliffordLayer: need 1 element or one per qubit");
  }
  if (!is_factorized()) return elements.front().matrix;
  Matrix out = gates::identity(1);
  for (const CliffordElement& e : elements) out = kron(out, e.matrix);
  return out;
}

}  // namespace xebsim
