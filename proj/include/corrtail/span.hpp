#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "corrtail/matrix.hpp"

namespace corrtail {

struct SpanBudgetExceeded : std::runtime_error {
  explicit SpanBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// The smallest linear span containing the generators that is closed under
// products and adjoints. Basis held in reduced row echelon form over Q^(n*n),
// which is canonical for the subspace.
class SpannedAlgebra {
 public:
  explicit SpannedAlgebra(int n) : n_(n), basis_(n * n) {}

  int ambient_size() const { return n_; }
  int dim() const { return basis_.dim(); }

  bool contains(const QMat& m) const {
    if (m.rows() != n_ || m.cols() != n_)
      throw std::invalid_argument("SpannedAlgebra: size mismatch");
    return basis_.contains(smat_to_svec(SMat::from_dense(m)));
  }

  const RrefBasis& basis() const { return basis_; }

  bool same_span(const SpannedAlgebra& o) const { return basis_.same_subspace(o.basis_); }

  std::vector<QMat> basis_matrices() const {
    std::vector<QMat> out;
    for (const auto& row : basis_.canonical_rows())
      out.push_back(svec_to_smat(row, n_, n_).to_dense());
    return out;
  }

  std::vector<SMat> sparse_basis() const {
    std::vector<SMat> out;
    for (const auto& row : basis_.canonical_rows()) out.push_back(svec_to_smat(row, n_, n_));
    return out;
  }

  friend SpannedAlgebra span_closure(const std::vector<QMat>& gens,
                                     std::optional<int> max_dim);

 private:
  int n_;
  RrefBasis basis_;
};

// Closure loop. A span containing the generators and stable under
// left/right multiplication by generators and under adjoints contains every
// monomial in the generators, hence the whole *-algebra they generate.
// Each successful insert grows the dimension, so the loop runs at most n^2
// times; products are only ever taken against the fixed generator set.
inline SpannedAlgebra span_closure(const std::vector<QMat>& gens,
                                   std::optional<int> max_dim = std::nullopt) {
  if (gens.empty()) throw std::invalid_argument("span_closure: no generators");
  int n = gens.front().rows();
  for (const auto& g : gens)
    if (!g.is_square() || g.rows() != n)
      throw std::invalid_argument("span_closure: generators must be square of equal size");

  std::vector<SMat> mult_set;  // generators and adjoints, for multiplying
  SpannedAlgebra alg(n);
  std::vector<SMat> work;  // elements whose generator products are pending

  auto push = [&](const SMat& m) {
    if (alg.basis_.insert(smat_to_svec(m))) {
      if (max_dim && alg.dim() > *max_dim)
        throw SpanBudgetExceeded("span_closure: dimension exceeds budget");
      work.push_back(m);
    }
  };

  for (const auto& g : gens) {
    SMat s = SMat::from_dense(g);
    mult_set.push_back(s);
    SMat st = transpose(s);
    mult_set.push_back(st);
    push(s);
    push(st);
  }

  for (size_t k = 0; k < work.size(); ++k) {
    SMat cur = work[k];  // copy: work may reallocate
    push(transpose(cur));
    for (const auto& g : mult_set) {
      push(mul(g, cur));
      push(mul(cur, g));
    }
  }
  return alg;
}

}  // namespace corrtail
