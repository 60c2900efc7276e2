#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "crn/exact_linalg.hpp"
#include "crn/execution.hpp"
#include "crn/network.hpp"

namespace crn {

enum class Space { W, WPerp };

std::string to_string(Space space);

/// Nonzero vector of W = range N or W-perp = ker N^T with inclusion-minimal support.
struct ElementaryVector {
  RationalVector coords;
  Space space = Space::W;
  std::vector<std::size_t> support;  // ascending

  friend bool operator==(const ElementaryVector&, const ElementaryVector&) = default;
};

std::vector<std::size_t> support_of(const RationalVector& v);

/// Basis of W (independent columns of N) and of W-perp (kernel of N^T).
std::vector<RationalVector> range_space_basis(const RationalMatrix& n);
std::vector<RationalVector> perp_space_basis(const RationalMatrix& n);

/// All elementary vectors of span(basis) in Q^dim, one canonical representative per circuit,
/// ordered by support size and then lexicographically by support.
/// Breadth-first over support cardinality; supports containing a smaller circuit are skipped.
std::vector<ElementaryVector> elementary_vectors(const std::vector<RationalVector>& basis, std::size_t dim,
                                                 Space space, Execution exec = Execution::Parallel);

std::vector<ElementaryVector> elementary_vectors(const RationalMatrix& n, Space space,
                                                 Execution exec = Execution::Parallel);

/// Exact check: v lies in the space and its support is a circuit there.
bool is_elementary(const RationalMatrix& n, const RationalVector& v, Space space);

struct InvPrecisionCertificate {
  Rational value;               // maxInvP >= 0
  ElementaryVector witness_u;   // in W-perp with u_i = 1 and u_o = value, or zero
  ElementaryVector witness_w;   // in W with w_o = -1 and w_i = value, or zero
  Rational value_u;             // max over the W-perp characterization
  Rational value_w;             // max over the W characterization
};

class DualityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// maxInvP over both elementary-vector characterizations; throws DualityError if they disagree.
InvPrecisionCertificate max_inv_precision(const RationalMatrix& n, std::size_t i, std::size_t o,
                                          Execution exec = Execution::Parallel);

/// Same, reusing precomputed elementary vectors of W and W-perp.
InvPrecisionCertificate max_inv_precision(const std::vector<ElementaryVector>& elem_w,
                                          const std::vector<ElementaryVector>& elem_u, std::size_t dim,
                                          std::size_t i, std::size_t o);

struct AlgebraicPrecision {
  double value = 0.0;  // u_o
  std::vector<double> u;
  std::vector<double> w;
};

struct ExactAlgebraicPrecision {
  Rational value;
  RationalVector u;
  RationalVector w;
};

/// Unique (u, w) with u in W-perp, w in W, u = e_i + diag(1/cbar) w; returns u_o.
/// Floating point with a residual check, falling back to the exact solve when the check fails.
AlgebraicPrecision inverse_precision_algebraic(const RationalMatrix& n, std::span<const double> cbar,
                                               std::size_t i, std::size_t o);
ExactAlgebraicPrecision inverse_precision_algebraic(const RationalMatrix& n, const RationalVector& cbar,
                                                    std::size_t i, std::size_t o);

struct BasisDecomposition {
  std::vector<std::size_t> sprime;                   // ascending, excludes i
  std::map<std::size_t, ElementaryVector> w_family;  // s in S': supp within (S \ S') + {s}, coordinate s = 1
  std::map<std::size_t, ElementaryVector> u_family;  // s not in S': supp within S' + {s}, coordinate s = 1
};

class DecompositionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// S' starts at supp(u*) \ {i} and grows greedily in species order while the rows N[S', :] stay independent.
BasisDecomposition basis_decomposition(const RationalMatrix& n, const RationalVector& ustar, std::size_t i);

/// Re-checks the three defining properties exactly; returns a list of violations (empty when valid).
std::vector<std::string> check_basis_decomposition(const RationalMatrix& n, const BasisDecomposition& dec,
                                                   const RationalVector& ustar, std::size_t i);

/// TSV: space, label, one column per species.
void write_elementary_tsv(std::ostream& out, const std::vector<std::string>& species,
                          const std::vector<ElementaryVector>& elem_w, const std::vector<ElementaryVector>& elem_u);

}  // namespace crn
