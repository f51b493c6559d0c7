#pragma once

// Spatial tensor products of weighted point spaces and operators.
// Flattening convention: row-major, first factor slowest-varying. Every
// multi-index identification elsewhere in the library relies on this.

#include <vector>

#include "lptriple/pspace.hpp"

namespace lpt {

/// A product of weighted point spaces together with its flattened form.
struct ProductSpace {
  std::vector<WeightedPointSpace> factors;
  WeightedPointSpace flat;
};

/// Builds the product space. The flat weight at (x_0,...,x_k) is the product
/// of the factor weights; a product of probability spaces is a probability
/// space. An empty interior range is the one-point counting space, so pass
/// that explicitly where needed.
ProductSpace product_space(const std::vector<WeightedPointSpace>& factors);

/// Kronecker product of operators: (a (x) b)(xi (x) eta) = a xi (x) b eta
/// under the row-major flattening.
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);

/// Elementary tensor of vectors under the same flattening.
PVector kron(const PVector& a, const PVector& b);

}  // namespace lpt
