#pragma once

#include "modlat/matrix.hpp"

namespace modlat {

struct LllResult {
  RatMatrix gram;       // transform * input * transform^T
  IntMatrix transform;  // unimodular, rows are the new basis in old coordinates
};

/// Exact LLL reduction of a positive definite Gram matrix (rational GSO,
/// Lovasz constant `delta`). The input basis is never touched; only the
/// recorded unimodular transform changes.
LllResult lll_reduce_gram(const RatMatrix& gram, const Rat& delta = Rat(99, 100));

/// Inverse of a unimodular integer matrix.
IntMatrix unimodular_inverse(const IntMatrix& t);

}  // namespace modlat
