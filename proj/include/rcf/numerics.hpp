#pragma once

#include <span>
#include <vector>

#include "rcf/errors.hpp"
#include "rcf/types.hpp"

namespace rcf {

// Inverse of a Hermitian positive-definite matrix via Cholesky.
// Throws NotHermitian if max|A - A^H| > 1e-10, SingularMatrix if a pivot
// falls below 1e-14 times the largest diagonal entry (or goes nonpositive).
CMat hermitian_inverse(const CMat& a);

// Sherman-Morrison: given Ainv = A^{-1}, returns (A + u v^H)^{-1}.
// Throws DegenerateUpdate when |1 + v^H Ainv u| <= 1e-12.
CMat rank_one_inverse_update(const CMat& ainv, std::span<const cx> u,
                             std::span<const cx> v);

// In-place variant used by the phase sweep hot loop.
void rank_one_inverse_update_inplace(CMat& ainv, std::span<const cx> u,
                                     std::span<const cx> v);

// Tr((H H^H)^{-1} diag(p)) for a K x T matrix H with K <= T.
double weighted_inverse_trace(const CMat& h, std::span<const double> p);

// Same trace from an already-inverted Gram matrix.
double weighted_trace_from_inverse(const CMat& gram_inv,
                                   std::span<const double> p);

}  // namespace rcf
