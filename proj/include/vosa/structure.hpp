#pragma once

#include "vosa/vosa.hpp"

#include <string>
#include <vector>

namespace vosa {

// Orthogonal direct sum of truncated VOSAs with equal central charge.
// Throws CentralChargeMismatch otherwise. Result cutoff = min of inputs.
TruncatedVOSA direct_sum(const std::vector<const TruncatedVOSA*>& parts);

// Graded tensor product with the super-sign rule
// (x (x) y)_n (p (x) q) = sum_{a+b=n-1} (-1)^{|y||p|} x_a p (x) y_b q.
// omega = omega1 (x) 1 + 1 (x) omega2, central charges add, product form,
// phi = phi1 (x) phi2. Both factors must have a one-term vacuum.
TruncatedVOSA tensor_product(const TruncatedVOSA& A, const TruncatedVOSA& B);

struct Summand {
    Vec idempotent;
    Vec conformal;             // omega^i = L(-2)e^i
    std::map<long, long> dims; // twice weight -> summand dimension
    bool vacuum_dim_one = false;
    bool l1_kills_weight_one = false;
    bool l_minus1_kills_vacuum = false;
    bool no_negative_weights = true;
};

struct DecompositionReport {
    std::vector<Summand> summands;
    bool idempotents_sum_to_vacuum = false;
    bool idempotents_orthogonal = false;
};

// Splits V into indecomposable summands by finding the primitive orthogonal
// idempotents of the commutative algebra (V_0, u_{-1}v). Throws
// NonSemisimpleWeightZero when the weight-0 algebra has nilpotents.
DecompositionReport decompose(const TruncatedVOSA& V);

struct WeightOneAlgebra {
    int d = 0;
    std::vector<int> basis_ids;    // ids of the weight-1 slice
    std::vector<Mat> ad;           // ad[i] = matrix of [u_i, -] = (u_i)_0
    Mat form;                      // <u,v> with u_1 v = <u,v> vacuum
    Mat killing;
    bool form_scalar = true;       // every u_1 v is a multiple of the vacuum
    bool antisymmetric = true;
    bool jacobi = true;
    bool form_invariant = true;    // <[u,v],w> = <u,[v,w]>
    bool contragredient = true;    // ([u,v],w) = -(v,[phi(u),w]) (Hermitian form)
    int form_radical_dim = 0;
    int killing_rank = 0;
    bool radical_meets_derived = false; // form radical intersects [g,g]
};

WeightOneAlgebra weight_one_algebra(const TruncatedVOSA& V);

struct ConformalComparison {
    bool pass = false;
    Vec omega_prime;
    Vec omega_dd;  // omega'' = omega - omega'
    Scalar norm2;  // (omega'', omega'')
};

// Compares the engine's conformal vector against a quadratic ansatz built
// from the weight-one fields via the dual basis of the invariant form:
//   sugawara:   omega' = k/(2(k+h)) sum_{ij} (B^{-1})_{ij} u_i(-1) u_j(-1) 1
//   heisenberg: omega' = 1/2       sum_{ij} (B^{-1})_{ij} u_i(-1) u_j(-1) 1
// Throws std::invalid_argument if V_1 is zero or the form is degenerate.
ConformalComparison conformal_comparison_sugawara(const TruncatedVOSA& V,
                                                  const Rational& level,
                                                  const Rational& dual_coxeter);
ConformalComparison conformal_comparison_heisenberg(const TruncatedVOSA& V);

} // namespace vosa
