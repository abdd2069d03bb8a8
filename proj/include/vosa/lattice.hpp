#pragma once

#include "vosa/vosa.hpp"

namespace vosa {

struct IntegralLattice {
    int rank;
    std::vector<std::vector<long>> gram;

    long pairing(const std::vector<long>& a, const std::vector<long>& b) const {
        long s = 0;
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) s += a[i] * gram[i][j] * b[j];
        return s;
    }
    long norm(const std::vector<long>& a) const { return pairing(a, a); }
    void validate() const; // symmetric, integral, positive definite
};

// Bimultiplicative two-cocycle sign table: e_alpha e_beta = eps(alpha,beta) e_{alpha+beta}.
struct CocycleTable {
    std::vector<std::vector<int>> basis_log; // 0/1 exponents of -1 on basis pairs

    int eps(const std::vector<long>& a, const std::vector<long>& b) const {
        long e = 0;
        int d = static_cast<int>(basis_log.size());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) e += a[i] * b[j] * basis_log[i][j];
        return (((e % 2) + 2) % 2 == 0) ? 1 : -1;
    }
};

CocycleTable synthesize_cocycle(const IntegralLattice& L);

// (-1)^{((a,a)+(a,a)^2)/2}; equals eps(a,-a) and eps(a,a) for our cocycle
int e_alpha_sign(const IntegralLattice& L, const std::vector<long>& alpha);

// bosonic factors (mode, direction) over a lattice point
struct LatticeState {
    std::vector<std::pair<long, int>> bos; // (n, i) = alpha_i(-n); canonical order
    std::vector<long> pt;

    std::string str() const;
    friend auto operator<=>(const LatticeState&, const LatticeState&) = default;
};

using LatticeStateVec = std::map<LatticeState, Rational>;

// lattice points of norm at most norm_max (deterministic order)
std::vector<std::vector<long>> lattice_points(const IntegralLattice& L, long norm_max);

// optional generating lattice vectors for the e^lambda generator fields;
// defaults to plus/minus the basis vectors
TruncatedVOSA build_lattice_vosa(const IntegralLattice& L, long cutoff2,
                                 const std::vector<std::vector<long>>& extra_points = {});

} // namespace vosa
