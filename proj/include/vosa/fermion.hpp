#pragma once

#include "vosa/vosa.hpp"

namespace vosa {

struct FermionSpace {
    int n;
    Mat form; // n x n real symmetric nondegenerate pairing; identity by default

    static FermionSpace standard(int n) { return {n, Mat::identity(n)}; }
};

// Product of distinct creation operators u^i(-t/2) (t odd positive) applied
// to the vacuum, in canonical order: mode magnitude decreasing, then
// direction index increasing.
struct FermionMonomial {
    std::vector<std::pair<long, int>> f; // (t, i)

    long weight2() const {
        long w = 0;
        for (const auto& [t, i] : f) w += t;
        return w;
    }
    std::string str() const;
    friend auto operator<=>(const FermionMonomial&, const FermionMonomial&) = default;
};

using FermionState = std::map<FermionMonomial, Rational>;

const std::vector<FermionMonomial>& fermion_basis(const FermionSpace& fs, long w2);

// mode u^i(s2/2), s2 odd (negative: signed insertion, positive: contraction)
FermionState fermion_apply(const FermionSpace& fs, int i, long s2, const FermionMonomial& m);

// Hermitian pairing of two monomials via mode contraction
Rational fermion_pair(const FermionSpace& fs, const FermionMonomial& a, const FermionMonomial& b);

TruncatedVOSA build_fermion_vosa(const FermionSpace& fs, long cutoff2);

} // namespace vosa
