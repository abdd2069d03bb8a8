#pragma once

#include "vosa/linalg.hpp"
#include "vosa/scalar.hpp"

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace vosa {

// Basis bookkeeping for a (1/2)Z-graded space truncated at a weight cutoff.
// Basis vectors get flat ids; per-weight pieces are contiguous id runs in a
// fixed canonical order, so matrices restrict to weight blocks directly.
struct GradedSpace {
    Weight cutoff;
    std::vector<Weight> wt;        // per id
    std::vector<int> parity;       // per id, 0 even / 1 odd
    std::vector<std::string> label;
    std::map<long, std::vector<int>> ids; // key: twice weight -> ids (sorted)

    int add(Weight w, int par, std::string lab) {
        int id = static_cast<int>(wt.size());
        wt.push_back(w);
        parity.push_back(par);
        label.push_back(std::move(lab));
        ids[w.twice].push_back(id);
        return id;
    }
    int total_dim() const { return static_cast<int>(wt.size()); }
    int dim(long w2) const {
        auto it = ids.find(w2);
        return it == ids.end() ? 0 : static_cast<int>(it->second.size());
    }
    // position of id within its weight piece
    int pos(int id) const;
};

// Sparse vector over basis ids.
struct Vec {
    std::map<int, Scalar> c;

    static Vec unit(int id) { Vec v; v.c[id] = Scalar(1); return v; }
    bool is_zero() const { return c.empty(); }
    void add(int id, const Scalar& s) {
        if (s.is_zero()) return;
        auto it = c.find(id);
        if (it == c.end()) c.emplace(id, s);
        else {
            it->second += s;
            if (it->second.is_zero()) c.erase(it);
        }
    }
    Vec& operator+=(const Vec& o) { for (auto& [i, s] : o.c) add(i, s); return *this; }
    Vec& operator-=(const Vec& o) { for (auto& [i, s] : o.c) add(i, -s); return *this; }
    Vec& operator*=(const Scalar& s);
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(const Scalar& s, Vec v) { return v *= s; }
    friend bool operator==(const Vec& a, const Vec& b) { return a.c == b.c; }
};

// Mode action of a fixed vector: weight-homogeneous blocks, one per source
// weight; degree = wt(v) - n - 1 (stored twice).
struct SparseOperator {
    long degree2 = 0;
    std::map<long, Mat> blocks; // key: twice source weight
};

struct InvarianceFailure {
    std::string generator;
    long mode;
    long wu2, wv2; // twice weights of the u / v pieces
    int u_index, v_index;
    Scalar lhs, rhs;
};

struct InvarianceReport {
    bool pass = true;
    std::vector<InvarianceFailure> failures;
};

struct CommutatorResult {
    bool pass = false;
    Vec lhs, rhs;
};

// Truncated vertex operator superalgebra. Engines fill in the basis, the
// generator fields, a resolver expressing each basis vector through generator
// modes (or a direct field rule), the involution and the Hermitian form; the
// generic machinery here derives every other mode action from those.
struct TruncatedVOSA {
    GradedSpace space;
    Vec vacuum;
    Vec conformal;
    Rational central_charge;

    struct Generator {
        std::string name;
        Vec vec;       // the generator as an element of the space
        Weight wt;
        int parity;
    };
    std::vector<Generator> gens;

    // involution phi: anti-linear, phi(e_j) = phi_sign[j] * e_{phi_perm[j]}
    std::vector<int> phi_perm;
    std::vector<Scalar> phi_sign;

    std::map<long, Mat> gram; // twice weight -> Hermitian Gram matrix

    // engine hooks
    // generator field block: gens[g] mode n restricted to source weight w2/2
    std::function<Mat(int g, long n, long src2)> gen_mode_hook;
    // direct field block for basis vectors flagged kind=Direct
    std::function<Mat(int id, long n, long src2)> direct_mode_hook;

    struct Resolver {
        enum Kind { Vacuum, Head, Direct } kind = Vacuum;
        int gen = -1;  // Head: generator index
        long m = 0;    // Head: basis vector = (gens[gen])_m tail
        Vec tail;      // Head: weight-homogeneous
        long tail_w2 = 0;
    };
    std::vector<Resolver> resolver;

    // --- derived machinery ---
    long cutoff2() const { return space.cutoff.twice; }
    int dim(long w2) const { return space.dim(w2); }
    Weight wt_of(const Vec& v) const; // throws if not homogeneous

    // mode block of a basis vector / homogeneous vector; target weight is
    // src2/2 + wt - n - 1; throws CutoffExceeded if it needs data above the
    // cutoff; returns a 0-row matrix when the target weight is negative.
    const Mat& basis_mode_block(int id, long n, long src2) const;
    Mat vec_mode_block(const Vec& v, long n, long src2) const;
    Mat gen_mode_block(int g, long n, long src2) const;

    Vec apply_basis_mode(int id, long n, const Vec& x) const;
    Vec apply_mode(const Vec& v, long n, const Vec& x) const;

    Vec phi(const Vec& v) const;
    Scalar herm(const Vec& x, const Vec& y) const; // (x,y), anti-linear in x

    // product u_{i}v as a vector (u homogeneous)
    Vec product(const Vec& u, long i, const Vec& v) const { return apply_mode(u, i, v); }

    // adjoint field block of generator g at mode m, source weight wu2:
    // coefficient of z^{-m-1} in Y(e^{zL(1)}(-1)^{L(0)+2L(0)^2} z^{-2L(0)} a, z^{-1})
    Mat adjoint_mode_block(int g, long m, long wu2) const;

    InvarianceReport invariance_check(int g, Weight max_weight) const;
    CommutatorResult commutator_check(const Vec& u, const Vec& v, long m, long n, const Vec& w) const;

    // <u,v> = sign * (phi-twisted form); returns per-weight matrices, with a
    // symmetry verdict per weight
    std::map<long, Mat> bilinear_from_hermitian(int sign, bool* symmetric = nullptr) const;

    std::map<long, long> characters() const; // twice weight -> dim

  private:
    mutable std::map<std::tuple<int, long, long>, Mat> mode_memo_;
    mutable std::map<std::tuple<int, long, long>, Mat> gen_memo_;
    Mat head_mode_block(const Resolver& r, long deg2, long n, long src2) const;
};

struct CentralChargeMismatch : std::runtime_error {
    CentralChargeMismatch(const std::string& w) : std::runtime_error(w) {}
};
struct NonSemisimpleWeightZero : std::runtime_error {
    NonSemisimpleWeightZero(const std::string& w) : std::runtime_error(w) {}
};
struct SymmetryFailure : std::runtime_error {
    SymmetryFailure(const std::string& w) : std::runtime_error(w) {}
};

// binomial (m choose i) for arbitrary integer m, i >= 0
Rational binom(long m, long i);

} // namespace vosa
