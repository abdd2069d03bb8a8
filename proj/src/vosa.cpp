#include "vosa/vosa.hpp"

#include <algorithm>

namespace vosa {

int GradedSpace::pos(int id) const {
    const auto& v = ids.at(wt[id].twice);
    auto it = std::lower_bound(v.begin(), v.end(), id);
    return static_cast<int>(it - v.begin());
}

Vec& Vec::operator*=(const Scalar& s) {
    if (s.is_zero()) { c.clear(); return *this; }
    for (auto& [i, x] : c) x *= s;
    return *this;
}

Rational binom(long m, long i) {
    Rational r = 1;
    for (long t = 0; t < i; ++t) r *= rat(m - t, t + 1);
    return r;
}

Weight TruncatedVOSA::wt_of(const Vec& v) const {
    if (v.is_zero()) throw std::invalid_argument("weight of zero vector");
    Weight w = space.wt[v.c.begin()->first];
    for (const auto& [id, s] : v.c)
        if (space.wt[id] != w) throw std::invalid_argument("vector is not weight-homogeneous");
    return w;
}

Mat TruncatedVOSA::gen_mode_block(int g, long n, long src2) const {
    long deg2 = gens[g].wt.twice - 2 * n - 2;
    long tgt2 = src2 + deg2;
    int ds = dim(src2);
    if (tgt2 < 0) return Mat(0, ds);
    if (ds == 0) return Mat(tgt2 <= cutoff2() ? dim(tgt2) : 0, 0);
    if (tgt2 > cutoff2())
        throw CutoffExceeded("generator " + gens[g].name + " mode " + std::to_string(n) +
                             " from weight " + Weight(src2).str() + " leaves the cutoff");
    auto key = std::make_tuple(g, n, src2);
    auto it = gen_memo_.find(key);
    if (it != gen_memo_.end()) return it->second;
    Mat m = gen_mode_hook(g, n, src2);
    return gen_memo_.emplace(key, std::move(m)).first->second;
}

const Mat& TruncatedVOSA::basis_mode_block(int id, long n, long src2) const {
    auto key = std::make_tuple(id, n, src2);
    auto it = mode_memo_.find(key);
    if (it != mode_memo_.end()) return it->second;

    long deg2 = space.wt[id].twice - 2 * n - 2;
    long tgt2 = src2 + deg2;
    int ds = dim(src2);
    Mat m;
    if (tgt2 < 0) {
        m = Mat(0, ds);
    } else if (ds == 0) {
        m = Mat(tgt2 <= cutoff2() ? dim(tgt2) : 0, 0);
    } else if (tgt2 > cutoff2()) {
        throw CutoffExceeded("mode " + std::to_string(n) + " of basis vector " + space.label[id] +
                             " from weight " + Weight(src2).str() + " leaves the cutoff");
    } else {
        const Resolver& r = resolver[id];
        switch (r.kind) {
            case Resolver::Vacuum:
                m = (n == -1) ? Mat::identity(ds) : Mat(dim(tgt2), ds);
                break;
            case Resolver::Direct:
                m = direct_mode_hook(id, n, src2);
                break;
            case Resolver::Head:
                m = head_mode_block(r, deg2, n, src2);
                break;
        }
    }
    return mode_memo_.emplace(key, std::move(m)).first->second;
}

// Mode of g_m(tail) via the iterate expansion
//   (a_m b)_n = sum_i (-1)^i C(m,i) [ a_{m-i} b_{n+i}
//                                     - (-1)^{|a||b|} (-1)^m b_{m+n-i} a_i ].
Mat TruncatedVOSA::head_mode_block(const Resolver& r, long deg2, long n, long src2) const {
    long tgt2 = src2 + deg2;
    long aw2 = gens[r.gen].wt.twice;
    long bw2 = r.tail_w2;
    int pa = gens[r.gen].parity;
    int pb = static_cast<int>(((bw2 % 2) + 2) % 2);
    int sign2 = ((pa * pb + r.m) % 2 == 0) ? -1 : 1; // -(-1)^{|a||b|}(-1)^m
    Mat out(dim(tgt2), dim(src2));
    for (long i = 0;; ++i) {
        long int1 = src2 + bw2 - 2 * (n + i) - 2; // after b_{n+i}
        long int2 = src2 + aw2 - 2 * i - 2;       // after a_i
        if (int1 < 0 && int2 < 0) break;
        Rational coeff = binom(r.m, i);
        if (i % 2 == 1) coeff = -coeff;
        if (coeff == 0) continue;
        if (int1 >= 0) {
            Mat b = vec_mode_block(r.tail, n + i, src2);
            if (b.rows > 0 && !b.is_zero()) {
                Mat a = gen_mode_block(r.gen, r.m - i, int1);
                if (a.rows > 0) out += Scalar(coeff) * (a * b);
            }
        }
        if (int2 >= 0) {
            Mat a = gen_mode_block(r.gen, i, src2);
            if (a.rows > 0 && !a.is_zero()) {
                Mat b = vec_mode_block(r.tail, r.m + n - i, int2);
                if (b.rows > 0) out += Scalar(coeff * sign2) * (b * a);
            }
        }
    }
    return out;
}

Mat TruncatedVOSA::vec_mode_block(const Vec& v, long n, long src2) const {
    Weight vw = wt_of(v);
    long tgt2 = src2 + vw.twice - 2 * n - 2;
    int ds = dim(src2);
    if (tgt2 < 0) return Mat(0, ds);
    Mat out(tgt2 <= cutoff2() ? dim(tgt2) : 0, ds); // shape fixed before any throw
    for (const auto& [id, s] : v.c) {
        const Mat& b = basis_mode_block(id, n, src2);
        if (!b.is_zero()) out += s * b;
    }
    return out;
}

Vec TruncatedVOSA::apply_basis_mode(int id, long n, const Vec& x) const {
    Vec out;
    // split x into weight slices
    std::map<long, std::vector<std::pair<int, Scalar>>> slices;
    for (const auto& [i, s] : x.c) slices[space.wt[i].twice].push_back({i, s});
    for (const auto& [w2, entries] : slices) {
        const Mat& b = basis_mode_block(id, n, w2);
        if (b.rows == 0 || b.is_zero()) continue;
        std::vector<Scalar> col(dim(w2));
        for (const auto& [i, s] : entries) col[space.pos(i)] = s;
        std::vector<Scalar> res = mat_vec(b, col);
        long tgt2 = w2 + space.wt[id].twice - 2 * n - 2;
        const auto& tgt_ids = space.ids.at(tgt2);
        for (int k = 0; k < static_cast<int>(res.size()); ++k) out.add(tgt_ids[k], res[k]);
    }
    return out;
}

Vec TruncatedVOSA::apply_mode(const Vec& v, long n, const Vec& x) const {
    Vec out;
    for (const auto& [id, s] : v.c) {
        Vec t = apply_basis_mode(id, n, x);
        t *= s;
        out += t;
    }
    return out;
}

Vec TruncatedVOSA::phi(const Vec& v) const {
    Vec out;
    for (const auto& [id, s] : v.c) out.add(phi_perm[id], s.conj() * phi_sign[id]);
    return out;
}

Scalar TruncatedVOSA::herm(const Vec& x, const Vec& y) const {
    Scalar out;
    for (const auto& [i, si] : x.c) {
        long w2 = space.wt[i].twice;
        auto git = gram.find(w2);
        if (git == gram.end()) continue;
        int pi = space.pos(i);
        for (const auto& [j, sj] : y.c) {
            if (space.wt[j].twice != w2) continue;
            out += si.conj() * git->second.at(pi, space.pos(j)) * sj;
        }
    }
    return out;
}

Mat TruncatedVOSA::adjoint_mode_block(int g, long m, long wu2) const {
    const Generator& a = gens[g];
    long w2 = a.wt.twice;
    long wv2 = wu2 + 2 * m + 2 - w2;
    int du = dim(wu2);
    if (wv2 < 0) return Mat(0, du);
    if (wv2 > cutoff2())
        throw CutoffExceeded("adjoint mode target weight above cutoff");
    // sign (-1)^{w+2w^2} = (-1)^{p(p+1)/2} for w = p/2
    long p = w2;
    int sgn = ((p * (p + 1) / 2) % 2 == 0) ? 1 : -1;
    Mat out(dim(wv2), du);
    Vec chain = a.vec; // holds L(1)^j a / j!
    for (long j = 0;; ++j) {
        if (j > 0) {
            chain = Scalar(rat(1, j)) * apply_mode(conformal, 2, chain);
            if (chain.is_zero()) break;
        }
        long nj = w2 - j - m - 2;
        Mat blk = vec_mode_block(chain, nj, wu2);
        if (blk.rows > 0) out += Scalar(rat(sgn)) * blk;
        if (a.wt.twice - 2 * j <= 0) break; // L(1) chain exhausted at weight <= 0
    }
    return out;
}

InvarianceReport TruncatedVOSA::invariance_check(int g, Weight max_weight) const {
    const Generator& a = gens[g];
    if (max_weight.twice + a.wt.twice > cutoff2())
        throw std::invalid_argument("invariance_check needs max_weight <= cutoff - wt(generator)");
    InvarianceReport rep;
    Vec phia = phi(a.vec);
    for (long wu2 = 0; wu2 <= max_weight.twice; ++wu2) {
        if (dim(wu2) == 0) continue;
        for (long wv2 = 0; wv2 <= max_weight.twice; ++wv2) {
            if (dim(wv2) == 0) continue;
            long num = wv2 - wu2 + a.wt.twice - 2;
            if (((num % 2) + 2) % 2 != 0) continue; // no integer mode pairs these weights
            long m = num / 2;
            Mat lhs = adjoint_mode_block(g, m, wu2).conj_transpose() * gram.at(wv2);
            Mat rhs = gram.at(wu2) * vec_mode_block(phia, m, wv2);
            if (lhs == rhs) continue;
            for (int u = 0; u < lhs.rows; ++u)
                for (int v = 0; v < lhs.cols; ++v)
                    if (lhs.at(u, v) != rhs.at(u, v))
                        rep.failures.push_back({a.name, m, wu2, wv2, u, v, lhs.at(u, v), rhs.at(u, v)});
        }
    }
    rep.pass = rep.failures.empty();
    return rep;
}

CommutatorResult TruncatedVOSA::commutator_check(const Vec& u, const Vec& v, long m, long n, const Vec& w) const {
    CommutatorResult res;
    long uw2 = wt_of(u).twice, vw2 = wt_of(v).twice;
    int pu = static_cast<int>(((uw2 % 2) + 2) % 2);
    int pv = static_cast<int>(((vw2 % 2) + 2) % 2);
    Vec lhs = apply_mode(u, m, apply_mode(v, n, w));
    Vec swapped = apply_mode(v, n, apply_mode(u, m, w));
    if (pu * pv == 1) lhs += swapped; else lhs -= swapped;
    Vec rhs;
    for (long i = 0; 2 * i <= uw2 + vw2 - 2; ++i) {
        Rational c = binom(m, i);
        if (c == 0) continue;
        Vec uiv = apply_mode(u, i, v);
        if (uiv.is_zero()) continue;
        Vec term = apply_mode(uiv, m + n - i, w);
        term *= Scalar(c);
        rhs += term;
    }
    res.lhs = lhs;
    res.rhs = rhs;
    res.pass = (lhs == rhs);
    return res;
}

std::map<long, Mat> TruncatedVOSA::bilinear_from_hermitian(int sign, bool* symmetric) const {
    std::map<long, Mat> out;
    bool sym = true;
    for (const auto& [w2, ids] : space.ids) {
        int d = static_cast<int>(ids.size());
        Mat phim(d, d);
        for (int j = 0; j < d; ++j) {
            int img = phi_perm[ids[j]];
            if (space.wt[img].twice != w2) throw SymmetryFailure("involution does not preserve weight");
            phim.at(space.pos(img), j) = phi_sign[ids[j]];
        }
        Mat b = Scalar(rat(sign)) * (gram.at(w2) * phim);
        if (!(b == b.transpose())) sym = false;
        out[w2] = std::move(b);
    }
    if (!sym && symmetric == nullptr) throw SymmetryFailure("bilinear form is not symmetric");
    if (symmetric) *symmetric = sym;
    return out;
}

std::map<long, long> TruncatedVOSA::characters() const {
    std::map<long, long> out;
    for (long w2 = 0; w2 <= cutoff2(); ++w2) out[w2] = dim(w2);
    return out;
}

} // namespace vosa
