#include "vosa/structure.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace vosa {

namespace {

long min_cutoff(const std::vector<const TruncatedVOSA*>& parts) {
    long c = parts.front()->cutoff2();
    for (const auto* p : parts) c = std::min(c, p->cutoff2());
    return c;
}

Mat mat_mul_cols(const Mat& S, const std::vector<std::vector<Scalar>>& cols) {
    Mat K(S.cols, static_cast<int>(cols.size()));
    for (int j = 0; j < K.cols; ++j)
        for (int i = 0; i < K.rows; ++i) K.at(i, j) = cols[j][i];
    return S * K;
}

// solve S T = Y (S with full column rank); nullopt when Y is not in col(S)
std::optional<Mat> solve_in_span(const Mat& S, const Mat& Y) {
    int n = S.rows, k = S.cols, m = Y.cols;
    Mat aug(n, k + m);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) aug.at(i, j) = S.at(i, j);
        for (int j = 0; j < m; ++j) aug.at(i, k + j) = Y.at(i, j);
    }
    int row = 0;
    std::vector<int> piv_col;
    for (int col = 0; col < k + m && row < n; ++col) {
        int p = -1;
        for (int i = row; i < n; ++i)
            if (!aug.at(i, col).is_zero()) { p = i; break; }
        if (p < 0) continue;
        if (col >= k) return std::nullopt; // pivot in the Y part: not in span
        if (p != row)
            for (int j = 0; j < k + m; ++j) std::swap(aug.at(p, j), aug.at(row, j));
        Scalar inv = Scalar(1) / aug.at(row, col);
        for (int j = col; j < k + m; ++j) aug.at(row, j) = inv * aug.at(row, j);
        for (int i = 0; i < n; ++i) {
            if (i == row || aug.at(i, col).is_zero()) continue;
            Scalar f = aug.at(i, col);
            for (int j = col; j < k + m; ++j) aug.at(i, j) -= f * aug.at(row, j);
        }
        piv_col.push_back(col);
        ++row;
    }
    if (static_cast<int>(piv_col.size()) != k) return std::nullopt;
    Mat T(k, m);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < m; ++j) T.at(i, j) = aug.at(i, k + j);
    return T;
}

Scalar trace(const Mat& m) {
    Scalar t;
    for (int i = 0; i < std::min(m.rows, m.cols); ++i) t += m.at(i, i);
    return t;
}

std::vector<Rational> real_coeffs(const std::vector<Scalar>& cs) {
    std::vector<Rational> out;
    out.reserve(cs.size());
    for (const auto& c : cs) {
        if (c.im != 0) throw std::runtime_error("complex characteristic polynomial");
        out.push_back(c.re);
    }
    return out;
}

// vacuum coordinates within the weight-0 slice
std::vector<Scalar> vacuum_coords(const TruncatedVOSA& V) {
    std::vector<Scalar> v(static_cast<size_t>(V.dim(0)));
    for (const auto& [id, c] : V.vacuum.c) v[static_cast<size_t>(V.space.pos(id))] = c;
    return v;
}

// scalar s with col == s * vacuum (in weight-0 coordinates); ok=false otherwise
Scalar scalar_along_vacuum(const std::vector<Scalar>& vac, const std::vector<Scalar>& col, bool* ok) {
    size_t t = 0;
    while (t < vac.size() && vac[t].is_zero()) ++t;
    if (t == vac.size()) { *ok = col.empty(); return Scalar(0); }
    Scalar s = col[t] / vac[t];
    for (size_t i = 0; i < vac.size(); ++i)
        if (!(col[i] - s * vac[i]).is_zero()) { *ok = false; return s; }
    *ok = true;
    return s;
}

} // namespace

TruncatedVOSA direct_sum(const std::vector<const TruncatedVOSA*>& parts) {
    if (parts.empty()) throw std::invalid_argument("direct_sum of no components");
    const Rational c = parts.front()->central_charge;
    for (const auto* p : parts)
        if (p->central_charge != c)
            throw CentralChargeMismatch("direct sum requires equal central charges, got " +
                                        rational_str(c) + " and " + rational_str(p->central_charge));
    const long cut2 = min_cutoff(parts);

    TruncatedVOSA v;
    v.space.cutoff = Weight(cut2);
    v.central_charge = c;

    auto emb = std::make_shared<std::vector<std::vector<int>>>(parts.size());
    auto rev = std::make_shared<std::vector<std::pair<int, int>>>();
    for (size_t k = 0; k < parts.size(); ++k)
        (*emb)[k].assign(static_cast<size_t>(parts[k]->space.total_dim()), -1);
    for (long w2 = 0; w2 <= cut2; ++w2)
        for (size_t k = 0; k < parts.size(); ++k) {
            auto it = parts[k]->space.ids.find(w2);
            if (it == parts[k]->space.ids.end()) continue;
            for (int old : it->second) {
                int nid = v.space.add(Weight(w2), parts[k]->space.parity[static_cast<size_t>(old)],
                                      "V" + std::to_string(k + 1) + ":" +
                                          parts[k]->space.label[static_cast<size_t>(old)]);
                (*emb)[k][static_cast<size_t>(old)] = nid;
                rev->push_back({static_cast<int>(k), old});
            }
        }

    auto embed_vec = [&](size_t k, const Vec& x) {
        Vec out;
        for (const auto& [id, s] : x.c) out.add((*emb)[k][static_cast<size_t>(id)], s);
        return out;
    };
    for (size_t k = 0; k < parts.size(); ++k) {
        v.vacuum += embed_vec(k, parts[k]->vacuum);
        v.conformal += embed_vec(k, parts[k]->conformal);
    }

    for (long w2 = 0; w2 <= cut2; ++w2) {
        int d = v.dim(w2);
        if (d == 0) continue;
        Mat g(d, d);
        int off = 0;
        for (const auto* p : parts) {
            int dk = p->dim(w2);
            if (dk == 0) continue;
            const Mat& gk = p->gram.at(w2);
            for (int i = 0; i < dk; ++i)
                for (int j = 0; j < dk; ++j) g.at(off + i, off + j) = gk.at(i, j);
            off += dk;
        }
        v.gram[w2] = std::move(g);
    }

    int total = v.space.total_dim();
    v.phi_perm.resize(static_cast<size_t>(total));
    v.phi_sign.resize(static_cast<size_t>(total));
    for (size_t k = 0; k < parts.size(); ++k)
        for (size_t old = 0; old < (*emb)[k].size(); ++old) {
            int nid = (*emb)[k][old];
            if (nid < 0) continue;
            v.phi_perm[static_cast<size_t>(nid)] =
                (*emb)[k][static_cast<size_t>(parts[k]->phi_perm[old])];
            v.phi_sign[static_cast<size_t>(nid)] = parts[k]->phi_sign[old];
        }

    auto genmap = std::make_shared<std::vector<std::pair<int, int>>>();
    for (size_t k = 0; k < parts.size(); ++k)
        for (size_t g = 0; g < parts[k]->gens.size(); ++g) {
            const auto& gen = parts[k]->gens[g];
            if (gen.wt.twice > cut2) continue;
            v.gens.push_back({"V" + std::to_string(k + 1) + "." + gen.name,
                              embed_vec(k, gen.vec), gen.wt, gen.parity});
            genmap->push_back({static_cast<int>(k), static_cast<int>(g)});
        }

    auto ps = std::make_shared<std::vector<const TruncatedVOSA*>>(parts);
    auto offsets = [ps](size_t k, long w2) {
        int off = 0;
        for (size_t j = 0; j < k; ++j) off += (*ps)[j]->dim(w2);
        return off;
    };
    auto embed_block = [ps, offsets](size_t k, const Mat& blk, long tgt2, long src2) {
        int tr = 0, tc = 0;
        for (const auto* p : *ps) { tr += p->dim(tgt2); tc += p->dim(src2); }
        Mat out(tr, tc);
        int ro = offsets(k, tgt2), co = offsets(k, src2);
        for (int i = 0; i < blk.rows; ++i)
            for (int j = 0; j < blk.cols; ++j) out.at(ro + i, co + j) = blk.at(i, j);
        return out;
    };

    v.direct_mode_hook = [ps, rev, embed_block](int id, long n, long src2) -> Mat {
        auto [k, old] = (*rev)[static_cast<size_t>(id)];
        const auto* p = (*ps)[static_cast<size_t>(k)];
        long tgt2 = src2 + p->space.wt[static_cast<size_t>(old)].twice - 2 * n - 2;
        return embed_block(static_cast<size_t>(k), p->basis_mode_block(old, n, src2), tgt2, src2);
    };
    v.gen_mode_hook = [ps, genmap, embed_block](int g, long n, long src2) -> Mat {
        auto [k, lg] = (*genmap)[static_cast<size_t>(g)];
        const auto* p = (*ps)[static_cast<size_t>(k)];
        long tgt2 = src2 + p->gens[static_cast<size_t>(lg)].wt.twice - 2 * n - 2;
        return embed_block(static_cast<size_t>(k), p->gen_mode_block(lg, n, src2), tgt2, src2);
    };

    v.resolver.resize(static_cast<size_t>(total));
    for (auto& r : v.resolver) r.kind = TruncatedVOSA::Resolver::Direct;
    return v;
}

TruncatedVOSA tensor_product(const TruncatedVOSA& A, const TruncatedVOSA& B) {
    if (A.vacuum.c.size() != 1 || B.vacuum.c.size() != 1)
        throw std::invalid_argument("tensor_product expects one-term vacua");
    const long cut2 = std::min(A.cutoff2(), B.cutoff2());

    TruncatedVOSA v;
    v.space.cutoff = Weight(cut2);
    v.central_charge = A.central_charge + B.central_charge;

    auto pairs = std::make_shared<std::vector<std::pair<int, int>>>();
    auto pidx = std::make_shared<std::map<std::pair<int, int>, int>>();
    for (long w2 = 0; w2 <= cut2; ++w2)
        for (long wa2 = 0; wa2 <= w2; ++wa2) {
            auto ia = A.space.ids.find(wa2);
            auto ib = B.space.ids.find(w2 - wa2);
            if (ia == A.space.ids.end() || ib == B.space.ids.end()) continue;
            for (int p : ia->second)
                for (int q : ib->second) {
                    int par = (A.space.parity[static_cast<size_t>(p)] +
                               B.space.parity[static_cast<size_t>(q)]) % 2;
                    int nid = v.space.add(Weight(w2), par,
                                          A.space.label[static_cast<size_t>(p)] + "(x)" +
                                              B.space.label[static_cast<size_t>(q)]);
                    (*pairs).push_back({p, q});
                    (*pidx)[{p, q}] = nid;
                }
        }

    auto tensor_embed = [&](const Vec& x, const Vec& y) {
        Vec out;
        for (const auto& [p, cp] : x.c)
            for (const auto& [q, cq] : y.c) {
                auto it = pidx->find({p, q});
                if (it == pidx->end())
                    throw CutoffExceeded("tensor component above the cutoff");
                out.add(it->second, cp * cq);
            }
        return out;
    };
    v.vacuum = tensor_embed(A.vacuum, B.vacuum);
    v.conformal = tensor_embed(A.conformal, B.vacuum) + tensor_embed(A.vacuum, B.conformal);

    for (long w2 = 0; w2 <= cut2; ++w2) {
        auto it = v.space.ids.find(w2);
        if (it == v.space.ids.end()) continue;
        const auto& ids = it->second;
        int d = static_cast<int>(ids.size());
        Mat g(d, d);
        for (int i = 0; i < d; ++i) {
            auto [pi, qi] = (*pairs)[static_cast<size_t>(ids[static_cast<size_t>(i)])];
            long wpi2 = A.space.wt[static_cast<size_t>(pi)].twice;
            for (int j = 0; j < d; ++j) {
                auto [pj, qj] = (*pairs)[static_cast<size_t>(ids[static_cast<size_t>(j)])];
                if (A.space.wt[static_cast<size_t>(pj)].twice != wpi2) continue;
                g.at(i, j) = A.gram.at(wpi2).at(A.space.pos(pi), A.space.pos(pj)) *
                             B.gram.at(w2 - wpi2).at(B.space.pos(qi), B.space.pos(qj));
            }
        }
        v.gram[w2] = std::move(g);
    }

    int total = v.space.total_dim();
    v.phi_perm.resize(static_cast<size_t>(total));
    v.phi_sign.resize(static_cast<size_t>(total));
    for (int id = 0; id < total; ++id) {
        auto [p, q] = (*pairs)[static_cast<size_t>(id)];
        v.phi_perm[static_cast<size_t>(id)] =
            pidx->at({A.phi_perm[static_cast<size_t>(p)], B.phi_perm[static_cast<size_t>(q)]});
        v.phi_sign[static_cast<size_t>(id)] =
            A.phi_sign[static_cast<size_t>(p)] * B.phi_sign[static_cast<size_t>(q)];
    }

    int na = static_cast<int>(A.gens.size());
    for (const auto& g : A.gens)
        v.gens.push_back({"L." + g.name, tensor_embed(g.vec, B.vacuum), g.wt, g.parity});
    for (const auto& g : B.gens)
        v.gens.push_back({"R." + g.name, tensor_embed(A.vacuum, g.vec), g.wt, g.parity});

    auto pa = std::make_shared<const TruncatedVOSA*>(&A);
    auto pb = std::make_shared<const TruncatedVOSA*>(&B);
    auto vs = std::make_shared<GradedSpace>(v.space); // frozen copy for the hooks

    // column of the (x (x) y)_n action on basis pair (p, q)
    auto pair_action = [pa, pb, vs, pairs, pidx](int x, int y, long n, int p, int q, long tgt2,
                                                 std::vector<std::pair<int, Scalar>>& out) {
        const TruncatedVOSA& A2 = **pa;
        const TruncatedVOSA& B2 = **pb;
        long wx2 = A2.space.wt[static_cast<size_t>(x)].twice;
        long wy2 = B2.space.wt[static_cast<size_t>(y)].twice;
        long wp2 = A2.space.wt[static_cast<size_t>(p)].twice;
        long wq2 = B2.space.wt[static_cast<size_t>(q)].twice;
        Scalar sgn((B2.space.parity[static_cast<size_t>(y)] *
                    A2.space.parity[static_cast<size_t>(p)]) % 2 ? -1 : 1);
        // a with 0 <= wt(x_a p) <= tgt2 (then wt(y_b q) = tgt2 - wt(x_a p) >= 0)
        for (long a = (wx2 + wp2 - tgt2 - 2) / 2;; ++a) {
            long tA2 = wx2 + wp2 - 2 * a - 2;
            if (tA2 < 0) break;
            if (tA2 > tgt2) continue;
            long b = n - 1 - a;
            long tB2 = wy2 + wq2 - 2 * b - 2;
            if (tB2 != tgt2 - tA2 || A2.dim(tA2) == 0 || B2.dim(tB2) == 0) continue;
            Vec va = A2.apply_basis_mode(x, a, Vec::unit(p));
            if (va.is_zero()) continue;
            Vec vb = B2.apply_basis_mode(y, b, Vec::unit(q));
            for (const auto& [ia, ca] : va.c)
                for (const auto& [ib, cb] : vb.c)
                    out.push_back({pidx->at({ia, ib}), sgn * ca * cb});
        }
    };

    v.direct_mode_hook = [vs, pairs, pair_action](int id, long n, long src2) -> Mat {
        auto [x, y] = (*pairs)[static_cast<size_t>(id)];
        long tgt2 = src2 + vs->wt[static_cast<size_t>(id)].twice - 2 * n - 2;
        const auto& src = vs->ids.at(src2);
        Mat out(vs->dim(tgt2), static_cast<int>(src.size()));
        for (int col = 0; col < out.cols; ++col) {
            auto [p, q] = (*pairs)[static_cast<size_t>(src[static_cast<size_t>(col)])];
            std::vector<std::pair<int, Scalar>> entries;
            pair_action(x, y, n, p, q, tgt2, entries);
            for (const auto& [nid, s] : entries) out.at(vs->pos(nid), col) += s;
        }
        return out;
    };
    auto gvecs = std::make_shared<std::vector<Vec>>();
    auto gwts = std::make_shared<std::vector<long>>();
    for (const auto& g : v.gens) {
        gvecs->push_back(g.vec);
        gwts->push_back(g.wt.twice);
    }
    (void)na;
    v.gen_mode_hook = [vs, pairs, pair_action, gvecs, gwts](int g, long n, long src2) -> Mat {
        long tgt2 = src2 + (*gwts)[static_cast<size_t>(g)] - 2 * n - 2;
        const auto& src = vs->ids.at(src2);
        Mat out(vs->dim(tgt2), static_cast<int>(src.size()));
        for (int col = 0; col < out.cols; ++col) {
            auto [p, q] = (*pairs)[static_cast<size_t>(src[static_cast<size_t>(col)])];
            for (const auto& [id, coef] : (*gvecs)[static_cast<size_t>(g)].c) {
                auto [x, y] = (*pairs)[static_cast<size_t>(id)];
                std::vector<std::pair<int, Scalar>> entries;
                pair_action(x, y, n, p, q, tgt2, entries);
                for (const auto& [nid, s] : entries) out.at(vs->pos(nid), col) += coef * s;
            }
        }
        return out;
    };

    v.resolver.resize(static_cast<size_t>(total));
    for (auto& r : v.resolver) r.kind = TruncatedVOSA::Resolver::Direct;
    return v;
}

DecompositionReport decompose(const TruncatedVOSA& V) {
    auto it0 = V.space.ids.find(0);
    if (it0 == V.space.ids.end() || it0->second.empty())
        throw std::invalid_argument("decompose: weight-0 space is empty");
    const auto& ids0 = it0->second;
    int d0 = static_cast<int>(ids0.size());

    std::vector<Mat> mult(static_cast<size_t>(d0));
    for (int i = 0; i < d0; ++i)
        mult[static_cast<size_t>(i)] = V.basis_mode_block(ids0[static_cast<size_t>(i)], -1, 0);

    // semisimplicity gate: trace form of the regular representation
    Mat tf(d0, d0);
    for (int i = 0; i < d0; ++i)
        for (int j = 0; j < d0; ++j)
            tf.at(i, j) = trace(mult[static_cast<size_t>(i)] * mult[static_cast<size_t>(j)]);
    if (rank_of(tf) < d0)
        throw NonSemisimpleWeightZero("weight-0 algebra has nilpotents (degenerate trace form)");

    std::vector<Mat> spaces{Mat::identity(d0)};
    for (const auto& M : mult) {
        std::vector<Mat> next;
        for (const auto& S : spaces) {
            if (S.cols == 1) { next.push_back(S); continue; }
            auto T = solve_in_span(S, M * S);
            if (!T) throw std::runtime_error("weight-0 subspace not invariant");
            std::vector<Rational> cp = real_coeffs(char_poly(*T));
            auto roots = rational_roots(cp);
            std::sort(roots.begin(), roots.end());
            int found = 0;
            std::vector<Mat> pieces;
            for (const auto& lam : roots) {
                Mat shifted = *T;
                for (int i = 0; i < shifted.rows; ++i) shifted.at(i, i) -= Scalar(lam);
                auto K = kernel_basis(shifted);
                if (K.empty()) continue;
                // strip the (x - lam) factors so the leftover polynomial cuts
                // out the complement of the rational eigenspaces
                for (size_t rep = 0; rep < K.size(); ++rep) {
                    std::vector<Rational> q(cp.size() - 1);
                    Rational carry = cp.back();
                    for (size_t i = cp.size() - 1; i-- > 0;) {
                        q[i] = carry;
                        carry = cp[i] + lam * carry;
                        carry.canonicalize();
                    }
                    if (carry != 0)
                        throw NonSemisimpleWeightZero("eigenvalue multiplicity mismatch");
                    cp = std::move(q);
                }
                pieces.push_back(mat_mul_cols(S, K));
                found += static_cast<int>(K.size());
            }
            if (found == 0) { next.push_back(S); continue; } // irreducible over Q: keep
            if (found < S.cols) {
                // complement: kernel of the stripped characteristic polynomial at T
                Mat g(S.cols, S.cols);
                for (size_t i = cp.size(); i-- > 0;) {
                    g = g * (*T);
                    for (int r = 0; r < S.cols; ++r) g.at(r, r) += Scalar(cp[i]);
                }
                auto K = kernel_basis(g);
                if (found + static_cast<int>(K.size()) != S.cols)
                    throw NonSemisimpleWeightZero("weight-0 left multiplication is not semisimple");
                pieces.push_back(mat_mul_cols(S, K));
            }
            for (auto& p : pieces) next.push_back(std::move(p));
        }
        spaces = std::move(next);
    }

    // vacuum = sum of block units: solve in the concatenated eigenbasis
    Mat C(d0, d0);
    std::vector<int> owner(static_cast<size_t>(d0));
    {
        int col = 0;
        for (size_t s = 0; s < spaces.size(); ++s)
            for (int j = 0; j < spaces[s].cols; ++j, ++col) {
                owner[static_cast<size_t>(col)] = static_cast<int>(s);
                for (int i = 0; i < d0; ++i) C.at(i, col) = spaces[s].at(i, j);
            }
        if (col != d0) throw std::runtime_error("eigenbasis does not span weight 0");
    }
    auto Cinv = inverse(C);
    if (!Cinv) throw std::runtime_error("eigenbasis is singular");
    std::vector<Scalar> vac = vacuum_coords(V);
    std::vector<Scalar> coords = mat_vec(*Cinv, vac);

    DecompositionReport rep;
    rep.summands.resize(spaces.size());
    for (int col = 0; col < d0; ++col) {
        if (coords[static_cast<size_t>(col)].is_zero()) continue;
        auto& e = rep.summands[static_cast<size_t>(owner[static_cast<size_t>(col)])].idempotent;
        for (int i = 0; i < d0; ++i)
            e.add(ids0[static_cast<size_t>(i)], coords[static_cast<size_t>(col)] * C.at(i, col));
    }

    Vec esum;
    rep.idempotents_orthogonal = true;
    for (size_t i = 0; i < rep.summands.size(); ++i) {
        esum += rep.summands[i].idempotent;
        for (size_t j = 0; j < rep.summands.size(); ++j) {
            Vec prod = V.apply_mode(rep.summands[i].idempotent, -1, rep.summands[j].idempotent);
            Vec expect = (i == j) ? rep.summands[i].idempotent : Vec{};
            if (!(prod == expect)) rep.idempotents_orthogonal = false;
        }
    }
    rep.idempotents_sum_to_vacuum = (esum == V.vacuum);

    for (auto& s : rep.summands) {
        s.conformal = V.apply_mode(V.conformal, -1, s.idempotent);
        for (const auto& [w2, ids] : V.space.ids) {
            if (ids.empty()) continue;
            Mat P = V.vec_mode_block(s.idempotent, -1, w2);
            s.dims[w2] = rank_of(P);
            if (w2 < 0 && s.dims[w2] > 0) s.no_negative_weights = false;
            if (w2 == 0) s.vacuum_dim_one = (s.dims[w2] == 1);
            if (w2 == 2) {
                Mat l1 = V.vec_mode_block(V.conformal, 2, 2); // L(1) on weight 1
                s.l1_kills_weight_one = (l1 * P).is_zero();
            }
        }
        if (V.dim(2) == 0) s.l1_kills_weight_one = true;
        s.l_minus1_kills_vacuum = V.apply_mode(V.conformal, 0, s.idempotent).is_zero();
    }
    return rep;
}

WeightOneAlgebra weight_one_algebra(const TruncatedVOSA& V) {
    WeightOneAlgebra W;
    auto it = V.space.ids.find(2);
    if (it == V.space.ids.end() || it->second.empty()) return W;
    const auto& ids = it->second;
    int d = static_cast<int>(ids.size());
    W.d = d;
    W.basis_ids = ids;

    W.ad.reserve(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) W.ad.push_back(V.basis_mode_block(ids[static_cast<size_t>(i)], 0, 2));

    std::vector<Scalar> vac = vacuum_coords(V);
    W.form = Mat(d, d);
    for (int i = 0; i < d; ++i) {
        Mat b1 = V.basis_mode_block(ids[static_cast<size_t>(i)], 1, 2);
        for (int j = 0; j < d; ++j) {
            std::vector<Scalar> col(static_cast<size_t>(b1.rows));
            for (int r = 0; r < b1.rows; ++r) col[static_cast<size_t>(r)] = b1.at(r, j);
            bool ok = true;
            W.form.at(i, j) = scalar_along_vacuum(vac, col, &ok);
            if (!ok) W.form_scalar = false;
        }
    }

    for (int i = 0; i < d && W.antisymmetric; ++i)
        for (int j = 0; j < d && W.antisymmetric; ++j)
            for (int r = 0; r < d; ++r)
                if (!(W.ad[static_cast<size_t>(i)].at(r, j) +
                      W.ad[static_cast<size_t>(j)].at(r, i)).is_zero()) {
                    W.antisymmetric = false;
                    break;
                }

    auto col_of = [d](const Mat& m, int j) {
        std::vector<Scalar> c(static_cast<size_t>(d));
        for (int r = 0; r < d; ++r) c[static_cast<size_t>(r)] = m.at(r, j);
        return c;
    };
    for (int i = 0; i < d && W.jacobi; ++i)
        for (int j = 0; j < d && W.jacobi; ++j)
            for (int k = 0; k < d && W.jacobi; ++k) {
                auto t1 = mat_vec(W.ad[static_cast<size_t>(i)], col_of(W.ad[static_cast<size_t>(j)], k));
                auto t2 = mat_vec(W.ad[static_cast<size_t>(j)], col_of(W.ad[static_cast<size_t>(k)], i));
                auto t3 = mat_vec(W.ad[static_cast<size_t>(k)], col_of(W.ad[static_cast<size_t>(i)], j));
                for (int r = 0; r < d; ++r)
                    if (!(t1[static_cast<size_t>(r)] + t2[static_cast<size_t>(r)] +
                          t3[static_cast<size_t>(r)]).is_zero()) {
                        W.jacobi = false;
                        break;
                    }
            }

    for (int i = 0; i < d && W.form_invariant; ++i)
        for (int j = 0; j < d && W.form_invariant; ++j)
            for (int k = 0; k < d; ++k) {
                Scalar lhs, rhs;
                for (int r = 0; r < d; ++r) {
                    lhs += W.ad[static_cast<size_t>(i)].at(r, j) * W.form.at(r, k);
                    rhs += W.form.at(i, r) * W.ad[static_cast<size_t>(j)].at(r, k);
                }
                if (!(lhs - rhs).is_zero()) { W.form_invariant = false; break; }
            }

    for (int i = 0; i < d && W.contragredient; ++i)
        for (int j = 0; j < d && W.contragredient; ++j) {
            Vec uij;
            for (int r = 0; r < d; ++r)
                uij.add(ids[static_cast<size_t>(r)], W.ad[static_cast<size_t>(i)].at(r, j));
            Vec phiu = V.phi(Vec::unit(ids[static_cast<size_t>(i)]));
            for (int k = 0; k < d; ++k) {
                Vec uk = Vec::unit(ids[static_cast<size_t>(k)]);
                Scalar lhs = V.herm(uij, uk);
                Scalar rhs = -V.herm(Vec::unit(ids[static_cast<size_t>(j)]),
                                     V.apply_mode(phiu, 0, uk));
                if (!(lhs - rhs).is_zero()) { W.contragredient = false; break; }
            }
        }

    W.killing = Mat(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            W.killing.at(i, j) = trace(W.ad[static_cast<size_t>(i)] * W.ad[static_cast<size_t>(j)]);
    W.killing_rank = rank_of(W.killing);
    W.form_radical_dim = d - rank_of(W.form);

    // reductivity evidence: radical of the form meets the derived algebra trivially
    auto rad = kernel_basis(W.form);
    Mat der(d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int r = 0; r < d; ++r)
                der.at(r, i * d + j) = W.ad[static_cast<size_t>(i)].at(r, j);
    int rder = rank_of(der);
    Mat both(d, static_cast<int>(rad.size()) + d * d);
    for (size_t c = 0; c < rad.size(); ++c)
        for (int r = 0; r < d; ++r) both.at(r, static_cast<int>(c)) = rad[c][static_cast<size_t>(r)];
    for (int j = 0; j < d * d; ++j)
        for (int r = 0; r < d; ++r) both.at(r, static_cast<int>(rad.size()) + j) = der.at(r, j);
    W.radical_meets_derived = (rank_of(both) != static_cast<int>(rad.size()) + rder);
    return W;
}

namespace {

ConformalComparison compare_with_quadratic(const TruncatedVOSA& V, const Rational& prefactor) {
    auto it = V.space.ids.find(2);
    if (it == V.space.ids.end() || it->second.empty())
        throw std::invalid_argument("conformal comparison needs a nonzero weight-one space");
    const auto& ids = it->second;
    int d = static_cast<int>(ids.size());

    std::vector<Scalar> vac = vacuum_coords(V);
    Mat B(d, d);
    for (int i = 0; i < d; ++i) {
        Mat b1 = V.basis_mode_block(ids[static_cast<size_t>(i)], 1, 2);
        for (int j = 0; j < d; ++j) {
            std::vector<Scalar> col(static_cast<size_t>(b1.rows));
            for (int r = 0; r < b1.rows; ++r) col[static_cast<size_t>(r)] = b1.at(r, j);
            bool ok = true;
            B.at(i, j) = scalar_along_vacuum(vac, col, &ok);
            if (!ok) throw std::invalid_argument("weight-one form is not scalar on the vacuum");
        }
    }
    auto Binv = inverse(B);
    if (!Binv) throw std::invalid_argument("weight-one invariant form is degenerate");

    ConformalComparison cc;
    for (int j = 0; j < d; ++j) {
        Vec t = V.apply_basis_mode(ids[static_cast<size_t>(j)], -1, V.vacuum);
        for (int i = 0; i < d; ++i) {
            Scalar coef = Scalar(prefactor) * Binv->at(i, j);
            if (coef.is_zero()) continue;
            cc.omega_prime += coef * V.apply_basis_mode(ids[static_cast<size_t>(i)], -1, t);
        }
    }
    cc.omega_dd = V.conformal - cc.omega_prime;
    cc.norm2 = V.herm(cc.omega_dd, cc.omega_dd);
    cc.pass = cc.omega_dd.is_zero();
    return cc;
}

} // namespace

ConformalComparison conformal_comparison_sugawara(const TruncatedVOSA& V, const Rational& level,
                                                  const Rational& dual_coxeter) {
    Rational denom = 2 * (level + dual_coxeter);
    if (denom == 0) throw std::invalid_argument("level + dual Coxeter number must be nonzero");
    Rational pre = level / denom;
    pre.canonicalize();
    return compare_with_quadratic(V, pre);
}

ConformalComparison conformal_comparison_heisenberg(const TruncatedVOSA& V) {
    return compare_with_quadratic(V, rat(1, 2));
}

} // namespace vosa
