#include "vosa/ns.hpp"

#include <algorithm>
#include <memory>
#include <mutex>

namespace vosa {

std::string NSMonomial::str() const {
    if (empty()) return "1";
    std::string s;
    for (long l : L) s += "L(-" + std::to_string(l) + ")";
    for (long g : G2) s += "G(-" + std::to_string(g) + "/2)";
    return s;
}

namespace {

void state_add(NSState& a, const NSMonomial& m, const Rational& x) {
    if (x == 0) return;
    auto it = a.find(m);
    if (it == a.end()) a.emplace(m, x);
    else {
        it->second += x;
        if (it->second == 0) a.erase(it);
    }
}

void state_acc(NSState& a, const NSState& b, const Rational& scale) {
    if (scale == 0) return;
    for (const auto& [m, x] : b) state_add(a, m, x * scale);
}

} // namespace

NSState NSContext::apply(int kind, long m2, const NSState& st) {
    NSState out;
    for (const auto& [mono, coef] : st) state_acc(out, apply_to_mono(kind, m2, mono), coef);
    return out;
}

const NSState& NSContext::apply_to_mono(int kind, long m2, const NSMonomial& mono) {
    auto key = std::make_tuple(kind, m2, mono);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    NSState out;
    if (mono.empty()) {
        // highest weight vector
        if (kind == 0) {
            if (m2 == 0) state_add(out, mono, p_.h);
            else if (m2 < 0) state_add(out, NSMonomial{{-m2 / 2}, {}}, 1);
        } else {
            if (m2 < 0) state_add(out, NSMonomial{{}, {-m2}}, 1);
        }
        return memo_.emplace(key, std::move(out)).first->second;
    }

    // creation modes that already fit the canonical order get prepended
    if (kind == 0 && m2 < 0 && (mono.L.empty() || -m2 / 2 >= mono.L.front())) {
        NSMonomial r = mono;
        r.L.insert(r.L.begin(), -m2 / 2);
        state_add(out, r, 1);
        return memo_.emplace(key, std::move(out)).first->second;
    }
    if (kind == 1 && m2 < 0 && mono.L.empty()) {
        if (mono.G2.empty() || -m2 > mono.G2.front()) {
            NSMonomial r = mono;
            r.G2.insert(r.G2.begin(), -m2);
            state_add(out, r, 1);
            return memo_.emplace(key, std::move(out)).first->second;
        }
        if (-m2 == mono.G2.front()) {
            // G(r)^2 = L(2r); no central term for r < 0
            NSMonomial rest{{}, {mono.G2.begin() + 1, mono.G2.end()}};
            out = apply_to_mono(0, 2 * m2, rest);
            return memo_.emplace(key, std::move(out)).first->second;
        }
    }

    // commute the mode past the leading factor f, then re-apply f
    int fk;
    long fm2;
    NSMonomial rest;
    if (!mono.L.empty()) {
        fk = 0;
        fm2 = -2 * mono.L.front();
        rest = NSMonomial{{mono.L.begin() + 1, mono.L.end()}, mono.G2};
    } else {
        fk = 1;
        fm2 = -mono.G2.front();
        rest = NSMonomial{{}, {mono.G2.begin() + 1, mono.G2.end()}};
    }

    struct Term { int kind; long m2; Rational coeff; };
    std::vector<Term> bracket;
    Rational central = 0;
    int sign = 1;
    if (kind == 0 && fk == 0) {
        // [L(m), L(fm)] = (m - fm) L(m+fm) + c/12 (m^3 - m) delta
        long m = m2 / 2, fm = fm2 / 2;
        bracket.push_back({0, m2 + fm2, rat(m - fm)});
        if (m + fm == 0) central = rat(m * m * m - m, 12) * p_.c;
    } else if (kind == 0 && fk == 1) {
        // [L(m), G(r)] = (m/2 - r) G(m+r)
        bracket.push_back({1, m2 + fm2, rat(m2 - 2 * fm2, 4)});
    } else if (kind == 1 && fk == 0) {
        // [G(r), L(n)] = (r - n/2) G(n+r)
        bracket.push_back({1, m2 + fm2, rat(2 * m2 - fm2, 4)});
    } else {
        // {G(r), G(s)} = 2 L(r+s) + c/3 (r^2 - 1/4) delta
        bracket.push_back({0, m2 + fm2, rat(2)});
        if (m2 + fm2 == 0) central = rat(m2 * m2 - 1, 12) * p_.c;
        sign = -1;
    }

    NSState tail = apply_to_mono(kind, m2, rest); // may recurse; copy held below
    state_acc(out, apply(fk, fm2, tail), rat(sign));
    for (const auto& t : bracket) {
        if (t.coeff == 0) continue;
        state_acc(out, apply_to_mono(t.kind, t.m2, rest), t.coeff);
    }
    if (central != 0) state_add(out, rest, central);
    return memo_.emplace(key, std::move(out)).first->second;
}

const std::vector<NSMonomial>& verma_basis(long w2) {
    static std::map<long, std::vector<NSMonomial>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lk(mtx);
    auto it = cache.find(w2);
    if (it != cache.end()) return it->second;

    std::vector<NSMonomial> out;
    // distinct half-odd G parts (doubled), strictly decreasing
    std::vector<std::vector<long>> gsets;
    std::vector<long> cur;
    auto gen_g = [&](auto&& self, long maxg2, long rem2) -> void {
        gsets.push_back(cur);
        for (long g2 = std::min(maxg2, rem2); g2 >= 1; g2 -= 2) {
            cur.push_back(g2);
            self(self, g2 - 2, rem2 - g2);
            cur.pop_back();
        }
    };
    gen_g(gen_g, w2 % 2 == 0 ? w2 - 1 : w2, w2);
    for (const auto& gs : gsets) {
        long gsum = 0;
        for (long g : gs) gsum += g;
        long rem2 = w2 - gsum;
        if (rem2 % 2 != 0) continue;
        long rem = rem2 / 2;
        // weakly decreasing positive L partitions of rem
        std::vector<long> lp;
        auto gen_l = [&](auto&& self, long maxp, long r) -> void {
            if (r == 0) {
                out.push_back(NSMonomial{lp, gs});
                return;
            }
            for (long pz = std::min(maxp, r); pz >= 1; --pz) {
                lp.push_back(pz);
                self(self, pz, r - pz);
                lp.pop_back();
            }
        };
        gen_l(gen_l, rem, rem);
    }
    // canonical order: G-major (more negative G modes first), then L
    std::sort(out.begin(), out.end(), [](const NSMonomial& a, const NSMonomial& b) {
        auto neg = [](const std::vector<long>& v) {
            std::vector<long> r;
            for (long x : v) r.push_back(-x);
            return r;
        };
        auto ka = std::make_pair(neg(a.G2), neg(a.L));
        auto kb = std::make_pair(neg(b.G2), neg(b.L));
        return ka < kb;
    });
    return cache.emplace(w2, std::move(out)).first->second;
}

Mat shapovalov_gram(NSContext& ctx, long w2) {
    const auto& basis = verma_basis(w2);
    int n = static_cast<int>(basis.size());
    Mat m(n, n);
    for (int i = 0; i < n; ++i) {
        // adjoint word of monomial i: L(n1)..L(nk) G(r1)..G(rl) in original order
        for (int j = 0; j < n; ++j) {
            NSState st;
            st[basis[j]] = 1;
            for (long l : basis[i].L) st = ctx.apply(0, 2 * l, st);
            for (long g : basis[i].G2) st = ctx.apply(1, g, st);
            auto it = st.find(NSMonomial{});
            if (it != st.end()) m.at(i, j) = Scalar(it->second);
        }
    }
    return m;
}

Mat shapovalov_gram(const NSParams& p, long w2) {
    NSContext ctx(p);
    return shapovalov_gram(ctx, w2);
}

std::map<long, int> simple_quotient_dims(const NSParams& p, long cutoff2) {
    NSContext ctx(p);
    std::map<long, int> out;
    for (long w2 = 0; w2 <= cutoff2; ++w2) out[w2] = rank_of(shapovalov_gram(ctx, w2));
    return out;
}

std::vector<DiscreteSeriesPoint> discrete_series(long m) {
    if (m < 1) throw std::invalid_argument("discrete_series needs m >= 1");
    Rational c = rat(3, 2) * (1 - rat(8) / rat((m + 2) * (m + 4)));
    std::vector<DiscreteSeriesPoint> out;
    for (long r = 1; r <= m + 1; ++r)
        for (long s = 1; s <= r; ++s) {
            if ((r - s) % 2 != 0) continue;
            long t = (m + 4) * r - (m + 2) * s;
            Rational h = rat(t * t - 4, 8 * (m + 2) * (m + 4));
            bool dup = false;
            for (const auto& q : out)
                if (q.h == h) { dup = true; break; }
            if (!dup) out.push_back({m, r, s, c, h});
        }
    return out;
}

UnitarityReport unitarity_check(const NSParams& p, long cutoff2) {
    NSContext ctx(p);
    UnitarityReport rep;
    for (long w2 = 0; w2 <= cutoff2; ++w2) {
        PsdVerdict v = psd_verdict(shapovalov_gram(ctx, w2));
        if (v.kind == PsdVerdict::Indefinite) rep.consistent = false;
        rep.verdicts.push_back({w2, std::move(v)});
    }
    return rep;
}

namespace {

// quotient data per weight: chosen Verma columns J (images form a basis of
// the quotient) and the projection matrix mapping Verma coordinates to
// quotient coordinates
struct QuotientPiece {
    std::vector<int> J;
    Mat gram;  // G[J][J], nondegenerate
    Mat proj;  // |J| x dim(Verma)
};

QuotientPiece make_quotient(const Mat& g) {
    QuotientPiece q;
    int n = g.rows;
    auto rad = kernel_basis(g);
    // pick columns extending the radical to a basis of the full space
    Mat ext(n, static_cast<int>(rad.size()) + n);
    for (int k = 0; k < static_cast<int>(rad.size()); ++k)
        for (int i = 0; i < n; ++i) ext.at(i, k) = rad[k][i];
    for (int j = 0; j < n; ++j) ext.at(j, static_cast<int>(rad.size()) + j) = Scalar(1);
    Mat red = ext;
    // row reduce to find pivot columns
    {
        int r = 0;
        for (int c = 0; c < red.cols && r < red.rows; ++c) {
            int piv = -1;
            for (int i = r; i < red.rows; ++i)
                if (!red.at(i, c).is_zero()) { piv = i; break; }
            if (piv < 0) continue;
            if (piv != r)
                for (int j2 = 0; j2 < red.cols; ++j2) std::swap(red.at(piv, j2), red.at(r, j2));
            Scalar inv = Scalar(1) / red.at(r, c);
            for (int j2 = c; j2 < red.cols; ++j2) red.at(r, j2) *= inv;
            for (int i = 0; i < red.rows; ++i) {
                if (i == r || red.at(i, c).is_zero()) continue;
                Scalar f = red.at(i, c);
                for (int j2 = c; j2 < red.cols; ++j2) red.at(i, j2) -= f * red.at(r, j2);
            }
            if (c >= static_cast<int>(rad.size())) q.J.push_back(c - static_cast<int>(rad.size()));
            ++r;
        }
    }
    int r = static_cast<int>(q.J.size());
    q.gram = Mat(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) q.gram.at(i, j) = g.at(q.J[i], q.J[j]);
    Mat rows(r, n);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < n; ++j) rows.at(i, j) = g.at(q.J[i], j);
    auto inv = inverse(q.gram);
    if (!inv) throw std::logic_error("degenerate quotient Gram");
    q.proj = *inv * rows;
    return q;
}

// basis position lookup (the canonical order is not NSMonomial::operator<)
int verma_index(long w2, const NSMonomial& m) {
    static std::map<long, std::map<NSMonomial, int>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lk(mtx);
    auto it = cache.find(w2);
    if (it == cache.end()) {
        std::map<NSMonomial, int> idx;
        const auto& basis = verma_basis(w2);
        for (int i = 0; i < static_cast<int>(basis.size()); ++i) idx[basis[i]] = i;
        it = cache.emplace(w2, std::move(idx)).first;
    }
    return it->second.at(m);
}

struct NSEngine {
    std::shared_ptr<NSContext> ctx;
    std::map<long, QuotientPiece> pieces;
    long cutoff2;

    std::vector<Scalar> verma_coords(long w2, const NSState& st) const {
        std::vector<Scalar> col(verma_basis(w2).size());
        for (const auto& [mono, coef] : st) col[verma_index(w2, mono)] = Scalar(coef);
        return col;
    }

    // quotient coordinates of a Verma state at weight w2 as a Vec over ids
    Vec project(const GradedSpace& sp, long w2, const NSState& st) const {
        const auto& piece = pieces.at(w2);
        std::vector<Scalar> qc = mat_vec(piece.proj, verma_coords(w2, st));
        Vec out;
        const auto& ids = sp.ids.at(w2);
        for (int k = 0; k < static_cast<int>(qc.size()); ++k) out.add(ids[k], qc[k]);
        return out;
    }
};

} // namespace

TruncatedVOSA build_ns_vosa(const Rational& c, long cutoff2) {
    auto eng = std::make_shared<NSEngine>();
    eng->ctx = std::make_shared<NSContext>(NSParams{c, rat(0)});
    eng->cutoff2 = cutoff2;

    TruncatedVOSA v;
    v.space.cutoff = Weight(cutoff2);
    v.central_charge = c;

    for (long w2 = 0; w2 <= cutoff2; ++w2) {
        Mat g = shapovalov_gram(*eng->ctx, w2);
        QuotientPiece q = make_quotient(g);
        const auto& basis = verma_basis(w2);
        for (int j : q.J) v.space.add(Weight(w2), static_cast<int>(w2 % 2), basis[j].str());
        v.gram[w2] = q.gram;
        eng->pieces[w2] = std::move(q);
    }

    v.vacuum = Vec::unit(v.space.ids.at(0)[0]);
    v.conformal = eng->project(v.space, 4, NSState{{NSMonomial{{2}, {}}, 1}});
    if (v.space.dim(3) > 0)
        v.gens.push_back({"tau", eng->project(v.space, 3, NSState{{NSMonomial{{}, {3}}, 1}}), Weight(3), 1});
    v.gens.insert(v.gens.begin(), {"omega", v.conformal, Weight(4), 0});

    // phi fixes every basis vector
    int n = v.space.total_dim();
    v.phi_perm.resize(n);
    v.phi_sign.assign(n, Scalar(1));
    for (int i = 0; i < n; ++i) v.phi_perm[i] = i;

    // generator fields: omega_n = L(n-1), tau_n = G(n-1/2)
    v.gen_mode_hook = [eng](int g, long n, long src2) -> Mat {
        int kind = (g == 0) ? 0 : 1;
        long m2 = (g == 0) ? 2 * (n - 1) : 2 * n - 1;
        long tgt2 = src2 - m2;
        const auto& piece = eng->pieces.at(src2);
        const auto& basis = verma_basis(src2);
        const auto& tgt_piece = eng->pieces.at(tgt2);
        Mat out(static_cast<int>(tgt_piece.J.size()), static_cast<int>(piece.J.size()));
        for (int col = 0; col < out.cols; ++col) {
            NSState st = eng->ctx->apply_to_mono(kind, m2, basis[piece.J[col]]);
            std::vector<Scalar> qc = mat_vec(tgt_piece.proj, eng->verma_coords(tgt2, st));
            for (int row = 0; row < out.rows; ++row) out.at(row, col) = qc[row];
        }
        return out;
    };

    // resolver: peel the leading PBW factor of each quotient basis monomial
    for (long w2 = 0; w2 <= cutoff2; ++w2) {
        const auto& piece = eng->pieces.at(w2);
        const auto& basis = verma_basis(w2);
        for (int j : piece.J) {
            const NSMonomial& mono = basis[j];
            TruncatedVOSA::Resolver r;
            if (mono.empty()) {
                r.kind = TruncatedVOSA::Resolver::Vacuum;
            } else {
                r.kind = TruncatedVOSA::Resolver::Head;
                NSMonomial rest;
                if (!mono.L.empty()) {
                    r.gen = 0;
                    r.m = -mono.L.front() + 1;
                    rest = NSMonomial{{mono.L.begin() + 1, mono.L.end()}, mono.G2};
                } else {
                    r.gen = (v.gens.size() > 1) ? 1 : -1;
                    r.m = (1 - mono.G2.front()) / 2;
                    rest = NSMonomial{{}, {mono.G2.begin() + 1, mono.G2.end()}};
                }
                r.tail_w2 = rest.weight2();
                r.tail = eng->project(v.space, r.tail_w2, NSState{{rest, 1}});
            }
            v.resolver.push_back(r);
        }
    }
    return v;
}

} // namespace vosa
