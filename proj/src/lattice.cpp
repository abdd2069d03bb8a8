#include "vosa/lattice.hpp"

#include <algorithm>
#include <memory>

namespace vosa {

void IntegralLattice::validate() const {
    if (rank <= 0 || static_cast<int>(gram.size()) != rank)
        throw std::invalid_argument("lattice gram must be rank x rank");
    Mat m(rank, rank);
    for (int i = 0; i < rank; ++i) {
        if (static_cast<int>(gram[i].size()) != rank)
            throw std::invalid_argument("lattice gram must be rank x rank");
        for (int j = 0; j < rank; ++j) {
            if (gram[i][j] != gram[j][i])
                throw std::invalid_argument("lattice gram must be symmetric at entry (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            m.at(i, j) = Scalar(rat(gram[i][j]));
        }
    }
    for (const auto& p : congruence_diagonalize(m).pivots)
        if (p <= 0) throw std::invalid_argument("lattice gram must be positive definite");
}

CocycleTable synthesize_cocycle(const IntegralLattice& L) {
    CocycleTable t;
    int d = L.rank;
    t.basis_log.assign(d, std::vector<int>(d, 0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            if (i > j)
                t.basis_log[i][j] = static_cast<int>(((L.gram[i][j] + L.gram[i][i] * L.gram[j][j]) % 2 + 2) % 2);
            else if (i == j)
                t.basis_log[i][j] = static_cast<int>(((L.gram[i][i] + L.gram[i][i] * L.gram[i][i]) / 2) % 2);
        }
    return t;
}

int e_alpha_sign(const IntegralLattice& L, const std::vector<long>& alpha) {
    long q = L.norm(alpha);
    return ((q + q * q) / 2) % 2 == 0 ? 1 : -1;
}

std::string LatticeState::str() const {
    std::string s;
    for (const auto& [n, i] : bos) s += "a" + std::to_string(i + 1) + "(-" + std::to_string(n) + ")";
    s += "e[";
    for (size_t k = 0; k < pt.size(); ++k) s += (k ? "," : "") + std::to_string(pt[k]);
    s += "]";
    return s;
}

std::vector<std::vector<long>> lattice_points(const IntegralLattice& L, long norm_max) {
    // Q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2 via rational LDL
    int d = L.rank;
    std::vector<std::vector<Rational>> a(d, std::vector<Rational>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a[i][j] = rat(L.gram[i][j]);
    std::vector<Rational> diag(d);
    std::vector<std::vector<Rational>> u(d, std::vector<Rational>(d, Rational(0)));
    for (int i = 0; i < d; ++i) {
        diag[i] = a[i][i];
        for (int j = i + 1; j < d; ++j) u[i][j] = a[i][j] / diag[i];
        for (int r = i + 1; r < d; ++r)
            for (int c = i + 1; c < d; ++c) a[r][c] -= a[r][i] * a[i][c] / diag[i];
    }
    std::vector<std::vector<long>> out;
    std::vector<long> x(d, 0);
    auto rec = [&](auto&& self, int i, const Rational& rem) -> void {
        if (i < 0) {
            out.push_back(x);
            return;
        }
        Rational off = 0;
        for (int j = i + 1; j < d; ++j) off += u[i][j] * x[j];
        // integers t with d_i (t + off)^2 <= rem, scanned outward from -off
        Rational noff = -off;
        mpz_class ctr = noff.get_num() / noff.get_den();
        long center = static_cast<long>(ctr.get_si());
        for (int dir : {0, 1}) {
            long t = dir == 0 ? center : center + 1;
            while (true) {
                Rational q = rat(t) + off;
                if (diag[i] * q * q > rem) break;
                x[i] = t;
                self(self, i - 1, rem - diag[i] * q * q);
                t += dir == 0 ? -1 : 1;
            }
        }
        x[i] = 0;
    };
    rec(rec, d - 1, rat(norm_max));
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool factor_before(const std::pair<long, int>& a, const std::pair<long, int>& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
}

void state_add(LatticeStateVec& st, const LatticeState& s, const Rational& x) {
    if (x == 0) return;
    auto it = st.find(s);
    if (it == st.end()) st.emplace(s, x);
    else {
        it->second += x;
        if (it->second == 0) st.erase(it);
    }
}

LatticeStateVec apply_boson(const IntegralLattice& L, int i, long n, const LatticeState& s) {
    LatticeStateVec out;
    if (n < 0) {
        std::pair<long, int> nf{-n, i};
        LatticeState r = s;
        auto it = r.bos.begin();
        while (it != r.bos.end() && factor_before(*it, nf)) ++it;
        r.bos.insert(it, nf);
        state_add(out, r, 1);
    } else if (n == 0) {
        long p = 0;
        for (int j = 0; j < L.rank; ++j) p += L.gram[i][j] * s.pt[j];
        state_add(out, s, rat(p));
    } else {
        for (size_t k = 0; k < s.bos.size(); ++k) {
            if (s.bos[k].first != n) continue;
            LatticeState r = s;
            r.bos.erase(r.bos.begin() + k);
            state_add(out, r, rat(n * L.gram[i][s.bos[k].second]));
        }
    }
    return out;
}

LatticeStateVec apply_boson(const IntegralLattice& L, int i, long n, const LatticeStateVec& v) {
    LatticeStateVec out;
    for (const auto& [s, c] : v)
        for (const auto& [s2, c2] : apply_boson(L, i, n, s)) state_add(out, s2, c * c2);
    return out;
}

// mu(n) = sum_i mu_i alpha_i(n)
LatticeStateVec apply_mu(const IntegralLattice& L, const std::vector<long>& mu, long n, const LatticeStateVec& v) {
    LatticeStateVec out;
    for (int i = 0; i < L.rank; ++i) {
        if (mu[i] == 0) continue;
        for (const auto& [s2, c2] : apply_boson(L, i, n, v)) state_add(out, s2, rat(mu[i]) * c2);
    }
    return out;
}

Rational boson_pair(const IntegralLattice& L, const LatticeState& a, const LatticeState& b) {
    if (a.bos.empty()) return b.bos.empty() ? rat(1) : rat(0);
    auto [n, i] = a.bos.front();
    LatticeState rest = a;
    rest.bos.erase(rest.bos.begin());
    Rational out = 0;
    for (const auto& [s, c] : apply_boson(L, i, n, b)) out += c * boson_pair(L, rest, s);
    return out;
}

// mode n of Y(e^mu, z) = E^-(-mu,z) E^+(-mu,z) e_mu z^mu applied to one state
LatticeStateVec apply_e_mode(const IntegralLattice& L, const CocycleTable& eps,
                             const std::vector<long>& mu, long n, const LatticeState& x) {
    long s0 = L.pairing(mu, x.pt);
    int sgn = eps.eps(mu, x.pt);
    LatticeState x1 = x;
    for (int i = 0; i < L.rank; ++i) x1.pt[i] += mu[i];

    // E^+(-mu, z) = exp(-sum_{m>0} mu(m)/m z^{-m}); truncates against x's bosons
    std::map<long, LatticeStateVec> plus; // z^{-k} coefficient
    plus[0] = {{x1, rat(sgn)}};
    std::vector<std::pair<long, int>> modes; // distinct (mode, multiplicity)
    for (const auto& [m, i] : x.bos) {
        if (!modes.empty() && modes.back().first == m) ++modes.back().second;
        else modes.push_back({m, 1});
    }
    for (const auto& [m, cnt] : modes) {
        std::map<long, LatticeStateVec> next;
        for (const auto& [k, vec] : plus) {
            LatticeStateVec cur = vec;
            Rational coeff = 1;
            for (long j = 0; j <= cnt; ++j) {
                if (j > 0) {
                    cur = apply_mu(L, mu, m, cur);
                    coeff *= rat(-1, m) / rat(j);
                    if (cur.empty()) break;
                }
                for (const auto& [s, c] : (j == 0 ? vec : cur))
                    state_add(next[k + m * j], s, c * (j == 0 ? rat(1) : coeff));
            }
        }
        plus = std::move(next);
    }

    // E^-(-mu, z) = exp(sum_{m>0} mu(-m)/m z^m); pick total creation degree t
    LatticeStateVec out;
    for (const auto& [k, vec] : plus) {
        long t = -n - 1 - s0 + k;
        if (t < 0) continue;
        // partitions of t with coefficient prod 1/(m^{j_m} j_m!)
        auto rec = [&](auto&& self, long rem, long maxpart, const LatticeStateVec& acc, const Rational& coeff) -> void {
            if (rem == 0) {
                for (const auto& [s, c] : acc) state_add(out, s, c * coeff);
                return;
            }
            for (long m = std::min(maxpart, rem); m >= 1; --m) {
                LatticeStateVec cur = acc;
                Rational cf = coeff;
                long jmax = rem / m;
                for (long j = 1; j <= jmax; ++j) {
                    cur = apply_mu(L, mu, -m, cur);
                    cf *= rat(1, m) / rat(j);
                    self(self, rem - m * j, m - 1, cur, cf);
                }
            }
        };
        rec(rec, t, t, vec, rat(1));
    }
    return out;
}

struct LatticeEngine {
    IntegralLattice L;
    CocycleTable eps;
    long cutoff2;
    std::map<long, std::vector<LatticeState>> basis; // per twice-weight
    std::map<LatticeState, int> index;               // global id
    std::vector<LatticeState> by_id;
};

} // namespace

TruncatedVOSA build_lattice_vosa(const IntegralLattice& L, long cutoff2,
                                 const std::vector<std::vector<long>>& extra_points) {
    L.validate();
    auto eng = std::make_shared<LatticeEngine>();
    eng->L = L;
    eng->eps = synthesize_cocycle(L);
    eng->cutoff2 = cutoff2;

    TruncatedVOSA v;
    v.space.cutoff = Weight(cutoff2);
    v.central_charge = rat(L.rank);

    auto points = lattice_points(L, cutoff2);
    for (long w2 = 0; w2 <= cutoff2; ++w2) {
        std::vector<LatticeState> states;
        for (const auto& pt : points) {
            long rem2 = w2 - L.norm(pt);
            if (rem2 < 0 || rem2 % 2 != 0) continue;
            long b = rem2 / 2; // total boson weight
            LatticeState cur;
            cur.pt = pt;
            auto rec = [&](auto&& self, long rem, long maxn, int mini) -> void {
                if (rem == 0) {
                    states.push_back(cur);
                    return;
                }
                for (long n = std::min(maxn, rem); n >= 1; --n) {
                    int istart = (n == maxn) ? mini : 0;
                    for (int i = istart; i < L.rank; ++i) {
                        cur.bos.push_back({n, i});
                        self(self, rem - n, n, i);
                        cur.bos.pop_back();
                    }
                }
            };
            rec(rec, b, b, 0);
        }
        std::sort(states.begin(), states.end());
        for (const auto& s : states) {
            int id = v.space.add(Weight(w2), static_cast<int>(((L.norm(s.pt) % 2) + 2) % 2), s.str());
            eng->index[s] = id;
            eng->by_id.push_back(s);
        }
        int d = static_cast<int>(states.size());
        Mat g(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                if (states[i].pt == states[j].pt)
                    g.at(i, j) = Scalar(boson_pair(L, states[i], states[j]));
        v.gram[w2] = std::move(g);
        eng->basis[w2] = std::move(states);
    }

    LatticeState vac;
    vac.pt.assign(L.rank, 0);
    v.vacuum = Vec::unit(eng->index.at(vac));

    // omega = 1/2 sum_{ij} (gram^{-1})_{ij} alpha_i(-1) alpha_j(-1) 1
    Mat gm(L.rank, L.rank);
    for (int i = 0; i < L.rank; ++i)
        for (int j = 0; j < L.rank; ++j) gm.at(i, j) = Scalar(rat(L.gram[i][j]));
    Mat ginv = *inverse(gm);
    for (int i = 0; i < L.rank; ++i)
        for (int j = 0; j < L.rank; ++j) {
            if (ginv.at(i, j).is_zero()) continue;
            LatticeState s = vac;
            s.bos = {{1, std::min(i, j)}, {1, std::max(i, j)}};
            std::sort(s.bos.begin(), s.bos.end(), factor_before);
            v.conformal.add(eng->index.at(s), Scalar(rat(1, 2)) * ginv.at(i, j));
        }

    // generators: Heisenberg fields, then e^lambda for lambda in +-basis and extras
    for (int i = 0; i < L.rank; ++i) {
        LatticeState s = vac;
        s.bos = {{1, i}};
        v.gens.push_back({"a" + std::to_string(i + 1), Vec::unit(eng->index.at(s)), Weight(2), 0});
    }
    std::vector<std::vector<long>> epoints;
    for (int i = 0; i < L.rank; ++i)
        for (int sg : {1, -1}) {
            std::vector<long> lam(L.rank, 0);
            lam[i] = sg;
            epoints.push_back(lam);
        }
    for (const auto& lam : extra_points) epoints.push_back(lam);
    std::vector<std::vector<long>> egen_pt; // generator index - rank -> lambda
    for (const auto& lam : epoints) {
        LatticeState s;
        s.pt = lam;
        auto it = eng->index.find(s);
        if (it == eng->index.end())
            throw std::invalid_argument("generator lattice point lies above the cutoff");
        v.gens.push_back({s.str(), Vec::unit(it->second), Weight(L.norm(lam)),
                          static_cast<int>(((L.norm(lam) % 2) + 2) % 2)});
        egen_pt.push_back(lam);
    }

    // phi: (-1)^{#bosons} and pt -> -pt
    int total = v.space.total_dim();
    v.phi_perm.resize(total);
    v.phi_sign.resize(total);
    for (const auto& [s, id] : eng->index) {
        LatticeState m = s;
        for (auto& c : m.pt) c = -c;
        v.phi_perm[id] = eng->index.at(m);
        v.phi_sign[id] = Scalar((s.bos.size() % 2 == 0) ? 1 : -1);
    }

    v.gen_mode_hook = [eng, egen_pt](int g, long n, long src2) -> Mat {
        const auto& src = eng->basis.at(src2);
        long wg2 = (g < eng->L.rank) ? 2 : eng->L.norm(egen_pt[g - eng->L.rank]);
        long tgt2 = src2 + wg2 - 2 * n - 2;
        Mat out(static_cast<int>(eng->basis.at(tgt2).size()), static_cast<int>(src.size()));
        for (int col = 0; col < out.cols; ++col) {
            LatticeStateVec res = (g < eng->L.rank)
                ? apply_boson(eng->L, g, n, src[col])
                : apply_e_mode(eng->L, eng->eps, egen_pt[g - eng->L.rank], n, src[col]);
            for (const auto& [s, c] : res) {
                int row = eng->index.at(s) - eng->index.at(eng->basis.at(tgt2).front());
                out.at(row, col) = Scalar(c);
            }
        }
        return out;
    };

    v.direct_mode_hook = [eng](int id, long n, long src2) -> Mat {
        // pure lattice-point basis vector: its field acts by the exponential formula
        const LatticeState& me = eng->by_id[id];
        const auto& src = eng->basis.at(src2);
        long tgt2 = src2 + eng->L.norm(me.pt) - 2 * n - 2;
        Mat out(static_cast<int>(eng->basis.at(tgt2).size()), static_cast<int>(src.size()));
        for (int col = 0; col < out.cols; ++col) {
            for (const auto& [s, c] : apply_e_mode(eng->L, eng->eps, me.pt, n, src[col])) {
                int row = eng->index.at(s) - eng->index.at(eng->basis.at(tgt2).front());
                out.at(row, col) = Scalar(c);
            }
        }
        return out;
    };

    // resolver: peel the leading boson factor; bare points are direct fields
    for (long w2 = 0; w2 <= cutoff2; ++w2)
        for (const auto& s : eng->basis.at(w2)) {
            TruncatedVOSA::Resolver r;
            if (s.bos.empty()) {
                bool zero = true;
                for (long c : s.pt) zero = zero && c == 0;
                r.kind = zero ? TruncatedVOSA::Resolver::Vacuum : TruncatedVOSA::Resolver::Direct;
            } else {
                r.kind = TruncatedVOSA::Resolver::Head;
                auto [nn, i] = s.bos.front();
                r.gen = i;
                r.m = -nn;
                LatticeState rest = s;
                rest.bos.erase(rest.bos.begin());
                r.tail_w2 = w2 - 2 * nn;
                r.tail = Vec::unit(eng->index.at(rest));
            }
            v.resolver.push_back(r);
        }
    return v;
}

} // namespace vosa
