#include "vosa/fermion.hpp"

#include <algorithm>
#include <memory>
#include <mutex>

namespace vosa {

namespace {

// canonical factor order: larger mode magnitude first, then lower direction
bool factor_before(const std::pair<long, int>& a, const std::pair<long, int>& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
}

// basis order: lexicographic on factor keys (-t, i); matches the canonical
// enumeration (larger leading mode magnitude first)
bool mono_less(const FermionMonomial& a, const FermionMonomial& b) {
    size_t n = std::min(a.f.size(), b.f.size());
    for (size_t k = 0; k < n; ++k) {
        if (a.f[k].first != b.f[k].first) return a.f[k].first > b.f[k].first;
        if (a.f[k].second != b.f[k].second) return a.f[k].second < b.f[k].second;
    }
    return a.f.size() < b.f.size();
}

void state_add(FermionState& st, const FermionMonomial& m, const Rational& x) {
    if (x == 0) return;
    auto it = st.find(m);
    if (it == st.end()) st.emplace(m, x);
    else {
        it->second += x;
        if (it->second == 0) st.erase(it);
    }
}

} // namespace

std::string FermionMonomial::str() const {
    if (f.empty()) return "1";
    std::string s;
    for (const auto& [t, i] : f)
        s += "u" + std::to_string(i + 1) + "(-" + std::to_string(t) + "/2)";
    return s;
}

const std::vector<FermionMonomial>& fermion_basis(const FermionSpace& fs, long w2) {
    static std::map<std::pair<int, long>, std::vector<FermionMonomial>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lk(mtx);
    auto key = std::make_pair(fs.n, w2);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<FermionMonomial> out;
    FermionMonomial cur;
    // pick strictly increasing factors in canonical order
    auto rec = [&](auto&& self, long min_t, int min_i, long rem2) -> void {
        if (rem2 == 0) {
            out.push_back(cur);
            return;
        }
        for (long t = min_t; t >= 1; t -= 2) {
            if (t > rem2) continue;
            int istart = (t == min_t) ? min_i : 0;
            for (int i = istart; i < fs.n; ++i) {
                cur.f.push_back({t, i});
                self(self, t, i + 1, rem2 - t);
                cur.f.pop_back();
            }
        }
    };
    rec(rec, w2 % 2 == 0 ? w2 - 1 : w2, 0, w2);
    std::sort(out.begin(), out.end(), mono_less);
    return cache.emplace(key, std::move(out)).first->second;
}

FermionState fermion_apply(const FermionSpace& fs, int i, long s2, const FermionMonomial& m) {
    FermionState out;
    if (s2 < 0) {
        std::pair<long, int> nf{-s2, i};
        size_t k = 0;
        while (k < m.f.size() && factor_before(m.f[k], nf)) ++k;
        if (k < m.f.size() && m.f[k] == nf) return out; // odd square is zero
        FermionMonomial r = m;
        r.f.insert(r.f.begin() + k, nf);
        state_add(out, r, (k % 2 == 0) ? 1 : -1);
    } else {
        for (size_t k = 0; k < m.f.size(); ++k) {
            if (m.f[k].first != s2) continue;
            Rational pair = fs.form.at(i, m.f[k].second).re;
            if (pair == 0) continue;
            FermionMonomial r = m;
            r.f.erase(r.f.begin() + k);
            state_add(out, r, (k % 2 == 0) ? pair : -pair);
        }
    }
    return out;
}

Rational fermion_pair(const FermionSpace& fs, const FermionMonomial& a, const FermionMonomial& b) {
    if (a.f.empty()) return b.f.empty() ? rat(1) : rat(0);
    auto [t, i] = a.f.front();
    FermionMonomial rest{{a.f.begin() + 1, a.f.end()}};
    Rational out = 0;
    for (const auto& [m2, coef] : fermion_apply(fs, i, t, b)) out += coef * fermion_pair(fs, rest, m2);
    return out;
}

TruncatedVOSA build_fermion_vosa(const FermionSpace& fs, long cutoff2) {
    if (!(fs.form == fs.form.transpose()) || !inverse(fs.form))
        throw std::invalid_argument("fermion pairing must be symmetric and nondegenerate");
    auto fsp = std::make_shared<FermionSpace>(fs);

    TruncatedVOSA v;
    v.space.cutoff = Weight(cutoff2);
    v.central_charge = rat(fs.n, 2);

    for (long w2 = 0; w2 <= cutoff2; ++w2) {
        const auto& basis = fermion_basis(fs, w2);
        for (const auto& m : basis) v.space.add(Weight(w2), static_cast<int>(w2 % 2), m.str());
        int d = static_cast<int>(basis.size());
        Mat g(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) g.at(i, j) = Scalar(fermion_pair(fs, basis[i], basis[j]));
        v.gram[w2] = std::move(g);
    }

    v.vacuum = Vec::unit(v.space.ids.at(0)[0]);

    auto index_of = [fsp, &v](long w2, const FermionMonomial& m) {
        const auto& basis = fermion_basis(*fsp, w2);
        auto it = std::lower_bound(basis.begin(), basis.end(), m, mono_less);
        return v.space.ids.at(w2)[it - basis.begin()];
    };

    for (int i = 0; i < fs.n; ++i) {
        FermionMonomial gm{{{1, i}}};
        v.gens.push_back({"u" + std::to_string(i + 1), Vec::unit(index_of(1, gm)), Weight(1), 1});
    }

    // omega = 1/2 sum_{ij} (form^{-1})_{ij} u^i(-3/2) u^j(-1/2) 1
    Mat finv = *inverse(fs.form);
    for (int i = 0; i < fs.n; ++i)
        for (int j = 0; j < fs.n; ++j) {
            if (finv.at(i, j).is_zero()) continue;
            FermionMonomial m{{{3, i}, {1, j}}};
            v.conformal.add(index_of(4, m), Scalar(rat(1, 2)) * finv.at(i, j));
        }

    // phi: (-1)^k on a k-factor monomial
    int total = v.space.total_dim();
    v.phi_perm.resize(total);
    v.phi_sign.resize(total);
    {
        int id = 0;
        for (long w2 = 0; w2 <= cutoff2; ++w2)
            for (const auto& m : fermion_basis(fs, w2)) {
                v.phi_perm[id] = id;
                v.phi_sign[id] = Scalar((m.f.size() % 2 == 0) ? 1 : -1);
                ++id;
            }
    }

    // (u^g(-1/2)1)_n = u^g(n + 1/2)
    v.gen_mode_hook = [fsp](int g, long n, long src2) -> Mat {
        const auto& src = fermion_basis(*fsp, src2);
        long tgt2 = src2 - (2 * n + 1);
        const auto& tgt = fermion_basis(*fsp, tgt2);
        Mat out(static_cast<int>(tgt.size()), static_cast<int>(src.size()));
        for (int col = 0; col < out.cols; ++col) {
            FermionState st = fermion_apply(*fsp, g, 2 * n + 1, src[col]);
            for (const auto& [m, coef] : st) {
                auto it = std::lower_bound(tgt.begin(), tgt.end(), m, mono_less);
                out.at(static_cast<int>(it - tgt.begin()), col) = Scalar(coef);
            }
        }
        return out;
    };

    // resolver: peel the leading factor
    {
        int id = 0;
        for (long w2 = 0; w2 <= cutoff2; ++w2)
            for (const auto& m : fermion_basis(fs, w2)) {
                TruncatedVOSA::Resolver r;
                if (m.f.empty()) {
                    r.kind = TruncatedVOSA::Resolver::Vacuum;
                } else {
                    r.kind = TruncatedVOSA::Resolver::Head;
                    auto [t, i] = m.f.front();
                    r.gen = i;
                    r.m = (-t - 1) / 2;
                    FermionMonomial rest{{m.f.begin() + 1, m.f.end()}};
                    r.tail_w2 = rest.weight2();
                    r.tail = Vec::unit(index_of(r.tail_w2, rest));
                }
                v.resolver.push_back(r);
                ++id;
            }
    }
    return v;
}

} // namespace vosa
