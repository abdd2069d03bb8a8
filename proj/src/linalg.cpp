#include "vosa/linalg.hpp"

#include <algorithm>
#include <set>

namespace vosa {

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
    return m;
}

bool Mat::is_zero() const {
    for (const auto& x : a)
        if (!x.is_zero()) return false;
    return true;
}

bool Mat::is_hermitian() const {
    if (rows != cols) return false;
    for (int i = 0; i < rows; ++i)
        for (int j = i; j < cols; ++j)
            if (at(i, j) != at(j, i).conj()) return false;
    return true;
}

Mat Mat::conj_transpose() const {
    Mat m(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(j, i) = at(i, j).conj();
    return m;
}

Mat Mat::transpose() const {
    Mat m(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(j, i) = at(i, j);
    return m;
}

Mat& Mat::operator+=(const Mat& o) {
    if (rows != o.rows || cols != o.cols) throw std::invalid_argument("matrix shape mismatch in +");
    for (size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
    return *this;
}

Mat& Mat::operator-=(const Mat& o) {
    if (rows != o.rows || cols != o.cols) throw std::invalid_argument("matrix shape mismatch in -");
    for (size_t k = 0; k < a.size(); ++k) a[k] -= o.a[k];
    return *this;
}

Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch in *");
    Mat m(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const Scalar& xv = x.at(i, k);
            if (xv.is_zero()) continue;
            for (int j = 0; j < y.cols; ++j) {
                const Scalar& yv = y.at(k, j);
                if (!yv.is_zero()) m.at(i, j) += xv * yv;
            }
        }
    return m;
}

Mat operator*(const Scalar& s, Mat x) {
    for (auto& v : x.a) v *= s;
    return x;
}

std::vector<Scalar> mat_vec(const Mat& m, const std::vector<Scalar>& v) {
    if (static_cast<int>(v.size()) != m.cols) throw std::invalid_argument("mat_vec shape mismatch");
    std::vector<Scalar> out(m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (!m.at(i, j).is_zero() && !v[j].is_zero()) out[i] += m.at(i, j) * v[j];
    return out;
}

namespace {

// Symmetric column-then-row operation for Hermitian congruence: C_i += s C_j
// on both the working matrix and the accumulated transform.
void sym_add(Mat& a, Mat& t, int i, int j, const Scalar& s) {
    int n = a.rows;
    for (int r = 0; r < n; ++r) a.at(r, i) += s * a.at(r, j);              // column op
    Scalar sc = s.conj();
    for (int c = 0; c < n; ++c) a.at(i, c) += sc * a.at(j, c);             // mirrored row op
    for (int r = 0; r < t.rows; ++r) t.at(r, i) += s * t.at(r, j);
}

void sym_swap(Mat& a, Mat& t, int i, int j) {
    if (i == j) return;
    int n = a.rows;
    for (int r = 0; r < n; ++r) std::swap(a.at(r, i), a.at(r, j));
    for (int c = 0; c < n; ++c) std::swap(a.at(i, c), a.at(j, c));
    for (int r = 0; r < t.rows; ++r) std::swap(t.at(r, i), t.at(r, j));
}

} // namespace

Congruence congruence_diagonalize(const Mat& m) {
    if (!m.is_hermitian()) throw std::invalid_argument("congruence_diagonalize needs a Hermitian matrix");
    int n = m.rows;
    Mat a = m;
    Mat t = Mat::identity(n);
    for (int k = 0; k < n; ++k) {
        // bring a nonzero entry onto the diagonal at position k
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (!a.at(i, i).is_zero()) { piv = i; break; }
        if (piv < 0) {
            int oi = -1, oj = -1;
            for (int i = k; i < n && oi < 0; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (!a.at(i, j).is_zero()) { oi = i; oj = j; break; }
            if (oi < 0) break; // remaining block is zero; pivots stay 0
            // make the (oi,oi) diagonal nonzero: 2 Re(s * a(oi,oj)) for s in {1, i}
            Scalar s = a.at(oi, oj).re != 0 ? Scalar(1) : Scalar(rat(0), rat(1));
            sym_add(a, t, oi, oj, s);
            piv = oi;
        }
        sym_swap(a, t, k, piv);
        Scalar d = a.at(k, k);
        for (int j = k + 1; j < n; ++j) {
            if (a.at(k, j).is_zero()) continue;
            Scalar f = a.at(k, j) / d;
            sym_add(a, t, j, k, -f);
        }
    }
    Congruence out;
    out.pivots.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (a.at(i, i).im != 0) throw std::logic_error("non-real congruence pivot");
        out.pivots.push_back(a.at(i, i).re);
    }
    out.transform = std::move(t);
    return out;
}

namespace {

// Scale to a primitive integer vector with positive leading entry, when the
// entries are all real; value-preserving up to positive factors only.
void normalize_witness(std::vector<Scalar>& v) {
    mpz_class den_lcm = 1, num_gcd = 0;
    bool all_real = true;
    for (const auto& s : v) {
        if (s.im != 0) all_real = false;
        for (const Rational* q : {&s.re, &s.im}) {
            if (*q == 0) continue;
            mpz_class l;
            mpz_lcm(l.get_mpz_t(), den_lcm.get_mpz_t(), q->get_den().get_mpz_t());
            den_lcm = l;
        }
    }
    for (auto& s : v) { s.re *= den_lcm; s.im *= den_lcm; s.re.canonicalize(); s.im.canonicalize(); }
    for (const auto& s : v)
        for (const Rational* q : {&s.re, &s.im}) {
            if (*q == 0) continue;
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), num_gcd.get_mpz_t(), q->get_num().get_mpz_t());
            num_gcd = g;
        }
    if (num_gcd > 1)
        for (auto& s : v) { s.re /= num_gcd; s.im /= num_gcd; s.re.canonicalize(); s.im.canonicalize(); }
    if (!all_real) return;
    for (const auto& s : v) {
        if (s.re == 0) continue;
        if (s.re < 0)
            for (auto& x : v) x = -x;
        break;
    }
}

} // namespace

PsdVerdict psd_verdict(const Mat& m) {
    Congruence cg = congruence_diagonalize(m);
    PsdVerdict v;
    v.rank = 0;
    int neg = -1;
    for (int i = 0; i < static_cast<int>(cg.pivots.size()); ++i) {
        if (cg.pivots[i] > 0) ++v.rank;
        else if (cg.pivots[i] < 0 && neg < 0) neg = i;
    }
    if (neg >= 0) {
        v.kind = PsdVerdict::Indefinite;
        v.witness.resize(m.rows);
        for (int i = 0; i < m.rows; ++i) v.witness[i] = cg.transform.at(i, neg);
        normalize_witness(v.witness);
        // recompute v^dagger m v for the normalized witness
        std::vector<Scalar> mv = mat_vec(m, v.witness);
        Scalar val;
        for (int i = 0; i < m.rows; ++i) val += v.witness[i].conj() * mv[i];
        v.witness_value = val;
        return v;
    }
    v.kind = (v.rank == m.rows) ? PsdVerdict::PositiveDefinite : PsdVerdict::PositiveSemidefinite;
    return v;
}

namespace {

// Row echelon form; returns pivot column list. Mutates m in place.
std::vector<int> row_reduce(Mat& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int p = -1;
        for (int i = r; i < m.rows; ++i)
            if (!m.at(i, c).is_zero()) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
        Scalar inv = Scalar(1) / m.at(r, c);
        for (int j = c; j < m.cols; ++j) m.at(r, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            Scalar f = m.at(i, c);
            for (int j = c; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

std::vector<std::vector<Scalar>> kernel_basis(const Mat& m) {
    Mat r = m;
    std::vector<int> piv = row_reduce(r);
    std::set<int> pivset(piv.begin(), piv.end());
    std::vector<std::vector<Scalar>> out;
    for (int c = 0; c < m.cols; ++c) {
        if (pivset.count(c)) continue;
        std::vector<Scalar> v(m.cols);
        v[c] = Scalar(1);
        for (int i = 0; i < static_cast<int>(piv.size()); ++i) v[piv[i]] = -r.at(i, c);
        out.push_back(std::move(v));
    }
    return out;
}

int rank_of(const Mat& m) {
    Mat r = m;
    return static_cast<int>(row_reduce(r).size());
}

std::optional<Mat> inverse(const Mat& m) {
    if (m.rows != m.cols) return std::nullopt;
    int n = m.rows;
    if (n == 0) return Mat(0, 0);
    Mat aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = Scalar(1);
    }
    std::vector<int> piv = row_reduce(aug);
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
    Mat inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

std::vector<Scalar> char_poly(const Mat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("char_poly needs a square matrix");
    int n = m.rows;
    std::vector<Scalar> c(n + 1);
    c[n] = Scalar(1);
    Mat mk = m;
    for (int k = 1; k <= n; ++k) {
        if (k > 1) {
            Mat shifted = mk;
            for (int i = 0; i < n; ++i) shifted.at(i, i) += c[n - k + 1];
            mk = m * shifted;
        }
        Scalar tr;
        for (int i = 0; i < n; ++i) tr += mk.at(i, i);
        c[n - k] = Scalar(rat(-1, k)) * tr;
    }
    return c;
}

namespace {

std::vector<mpz_class> small_divisors(mpz_class n) {
    n = abs(n);
    std::vector<mpz_class> out;
    if (n == 0) return out;
    for (mpz_class d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    }
    return out;
}

} // namespace

std::vector<Rational> rational_roots(const std::vector<Rational>& coeffs) {
    // clear denominators
    mpz_class lcm = 1;
    for (const auto& q : coeffs) {
        mpz_class l;
        mpz_lcm(l.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
        lcm = l;
    }
    std::vector<mpz_class> c;
    for (const auto& q : coeffs) c.push_back(mpz_class(q * lcm));
    while (!c.empty() && c.back() == 0) c.pop_back();
    std::vector<Rational> roots;
    if (c.empty()) return roots;
    size_t v = 0;
    while (v < c.size() && c[v] == 0) ++v;
    if (v > 0) roots.push_back(rat(0));
    if (v + 1 >= c.size()) return roots;
    std::vector<mpz_class> divs_p = small_divisors(c[v]);
    std::vector<mpz_class> divs_q = small_divisors(c.back());
    auto eval = [&](const Rational& x) {
        Rational acc = 0;
        for (size_t k = c.size(); k-- > v;) acc = acc * x + c[k];
        return acc;
    };
    std::set<std::string> seen;
    for (const auto& p : divs_p)
        for (const auto& q : divs_q)
            for (int sgn : {1, -1}) {
                Rational cand(sgn * p, q);
                cand.canonicalize();
                if (!seen.insert(rational_str(cand)).second) continue;
                if (eval(cand) == 0) roots.push_back(cand);
            }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace vosa
