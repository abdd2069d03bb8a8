#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace vosa {

using Rational = mpq_class;

// mpq_class(a, b) does not reduce the fraction by itself.
inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parse "p/q" or "p" (q > 0 after normalization).
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        Rational q;
        if (slash == std::string::npos) {
            q = Rational(mpz_class(s));
        } else {
            mpz_class num(s.substr(0, slash)), den(s.substr(slash + 1));
            if (den == 0) throw std::invalid_argument("zero denominator");
            q = Rational(num, den);
        }
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

inline std::string rational_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Gaussian rational a + bi.
struct Scalar {
    Rational re, im;

    Scalar() : re(0), im(0) {}
    Scalar(long n) : re(n), im(0) {}
    Scalar(const Rational& r) : re(r), im(0) {}
    Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    Scalar conj() const { return {re, -im}; }

    Scalar operator-() const { return {-re, -im}; }
    Scalar& operator+=(const Scalar& o) { re += o.re; im += o.im; return *this; }
    Scalar& operator-=(const Scalar& o) { re -= o.re; im -= o.im; return *this; }
    Scalar& operator*=(const Scalar& o) {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        Rational n2 = b.re * b.re + b.im * b.im;
        if (n2 == 0) throw std::domain_error("division by zero scalar");
        return {(a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2};
    }
    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
};

inline std::string scalar_str(const Scalar& s) {
    if (s.im == 0) return rational_str(s.re);
    return rational_str(s.re) + (s.im > 0 ? "+" : "") + rational_str(s.im) + "i";
}

// Half-integer weight, stored as twice its value.
struct Weight {
    long twice = 0;

    Weight() = default;
    explicit Weight(long t) : twice(t) {}

    static Weight of(const Rational& q) {
        if (q.get_den() != 1 && q.get_den() != 2)
            throw std::invalid_argument("weight must be a half-integer: " + rational_str(q));
        Rational t = q * 2;
        return Weight(static_cast<long>(t.get_num().get_si()));
    }

    bool is_integer() const { return twice % 2 == 0; }
    int parity() const { return static_cast<int>(((twice % 2) + 2) % 2); }
    Rational value() const { return rat(twice, 2); }
    std::string str() const { return rational_str(value()); }

    friend bool operator==(Weight a, Weight b) { return a.twice == b.twice; }
    friend bool operator!=(Weight a, Weight b) { return a.twice != b.twice; }
    friend bool operator<(Weight a, Weight b) { return a.twice < b.twice; }
    friend bool operator<=(Weight a, Weight b) { return a.twice <= b.twice; }
};

struct CutoffExceeded : std::runtime_error {
    CutoffExceeded(const std::string& what) : std::runtime_error(what) {}
};

} // namespace vosa
