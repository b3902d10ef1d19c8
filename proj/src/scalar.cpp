#include "dghom/scalar.hpp"

#include <stdexcept>

namespace dghom {

bool is_odd_prime(unsigned long p) {
    if (p < 3 || p % 2 == 0) return false;
    for (unsigned long d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

static void check_same(unsigned long a, unsigned long b) {
    if (a != b) throw std::logic_error("scalar arithmetic across different fields");
}

void Scalar::reduce() {
    if (p_ == 0) {
        v_.canonicalize();
        return;
    }
    // residue of num * den^{-1} mod p
    mpz_class p(static_cast<unsigned long>(p_));
    mpz_class num = v_.get_num() % p;
    if (num < 0) num += p;
    mpz_class den = v_.get_den() % p;
    if (den != 1) {
        mpz_class dinv;
        if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
            throw std::invalid_argument("denominator not invertible mod p");
        num = (num * dinv) % p;
    }
    v_ = mpq_class(num);
}

Scalar Scalar::of(long n, const Field& f) {
    Scalar s(mpq_class(n), f.p);
    s.reduce();
    return s;
}

Scalar Scalar::rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Scalar s(mpq_class(num, den), 0);
    s.v_.canonicalize();
    return s;
}

Scalar Scalar::from_mpq(mpq_class v, const Field& f) {
    Scalar s(std::move(v), f.p);
    s.reduce();
    return s;
}

Scalar Scalar::operator-() const {
    Scalar s(-v_, p_);
    if (p_) s.reduce();
    return s;
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same(p_, o.p_);
    Scalar s(v_ + o.v_, p_);
    if (p_) s.reduce();
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same(p_, o.p_);
    Scalar s(v_ - o.v_, p_);
    if (p_) s.reduce();
    return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same(p_, o.p_);
    Scalar s(v_ * o.v_, p_);
    if (p_) s.reduce();
    return s;
}

Scalar Scalar::inv() const {
    if (is_zero()) throw std::invalid_argument("inverting zero");
    if (p_ == 0) return Scalar(1 / v_, 0);
    mpz_class p(static_cast<unsigned long>(p_)), r;
    mpz_invert(r.get_mpz_t(), v_.get_num().get_mpz_t(), p.get_mpz_t());
    return Scalar(mpq_class(r), p_);
}

Scalar Scalar::operator/(const Scalar& o) const {
    check_same(p_, o.p_);
    return *this * o.inv();
}

std::string Scalar::str() const { return v_.get_str(); }

} // namespace dghom
