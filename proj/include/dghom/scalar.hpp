#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace dghom {

// Coefficient field: the rationals (p == 0) or F_p for an odd prime p.
struct Field {
    unsigned long p = 0;

    bool is_rational() const { return p == 0; }
    bool operator==(const Field& o) const { return p == o.p; }
    bool operator!=(const Field& o) const { return p != o.p; }
    std::string str() const { return p == 0 ? "Q" : "Fp " + std::to_string(p); }
};

bool is_odd_prime(unsigned long p);

// Exact field element. Rationals are kept canonical (lowest terms, positive
// denominator); F_p values are residues 0..p-1 with denominator 1.
class Scalar {
  public:
    Scalar() : p_(0) {}

    static Scalar zero(const Field& f) { return of(0, f); }
    static Scalar one(const Field& f) { return of(1, f); }
    static Scalar of(long n, const Field& f);
    static Scalar rational(long num, long den); // den != 0, field Q
    static Scalar from_mpq(mpq_class v, const Field& f);

    Field field() const { return Field{p_}; }
    const mpq_class& value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const; // o nonzero
    Scalar inv() const;                      // nonzero
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const { return p_ == o.p_ && v_ == o.v_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // "3/2", "-1", "4"; F_p residues print as plain integers.
    std::string str() const;

  private:
    Scalar(mpq_class v, unsigned long p) : v_(std::move(v)), p_(p) {}
    void reduce();

    mpq_class v_;
    unsigned long p_;
};

} // namespace dghom
