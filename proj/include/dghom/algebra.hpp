#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dghom/linalg.hpp"
#include "dghom/scalar.hpp"

namespace dghom {

class DgAlgebra;

struct ValidationIssue {
    std::string check;   // "degree", "homogeneity", "d_squared", ...
    std::string subject; // generator / basis element name
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string str() const;
};

// Canonical monomial: factors sorted by generator index, exponents >= 1,
// exponent 1 on odd-degree generators. Total degree is cached at creation.
struct Monomial {
    std::vector<std::pair<int, int>> factors; // (generator index, exponent)
    int degree = 0;

    bool is_one() const { return factors.empty(); }
    int exponent_of(int gen) const;
    bool operator==(const Monomial& o) const { return factors == o.factors; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }
};

// Canonical listing order: higher total degree first; ties broken by the
// exponent vector in declaration order, larger exponent at the first
// difference first. "x" lists before "y1*y2", "x^2*y1" prints first.
struct MonomialBefore {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

struct MonomialHash {
    size_t operator()(const Monomial& m) const;
};

using TermMap = std::map<Monomial, Scalar, MonomialBefore>;

// Element of a graded-commutative algebra: finite sum of canonical monomials
// with nonzero exact coefficients.
class AlgebraElement {
  public:
    AlgebraElement() = default; // detached zero; usable only via assignment

    const DgAlgebra* algebra() const { return alg_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_homogeneous() const;
    // degree of a nonzero homogeneous element; nullopt for zero
    std::optional<int> degree() const;

    AlgebraElement operator-() const;
    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement operator*(const Scalar& c) const;
    AlgebraElement& operator+=(const AlgebraElement& o) { return *this = *this + o; }
    AlgebraElement& operator-=(const AlgebraElement& o) { return *this = *this - o; }
    AlgebraElement& operator*=(const AlgebraElement& o) { return *this = *this * o; }
    bool operator==(const AlgebraElement& o) const;
    bool operator!=(const AlgebraElement& o) const { return !(*this == o); }

    std::string str() const;

  private:
    friend class DgAlgebra;
    const DgAlgebra* alg_ = nullptr;
    TermMap terms_;
};

struct Generator {
    std::string name;
    int degree;     // >= 1; the degree-0 part of a connected algebra is the field
    bool base;      // true: part of the base A; false: extension generator
    AlgebraElement d; // image under the differential, over earlier generators
};

struct Normalized {
    int sign; // +1, -1, or 0 (odd generator repeated)
    Monomial monomial;
};

// Finitely generated graded-commutative DG algebra over Q or F_p, presented
// as a free extension A -> B: base generators first, then extension
// generators in weakly increasing degree. Even-degree generators are
// polynomial, odd-degree generators square to zero.
class DgAlgebra {
  public:
    DgAlgebra(Field f, std::string name);
    DgAlgebra(const DgAlgebra&) = delete;
    DgAlgebra& operator=(const DgAlgebra&) = delete;

    // Structural preconditions throw std::invalid_argument: duplicate name,
    // degree < 1, base generator after an extension generator, decreasing
    // extension degree, d-image touching this or a later generator.
    int add_generator(const std::string& name, int degree, bool base, const AlgebraElement& d);
    int add_generator(const std::string& name, int degree, bool base); // d = 0

    const Field& field() const { return field_; }
    const std::string& name() const { return name_; }
    int size() const { return static_cast<int>(gens_.size()); }
    const Generator& gen(int i) const { return gens_[i]; }
    int index_of(const std::string& name) const; // -1 when absent
    int base_size() const { return base_size_; }
    int extension_size() const { return size() - base_size_; }
    bool is_odd(int i) const { return gens_[i].degree % 2 != 0; }

    AlgebraElement zero() const;
    AlgebraElement one() const;
    AlgebraElement from_scalar(const Scalar& c) const;
    AlgebraElement generator(int i) const;
    AlgebraElement element(const Monomial& m, const Scalar& c) const;
    Monomial make_monomial(std::vector<std::pair<int, int>> factors) const;

    // Koszul normalization of an arbitrary word of generator indices.
    Normalized normalize(const std::vector<int>& word) const;
    // product of canonical monomials; sign 0 when an odd generator repeats
    Normalized multiply(const Monomial& a, const Monomial& b) const;

    // Leibniz extension of the generator images; degree -1.
    AlgebraElement differential(const AlgebraElement& x) const;

    // A-derivation dual to extension generator `ext` (index into the full
    // generator list); degree -|X_ext|. Kronecker on extension generators.
    AlgebraElement partial_derivative(const AlgebraElement& x, int ext) const;

    // All canonical monomials of the given total degree, in listing order.
    const std::vector<Monomial>& monomial_basis(int degree) const;
    int dim(int degree) const;
    // coordinates of a homogeneous element in monomial_basis(degree)
    Vec coords(const AlgebraElement& x, int degree) const;
    AlgebraElement from_coords(const Vec& v, int degree) const;

    // differential degree/homogeneity per generator, d(d(g)) == 0
    ValidationReport validate() const;

  private:
    void basis_rec(int remaining, int gi, std::vector<std::pair<int, int>>& acc,
                   std::vector<Monomial>& out) const;

    Field field_;
    std::string name_;
    std::vector<Generator> gens_;
    std::unordered_map<std::string, int> index_;
    int base_size_ = 0;
    bool extension_started_ = false;

    mutable std::mutex cache_mu_;
    mutable std::map<int, std::vector<Monomial>> basis_cache_;
    mutable std::map<int, std::unordered_map<Monomial, int, MonomialHash>> pos_cache_;
};

// Degree-preserving algebra map given by generator images (evaluated
// multiplicatively; Koszul signs come from the target's product).
struct AlgebraHom {
    const DgAlgebra* src = nullptr;
    const DgAlgebra* dst = nullptr;
    std::vector<AlgebraElement> images; // one per src generator

    AlgebraElement apply(const AlgebraElement& x) const;
    // commutes with the differentials on every generator
    bool is_chain_map() const;
};

AlgebraHom identity_hom(const DgAlgebra& a);

} // namespace dghom
