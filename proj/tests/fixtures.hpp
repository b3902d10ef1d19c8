#pragma once

// Shared fixture instances used across the unit and acceptance suites.

#include <memory>

#include "dghom/algebra.hpp"
#include "dghom/module.hpp"
#include "dghom/rng.hpp"

namespace fx {

using namespace dghom;

// B = Q[x], |x| = 2, dx = 0, over A = Q.
inline std::unique_ptr<DgAlgebra> k1_algebra(unsigned long p = 0) {
    auto B = std::make_unique<DgAlgebra>(Field{p}, "B");
    B->add_generator("x", 2, false);
    return B;
}

// N: e0 deg 0, e1 deg 3, de1 = e0*x. Not liftable along Q -> Q[x].
inline SemifreeModule k1_module(const DgAlgebra& B) {
    SemifreeModule N(&B, "N");
    N.add_basis_element("e0", 0);
    N.add_basis_element("e1", 3);
    N.set_coefficient(0, 1, B.generator(B.index_of("x")));
    return N;
}

// B = Q<y>[x], |y| = 1 (base), |x| = 2, dx = y.
inline std::unique_ptr<DgAlgebra> k2_algebra(unsigned long p = 0) {
    auto B = std::make_unique<DgAlgebra>(Field{p}, "B");
    int y = B->add_generator("y", 1, true);
    B->add_generator("x", 2, false, B->generator(y));
    return B;
}

// N: e0 deg 0, e1 deg 4, de1 = e0*(x*y). Liftable: f(e1) = e0 (x) (x^2 - x x').
inline SemifreeModule k2_module(const DgAlgebra& B) {
    SemifreeModule N(&B, "N");
    N.add_basis_element("e0", 0);
    N.add_basis_element("e1", 4);
    N.set_coefficient(0, 1,
                      B.generator(B.index_of("x")) * B.generator(B.index_of("y")));
    return N;
}

// Base change of L (over A = Q<y>): all coefficients lie in the base part.
inline SemifreeModule basechange_module(const DgAlgebra& B) {
    SemifreeModule N(&B, "L");
    N.add_basis_element("l0", 0);
    N.add_basis_element("l1", 2);
    N.set_coefficient(0, 1, B.generator(B.index_of("y")));
    return N;
}

// B = Q[x1, x2], |x1| = 1, |x2| = 2, dx2 = x1 (the Omega coefficient fixture).
inline std::unique_ptr<DgAlgebra> x12_algebra(unsigned long p = 0) {
    auto B = std::make_unique<DgAlgebra>(Field{p}, "B");
    int x1 = B->add_generator("x1", 1, false);
    B->add_generator("x2", 2, false, B->generator(x1));
    return B;
}

// B = Q[x1, x2, x3], |x1| = 1, |x2| = 2, |x3| = 4, dx2 = x1, dx3 = x1*x2.
// The differential module has non-scalar coefficients: c13 = x2, c23 = x1.
inline std::unique_ptr<DgAlgebra> x124_algebra(unsigned long p = 0) {
    auto B = std::make_unique<DgAlgebra>(Field{p}, "B");
    int x1 = B->add_generator("x1", 1, false);
    int x2 = B->add_generator("x2", 2, false, B->generator(x1));
    B->add_generator("x3", 4, false, B->generator(x1) * B->generator(x2));
    return B;
}

inline SemifreeModule free_module(const DgAlgebra& B, std::vector<int> degrees) {
    SemifreeModule N(&B, "F");
    int k = 0;
    for (int d : degrees) N.add_basis_element("g" + std::to_string(k++), d);
    return N;
}

// random homogeneous element of the given degree with small coefficients
inline AlgebraElement random_element(const DgAlgebra& B, int degree, Rng& rng, int pool = 2) {
    AlgebraElement out = B.zero();
    for (const Monomial& m : B.monomial_basis(degree))
        if (rng.chance(1, 2)) {
            long c = rng.range(-pool, pool);
            if (c != 0) out += B.element(m, Scalar::of(c, B.field()));
        }
    return out;
}

} // namespace fx
