#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dghom/enveloping.hpp"

namespace dghom {

// Where derivation values live: a presentation module with graded pieces and
// the module structure spelled out as algebra maps. right_embed/left_embed
// carry the B-actions into the coefficient algebra of the presentation;
// env_act carries the right action of all of B^e (identity for B^e-modules,
// pi for B-modules in which J acts as zero). Construct one target per
// working context and share it: element identity is pointer-based.
struct DerConstraintCache; // per-degree kernel charts for twisted targets

struct DerTarget {
    std::string tag; // "B", "J", "Omega", "B^e", or a module name
    std::shared_ptr<const SemifreeModule> keepalive;
    std::shared_ptr<const PieceProvider> pieces;
    AlgebraHom right_embed; // B -> coefficient algebra
    AlgebraHom left_embed;  // B -> coefficient algebra
    AlgebraHom env_act;     // B^e -> coefficient algebra; src == nullptr when unavailable

    // Set when the left action is not the Koszul flip of the right one
    // (X = J, B^e). Generator images then define a derivation only if they
    // kill the quadratic relations of B:
    //   D(X_i) delta(X_j) = (-1)^{|X_i||X_j|} D(X_j) delta(X_i)   (i < j)
    //   D(X_i) delta(X_i) = 0                                     (|X_i| odd)
    // For targets in which J acts as zero, delta acts as zero and both
    // families are vacuous, so every image family works.
    const EnvelopingAlgebra* twist_env = nullptr;
    std::shared_ptr<DerConstraintCache> twist_cache;

    const SemifreeModule& pres() const { return pieces->presentation(); }
    HomTarget hom_target() const { return HomTarget{pieces, right_embed}; }
    ModuleElement act_right(const ModuleElement& x, const AlgebraElement& b) const;
    ModuleElement act_left_b(const AlgebraElement& b, const ModuleElement& x) const;
};

DerTarget target_b(const DgAlgebra& b);               // X = B, no B^e action attached
DerTarget target_b(const EnvelopingAlgebra& env);     // X = B with env_act = pi
DerTarget target_be(const EnvelopingAlgebra& env);    // X = B^e
DerTarget target_j(const EnvelopingAlgebra& env);     // X = J
DerTarget target_omega(const EnvelopingAlgebra& env, const DifferentialModule& om);

// A-derivation B -> X of one degree, stored by extension-generator images
// (base slots stay zero). Evaluation is the signed Leibniz expansion over
// canonical monomials.
class Derivation {
  public:
    Derivation(const DgAlgebra* source, const DerTarget* target, int degree,
               std::vector<ModuleElement> images);

    const DgAlgebra& source() const { return *b_; }
    const DerTarget& target() const { return *x_; }
    const DerTarget* target_ptr() const { return x_; }
    int degree() const { return degree_; }
    const ModuleElement& image(int gen) const { return images_.at(gen); }
    const std::vector<ModuleElement>& images() const { return images_; }

    ModuleElement evaluate(const AlgebraElement& b) const;

    Derivation operator+(const Derivation& o) const;
    Derivation operator-(const Derivation& o) const;
    Derivation operator-() const;
    Derivation operator*(const Scalar& c) const;
    bool operator==(const Derivation& o) const;
    bool is_zero() const;

  private:
    const DgAlgebra* b_;
    const DerTarget* x_;
    int degree_;
    std::vector<ModuleElement> images_; // indexed by B generator index
};

Derivation zero_derivation(const DgAlgebra& b, const DerTarget& x, int degree);

// partial derivative against extension generator `ext` viewed as a
// Derivation into B
Derivation dual_derivation(const DgAlgebra& b, const DerTarget& tb, int ext);
// all of them, in extension-generator order
std::vector<Derivation> dual_basis(const DgAlgebra& b, const DerTarget& tb);

// delta as a Derivation into J
Derivation delta_derivation(const EnvelopingAlgebra& env, const DerTarget& tj);
// delta-bar as a Derivation into Omega
Derivation dbar_derivation(const DifferentialModule& om, const DerTarget& tomega);

// d^Der(D) = d^X D - (-1)^{|D|} D d^B, by generator images
Derivation der_differential(const Derivation& d);

// (b D)(c) = b D(c); left module structure of Der
Derivation act_left_der(const AlgebraElement& b, const Derivation& d);

// [D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1; target B only
Derivation bracket(const Derivation& a, const Derivation& b);

// E(X_i) = |X_i| X_i. genuine is false when the base part has generators in
// positive degree, where the grading operator fails to be an A-derivation;
// the returned derivation is then the extension-only grading derivation.
struct EulerResult {
    Derivation d;
    bool genuine;
};
EulerResult euler_derivation(const DgAlgebra& b, const DerTarget& tb);

// coordinates of Der_A(B, X)_n: image piece coordinates, generator blocks in
// declaration order. For twisted targets the chart runs over a kernel basis
// of the quadratic-relation constraints instead of the full image product.
int der_dim(const DgAlgebra& b, const DerTarget& x, int n);
Vec der_coords(const Derivation& d);
Derivation der_from_coords(const DgAlgebra& b, const DerTarget& x, int n, const Vec& v);

// windowed complex of Der_A(B, X) with the d^Der matrices; (d^Der)^2 = 0 is
// checked by construction
ComplexSlice derivation_slice(const DgAlgebra& b, const DerTarget& x, int lo, int hi);

// Graded B^e-linear map J -> X of one degree, determined by its values on
// the delta(X_i); evaluation first expresses the argument over the delta
// generators (membership solve), then acts through env_act. Such a map is
// well defined because J is generated by the delta(X_i) over B^e;
// verify_jlinear checks that on a spanning set instead of assuming it.
class JLinearMap {
  public:
    JLinearMap(const EnvelopingAlgebra* env, const DerTarget* x, int degree,
               std::vector<ModuleElement> images);

    const EnvelopingAlgebra& env() const { return *env_; }
    const DerTarget& target() const { return *x_; }
    int degree() const { return degree_; }
    const ModuleElement& image(int gen) const { return images_.at(gen); }

    ModuleElement evaluate(const AlgebraElement& j) const;
    bool operator==(const JLinearMap& o) const;

  private:
    const EnvelopingAlgebra* env_;
    const DerTarget* x_;
    int degree_;
    std::vector<ModuleElement> images_;
};

// the isomorphism Der_A(B, X) = Hom_{B^e}(J, X) and its inverse
JLinearMap varpi_inverse(const Derivation& d, const EnvelopingAlgebra& env);
Derivation varpi(const JLinearMap& f, const DgAlgebra& b); // f compose delta, via the solve

// d^Hom on B^e-linear maps J -> X, represented on the delta generators
JLinearMap jmap_differential(const JLinearMap& f);

// independence of the value from the chosen J-expression, degree by degree;
// throws std::logic_error on failure (would contradict the isomorphism)
void verify_jlinear(const JLinearMap& f, int lo, int hi);

} // namespace dghom
