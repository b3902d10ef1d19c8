#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dghom/derivation.hpp"

namespace dghom {

// Concrete realization of N (x)_B X for a semifree module N and a derivation
// target X in {B, J, Omega, B^e}. Bundles the presentation of the tensor
// product, its graded pieces, the coefficient embeddings, and the two
// block maps every connection computation needs: pure tensors e_l (x) v and
// the block read-off recovering v from e_l (x) v. Construct one per working
// context and share it: connections compare targets by pointer.
struct ConnSpace {
    enum class Kind { B, J, Be, Omega };

    Kind kind = Kind::B;
    const SemifreeModule* n = nullptr; // N
    const DerTarget* x = nullptr;      // X, caller-owned
    std::shared_ptr<const SemifreeModule> keepalive; // tensor presentation owner
    std::shared_ptr<const PieceProvider> pieces;     // pieces of N (x) X
    AlgebraHom embed;      // right action: B -> coefficient algebra
    AlgebraHom left_embed; // left action through the left copy
    std::shared_ptr<const TensorOmega> tom; // Omega realization only

    const SemifreeModule& pres() const { return pieces->presentation(); }
    HomTarget hom_target() const { return HomTarget{pieces, embed}; }

    // e_l (x) v for v in the presentation of X
    ModuleElement pure(int l, const ModuleElement& v) const;
    // the l block of t, as an element of X; exact on values of pure
    ModuleElement extract(int l, const ModuleElement& t) const;
    // x (x) v for x in N, by middle linearity (e_l b) (x) v = e_l (x) b v
    ModuleElement tensor(const ModuleElement& xn, const ModuleElement& v) const;
    // right action of b in B on the tensor product
    ModuleElement act_b(const ModuleElement& t, const AlgebraElement& b) const;
    // left action of homogeneous b, the Koszul flip through the left copy
    ModuleElement act_left_tensor(const AlgebraElement& b, const ModuleElement& t) const;
};

ConnSpace conn_space_b(const SemifreeModule& n, const DerTarget& tb);
ConnSpace conn_space_j(const SemifreeModule& n, const DerTarget& tj,
                       const EnvelopingAlgebra& env);
ConnSpace conn_space_be(const SemifreeModule& n, const DerTarget& tbe,
                        const EnvelopingAlgebra& env);
ConnSpace conn_space_omega(const SemifreeModule& n, const DerTarget& tomega,
                           const DifferentialModule& om);

// D-connection psi: N -> N (x) X of degree |D|, stored as the pair
// (D, f = psi - phi(D)). The correction f is right B-linear because any two
// D-connections differ by a module map, so the pair determines psi as a map
// and basis-image equality of corrections is map equality.
class Connection {
  public:
    Connection(const ConnSpace* space, Derivation d, GradedHom f);

    const ConnSpace& space() const { return *sp_; }
    const ConnSpace* space_ptr() const { return sp_; }
    // nu(psi): the derivation psi is a connection along
    const Derivation& derivation() const { return d_; }
    const GradedHom& correction() const { return f_; }
    int degree() const { return d_.degree(); }

    ModuleElement apply(const ModuleElement& xn) const;

    Connection operator+(const Connection& o) const;
    Connection operator-(const Connection& o) const;
    Connection operator-() const;
    Connection operator*(const Scalar& c) const;
    bool operator==(const Connection& o) const;
    bool operator!=(const Connection& o) const { return !(*this == o); }
    bool is_zero() const { return d_.is_zero() && f_.is_zero(); }

  private:
    const ConnSpace* sp_;
    Derivation d_;
    GradedHom f_;
};

// phi(D): the D-connection vanishing on the basis of N
Connection trivial_connection(const ConnSpace& sp, const Derivation& d);
// iota(f): the 0-connection given by a module map f: N -> N (x) X
Connection linear_connection(const ConnSpace& sp, const GradedHom& f);
Connection zero_connection(const ConnSpace& sp, int degree);

// d^Conn(psi) = d^{N(x)X} psi - (-1)^{|psi|} psi d^N, returned in pair form
// (d^Der(D), new correction)
Connection conn_differential(const Connection& psi);

// (b psi)(x) = b psi(x); a (bD)-connection
Connection act_left_conn(const AlgebraElement& b, const Connection& psi);

// [psi1, psi2] = psi1 psi2 - (-1)^{|psi1||psi2|} psi2 psi1, a
// [D1, D2]-connection; X = B only, where values live back in N
Connection bracket_connections(const Connection& a, const Connection& b);

// A connection-valued assignment on derivations. Either a closed-form rule
// or a finite table over the dual basis (X = B with semifree differential
// module), extended by D = sum_l D(X_l) partial_l with left coefficients.
class LConnection {
  public:
    static LConnection from_rule(const ConnSpace& sp,
                                 std::function<Connection(const Derivation&)> rule);
    // values[l] is the connection assigned to the dual derivation partial_l
    static LConnection from_dual_basis(const ConnSpace& sp, std::vector<Derivation> duals,
                                       std::vector<Connection> values);

    const ConnSpace& space() const { return *sp_; }
    Connection evaluate(const Derivation& d) const;

  private:
    LConnection() = default;
    const ConnSpace* sp_ = nullptr;
    std::function<Connection(const Derivation&)> rule_;
    std::vector<Derivation> duals_;
    std::vector<Connection> values_;
};

// R(D1, D2) = [grad D1, grad D2] - grad [D1, D2]; X = B only. The underlying
// derivation cancels exactly, so the curvature is the leftover module map.
GradedHom curvature(const LConnection& grad, const Derivation& d1, const Derivation& d2);

// the trivial L-connection D -> phi(D) on a free module; with zero
// differential on N it is a DG section of nu with zero curvature
LConnection section_for_free(const ConnSpace& sp);

// Axioms of an L-connection on sampled derivations: additivity, left
// b-linearity, and nu(grad D) = D. Returns the first violated identity.
struct CheckReport {
    bool ok = true;
    std::string detail;
};
CheckReport check_lconnection(const LConnection& grad, const std::vector<Derivation>& samples,
                              const std::vector<AlgebraElement>& multipliers);
// DG section property: grad(d^Der D) = d^Conn(grad D) on the samples
CheckReport check_dg_section(const LConnection& grad, const std::vector<Derivation>& samples);

// Exactness bookkeeping of 0 -> Hom(N, N(x)X) -> Conn -> Der -> 0 in one
// degree. nu is probed by evaluation on e_l X_i, never read from storage.
struct FundamentalDegree {
    int degree = 0;
    int dim_hom = 0;
    int dim_der = 0;
    int dim_conn = 0;
    bool probe_matches_storage = false; // evaluated nu == stored derivation
    bool nu_surjective = false;         // rank of the probed matrix
    bool kernel_is_image = false;       // ker nu = iota(Hom), both inclusions
};

struct FundamentalSequenceReport {
    bool ok = true;
    std::string detail;
    std::vector<FundamentalDegree> rows;
};

// per-degree exactness of the fundamental sequence over [lo, hi]
FundamentalSequenceReport fundamental_sequence(const ConnSpace& sp, int lo, int hi);

// coordinates of Conn_n = Der_n (+) Hom_n in the chart used by the report
int conn_dim(const ConnSpace& sp, int n);
Connection conn_from_coords(const ConnSpace& sp, int n, const Vec& v);
Vec conn_coords(const Connection& psi);

// hom chart helpers shared by the sequence and the homotopy solvers
int hom_dim(const SemifreeModule& n, const PieceProvider& pieces, int degree);
GradedHom hom_from_coords(const SemifreeModule& n, const HomTarget& tgt, int degree,
                          const Vec& v);
Vec hom_coords(const GradedHom& f);

} // namespace dghom
