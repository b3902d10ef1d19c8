#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "dghom/module.hpp"

namespace dghom {

// An algebra presented as a rank-1 semifree module over itself, so that the
// generic graded-piece and hom machinery applies to algebra-valued maps.
std::shared_ptr<SemifreeModule> algebra_as_module(const DgAlgebra& a, const std::string& name);

// B^e = B (x)_A B for a free extension A -> B, presented as the free
// extension of A on interleaved copies of each extension generator: X_i (the
// left copy, plain name) directly followed by X_i' (the right copy, primed
// name). Base generators are not doubled. Carries the two inclusions l, r,
// the multiplication map pi, the universal derivation delta(b) = l(b) - r(b),
// and degree-wise linear-algebra views of the diagonal ideal J = ker(pi) and
// of J^2.
class EnvelopingAlgebra {
  public:
    explicit EnvelopingAlgebra(const DgAlgebra* b);
    EnvelopingAlgebra(const EnvelopingAlgebra&) = delete;
    EnvelopingAlgebra& operator=(const EnvelopingAlgebra&) = delete;

    const DgAlgebra& base() const { return *b_; }    // B
    const DgAlgebra& algebra() const { return *be_; } // B^e
    const SemifreeModule& as_module() const { return *be_mod_; }
    std::shared_ptr<const SemifreeModule> as_module_ptr() const { return be_mod_; }

    const AlgebraHom& left() const { return l_; }
    const AlgebraHom& right() const { return r_; }
    const AlgebraHom& mult() const { return pi_; }

    // generator index translation B -> B^e (base generators map to themselves)
    int left_index(int i) const { return left_index_[i]; }
    int right_index(int i) const { return right_index_[i]; }

    AlgebraElement delta(const AlgebraElement& b) const; // l(b) - r(b)
    AlgebraElement delta_gen(int ext) const;             // delta(X_ext), ext a B generator index

    // graded pieces of J = ker(pi)
    int j_dim(int degree) const;
    AlgebraElement j_basis_elem(int degree, int k) const;
    bool in_j(const AlgebraElement& y) const; // pi(y) == 0
    // coordinates in the degree-d kernel basis; throws when y is not in J
    Vec j_coords(const AlgebraElement& y, int degree) const;

    // j written as sum_i delta(X_i) * y_i with y_i in B^e, verified by
    // re-expansion; throws when j is not in J
    struct JExpression {
        std::vector<std::pair<int, AlgebraElement>> terms; // (B generator index, right factor)
    };
    JExpression express_in_j(const AlgebraElement& j) const;

    // graded pieces of J^2, as reduced row vectors in (B^e)_degree coordinates
    int j2_dim(int degree) const;
    const std::vector<Vec>& j2_basis(int degree) const;

  private:
    struct JSlice {
        std::vector<Vec> vectors;
        std::vector<int> free_cols;
    };
    const JSlice& j_slice(int degree) const;

    const DgAlgebra* b_;
    std::unique_ptr<DgAlgebra> be_;
    std::shared_ptr<SemifreeModule> be_mod_;
    AlgebraHom l_, r_, pi_;
    std::vector<int> left_index_, right_index_;

    mutable std::mutex mu_;
    mutable std::map<int, JSlice> j_cache_;
    mutable std::map<int, std::vector<Vec>> j2_cache_;
};

// J as a piece provider inside the rank-1 presentation of B^e.
class JPieces : public PieceProvider {
  public:
    explicit JPieces(const EnvelopingAlgebra* env) : env_(env) {}
    const SemifreeModule& presentation() const override { return env_->as_module(); }
    int dim(int degree) const override { return env_->j_dim(degree); }
    ModuleElement basis_elem(int degree, int k) const override;
    Vec coords(const ModuleElement& x, int degree) const override;

  private:
    const EnvelopingAlgebra* env_;
};

// The differential module Omega = J/J^2 as a semifree right B-module on the
// classes u_i of delta(X_i), with d(u_l) = sum_{m<l} u_m c_{ml} where
// c_{ml} = partial_m(d X_l). Construction cross-checks every c column
// against the independent J/J^2 reduction of d(delta(X_l)) and aborts on
// mismatch.
class DifferentialModule {
  public:
    explicit DifferentialModule(const EnvelopingAlgebra* env);
    DifferentialModule(const DifferentialModule&) = delete;
    DifferentialModule& operator=(const DifferentialModule&) = delete;

    const EnvelopingAlgebra& env() const { return *env_; }
    const SemifreeModule& module() const { return *omega_; }
    std::shared_ptr<const SemifreeModule> module_ptr() const { return omega_; }

    int u_index(int ext) const;  // B generator index -> u basis index
    int gen_of(int u) const { return gen_of_u_[u]; }

    // class of j modulo J^2 on the u basis; throws when j is not in J
    ModuleElement project(const AlgebraElement& j) const;
    // delta-bar(b) = sum_l u_l * partial_l(b)
    ModuleElement dbar(const AlgebraElement& b) const;

  private:
    // projection matrix J_d -> Omega_d in ambient (B^e)_d coordinates
    const Matrix& projector(int degree) const;

    const EnvelopingAlgebra* env_;
    std::shared_ptr<SemifreeModule> omega_;
    std::vector<int> u_of_gen_, gen_of_u_;

    mutable std::mutex mu_;
    mutable std::map<int, Matrix> proj_cache_;
};

// N (x)_B B^e as a semifree right B^e-module on E_l = e_l (x) 1 with
// coefficients l(b_{ml}).
std::shared_ptr<SemifreeModule> tensor_with_enveloping(const SemifreeModule& n,
                                                       const EnvelopingAlgebra& env);

// Pieces of N (x)_B J inside the tensor_with_enveloping presentation:
// (N (x) J)_d = (+)_l J_{d - |e_l|}, block order by l.
class TensorJPieces : public PieceProvider {
  public:
    TensorJPieces(std::shared_ptr<const SemifreeModule> nbe, const EnvelopingAlgebra* env)
        : nbe_(std::move(nbe)), env_(env) {}
    const SemifreeModule& presentation() const override { return *nbe_; }
    int dim(int degree) const override;
    ModuleElement basis_elem(int degree, int k) const override;
    Vec coords(const ModuleElement& x, int degree) const override;

  private:
    std::shared_ptr<const SemifreeModule> nbe_;
    const EnvelopingAlgebra* env_;
};

// N (x)_B Omega as a semifree right B-module on E_{l,k} = e_l (x) u_k,
// ordered l-major; d(E_{l,k}) picks up (-1)^{|e_l|} on the Omega factor.
struct TensorOmega {
    std::shared_ptr<SemifreeModule> mod;
    const SemifreeModule* n = nullptr;
    const DifferentialModule* omega = nullptr;

    int flat(int l, int k) const { return l * omega->module().rank() + k; }
    std::pair<int, int> unflat(int f) const;
    // e_l (x) w for w in Omega
    ModuleElement pure(int l, const ModuleElement& w) const;
    // m (x) u_k for m in N: sum_l (-1)^{|b_l||u_k|} E_{l,k} b_l termwise
    ModuleElement tensor_right(const ModuleElement& m, int k) const;
};

TensorOmega tensor_with_omega(const SemifreeModule& n, const DifferentialModule& om);

// pi_N: N (x)_B B^e -> N, E_l * y -> e_l * pi(y)
ModuleElement contract_tensor(const EnvelopingAlgebra& env, const SemifreeModule& n,
                              const ModuleElement& x);

struct ExactnessReport {
    bool ok = true;
    std::string detail; // first failure, empty when ok
};

// degree-wise exactness of 0 -> N(x)J -> N(x)B^e -> N -> 0 over the window,
// plus the chain-map property of pi_N on every piece basis element
ExactnessReport check_tensor_sequence(const SemifreeModule& n, const EnvelopingAlgebra& env,
                                      int lo, int hi);

} // namespace dghom
