#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "dghom/algebra.hpp"

namespace dghom {

class SemifreeModule;

// Element of a semifree right DG module: finitely many basis components with
// coefficients in the presenting algebra.
class ModuleElement {
  public:
    ModuleElement() = default;

    const SemifreeModule* module() const { return mod_; }
    const std::map<int, AlgebraElement>& components() const { return comps_; }
    AlgebraElement component(int i) const;
    bool is_zero() const { return comps_.empty(); }
    bool is_homogeneous() const;
    std::optional<int> degree() const;

    ModuleElement operator-() const;
    ModuleElement operator+(const ModuleElement& o) const;
    ModuleElement operator-(const ModuleElement& o) const;
    ModuleElement operator*(const Scalar& c) const;
    ModuleElement operator*(const AlgebraElement& b) const; // right action
    ModuleElement& operator+=(const ModuleElement& o) { return *this = *this + o; }
    ModuleElement& operator-=(const ModuleElement& o) { return *this = *this - o; }
    bool operator==(const ModuleElement& o) const;
    bool operator!=(const ModuleElement& o) const { return !(*this == o); }

    std::string str() const;

  private:
    friend class SemifreeModule;
    const SemifreeModule* mod_ = nullptr;
    std::map<int, AlgebraElement> comps_; // basis index -> nonzero coefficient
};

// left action a*m = (-1)^{|a||m|} m*a, both homogeneous
ModuleElement act_left(const AlgebraElement& a, const ModuleElement& m);

struct BasisElement {
    std::string id;
    int degree;
};

// Semifree right DG module over a DG algebra: ordered finite basis with a
// strictly lower-triangular differential d(e_l) = sum_{m<l} e_m b_{ml},
// |b_{ml}| = |e_l| - |e_m| - 1.
class SemifreeModule {
  public:
    SemifreeModule(const DgAlgebra* algebra, std::string name);

    int add_basis_element(const std::string& id, int degree);
    void set_coefficient(int mu, int lambda, const AlgebraElement& b); // mu < lambda

    const DgAlgebra& algebra() const { return *alg_; }
    const std::string& name() const { return name_; }
    int rank() const { return static_cast<int>(basis_.size()); }
    const BasisElement& basis(int i) const { return basis_[i]; }
    int index_of(const std::string& id) const;
    const AlgebraElement& coefficient(int mu, int lambda) const;

    ModuleElement zero() const;
    ModuleElement basis_elem(int i) const;
    ModuleElement element(int i, const AlgebraElement& c) const;
    ModuleElement differential(const ModuleElement& x) const;

    // coefficient homogeneity/degree and d(d(e_l)) == 0
    ValidationReport validate() const;

    // graded piece: pairs (basis element, algebra monomial), basis order major
    struct PieceEntry {
        int lambda;
        Monomial m;
    };
    int dim(int degree) const;
    const std::vector<PieceEntry>& piece_basis(int degree) const;
    Vec coords(const ModuleElement& x, int degree) const;
    ModuleElement from_coords(const Vec& v, int degree) const;

    // M(n): degrees drop by n, differential negated for odd n
    std::unique_ptr<SemifreeModule> shifted(int n, const std::string& name) const;

  private:
    const DgAlgebra* alg_;
    std::string name_;
    std::vector<BasisElement> basis_;
    std::vector<std::vector<AlgebraElement>> coeff_; // [mu][lambda]
    std::unordered_map<std::string, int> index_;

    // behind a pointer so the module stays movable
    mutable std::unique_ptr<std::mutex> cache_mu_;
    mutable std::map<int, std::vector<PieceEntry>> piece_cache_;
};

std::unique_ptr<SemifreeModule> direct_sum(const SemifreeModule& a, const SemifreeModule& b,
                                           const std::string& name);

// Finite-dimensional graded pieces of a (sub)complex of a presentation
// module. The default provider exposes the whole module; restricted
// subcomplexes (N (x) J inside N (x) B^e) plug in their own.
class PieceProvider {
  public:
    virtual ~PieceProvider() = default;
    virtual const SemifreeModule& presentation() const = 0;
    virtual int dim(int degree) const = 0;
    virtual ModuleElement basis_elem(int degree, int k) const = 0;
    virtual Vec coords(const ModuleElement& x, int degree) const = 0;
};

class FullPieces : public PieceProvider {
  public:
    explicit FullPieces(const SemifreeModule* m) : m_(m) {}
    const SemifreeModule& presentation() const override { return *m_; }
    int dim(int degree) const override { return m_->dim(degree); }
    ModuleElement basis_elem(int degree, int k) const override;
    Vec coords(const ModuleElement& x, int degree) const override;

  private:
    const SemifreeModule* m_;
};

// Target of a graded hom out of a semifree module: presentation module, the
// embedding of the base algebra into its coefficient algebra (identity for
// B-modules, the right copy for B^e-modules), and the graded pieces that
// count as the target complex.
struct HomTarget {
    std::shared_ptr<const PieceProvider> pieces;
    AlgebraHom embed; // base algebra -> coefficient algebra of the presentation

    const SemifreeModule& pres() const { return pieces->presentation(); }
    AlgebraElement embedded(const AlgebraElement& b) const { return embed.apply(b); }
};

// the module itself as a hom target (identity embedding, full pieces)
HomTarget module_target(const SemifreeModule& m);

// Right B-linear graded map f: N -> T(n), stored by basis images.
struct GradedHom {
    const SemifreeModule* source = nullptr;
    HomTarget target;
    int degree = 0;
    std::vector<ModuleElement> images; // image of e_l, degree |e_l| + degree

    static GradedHom zero(const SemifreeModule& src, const HomTarget& tgt, int degree);
    ModuleElement apply(const ModuleElement& x) const;
    GradedHom operator+(const GradedHom& o) const;
    GradedHom operator-(const GradedHom& o) const;
    GradedHom operator*(const Scalar& c) const;
    GradedHom operator-() const;
    bool operator==(const GradedHom& o) const;
    bool is_zero() const;
};

// Hom-complex differential d(f) = d_T f - (-1)^{|f|} f d_N.
GradedHom hom_differential(const GradedHom& f);

// left action on the Hom complex: (b f)(m) = (-1)^{|b|(|f|+|m|)} f(m) b
GradedHom act_left_hom(const AlgebraElement& b, const GradedHom& f);

// Inconsistency certificate: a left-kernel row of the stacked homotopy
// system, reported against labeled equation rows.
struct HomotopyCertificate {
    Vec row;
    std::vector<std::string> labels; // one per equation row
    std::string detail;
};

struct NullHomotopyResult {
    bool ok = false;
    GradedHom h; // d(h) = g when ok
    HomotopyCertificate certificate;
};

// Decide whether g (degree n) is d(h) for some h of degree n+1, exactly.
NullHomotopyResult solve_null_homotopy(const GradedHom& g);

// Degree window of a complex with matrices of the differential.
struct ComplexSlice {
    int lo = 0;
    int hi = -1;
    Field field;
    std::vector<int> dims;      // index d-lo
    std::vector<Matrix> mats;   // mats[k]: degree lo+k -> lo+k-1, k >= 1
    std::vector<std::vector<std::string>> labels;

    int dim_at(int d) const { return dims.at(d - lo); }
    const Matrix& mat_from(int d) const { return mats.at(d - lo); } // d -> d-1
};

ComplexSlice build_slice(int lo, int hi, const Field& f,
                         const std::function<int(int)>& dim,
                         const std::function<Vec(int, int)>& diff_column,
                         const std::function<std::string(int, int)>& label);

// dim ker(d_d) - rank(d_{d+1}); requires lo < d < hi... precisely d-1 >= lo
// and d+1 <= hi, else the window cannot support the answer.
int homology_dimension(const ComplexSlice& s, int d);

ComplexSlice module_slice(const PieceProvider& pieces, int lo, int hi);

} // namespace dghom
