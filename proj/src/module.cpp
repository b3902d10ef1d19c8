#include "dghom/module.hpp"

#include <sstream>
#include <stdexcept>

namespace dghom {

static void same_module(const SemifreeModule* a, const SemifreeModule* b) {
    if (a == nullptr || b == nullptr) throw std::logic_error("detached module element");
    if (a != b) throw std::logic_error("elements of different modules");
}

AlgebraElement ModuleElement::component(int i) const {
    auto it = comps_.find(i);
    if (it != comps_.end()) return it->second;
    return mod_ ? mod_->algebra().zero() : AlgebraElement{};
}

bool ModuleElement::is_homogeneous() const {
    std::optional<int> d;
    for (const auto& [i, c] : comps_) {
        if (!c.is_homogeneous()) return false;
        if (c.is_zero()) continue;
        int cd = *c.degree() + mod_->basis(i).degree;
        if (d && *d != cd) return false;
        d = cd;
    }
    return true;
}

std::optional<int> ModuleElement::degree() const {
    if (comps_.empty()) return std::nullopt;
    if (!is_homogeneous()) throw std::logic_error("degree of inhomogeneous module element");
    const auto& [i, c] = *comps_.begin();
    return *c.degree() + mod_->basis(i).degree;
}

ModuleElement ModuleElement::operator-() const {
    ModuleElement r = *this;
    for (auto& [i, c] : r.comps_) c = -c;
    return r;
}

ModuleElement ModuleElement::operator+(const ModuleElement& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    same_module(mod_, o.mod_);
    ModuleElement r = *this;
    for (const auto& [i, c] : o.comps_) {
        auto it = r.comps_.find(i);
        if (it == r.comps_.end()) {
            r.comps_.emplace(i, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) r.comps_.erase(it);
        }
    }
    return r;
}

ModuleElement ModuleElement::operator-(const ModuleElement& o) const { return *this + (-o); }

ModuleElement ModuleElement::operator*(const Scalar& c) const {
    ModuleElement r = *this;
    if (c.is_zero()) {
        r.comps_.clear();
        return r;
    }
    for (auto& [i, v] : r.comps_) v = v * c;
    return r;
}

ModuleElement ModuleElement::operator*(const AlgebraElement& b) const {
    ModuleElement r;
    r.mod_ = mod_;
    if (b.is_zero()) return r;
    for (const auto& [i, c] : comps_) {
        AlgebraElement v = c * b;
        if (!v.is_zero()) r.comps_.emplace(i, std::move(v));
    }
    return r;
}

bool ModuleElement::operator==(const ModuleElement& o) const {
    if (is_zero() && o.is_zero()) return true;
    if (is_zero() != o.is_zero()) return false;
    same_module(mod_, o.mod_);
    return comps_ == o.comps_;
}

std::string ModuleElement::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, c] : comps_) {
        if (!first) os << " + ";
        first = false;
        os << mod_->basis(i).id;
        if (c.terms().size() == 1 && c.terms().begin()->second.is_one() &&
            c.terms().begin()->first.is_one()) {
            continue; // coefficient 1
        }
        if (c.terms().size() == 1) {
            os << "*" << c.str();
        } else {
            os << "*(" << c.str() << ")";
        }
    }
    return os.str();
}

ModuleElement act_left(const AlgebraElement& a, const ModuleElement& m) {
    if (m.is_zero()) return m;
    if (a.is_zero()) return m.module()->zero();
    if (!a.is_homogeneous() || !m.is_homogeneous())
        throw std::logic_error("left action needs homogeneous operands");
    ModuleElement r = m * a;
    if ((*a.degree() % 2) != 0 && (*m.degree() % 2) != 0) r = -r;
    return r;
}

SemifreeModule::SemifreeModule(const DgAlgebra* algebra, std::string name)
    : alg_(algebra), name_(std::move(name)), cache_mu_(std::make_unique<std::mutex>()) {}

int SemifreeModule::add_basis_element(const std::string& id, int degree) {
    if (index_.count(id)) throw std::invalid_argument("duplicate basis id " + id);
    basis_.push_back({id, degree});
    index_[id] = rank() - 1;
    for (auto& row : coeff_) row.push_back(alg_->zero());
    coeff_.push_back(std::vector<AlgebraElement>(rank(), alg_->zero()));
    {
        std::lock_guard<std::mutex> lk(*cache_mu_);
        piece_cache_.clear();
    }
    return rank() - 1;
}

void SemifreeModule::set_coefficient(int mu, int lambda, const AlgebraElement& b) {
    if (mu < 0 || lambda < 0 || mu >= rank() || lambda >= rank())
        throw std::invalid_argument("basis index out of range");
    if (mu >= lambda && !b.is_zero())
        throw std::invalid_argument("differential must be strictly lower triangular");
    if (!b.is_zero() && b.algebra() != alg_) throw std::invalid_argument("coefficient from wrong algebra");
    coeff_[mu][lambda] = b;
}

int SemifreeModule::index_of(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

const AlgebraElement& SemifreeModule::coefficient(int mu, int lambda) const {
    return coeff_.at(mu).at(lambda);
}

ModuleElement SemifreeModule::zero() const {
    ModuleElement e;
    e.mod_ = this;
    return e;
}

ModuleElement SemifreeModule::basis_elem(int i) const { return element(i, alg_->one()); }

ModuleElement SemifreeModule::element(int i, const AlgebraElement& c) const {
    if (i < 0 || i >= rank()) throw std::invalid_argument("basis index out of range");
    ModuleElement e;
    e.mod_ = this;
    if (!c.is_zero()) e.comps_.emplace(i, c);
    return e;
}

ModuleElement SemifreeModule::differential(const ModuleElement& x) const {
    same_module(this, x.module());
    ModuleElement out = zero();
    for (const auto& [lambda, c] : x.components()) {
        // d(e_l) c
        for (int mu = 0; mu < lambda; ++mu) {
            const AlgebraElement& b = coeff_[mu][lambda];
            if (!b.is_zero()) out += element(mu, b * c);
        }
        // (-1)^{|e_l|} e_l d(c)
        AlgebraElement dc = alg_->differential(c);
        if (!dc.is_zero()) {
            if (basis_[lambda].degree % 2) dc = -dc;
            out += element(lambda, dc);
        }
    }
    return out;
}

ValidationReport SemifreeModule::validate() const {
    ValidationReport rep;
    for (int l = 0; l < rank(); ++l) {
        for (int m = 0; m < l; ++m) {
            const AlgebraElement& b = coeff_[m][l];
            if (b.is_zero()) continue;
            if (!b.is_homogeneous()) {
                rep.issues.push_back({"homogeneity", basis_[l].id,
                                      "coefficient at " + basis_[m].id + " is not homogeneous"});
                continue;
            }
            int expected = basis_[l].degree - basis_[m].degree - 1;
            if (*b.degree() != expected)
                rep.issues.push_back({"degree", basis_[l].id,
                                      "coefficient at " + basis_[m].id + " has degree " +
                                          std::to_string(*b.degree()) + ", expected " +
                                          std::to_string(expected)});
        }
    }
    if (!rep.ok()) return rep;
    for (int l = 0; l < rank(); ++l) {
        ModuleElement dd = differential(differential(basis_elem(l)));
        if (!dd.is_zero())
            rep.issues.push_back({"d_squared", basis_[l].id, "d(d(e)) = " + dd.str()});
    }
    return rep;
}

int SemifreeModule::dim(int degree) const { return static_cast<int>(piece_basis(degree).size()); }

const std::vector<SemifreeModule::PieceEntry>& SemifreeModule::piece_basis(int degree) const {
    {
        std::lock_guard<std::mutex> lk(*cache_mu_);
        auto it = piece_cache_.find(degree);
        if (it != piece_cache_.end()) return it->second;
    }
    std::vector<PieceEntry> out;
    for (int l = 0; l < rank(); ++l)
        for (const Monomial& m : alg_->monomial_basis(degree - basis_[l].degree))
            out.push_back({l, m});
    std::lock_guard<std::mutex> lk(*cache_mu_);
    return piece_cache_.emplace(degree, std::move(out)).first->second;
}

Vec SemifreeModule::coords(const ModuleElement& x, int degree) const {
    same_module(this, x.module());
    const auto& basis = piece_basis(degree);
    Vec v(basis.size(), Scalar::zero(alg_->field()));
    // component coordinates delegate to the algebra's per-degree positions
    size_t offset = 0;
    std::vector<size_t> start(rank() + 1, 0);
    for (int l = 0; l < rank(); ++l) {
        start[l] = offset;
        offset += alg_->monomial_basis(degree - basis_[l].degree).size();
    }
    start[rank()] = offset;
    for (const auto& [l, c] : x.components()) {
        Vec cv = alg_->coords(c, degree - basis_[l].degree);
        for (size_t k = 0; k < cv.size(); ++k) v[start[l] + k] = cv[k];
    }
    return v;
}

ModuleElement SemifreeModule::from_coords(const Vec& v, int degree) const {
    const auto& basis = piece_basis(degree);
    if (v.size() != basis.size()) throw std::logic_error("coordinate size mismatch");
    ModuleElement out = zero();
    for (size_t k = 0; k < basis.size(); ++k)
        if (!v[k].is_zero()) out += element(basis[k].lambda, alg_->element(basis[k].m, v[k]));
    return out;
}

std::unique_ptr<SemifreeModule> SemifreeModule::shifted(int n, const std::string& name) const {
    auto out = std::make_unique<SemifreeModule>(alg_, name);
    for (int i = 0; i < rank(); ++i) out->add_basis_element(basis_[i].id, basis_[i].degree - n);
    for (int l = 0; l < rank(); ++l)
        for (int m = 0; m < l; ++m)
            if (!coeff_[m][l].is_zero())
                out->set_coefficient(m, l, n % 2 ? -coeff_[m][l] : coeff_[m][l]);
    return out;
}

std::unique_ptr<SemifreeModule> direct_sum(const SemifreeModule& a, const SemifreeModule& b,
                                           const std::string& name) {
    if (&a.algebra() != &b.algebra()) throw std::invalid_argument("direct sum over one algebra");
    auto out = std::make_unique<SemifreeModule>(&a.algebra(), name);
    for (int i = 0; i < a.rank(); ++i) out->add_basis_element(a.basis(i).id, a.basis(i).degree);
    for (int i = 0; i < b.rank(); ++i) out->add_basis_element(b.basis(i).id, b.basis(i).degree);
    for (int l = 0; l < a.rank(); ++l)
        for (int m = 0; m < l; ++m)
            if (!a.coefficient(m, l).is_zero()) out->set_coefficient(m, l, a.coefficient(m, l));
    for (int l = 0; l < b.rank(); ++l)
        for (int m = 0; m < l; ++m)
            if (!b.coefficient(m, l).is_zero())
                out->set_coefficient(a.rank() + m, a.rank() + l, b.coefficient(m, l));
    return out;
}

ModuleElement FullPieces::basis_elem(int degree, int k) const {
    const auto& basis = m_->piece_basis(degree);
    const auto& entry = basis.at(k);
    return m_->element(entry.lambda, m_->algebra().element(entry.m, Scalar::one(m_->algebra().field())));
}

Vec FullPieces::coords(const ModuleElement& x, int degree) const { return m_->coords(x, degree); }

GradedHom GradedHom::zero(const SemifreeModule& src, const HomTarget& tgt, int degree) {
    GradedHom f;
    f.source = &src;
    f.target = tgt;
    f.degree = degree;
    f.images.assign(src.rank(), tgt.pres().zero());
    return f;
}

ModuleElement GradedHom::apply(const ModuleElement& x) const {
    same_module(source, x.module());
    ModuleElement out = target.pres().zero();
    for (const auto& [l, c] : x.components()) out += images[l] * target.embedded(c);
    return out;
}

GradedHom GradedHom::operator+(const GradedHom& o) const {
    if (source != o.source || degree != o.degree) throw std::logic_error("hom shape mismatch");
    GradedHom r = *this;
    for (int i = 0; i < source->rank(); ++i) r.images[i] += o.images[i];
    return r;
}

GradedHom GradedHom::operator-(const GradedHom& o) const { return *this + (-o); }

GradedHom GradedHom::operator-() const {
    GradedHom r = *this;
    for (auto& im : r.images) im = -im;
    return r;
}

GradedHom GradedHom::operator*(const Scalar& c) const {
    GradedHom r = *this;
    for (auto& im : r.images) im = im * c;
    return r;
}

bool GradedHom::operator==(const GradedHom& o) const {
    if (source != o.source || degree != o.degree) return false;
    for (int i = 0; i < source->rank(); ++i)
        if (images[i] != o.images[i]) return false;
    return true;
}

bool GradedHom::is_zero() const {
    for (const auto& im : images)
        if (!im.is_zero()) return false;
    return true;
}

GradedHom hom_differential(const GradedHom& f) {
    GradedHom out = GradedHom::zero(*f.source, f.target, f.degree - 1);
    const SemifreeModule& N = *f.source;
    const SemifreeModule& T = f.target.pres();
    for (int l = 0; l < N.rank(); ++l) {
        ModuleElement v = T.differential(f.images[l]);
        ModuleElement fd = T.zero();
        for (int m = 0; m < l; ++m) {
            const AlgebraElement& b = N.coefficient(m, l);
            if (!b.is_zero()) fd += f.images[m] * f.target.embedded(b);
        }
        // d_T f - (-1)^{|f|} f d_N
        out.images[l] = (f.degree % 2) != 0 ? v + fd : v - fd;
    }
    return out;
}

GradedHom act_left_hom(const AlgebraElement& b, const GradedHom& f) {
    if (b.is_zero()) return GradedHom::zero(*f.source, f.target, f.degree);
    if (!b.is_homogeneous()) throw std::logic_error("act_left_hom needs a homogeneous scalar");
    int bd = *b.degree();
    GradedHom out = GradedHom::zero(*f.source, f.target, f.degree + bd);
    AlgebraElement eb = f.target.embedded(b);
    for (int l = 0; l < f.source->rank(); ++l) {
        ModuleElement v = f.images[l] * eb;
        if (bd % 2 != 0 && (f.degree + f.source->basis(l).degree) % 2 != 0) v = -v;
        out.images[l] = v;
    }
    return out;
}

NullHomotopyResult solve_null_homotopy(const GradedHom& g) {
    const SemifreeModule& N = *g.source;
    const PieceProvider& P = *g.target.pieces;
    const Field& F = N.algebra().field();
    const int n = g.degree; // h has degree n + 1

    // unknown layout: blocks per source basis element
    std::vector<int> udim(N.rank()), ustart(N.rank() + 1, 0);
    for (int l = 0; l < N.rank(); ++l) {
        udim[l] = P.dim(N.basis(l).degree + n + 1);
        ustart[l + 1] = ustart[l] + udim[l];
    }
    std::vector<int> edim(N.rank()), estart(N.rank() + 1, 0);
    for (int l = 0; l < N.rank(); ++l) {
        edim[l] = P.dim(N.basis(l).degree + n);
        estart[l + 1] = estart[l] + edim[l];
    }

    Matrix A = Matrix::zero(estart[N.rank()], ustart[N.rank()], F);
    Vec rhs(estart[N.rank()], Scalar::zero(F));
    std::vector<std::string> labels(estart[N.rank()]);
    for (int l = 0; l < N.rank(); ++l)
        for (int k = 0; k < edim[l]; ++k)
            labels[estart[l] + k] = N.basis(l).id + "#" + std::to_string(k);

    // d(h)(e_l) = d_T(h(e_l)) - (-1)^{n+1} sum_m h(e_m) b_{ml} = g(e_l)
    for (int mu = 0; mu < N.rank(); ++mu) {
        int src_deg = N.basis(mu).degree + n + 1;
        for (int k = 0; k < udim[mu]; ++k) {
            ModuleElement v = P.basis_elem(src_deg, k);
            int col = ustart[mu] + k;
            Vec dv = P.coords(P.presentation().differential(v), src_deg - 1);
            for (int r = 0; r < edim[mu]; ++r) A.a[estart[mu] + r][col] = dv[r];
            for (int l = mu + 1; l < N.rank(); ++l) {
                const AlgebraElement& b = N.coefficient(mu, l);
                if (b.is_zero()) continue;
                ModuleElement vb = v * g.target.embedded(b);
                Vec c = P.coords(vb, N.basis(l).degree + n);
                bool add = (n + 1) % 2 != 0; // -(-1)^{n+1}
                for (int r = 0; r < edim[l]; ++r) {
                    if (c[r].is_zero()) continue;
                    A.a[estart[l] + r][col] += add ? c[r] : -c[r];
                }
            }
        }
        Vec gc = P.coords(g.images[mu], N.basis(mu).degree + n);
        for (int r = 0; r < edim[mu]; ++r) rhs[estart[mu] + r] = gc[r];
    }

    NullHomotopyResult res;
    SolveResult sol = solve(A, rhs);
    if (!sol.ok) {
        res.ok = false;
        res.certificate.row = sol.certificate;
        res.certificate.labels = labels;
        res.certificate.detail = "left-kernel row annihilates the homotopy system but not the target";
        return res;
    }
    res.ok = true;
    res.h = GradedHom::zero(N, g.target, n + 1);
    for (int l = 0; l < N.rank(); ++l) {
        ModuleElement im = P.presentation().zero();
        for (int k = 0; k < udim[l]; ++k)
            if (!sol.x[ustart[l] + k].is_zero())
                im += P.basis_elem(N.basis(l).degree + n + 1, k) * sol.x[ustart[l] + k];
        res.h.images[l] = im;
    }
    if (!(hom_differential(res.h) == g)) throw std::logic_error("homotopy verification failed");
    return res;
}

ComplexSlice build_slice(int lo, int hi, const Field& f, const std::function<int(int)>& dim,
                         const std::function<Vec(int, int)>& diff_column,
                         const std::function<std::string(int, int)>& label) {
    if (lo > hi) throw std::invalid_argument("empty window");
    ComplexSlice s;
    s.lo = lo;
    s.hi = hi;
    s.field = f;
    s.dims.resize(hi - lo + 1);
    s.labels.resize(hi - lo + 1);
    for (int d = lo; d <= hi; ++d) {
        s.dims[d - lo] = dim(d);
        for (int k = 0; k < s.dims[d - lo]; ++k) s.labels[d - lo].push_back(label(d, k));
    }
    s.mats.resize(hi - lo + 1);
    for (int d = lo + 1; d <= hi; ++d) {
        Matrix m = Matrix::zero(s.dims[d - 1 - lo], s.dims[d - lo], f);
        for (int k = 0; k < s.dims[d - lo]; ++k) {
            Vec col = diff_column(d, k);
            if (static_cast<int>(col.size()) != m.rows) throw std::logic_error("slice column size");
            for (int r = 0; r < m.rows; ++r) m.a[r][k] = col[r];
        }
        s.mats[d - lo] = std::move(m);
    }
    // consecutive differentials compose to zero inside the window
    for (int d = lo + 2; d <= hi; ++d) {
        const Matrix& a = s.mats[d - lo];
        const Matrix& b = s.mats[d - 1 - lo];
        for (int j = 0; j < a.cols; ++j) {
            Vec col(a.rows, Scalar::zero(f));
            for (int i = 0; i < a.rows; ++i) col[i] = a.a[i][j];
            Vec bc = mat_vec(b, col);
            for (const Scalar& v : bc)
                if (!v.is_zero()) throw std::logic_error("slice differential does not square to zero");
        }
    }
    return s;
}

int homology_dimension(const ComplexSlice& s, int d) {
    if (d - 1 < s.lo || d + 1 > s.hi)
        throw std::invalid_argument("window too small for requested degree");
    int cycles = s.dim_at(d) - rank_of(s.mat_from(d));
    int boundaries = rank_of(s.mat_from(d + 1));
    return cycles - boundaries;
}

ComplexSlice module_slice(const PieceProvider& pieces, int lo, int hi) {
    const Field f = pieces.presentation().algebra().field();
    return build_slice(
        lo, hi, f, [&](int d) { return pieces.dim(d); },
        [&](int d, int k) {
            ModuleElement v = pieces.presentation().differential(pieces.basis_elem(d, k));
            return pieces.coords(v, d - 1);
        },
        [&](int d, int k) {
            (void)d;
            return "b" + std::to_string(k);
        });
}

HomTarget module_target(const SemifreeModule& m) {
    return HomTarget{std::make_shared<FullPieces>(&m), identity_hom(m.algebra())};
}

} // namespace dghom
