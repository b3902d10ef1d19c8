#include "dghom/enveloping.hpp"

#include <sstream>
#include <stdexcept>

namespace dghom {

std::shared_ptr<SemifreeModule> algebra_as_module(const DgAlgebra& a, const std::string& name) {
    auto m = std::make_shared<SemifreeModule>(&a, name);
    m->add_basis_element("1", 0);
    return m;
}

EnvelopingAlgebra::EnvelopingAlgebra(const DgAlgebra* b) : b_(b) {
    ValidationReport vr = b->validate();
    if (!vr.ok()) throw std::invalid_argument("enveloping of invalid extension: " + vr.str());

    be_ = std::make_unique<DgAlgebra>(b->field(), b->name() + "^e");
    l_.src = b_;
    l_.dst = be_.get();
    r_.src = b_;
    r_.dst = be_.get();
    pi_.src = be_.get();
    pi_.dst = b_;
    left_index_.resize(b->size());
    right_index_.resize(b->size());

    // Base generators are shared (the tensor is over A); extension generators
    // are doubled, right copy immediately after its left copy so declaration
    // degrees stay weakly increasing. Differentials of earlier generators are
    // pushed through the partially built l and r, which is sound because a
    // generator's differential only mentions strictly earlier generators.
    for (int i = 0; i < b->size(); ++i) {
        const Generator& g = b->gen(i);
        if (g.base) {
            int idx = be_->add_generator(g.name, g.degree, true, l_.apply(g.d));
            l_.images.push_back(be_->generator(idx));
            r_.images.push_back(be_->generator(idx));
            pi_.images.push_back(b_->generator(i));
            left_index_[i] = right_index_[i] = idx;
        } else {
            int il = be_->add_generator(g.name, g.degree, false, l_.apply(g.d));
            l_.images.push_back(be_->generator(il));
            pi_.images.push_back(b_->generator(i));
            left_index_[i] = il;
            int ir = be_->add_generator(g.name + "'", g.degree, false, r_.apply(g.d));
            r_.images.push_back(be_->generator(ir));
            pi_.images.push_back(b_->generator(i));
            right_index_[i] = ir;
        }
    }

    ValidationReport ver = be_->validate();
    if (!ver.ok()) throw std::logic_error("enveloping algebra failed validation: " + ver.str());
    if (!l_.is_chain_map() || !r_.is_chain_map() || !pi_.is_chain_map())
        throw std::logic_error("enveloping structure maps are not chain maps");

    be_mod_ = algebra_as_module(*be_, b->name() + "^e");
}

AlgebraElement EnvelopingAlgebra::delta(const AlgebraElement& b) const {
    return l_.apply(b) - r_.apply(b);
}

AlgebraElement EnvelopingAlgebra::delta_gen(int ext) const {
    if (ext < 0 || ext >= b_->size() || b_->gen(ext).base)
        throw std::invalid_argument("delta_gen needs an extension generator");
    return be_->generator(left_index_[ext]) - be_->generator(right_index_[ext]);
}

const EnvelopingAlgebra::JSlice& EnvelopingAlgebra::j_slice(int degree) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = j_cache_.find(degree);
    if (it != j_cache_.end()) return it->second;

    JSlice s;
    if (degree >= 0) {
        int cols = be_->dim(degree);
        int rows = b_->dim(degree);
        Matrix p = Matrix::zero(rows, cols, b_->field());
        for (int j = 0; j < cols; ++j) {
            AlgebraElement mono =
                be_->element(be_->monomial_basis(degree)[j], Scalar::one(be_->field()));
            Vec c = b_->coords(pi_.apply(mono), degree);
            for (int i = 0; i < rows; ++i) p.a[i][j] = c[i];
        }
        KernelBasis kb = kernel_basis_with_columns(p);
        s.vectors = std::move(kb.vectors);
        s.free_cols = std::move(kb.free_cols);
    }
    return j_cache_.emplace(degree, std::move(s)).first->second;
}

int EnvelopingAlgebra::j_dim(int degree) const {
    return static_cast<int>(j_slice(degree).vectors.size());
}

AlgebraElement EnvelopingAlgebra::j_basis_elem(int degree, int k) const {
    return be_->from_coords(j_slice(degree).vectors.at(k), degree);
}

bool EnvelopingAlgebra::in_j(const AlgebraElement& y) const { return pi_.apply(y).is_zero(); }

Vec EnvelopingAlgebra::j_coords(const AlgebraElement& y, int degree) const {
    const JSlice& s = j_slice(degree);
    const Field& f = be_->field();
    Vec out(s.vectors.size(), Scalar::zero(f));
    if (y.is_zero()) return out;
    if (!y.is_homogeneous() || *y.degree() != degree)
        throw std::invalid_argument("j_coords: wrong degree");
    if (!in_j(y)) throw std::invalid_argument("j_coords: element is not in the diagonal ideal");

    Vec full = be_->coords(y, degree);
    for (size_t k = 0; k < s.vectors.size(); ++k) out[k] = full[s.free_cols[k]];
    // kernel vectors have unit free-column entries, so this must reconstruct
    Vec check(full.size(), Scalar::zero(f));
    for (size_t k = 0; k < s.vectors.size(); ++k)
        for (size_t i = 0; i < full.size(); ++i) check[i] += s.vectors[k][i] * out[k];
    if (check != full) throw std::logic_error("j_coords: kernel basis reconstruction failed");
    return out;
}

EnvelopingAlgebra::JExpression EnvelopingAlgebra::express_in_j(const AlgebraElement& j) const {
    JExpression out;
    if (j.is_zero()) return out;
    if (!j.is_homogeneous()) throw std::invalid_argument("express_in_j: inhomogeneous element");
    if (!in_j(j)) throw std::invalid_argument("express_in_j: element is not in the diagonal ideal");
    int d = *j.degree();
    const Field& f = be_->field();

    std::vector<std::pair<int, Monomial>> col_info; // (B generator, right factor monomial)
    std::vector<Vec> cols;
    for (int i = 0; i < b_->size(); ++i) {
        if (b_->gen(i).base || b_->gen(i).degree > d) continue;
        AlgebraElement dg = delta_gen(i);
        for (const Monomial& m : be_->monomial_basis(d - b_->gen(i).degree)) {
            AlgebraElement y = dg * be_->element(m, Scalar::one(f));
            cols.emplace_back(be_->coords(y, d));
            col_info.emplace_back(i, m);
        }
    }
    Matrix s = Matrix::zero(be_->dim(d), static_cast<int>(cols.size()), f);
    for (size_t c = 0; c < cols.size(); ++c)
        for (int r = 0; r < s.rows; ++r) s.a[r][c] = cols[c][r];
    SolveResult sol = solve(s, be_->coords(j, d));
    if (!sol.ok)
        throw std::logic_error("express_in_j: diagonal ideal not generated by delta(X_i) here");

    std::map<int, AlgebraElement> grouped;
    for (size_t c = 0; c < cols.size(); ++c) {
        if (sol.x[c].is_zero()) continue;
        auto [gen, m] = col_info[c];
        auto it = grouped.find(gen);
        AlgebraElement term = be_->element(m, sol.x[c]);
        if (it == grouped.end())
            grouped.emplace(gen, term);
        else
            it->second += term;
    }
    AlgebraElement recheck = be_->zero();
    for (auto& [gen, y] : grouped) {
        recheck += delta_gen(gen) * y;
        out.terms.emplace_back(gen, y);
    }
    if (recheck != j) throw std::logic_error("express_in_j: re-expansion mismatch");
    return out;
}

const std::vector<Vec>& EnvelopingAlgebra::j2_basis(int degree) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = j2_cache_.find(degree);
        if (it != j2_cache_.end()) return it->second;
    }
    const Field& f = be_->field();
    std::vector<Vec> rows;
    for (int a = 1; a < degree; ++a) {
        int da = j_dim(a), db = j_dim(degree - a);
        for (int p = 0; p < da; ++p) {
            AlgebraElement left = j_basis_elem(a, p);
            for (int q = 0; q < db; ++q) {
                AlgebraElement y = left * j_basis_elem(degree - a, q);
                if (!y.is_zero()) rows.emplace_back(be_->coords(y, degree));
            }
        }
    }
    std::vector<Vec> basis;
    if (!rows.empty()) {
        Matrix m = Matrix::zero(static_cast<int>(rows.size()), be_->dim(degree), f);
        for (size_t i = 0; i < rows.size(); ++i) m.a[i] = rows[i];
        Rref rr = rref(m);
        for (int i = 0; i < rr.rank; ++i) basis.push_back(rr.r.a[i]);
    }
    std::lock_guard<std::mutex> lk(mu_);
    return j2_cache_.emplace(degree, std::move(basis)).first->second;
}

int EnvelopingAlgebra::j2_dim(int degree) const {
    return static_cast<int>(j2_basis(degree).size());
}

ModuleElement JPieces::basis_elem(int degree, int k) const {
    return env_->as_module().element(0, env_->j_basis_elem(degree, k));
}

Vec JPieces::coords(const ModuleElement& x, int degree) const {
    return env_->j_coords(x.component(0), degree);
}

DifferentialModule::DifferentialModule(const EnvelopingAlgebra* env) : env_(env) {
    const DgAlgebra& b = env->base();
    omega_ = std::make_shared<SemifreeModule>(&b, "Omega(" + b.name() + ")");
    u_of_gen_.assign(b.size(), -1);
    for (int i = 0; i < b.size(); ++i) {
        if (b.gen(i).base) continue;
        u_of_gen_[i] = omega_->add_basis_element("u[" + b.gen(i).name + "]", b.gen(i).degree);
        gen_of_u_.push_back(i);
    }
    for (int lam = 0; lam < b.size(); ++lam) {
        if (b.gen(lam).base) continue;
        const AlgebraElement& dx = b.gen(lam).d;
        if (dx.is_zero()) continue;
        for (int mu = 0; mu < lam; ++mu) {
            if (b.gen(mu).base) continue;
            AlgebraElement c = b.partial_derivative(dx, mu);
            if (!c.is_zero()) omega_->set_coefficient(u_of_gen_[mu], u_of_gen_[lam], c);
        }
    }
    ValidationReport vr = omega_->validate();
    if (!vr.ok()) throw std::logic_error("differential module failed validation: " + vr.str());

    // Mandatory cross-check: the c-matrix route and the independent J/J^2
    // reduction of d(delta(X_l)) must agree; a mismatch means a sign bug.
    for (int u = 0; u < omega_->rank(); ++u) {
        ModuleElement via_c = omega_->differential(omega_->basis_elem(u));
        AlgebraElement ddelta = env_->algebra().differential(env_->delta_gen(gen_of_u_[u]));
        ModuleElement via_j = project(ddelta);
        if (!(via_c == via_j)) {
            std::ostringstream os;
            os << "differential module cross-check failed at " << omega_->basis(u).id << ": "
               << via_c.str() << " vs " << via_j.str();
            throw std::logic_error(os.str());
        }
    }
}

int DifferentialModule::u_index(int ext) const {
    if (ext < 0 || ext >= static_cast<int>(u_of_gen_.size()) || u_of_gen_[ext] < 0)
        throw std::invalid_argument("u_index needs an extension generator");
    return u_of_gen_[ext];
}

const Matrix& DifferentialModule::projector(int degree) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = proj_cache_.find(degree);
        if (it != proj_cache_.end()) return it->second;
    }
    const DgAlgebra& b = env_->base();
    const DgAlgebra& be = env_->algebra();
    const Field& f = b.field();

    // spanning set of J_d: delta(X_m) * r(monomial), then a J^2 basis; the
    // value of a spanning column is its class on the u basis (zero for J^2)
    std::vector<Vec> scols, vcols;
    for (int i = 0; i < b.size(); ++i) {
        if (b.gen(i).base || b.gen(i).degree > degree) continue;
        AlgebraElement dg = env_->delta_gen(i);
        for (const Monomial& m : b.monomial_basis(degree - b.gen(i).degree)) {
            AlgebraElement bm = b.element(m, Scalar::one(f));
            scols.emplace_back(be.coords(dg * env_->right().apply(bm), degree));
            vcols.emplace_back(omega_->coords(omega_->element(u_of_gen_[i], bm), degree));
        }
    }
    for (const Vec& w : env_->j2_basis(degree)) {
        scols.push_back(w);
        vcols.emplace_back(omega_->dim(degree), Scalar::zero(f));
    }

    int ncols = static_cast<int>(scols.size());
    Matrix s = Matrix::zero(be.dim(degree), ncols, f);
    Matrix v = Matrix::zero(omega_->dim(degree), ncols, f);
    for (int c = 0; c < ncols; ++c) {
        for (int r = 0; r < s.rows; ++r) s.a[r][c] = scols[c][r];
        for (int r = 0; r < v.rows; ++r) v.a[r][c] = vcols[c][r];
    }
    if (rank_of(s) != env_->j_dim(degree))
        throw std::logic_error("projector: delta-generated span does not fill J");
    std::optional<Matrix> fmat = factor_through(s, v);
    if (!fmat)
        throw std::logic_error("projector: u-classes not independent over J^2 (sign bug)");
    std::lock_guard<std::mutex> lk(mu_);
    return proj_cache_.emplace(degree, std::move(*fmat)).first->second;
}

ModuleElement DifferentialModule::project(const AlgebraElement& j) const {
    if (j.is_zero()) return omega_->zero();
    if (!j.is_homogeneous()) throw std::invalid_argument("project: inhomogeneous element");
    if (!env_->in_j(j)) throw std::invalid_argument("project: element is not in the diagonal ideal");
    int d = *j.degree();
    Vec c = mat_vec(projector(d), env_->algebra().coords(j, d));
    return omega_->from_coords(c, d);
}

ModuleElement DifferentialModule::dbar(const AlgebraElement& b) const {
    const DgAlgebra& alg = env_->base();
    ModuleElement out = omega_->zero();
    for (int i = 0; i < alg.size(); ++i) {
        if (alg.gen(i).base) continue;
        AlgebraElement p = alg.partial_derivative(b, i);
        if (!p.is_zero()) out += omega_->element(u_of_gen_[i], p);
    }
    return out;
}

std::shared_ptr<SemifreeModule> tensor_with_enveloping(const SemifreeModule& n,
                                                       const EnvelopingAlgebra& env) {
    auto t = std::make_shared<SemifreeModule>(&env.algebra(), n.name() + "(x)B^e");
    for (int i = 0; i < n.rank(); ++i) t->add_basis_element(n.basis(i).id, n.basis(i).degree);
    for (int lam = 0; lam < n.rank(); ++lam)
        for (int mu = 0; mu < lam; ++mu) {
            const AlgebraElement& b = n.coefficient(mu, lam);
            if (!b.is_zero()) t->set_coefficient(mu, lam, env.left().apply(b));
        }
    ValidationReport vr = t->validate();
    if (!vr.ok()) throw std::logic_error("tensor with B^e failed validation: " + vr.str());
    return t;
}

int TensorJPieces::dim(int degree) const {
    int total = 0;
    for (int l = 0; l < nbe_->rank(); ++l) total += env_->j_dim(degree - nbe_->basis(l).degree);
    return total;
}

ModuleElement TensorJPieces::basis_elem(int degree, int k) const {
    for (int l = 0; l < nbe_->rank(); ++l) {
        int dl = env_->j_dim(degree - nbe_->basis(l).degree);
        if (k < dl)
            return nbe_->element(l, env_->j_basis_elem(degree - nbe_->basis(l).degree, k));
        k -= dl;
    }
    throw std::out_of_range("TensorJPieces::basis_elem");
}

Vec TensorJPieces::coords(const ModuleElement& x, int degree) const {
    const Field& f = nbe_->algebra().field();
    Vec out;
    out.reserve(dim(degree));
    for (int l = 0; l < nbe_->rank(); ++l) {
        int d = degree - nbe_->basis(l).degree;
        AlgebraElement comp = x.component(l);
        Vec sub = env_->j_coords(comp, d); // throws when the component leaves J
        out.insert(out.end(), sub.begin(), sub.end());
    }
    (void)f;
    return out;
}

std::pair<int, int> TensorOmega::unflat(int f) const {
    int r = omega->module().rank();
    return {f / r, f % r};
}

ModuleElement TensorOmega::pure(int l, const ModuleElement& w) const {
    ModuleElement out = mod->zero();
    for (const auto& [k, c] : w.components()) out += mod->element(flat(l, k), c);
    return out;
}

ModuleElement TensorOmega::tensor_right(const ModuleElement& m, int k) const {
    const DgAlgebra& b = n->algebra();
    int uk = omega->module().basis(k).degree;
    ModuleElement out = mod->zero();
    for (const auto& [l, coeff] : m.components()) {
        for (const auto& [mono, c] : coeff.terms()) {
            bool flip = (mono.degree % 2 != 0) && (uk % 2 != 0);
            out += mod->element(flat(l, k), b.element(mono, flip ? -c : c));
        }
    }
    return out;
}

TensorOmega tensor_with_omega(const SemifreeModule& n, const DifferentialModule& om) {
    const DgAlgebra& b = n.algebra();
    const SemifreeModule& w = om.module();
    TensorOmega t;
    t.n = &n;
    t.omega = &om;
    t.mod = std::make_shared<SemifreeModule>(&b, n.name() + "(x)Omega");
    for (int l = 0; l < n.rank(); ++l)
        for (int k = 0; k < w.rank(); ++k)
            t.mod->add_basis_element(n.basis(l).id + "(x)" + w.basis(k).id,
                                     n.basis(l).degree + w.basis(k).degree);
    // d(e_l (x) u_k) = (d e_l) (x) u_k + (-1)^{|e_l|} e_l (x) d(u_k)
    for (int lam = 0; lam < n.rank(); ++lam) {
        for (int k = 0; k < w.rank(); ++k) {
            for (int mu = 0; mu < lam; ++mu) {
                const AlgebraElement& bml = n.coefficient(mu, lam);
                if (bml.is_zero()) continue;
                // e_mu b (x) u_k = (-1)^{|b||u_k|} (e_mu (x) u_k) b, termwise
                AlgebraElement moved = b.zero();
                for (const auto& [mono, c] : bml.terms()) {
                    bool flip = (mono.degree % 2 != 0) && (w.basis(k).degree % 2 != 0);
                    moved += b.element(mono, flip ? -c : c);
                }
                t.mod->set_coefficient(t.flat(mu, k), t.flat(lam, k), moved);
            }
            bool odd = n.basis(lam).degree % 2 != 0;
            for (int i = 0; i < k; ++i) {
                const AlgebraElement& c = w.coefficient(i, k);
                if (c.is_zero()) continue;
                t.mod->set_coefficient(t.flat(lam, i), t.flat(lam, k), odd ? -c : c);
            }
        }
    }
    ValidationReport vr = t.mod->validate();
    if (!vr.ok()) throw std::logic_error("tensor with Omega failed validation: " + vr.str());
    return t;
}

ModuleElement contract_tensor(const EnvelopingAlgebra& env, const SemifreeModule& n,
                              const ModuleElement& x) {
    ModuleElement out = n.zero();
    for (const auto& [l, y] : x.components()) out += n.element(l, env.mult().apply(y));
    return out;
}

ExactnessReport check_tensor_sequence(const SemifreeModule& n, const EnvelopingAlgebra& env,
                                      int lo, int hi) {
    ExactnessReport rep;
    auto fail = [&](int d, const std::string& what) {
        rep.ok = false;
        rep.detail = "degree " + std::to_string(d) + ": " + what;
    };
    std::shared_ptr<SemifreeModule> nbe = tensor_with_enveloping(n, env);
    TensorJPieces tj(nbe, &env);
    const Field& f = n.algebra().field();

    for (int d = lo; d <= hi && rep.ok; ++d) {
        int jd = tj.dim(d), bed = nbe->dim(d), nd = n.dim(d);
        if (jd + nd != bed) {
            fail(d, "dim(N(x)J) + dim(N) != dim(N(x)B^e)");
            break;
        }
        Matrix p = Matrix::zero(nd, bed, f);
        for (int k = 0; k < bed; ++k) {
            ModuleElement v = FullPieces(nbe.get()).basis_elem(d, k);
            ModuleElement pv = contract_tensor(env, n, v);
            if (!(contract_tensor(env, n, nbe->differential(v)) == n.differential(pv))) {
                fail(d, "pi_N is not a chain map");
                break;
            }
            Vec c = n.coords(pv, d);
            for (int r = 0; r < nd; ++r) p.a[r][k] = c[r];
        }
        if (!rep.ok) break;
        Matrix inc = Matrix::zero(bed, jd, f);
        for (int k = 0; k < jd; ++k) {
            Vec c = nbe->coords(tj.basis_elem(d, k), d);
            for (int r = 0; r < bed; ++r) inc.a[r][k] = c[r];
        }
        if (rank_of(p) != nd) {
            fail(d, "pi_N not surjective");
            break;
        }
        if (rank_of(inc) != jd) {
            fail(d, "N(x)J does not inject");
            break;
        }
        for (int k = 0; k < jd; ++k) {
            Vec col(bed, Scalar::zero(f));
            for (int r = 0; r < bed; ++r) col[r] = inc.a[r][k];
            for (const Scalar& s : mat_vec(p, col))
                if (!s.is_zero()) {
                    fail(d, "pi_N does not kill N(x)J");
                    break;
                }
            if (!rep.ok) break;
        }
        if (!rep.ok) break;
        if (bed - rank_of(p) != jd) fail(d, "ker(pi_N) larger than N(x)J");
    }
    return rep;
}

} // namespace dghom
