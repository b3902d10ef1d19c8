#include "dghom/derivation.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace dghom {

struct DerConstraintCache {
    std::mutex mu;
    std::map<int, KernelBasis> charts; // degree n -> kernel of the constraint map
};

namespace {

// constraint rows of one image family: the pairwise delta relations above
// each pair (i, j); empty result means the family is a derivation
std::vector<ModuleElement> delta_relation_values(const DgAlgebra& b, const DerTarget& x,
                                                 const std::vector<ModuleElement>& images) {
    std::vector<ModuleElement> out;
    if (x.twist_env == nullptr) return out;
    const EnvelopingAlgebra& env = *x.twist_env;
    for (int i = 0; i < b.size(); ++i) {
        if (b.gen(i).base) continue;
        for (int j = i; j < b.size(); ++j) {
            if (b.gen(j).base) continue;
            if (i == j && b.gen(i).degree % 2 == 0) continue;
            ModuleElement v = images[i] * x.env_act.apply(env.delta_gen(j));
            if (i != j) {
                ModuleElement w = images[j] * x.env_act.apply(env.delta_gen(i));
                if (b.gen(i).degree % 2 != 0 && b.gen(j).degree % 2 != 0)
                    v += w;
                else
                    v -= w;
            }
            out.push_back(std::move(v));
        }
    }
    return out;
}

void check_derivation_images(const DgAlgebra& b, const DerTarget& x,
                             const std::vector<ModuleElement>& images) {
    for (const ModuleElement& v : delta_relation_values(b, x, images))
        if (!v.is_zero())
            throw std::invalid_argument(
                "images violate a delta relation and define no derivation");
}

// kernel chart of Der_A(B, X)_n inside the product of image pieces
const KernelBasis& twisted_chart(const DgAlgebra& b, const DerTarget& x, int n) {
    std::lock_guard<std::mutex> lk(x.twist_cache->mu);
    auto it = x.twist_cache->charts.find(n);
    if (it != x.twist_cache->charts.end()) return it->second;

    const Field& fl = b.field();
    std::vector<int> exts, offs;
    int total = 0;
    for (int i = 0; i < b.size(); ++i) {
        if (b.gen(i).base) continue;
        exts.push_back(i);
        offs.push_back(total);
        total += x.pieces->dim(n + b.gen(i).degree);
    }
    // one block row per constrained pair, one block column per generator
    std::vector<Vec> rows;
    for (size_t a = 0; a < exts.size(); ++a) {
        int i = exts[a];
        for (size_t c = a; c < exts.size(); ++c) {
            int j = exts[c];
            if (i == j && b.gen(i).degree % 2 == 0) continue;
            int vdeg = n + b.gen(i).degree + b.gen(j).degree;
            int vdim = x.pieces->dim(vdeg);
            if (vdim == 0) continue;
            std::vector<Vec> block(vdim, Vec(total, Scalar::zero(fl)));
            bool both_odd = b.gen(i).degree % 2 != 0 && b.gen(j).degree % 2 != 0;
            for (int k = 0; k < x.pieces->dim(n + b.gen(i).degree); ++k) {
                ModuleElement v = x.pieces->basis_elem(n + b.gen(i).degree, k) *
                                  x.env_act.apply(x.twist_env->delta_gen(j));
                Vec cv = x.pieces->coords(v, vdeg);
                for (int r = 0; r < vdim; ++r) block[r][offs[a] + k] = cv[r];
            }
            if (i != j) {
                for (int k = 0; k < x.pieces->dim(n + b.gen(j).degree); ++k) {
                    ModuleElement w = x.pieces->basis_elem(n + b.gen(j).degree, k) *
                                      x.env_act.apply(x.twist_env->delta_gen(i));
                    Vec cw = x.pieces->coords(w, vdeg);
                    for (int r = 0; r < vdim; ++r) {
                        Scalar s = cw[r];
                        if (!both_odd) s = -s;
                        block[r][offs[c] + k] += s;
                    }
                }
            }
            for (auto& r : block) rows.push_back(std::move(r));
        }
    }
    Matrix cm = Matrix::zero(static_cast<int>(rows.size()), total, fl);
    for (int r = 0; r < cm.rows; ++r) cm.a[r] = rows[r];
    auto [slot, inserted] = x.twist_cache->charts.emplace(n, kernel_basis_with_columns(cm));
    (void)inserted;
    return slot->second;
}

} // namespace

ModuleElement DerTarget::act_right(const ModuleElement& x, const AlgebraElement& b) const {
    return x * right_embed.apply(b);
}

ModuleElement DerTarget::act_left_b(const AlgebraElement& b, const ModuleElement& x) const {
    ModuleElement out = pres().zero();
    if (x.is_zero()) return out;
    for (const auto& [m, c] : b.terms())
        out += act_left(left_embed.apply(left_embed.src->element(m, c)), x);
    return out;
}

DerTarget target_b(const DgAlgebra& b) {
    DerTarget t;
    t.tag = "B";
    auto m = algebra_as_module(b, "B");
    t.keepalive = m;
    t.pieces = std::make_shared<FullPieces>(m.get());
    t.right_embed = identity_hom(b);
    t.left_embed = identity_hom(b);
    return t;
}

DerTarget target_b(const EnvelopingAlgebra& env) {
    DerTarget t = target_b(env.base());
    t.env_act = env.mult();
    return t;
}

DerTarget target_be(const EnvelopingAlgebra& env) {
    DerTarget t;
    t.tag = "B^e";
    t.keepalive = env.as_module_ptr();
    t.pieces = std::make_shared<FullPieces>(t.keepalive.get());
    t.right_embed = env.right();
    t.left_embed = env.left();
    t.env_act = identity_hom(env.algebra());
    t.twist_env = &env;
    t.twist_cache = std::make_shared<DerConstraintCache>();
    return t;
}

DerTarget target_j(const EnvelopingAlgebra& env) {
    DerTarget t;
    t.tag = "J";
    t.keepalive = env.as_module_ptr();
    t.pieces = std::make_shared<JPieces>(&env);
    t.right_embed = env.right();
    t.left_embed = env.left();
    t.env_act = identity_hom(env.algebra());
    t.twist_env = &env;
    t.twist_cache = std::make_shared<DerConstraintCache>();
    return t;
}

DerTarget target_omega(const EnvelopingAlgebra& env, const DifferentialModule& om) {
    DerTarget t;
    t.tag = "Omega";
    t.keepalive = om.module_ptr();
    t.pieces = std::make_shared<FullPieces>(t.keepalive.get());
    t.right_embed = identity_hom(env.base());
    t.left_embed = identity_hom(env.base());
    t.env_act = env.mult();
    return t;
}

Derivation::Derivation(const DgAlgebra* source, const DerTarget* target, int degree,
                       std::vector<ModuleElement> images)
    : b_(source), x_(target), degree_(degree), images_(std::move(images)) {
    if (static_cast<int>(images_.size()) != b_->size())
        throw std::invalid_argument("derivation needs one image slot per generator");
    for (int i = 0; i < b_->size(); ++i) {
        if (images_[i].is_zero()) {
            images_[i] = x_->pres().zero();
            continue;
        }
        if (b_->gen(i).base)
            throw std::invalid_argument("A-derivation with nonzero image on base generator " +
                                        b_->gen(i).name);
        if (!images_[i].is_homogeneous() ||
            *images_[i].degree() != degree_ + b_->gen(i).degree)
            throw std::invalid_argument("derivation image of wrong degree at " + b_->gen(i).name);
    }
    check_derivation_images(*b_, *x_, images_);
}

ModuleElement Derivation::evaluate(const AlgebraElement& v) const {
    ModuleElement out = x_->pres().zero();
    const Scalar one = Scalar::one(b_->field());
    for (const auto& [mono, c] : v.terms()) {
        std::vector<int> word;
        for (const auto& [gi, e] : mono.factors)
            for (int k = 0; k < e; ++k) word.push_back(gi);
        int prefix_deg = 0;
        for (size_t t = 0; t < word.size(); ++t) {
            int g = word[t];
            if (!b_->gen(g).base && !images_[g].is_zero()) {
                std::vector<std::pair<int, int>> pf, sf;
                for (size_t i = 0; i < t; ++i) {
                    if (!pf.empty() && pf.back().first == word[i])
                        ++pf.back().second;
                    else
                        pf.emplace_back(word[i], 1);
                }
                for (size_t i = t + 1; i < word.size(); ++i) {
                    if (!sf.empty() && sf.back().first == word[i])
                        ++sf.back().second;
                    else
                        sf.emplace_back(word[i], 1);
                }
                ModuleElement val = images_[g];
                if (!sf.empty())
                    val = x_->act_right(val, b_->element(b_->make_monomial(sf), one));
                if (!pf.empty())
                    val = x_->act_left_b(b_->element(b_->make_monomial(pf), one), val);
                val = val * c;
                if (degree_ % 2 != 0 && prefix_deg % 2 != 0) val = -val;
                out += val;
            }
            prefix_deg += b_->gen(g).degree;
        }
    }
    return out;
}

static void same_shape(const Derivation& a, const Derivation& b) {
    if (&a.source() != &b.source() || a.target_ptr() != b.target_ptr() ||
        a.degree() != b.degree())
        throw std::logic_error("derivation shape mismatch");
}

Derivation Derivation::operator+(const Derivation& o) const {
    same_shape(*this, o);
    std::vector<ModuleElement> im = images_;
    for (size_t i = 0; i < im.size(); ++i) im[i] += o.images_[i];
    return Derivation(b_, x_, degree_, std::move(im));
}

Derivation Derivation::operator-(const Derivation& o) const { return *this + (-o); }

Derivation Derivation::operator-() const {
    std::vector<ModuleElement> im = images_;
    for (auto& v : im) v = -v;
    return Derivation(b_, x_, degree_, std::move(im));
}

Derivation Derivation::operator*(const Scalar& c) const {
    std::vector<ModuleElement> im = images_;
    for (auto& v : im) v = v * c;
    return Derivation(b_, x_, degree_, std::move(im));
}

bool Derivation::operator==(const Derivation& o) const {
    if (b_ != o.b_ || x_ != o.x_ || degree_ != o.degree_) return false;
    for (size_t i = 0; i < images_.size(); ++i)
        if (!(images_[i] == o.images_[i])) return false;
    return true;
}

bool Derivation::is_zero() const {
    for (const auto& v : images_)
        if (!v.is_zero()) return false;
    return true;
}

Derivation zero_derivation(const DgAlgebra& b, const DerTarget& x, int degree) {
    return Derivation(&b, &x, degree, std::vector<ModuleElement>(b.size(), x.pres().zero()));
}

Derivation dual_derivation(const DgAlgebra& b, const DerTarget& tb, int ext) {
    if (ext < 0 || ext >= b.size() || b.gen(ext).base)
        throw std::invalid_argument("dual_derivation needs an extension generator");
    std::vector<ModuleElement> im(b.size(), tb.pres().zero());
    im[ext] = tb.pres().element(0, b.one());
    return Derivation(&b, &tb, -b.gen(ext).degree, std::move(im));
}

std::vector<Derivation> dual_basis(const DgAlgebra& b, const DerTarget& tb) {
    std::vector<Derivation> out;
    for (int i = 0; i < b.size(); ++i)
        if (!b.gen(i).base) out.push_back(dual_derivation(b, tb, i));
    return out;
}

Derivation delta_derivation(const EnvelopingAlgebra& env, const DerTarget& tj) {
    const DgAlgebra& b = env.base();
    std::vector<ModuleElement> im(b.size(), tj.pres().zero());
    for (int i = 0; i < b.size(); ++i)
        if (!b.gen(i).base) im[i] = tj.pres().element(0, env.delta_gen(i));
    return Derivation(&b, &tj, 0, std::move(im));
}

Derivation dbar_derivation(const DifferentialModule& om, const DerTarget& tomega) {
    const DgAlgebra& b = om.env().base();
    std::vector<ModuleElement> im(b.size(), tomega.pres().zero());
    for (int i = 0; i < b.size(); ++i)
        if (!b.gen(i).base) im[i] = tomega.pres().basis_elem(om.u_index(i));
    return Derivation(&b, &tomega, 0, std::move(im));
}

Derivation der_differential(const Derivation& d) {
    const DgAlgebra& b = d.source();
    const DerTarget& x = d.target();
    std::vector<ModuleElement> im(b.size(), x.pres().zero());
    for (int i = 0; i < b.size(); ++i) {
        if (b.gen(i).base) continue;
        ModuleElement v = x.pres().differential(d.image(i));
        ModuleElement w = d.evaluate(b.gen(i).d);
        im[i] = (d.degree() % 2 != 0) ? v + w : v - w;
    }
    return Derivation(&b, &x, d.degree() - 1, std::move(im));
}

Derivation act_left_der(const AlgebraElement& b, const Derivation& d) {
    if (b.is_zero()) return zero_derivation(d.source(), d.target(), d.degree());
    if (!b.is_homogeneous()) throw std::invalid_argument("act_left_der needs homogeneous scalar");
    const DgAlgebra& alg = d.source();
    std::vector<ModuleElement> im(alg.size(), d.target().pres().zero());
    for (int i = 0; i < alg.size(); ++i)
        if (!alg.gen(i).base) im[i] = d.target().act_left_b(b, d.image(i));
    return Derivation(&alg, &d.target(), d.degree() + *b.degree(), std::move(im));
}

Derivation bracket(const Derivation& a, const Derivation& b) {
    if (a.target_ptr() != b.target_ptr() || a.target().tag != "B")
        throw std::invalid_argument("bracket is defined for derivations into B");
    const DgAlgebra& alg = a.source();
    bool flip = (a.degree() % 2 != 0) && (b.degree() % 2 != 0);
    std::vector<ModuleElement> im(alg.size(), a.target().pres().zero());
    for (int i = 0; i < alg.size(); ++i) {
        if (alg.gen(i).base) continue;
        ModuleElement v = a.evaluate(b.image(i).component(0));
        ModuleElement w = b.evaluate(a.image(i).component(0));
        im[i] = flip ? v + w : v - w;
    }
    return Derivation(&alg, &a.target(), a.degree() + b.degree(), std::move(im));
}

EulerResult euler_derivation(const DgAlgebra& b, const DerTarget& tb) {
    std::vector<ModuleElement> im(b.size(), tb.pres().zero());
    for (int i = 0; i < b.size(); ++i)
        if (!b.gen(i).base)
            im[i] = tb.pres().element(
                0, b.generator(i) * Scalar::of(b.gen(i).degree, b.field()));
    return EulerResult{Derivation(&b, &tb, 0, std::move(im)), b.base_size() == 0};
}

namespace {

int product_dim(const DgAlgebra& b, const DerTarget& x, int n) {
    int total = 0;
    for (int i = 0; i < b.size(); ++i)
        if (!b.gen(i).base) total += x.pieces->dim(n + b.gen(i).degree);
    return total;
}

Vec product_coords(const Derivation& d) {
    const DgAlgebra& b = d.source();
    Vec out;
    for (int i = 0; i < b.size(); ++i) {
        if (b.gen(i).base) continue;
        Vec c = d.target().pieces->coords(d.image(i), d.degree() + b.gen(i).degree);
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

Derivation der_from_product(const DgAlgebra& b, const DerTarget& x, int n, const Vec& v) {
    std::vector<ModuleElement> im(b.size(), x.pres().zero());
    size_t off = 0;
    for (int i = 0; i < b.size(); ++i) {
        if (b.gen(i).base) continue;
        int d = n + b.gen(i).degree;
        int k = x.pieces->dim(d);
        ModuleElement acc = x.pres().zero();
        for (int j = 0; j < k; ++j)
            if (!v.at(off + j).is_zero()) acc += x.pieces->basis_elem(d, j) * v[off + j];
        im[i] = acc;
        off += k;
    }
    if (off != v.size()) throw std::invalid_argument("der_from_coords: wrong length");
    return Derivation(&b, &x, n, std::move(im));
}

} // namespace

int der_dim(const DgAlgebra& b, const DerTarget& x, int n) {
    if (x.twist_env == nullptr) return product_dim(b, x, n);
    return static_cast<int>(twisted_chart(b, x, n).vectors.size());
}

Vec der_coords(const Derivation& d) {
    const DgAlgebra& b = d.source();
    Vec full = product_coords(d);
    if (d.target().twist_env == nullptr) return full;
    // chart vectors form an RREF kernel basis: the combination is read off
    // the free columns
    const KernelBasis& kb = twisted_chart(b, d.target(), d.degree());
    Vec out(kb.vectors.size(), Scalar::zero(b.field()));
    for (size_t k = 0; k < kb.vectors.size(); ++k) out[k] = full[kb.free_cols[k]];
    return out;
}

Derivation der_from_coords(const DgAlgebra& b, const DerTarget& x, int n, const Vec& v) {
    if (x.twist_env == nullptr) return der_from_product(b, x, n, v);
    const KernelBasis& kb = twisted_chart(b, x, n);
    if (v.size() != kb.vectors.size())
        throw std::invalid_argument("der_from_coords: wrong length");
    Vec full(product_dim(b, x, n), Scalar::zero(b.field()));
    for (size_t k = 0; k < kb.vectors.size(); ++k) {
        if (v[k].is_zero()) continue;
        for (size_t r = 0; r < full.size(); ++r) full[r] += kb.vectors[k][r] * v[k];
    }
    return der_from_product(b, x, n, full);
}

ComplexSlice derivation_slice(const DgAlgebra& b, const DerTarget& x, int lo, int hi) {
    return build_slice(
        lo, hi, b.field(), [&](int n) { return der_dim(b, x, n); },
        [&](int n, int k) {
            Vec unit(der_dim(b, x, n), Scalar::zero(b.field()));
            unit[k] = Scalar::one(b.field());
            return der_coords(der_differential(der_from_coords(b, x, n, unit)));
        },
        [&](int n, int k) {
            int off = 0;
            for (int i = 0; i < b.size(); ++i) {
                if (b.gen(i).base) continue;
                int d = x.pieces->dim(n + b.gen(i).degree);
                if (k < off + d)
                    return b.gen(i).name + "#" + std::to_string(k - off);
                off += d;
            }
            return std::string("?");
        });
}

JLinearMap::JLinearMap(const EnvelopingAlgebra* env, const DerTarget* x, int degree,
                       std::vector<ModuleElement> images)
    : env_(env), x_(x), degree_(degree), images_(std::move(images)) {
    const DgAlgebra& b = env->base();
    if (x_->env_act.src == nullptr)
        throw std::invalid_argument("JLinearMap target lacks a B^e action");
    if (static_cast<int>(images_.size()) != b.size())
        throw std::invalid_argument("JLinearMap needs one image slot per generator");
    for (int i = 0; i < b.size(); ++i) {
        if (images_[i].is_zero()) {
            images_[i] = x_->pres().zero();
            continue;
        }
        if (b.gen(i).base)
            throw std::invalid_argument("JLinearMap image on base generator");
        if (!images_[i].is_homogeneous() || *images_[i].degree() != degree_ + b.gen(i).degree)
            throw std::invalid_argument("JLinearMap image of wrong degree at " + b.gen(i).name);
    }
    check_derivation_images(b, *x_, images_);
}

ModuleElement JLinearMap::evaluate(const AlgebraElement& j) const {
    ModuleElement out = x_->pres().zero();
    if (j.is_zero()) return out;
    EnvelopingAlgebra::JExpression expr = env_->express_in_j(j);
    for (const auto& [gen, y] : expr.terms) {
        if (images_[gen].is_zero()) continue;
        out += images_[gen] * x_->env_act.apply(y);
    }
    return out;
}

bool JLinearMap::operator==(const JLinearMap& o) const {
    if (env_ != o.env_ || x_ != o.x_ || degree_ != o.degree_) return false;
    for (size_t i = 0; i < images_.size(); ++i)
        if (!(images_[i] == o.images_[i])) return false;
    return true;
}

JLinearMap varpi_inverse(const Derivation& d, const EnvelopingAlgebra& env) {
    if (&d.source() != &env.base())
        throw std::invalid_argument("varpi_inverse: derivation not over this extension");
    return JLinearMap(&env, d.target_ptr(), d.degree(), d.images());
}

Derivation varpi(const JLinearMap& f, const DgAlgebra& b) {
    if (&b != &f.env().base())
        throw std::invalid_argument("varpi: wrong base algebra");
    std::vector<ModuleElement> im(b.size(), f.target().pres().zero());
    for (int i = 0; i < b.size(); ++i)
        if (!b.gen(i).base) im[i] = f.evaluate(f.env().delta_gen(i));
    return Derivation(&b, &f.target(), f.degree(), std::move(im));
}

JLinearMap jmap_differential(const JLinearMap& f) {
    const DgAlgebra& b = f.env().base();
    std::vector<ModuleElement> im(b.size(), f.target().pres().zero());
    for (int i = 0; i < b.size(); ++i) {
        if (b.gen(i).base) continue;
        ModuleElement v = f.target().pres().differential(f.image(i));
        ModuleElement w = f.evaluate(f.env().delta(b.gen(i).d));
        im[i] = (f.degree() % 2 != 0) ? v + w : v - w;
    }
    return JLinearMap(&f.env(), &f.target(), f.degree() - 1, std::move(im));
}

void verify_jlinear(const JLinearMap& f, int lo, int hi) {
    const EnvelopingAlgebra& env = f.env();
    const DgAlgebra& b = env.base();
    const DgAlgebra& be = env.algebra();
    const Field& fl = b.field();
    for (int d = lo; d <= hi; ++d) {
        if (env.j_dim(d) == 0) continue;
        std::vector<Vec> scols, vcols;
        int vdim = f.target().pieces->dim(d + f.degree());
        for (int i = 0; i < b.size(); ++i) {
            if (b.gen(i).base || b.gen(i).degree > d) continue;
            AlgebraElement dg = env.delta_gen(i);
            for (const Monomial& m : be.monomial_basis(d - b.gen(i).degree)) {
                AlgebraElement y = be.element(m, Scalar::one(fl));
                scols.emplace_back(be.coords(dg * y, d));
                ModuleElement val = f.image(i) * f.target().env_act.apply(y);
                vcols.emplace_back(f.target().pieces->coords(val, d + f.degree()));
            }
        }
        int ncols = static_cast<int>(scols.size());
        Matrix s = Matrix::zero(be.dim(d), ncols, fl);
        Matrix v = Matrix::zero(vdim, ncols, fl);
        for (int c = 0; c < ncols; ++c) {
            for (int r = 0; r < s.rows; ++r) s.a[r][c] = scols[c][r];
            for (int r = 0; r < v.rows; ++r) v.a[r][c] = vcols[c][r];
        }
        if (!factor_through(s, v)) {
            std::ostringstream os;
            os << "JLinearMap not well defined in degree " << d
               << " (contradicts the derivation isomorphism)";
            throw std::logic_error(os.str());
        }
    }
}

} // namespace dghom
