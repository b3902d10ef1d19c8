#include "dghom/connection.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace dghom {

namespace {

// invariant: v is an element of the rank-1 presentation of an algebra
AlgebraElement rank1_coeff(const ModuleElement& v) { return v.component(0); }

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

ModuleElement ConnSpace::pure(int l, const ModuleElement& v) const {
    if (kind == Kind::Omega) return tom->pure(l, v);
    if (kind == Kind::B) return n->element(l, rank1_coeff(v));
    return pres().element(l, rank1_coeff(v)); // J and B^e share the N (x) B^e presentation
}

ModuleElement ConnSpace::extract(int l, const ModuleElement& t) const {
    const SemifreeModule& xp = x->pres();
    if (kind == Kind::Omega) {
        ModuleElement out = xp.zero();
        for (const auto& [f, c] : t.components()) {
            auto [bl, k] = tom->unflat(f);
            if (bl == l) out += xp.element(k, c);
        }
        return out;
    }
    return xp.element(0, t.component(l));
}

ModuleElement ConnSpace::tensor(const ModuleElement& xn, const ModuleElement& v) const {
    ModuleElement out = pres().zero();
    if (v.is_zero()) return out;
    for (const auto& [l, b] : xn.components())
        for (const auto& [mono, c] : b.terms()) {
            AlgebraElement part = n->algebra().element(mono, c);
            out += pure(l, x->act_left_b(part, v));
        }
    return out;
}

ModuleElement ConnSpace::act_b(const ModuleElement& t, const AlgebraElement& b) const {
    return t * embed.apply(b);
}

ModuleElement ConnSpace::act_left_tensor(const AlgebraElement& b, const ModuleElement& t) const {
    return act_left(left_embed.apply(b), t);
}

ConnSpace conn_space_b(const SemifreeModule& n, const DerTarget& tb) {
    require(tb.tag == "B", "target is not B");
    require(&tb.pres().algebra() == &n.algebra(), "module and target over different algebras");
    ConnSpace sp;
    sp.kind = ConnSpace::Kind::B;
    sp.n = &n;
    sp.x = &tb;
    sp.pieces = std::make_shared<FullPieces>(&n);
    sp.embed = identity_hom(n.algebra());
    sp.left_embed = sp.embed;
    return sp;
}

ConnSpace conn_space_j(const SemifreeModule& n, const DerTarget& tj,
                       const EnvelopingAlgebra& env) {
    require(tj.tag == "J", "target is not J");
    require(&env.base() == &n.algebra(), "module and envelope over different algebras");
    require(tj.twist_env == &env, "target J belongs to a different envelope");
    ConnSpace sp;
    sp.kind = ConnSpace::Kind::J;
    sp.n = &n;
    sp.x = &tj;
    auto nbe = tensor_with_enveloping(n, env);
    sp.keepalive = nbe;
    sp.pieces = std::make_shared<TensorJPieces>(nbe, &env);
    sp.embed = env.right();
    sp.left_embed = env.left();
    return sp;
}

ConnSpace conn_space_be(const SemifreeModule& n, const DerTarget& tbe,
                        const EnvelopingAlgebra& env) {
    require(tbe.tag == "B^e", "target is not B^e");
    require(&env.base() == &n.algebra(), "module and envelope over different algebras");
    require(tbe.twist_env == &env, "target B^e belongs to a different envelope");
    ConnSpace sp;
    sp.kind = ConnSpace::Kind::Be;
    sp.n = &n;
    sp.x = &tbe;
    auto nbe = tensor_with_enveloping(n, env);
    sp.keepalive = nbe;
    sp.pieces = std::make_shared<FullPieces>(nbe.get());
    sp.embed = env.right();
    sp.left_embed = env.left();
    return sp;
}

ConnSpace conn_space_omega(const SemifreeModule& n, const DerTarget& tomega,
                           const DifferentialModule& om) {
    require(tomega.tag == "Omega", "target is not Omega");
    require(&tomega.pres() == &om.module(), "target Omega belongs to a different construction");
    require(&om.env().base() == &n.algebra(), "module and Omega over different algebras");
    ConnSpace sp;
    sp.kind = ConnSpace::Kind::Omega;
    sp.n = &n;
    sp.x = &tomega;
    sp.tom = std::make_shared<TensorOmega>(tensor_with_omega(n, om));
    sp.keepalive = sp.tom->mod;
    sp.pieces = std::make_shared<FullPieces>(sp.tom->mod.get());
    sp.embed = identity_hom(n.algebra());
    sp.left_embed = sp.embed;
    return sp;
}

Connection::Connection(const ConnSpace* space, Derivation d, GradedHom f)
    : sp_(space), d_(std::move(d)), f_(std::move(f)) {
    require(sp_ != nullptr, "connection needs a space");
    require(d_.target_ptr() == sp_->x, "derivation targets a different space");
    require(f_.source == sp_->n, "correction is not defined on the space's module");
    require(f_.target.pieces == sp_->pieces, "correction lands outside the space");
    require(f_.degree == d_.degree(), "correction degree differs from the derivation degree");
}

ModuleElement Connection::apply(const ModuleElement& xn) const {
    ModuleElement out = f_.apply(xn);
    const bool dodd = d_.degree() % 2 != 0;
    for (const auto& [l, b] : xn.components()) {
        ModuleElement v = d_.evaluate(b);
        if (v.is_zero()) continue;
        ModuleElement t = sp_->pure(l, v);
        if (dodd && sp_->n->basis(l).degree % 2 != 0) t = -t;
        out += t;
    }
    return out;
}

Connection Connection::operator+(const Connection& o) const {
    require(sp_ == o.sp_, "connections live on different spaces");
    return Connection(sp_, d_ + o.d_, f_ + o.f_);
}

Connection Connection::operator-(const Connection& o) const { return *this + (-o); }

Connection Connection::operator-() const { return Connection(sp_, -d_, -f_); }

Connection Connection::operator*(const Scalar& c) const {
    return Connection(sp_, d_ * c, f_ * c);
}

bool Connection::operator==(const Connection& o) const {
    if (sp_ != o.sp_ || degree() != o.degree()) return false;
    return d_ == o.d_ && f_ == o.f_;
}

Connection trivial_connection(const ConnSpace& sp, const Derivation& d) {
    return Connection(&sp, d, GradedHom::zero(*sp.n, sp.hom_target(), d.degree()));
}

Connection linear_connection(const ConnSpace& sp, const GradedHom& f) {
    return Connection(&sp, zero_derivation(sp.n->algebra(), *sp.x, f.degree), f);
}

Connection zero_connection(const ConnSpace& sp, int degree) {
    return trivial_connection(sp, zero_derivation(sp.n->algebra(), *sp.x, degree));
}

Connection conn_differential(const Connection& psi) {
    const ConnSpace& sp = psi.space();
    const int deg = psi.degree();
    GradedHom f = GradedHom::zero(*sp.n, sp.hom_target(), deg - 1);
    for (int l = 0; l < sp.n->rank(); ++l) {
        ModuleElement v = sp.pres().differential(psi.correction().images[l]);
        ModuleElement w = psi.apply(sp.n->differential(sp.n->basis_elem(l)));
        f.images[l] = (deg % 2 != 0) ? v + w : v - w;
    }
    return Connection(&sp, der_differential(psi.derivation()), std::move(f));
}

Connection act_left_conn(const AlgebraElement& b, const Connection& psi) {
    const ConnSpace& sp = psi.space();
    Derivation d = act_left_der(b, psi.derivation());
    GradedHom f = GradedHom::zero(*sp.n, sp.hom_target(), d.degree());
    for (int l = 0; l < sp.n->rank(); ++l)
        f.images[l] = sp.act_left_tensor(b, psi.correction().images[l]);
    return Connection(&sp, std::move(d), std::move(f));
}

Connection bracket_connections(const Connection& a, const Connection& b) {
    require(a.space_ptr() == b.space_ptr(), "connections live on different spaces");
    const ConnSpace& sp = a.space();
    require(sp.kind == ConnSpace::Kind::B, "connection bracket needs values back in the module");
    const bool flip = (a.degree() % 2 != 0) && (b.degree() % 2 != 0);
    GradedHom f = GradedHom::zero(*sp.n, sp.hom_target(), a.degree() + b.degree());
    for (int l = 0; l < sp.n->rank(); ++l) {
        ModuleElement e = sp.n->basis_elem(l);
        ModuleElement v = a.apply(b.apply(e));
        ModuleElement w = b.apply(a.apply(e));
        f.images[l] = flip ? v + w : v - w;
    }
    return Connection(&sp, bracket(a.derivation(), b.derivation()), std::move(f));
}

LConnection LConnection::from_rule(const ConnSpace& sp,
                                   std::function<Connection(const Derivation&)> rule) {
    LConnection g;
    g.sp_ = &sp;
    g.rule_ = std::move(rule);
    return g;
}

LConnection LConnection::from_dual_basis(const ConnSpace& sp, std::vector<Derivation> duals,
                                         std::vector<Connection> values) {
    require(sp.kind == ConnSpace::Kind::B, "dual-basis tables need X = B");
    require(duals.size() == values.size(), "one connection per dual derivation");
    for (size_t l = 0; l < duals.size(); ++l) {
        require(duals[l].target_ptr() == sp.x, "dual derivation targets a different space");
        require(values[l].space_ptr() == &sp, "value connection lives on a different space");
        require(values[l].degree() == duals[l].degree(),
                "value degree differs from its dual derivation");
    }
    LConnection g;
    g.sp_ = &sp;
    g.duals_ = std::move(duals);
    g.values_ = std::move(values);
    return g;
}

Connection LConnection::evaluate(const Derivation& d) const {
    if (rule_) return rule_(d);
    require(d.target_ptr() == sp_->x, "derivation targets a different space");
    const DgAlgebra& b = sp_->n->algebra();
    Connection out = zero_connection(*sp_, d.degree());
    Derivation rebuilt = zero_derivation(b, *sp_->x, d.degree());
    for (size_t l = 0; l < duals_.size(); ++l) {
        // duals_ follows extension-generator order
        int gen = b.base_size() + static_cast<int>(l);
        AlgebraElement c = d.image(gen).component(0);
        if (c.is_zero()) continue;
        for (const auto& [mono, s] : c.terms()) {
            AlgebraElement part = b.element(mono, s);
            out = out + act_left_conn(part, values_[l]);
            rebuilt = rebuilt + act_left_der(part, duals_[l]);
        }
    }
    if (!(rebuilt == d))
        throw std::logic_error("derivation is not spanned by the stored dual basis");
    return out;
}

GradedHom curvature(const LConnection& grad, const Derivation& d1, const Derivation& d2) {
    Connection r = bracket_connections(grad.evaluate(d1), grad.evaluate(d2)) -
                   grad.evaluate(bracket(d1, d2));
    if (!r.derivation().is_zero())
        throw std::logic_error("curvature has a derivation part; not an L-connection");
    return r.correction();
}

LConnection section_for_free(const ConnSpace& sp) {
    for (int mu = 0; mu < sp.n->rank(); ++mu)
        for (int lambda = mu + 1; lambda < sp.n->rank(); ++lambda)
            require(sp.n->coefficient(mu, lambda).is_zero(), "module is not free");
    const ConnSpace* p = &sp;
    return LConnection::from_rule(sp, [p](const Derivation& d) {
        return trivial_connection(*p, d);
    });
}

CheckReport check_lconnection(const LConnection& grad, const std::vector<Derivation>& samples,
                              const std::vector<AlgebraElement>& multipliers) {
    CheckReport rep;
    auto fail = [&rep](const std::string& s) {
        rep.ok = false;
        rep.detail = s;
        return rep;
    };
    for (size_t i = 0; i < samples.size(); ++i) {
        Connection ci = grad.evaluate(samples[i]);
        if (!(ci.derivation() == samples[i]))
            return fail("nu(grad D) differs from D at sample " + std::to_string(i));
        for (size_t j = i; j < samples.size(); ++j) {
            if (samples[j].degree() != samples[i].degree()) continue;
            Connection sum = grad.evaluate(samples[i] + samples[j]);
            if (!(sum == ci + grad.evaluate(samples[j])))
                return fail("additivity fails at samples " + std::to_string(i) + "," +
                            std::to_string(j));
        }
        for (const AlgebraElement& b : multipliers) {
            if (b.is_zero() || !b.is_homogeneous()) continue;
            if (!(grad.evaluate(act_left_der(b, samples[i])) == act_left_conn(b, ci)))
                return fail("left linearity fails at sample " + std::to_string(i));
        }
    }
    return rep;
}

CheckReport check_dg_section(const LConnection& grad, const std::vector<Derivation>& samples) {
    CheckReport rep;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (!(conn_differential(grad.evaluate(samples[i])) ==
              grad.evaluate(der_differential(samples[i])))) {
            rep.ok = false;
            rep.detail = "grad fails to intertwine the differentials at sample " +
                         std::to_string(i);
            return rep;
        }
    }
    return rep;
}

int hom_dim(const SemifreeModule& n, const PieceProvider& pieces, int degree) {
    int total = 0;
    for (int l = 0; l < n.rank(); ++l) total += pieces.dim(n.basis(l).degree + degree);
    return total;
}

GradedHom hom_from_coords(const SemifreeModule& n, const HomTarget& tgt, int degree,
                          const Vec& v) {
    GradedHom f = GradedHom::zero(n, tgt, degree);
    size_t at = 0;
    for (int l = 0; l < n.rank(); ++l) {
        int d = n.basis(l).degree + degree;
        for (int k = 0; k < tgt.pieces->dim(d); ++k, ++at)
            if (!v.at(at).is_zero()) f.images[l] += tgt.pieces->basis_elem(d, k) * v[at];
    }
    if (at != v.size()) throw std::invalid_argument("coordinate vector has the wrong length");
    return f;
}

Vec hom_coords(const GradedHom& f) {
    Vec out;
    for (int l = 0; l < f.source->rank(); ++l) {
        Vec block = f.target.pieces->coords(f.images[l], f.source->basis(l).degree + f.degree);
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

int conn_dim(const ConnSpace& sp, int n) {
    return der_dim(sp.n->algebra(), *sp.x, n) + hom_dim(*sp.n, *sp.pieces, n);
}

Connection conn_from_coords(const ConnSpace& sp, int n, const Vec& v) {
    const int dd = der_dim(sp.n->algebra(), *sp.x, n);
    Vec dv(v.begin(), v.begin() + dd);
    Vec hv(v.begin() + dd, v.end());
    return Connection(&sp, der_from_coords(sp.n->algebra(), *sp.x, n, dv),
                      hom_from_coords(*sp.n, sp.hom_target(), n, hv));
}

Vec conn_coords(const Connection& psi) {
    Vec out = der_coords(psi.derivation());
    Vec h = hom_coords(psi.correction());
    out.insert(out.end(), h.begin(), h.end());
    return out;
}

namespace {

// nu by evaluation: recover D(X_i) from psi(e_0 X_i) - psi(e_0) X_i.
// Returns the probed derivation; throws only if the probed images fail the
// derivation constraints, which no genuine connection can.
Derivation probe_nu(const Connection& psi) {
    const ConnSpace& sp = psi.space();
    const DgAlgebra& b = sp.n->algebra();
    std::vector<ModuleElement> images(b.size(), sp.x->pres().zero());
    ModuleElement e0 = sp.n->basis_elem(0);
    ModuleElement psi_e0 = psi.apply(e0);
    const bool flip = (psi.degree() % 2 != 0) && (sp.n->basis(0).degree % 2 != 0);
    for (int i = b.base_size(); i < b.size(); ++i) {
        AlgebraElement xi = b.generator(i);
        ModuleElement t = psi.apply(e0 * xi) - sp.act_b(psi_e0, xi);
        ModuleElement v = sp.extract(0, t);
        images[i] = flip ? -v : v;
    }
    return Derivation(&b, sp.x, psi.degree(), std::move(images));
}

} // namespace

FundamentalSequenceReport fundamental_sequence(const ConnSpace& sp, int lo, int hi) {
    FundamentalSequenceReport rep;
    const DgAlgebra& b = sp.n->algebra();
    const Field& field = b.field();
    auto fail = [&rep](int n, const std::string& what) {
        rep.ok = false;
        if (rep.detail.empty())
            rep.detail = "degree " + std::to_string(n) + ": " + what;
    };
    for (int n = lo; n <= hi; ++n) {
        FundamentalDegree row;
        row.degree = n;
        row.dim_der = der_dim(b, *sp.x, n);
        row.dim_hom = hom_dim(*sp.n, *sp.pieces, n);
        row.dim_conn = row.dim_der + row.dim_hom;

        // probe nu on the chart basis of Conn_n
        Matrix m = Matrix::zero(row.dim_der, row.dim_conn, field);
        row.probe_matches_storage = true;
        bool iota_kernel = true;
        for (int k = 0; k < row.dim_conn; ++k) {
            Vec unit(row.dim_conn, Scalar::zero(field));
            unit[k] = Scalar::one(field);
            Connection psi = conn_from_coords(sp, n, unit);
            Vec col;
            if (sp.n->rank() == 0) {
                // no probes exist; nu is the stored derivation by definition
                col = der_coords(psi.derivation());
            } else {
                Derivation probed = probe_nu(psi);
                if (!(probed == psi.derivation())) row.probe_matches_storage = false;
                col = der_coords(probed);
            }
            for (int r = 0; r < row.dim_der; ++r) m.at(r, k) = col[r];
            if (k >= row.dim_der) {
                for (const Scalar& c : col)
                    if (!c.is_zero()) iota_kernel = false;
            }
        }
        int nullity = static_cast<int>(kernel_basis(m).size());
        int rank = row.dim_conn - nullity;
        row.nu_surjective = rank == row.dim_der;
        row.kernel_is_image =
            iota_kernel && row.probe_matches_storage && (nullity == row.dim_hom);

        if (!row.probe_matches_storage) fail(n, "evaluated nu disagrees with the stored derivation");
        if (!row.nu_surjective) fail(n, "nu fails to reach every derivation");
        if (!row.kernel_is_image) fail(n, "ker nu differs from the module maps");
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace dghom
