#include "dghom/algebra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dghom {

std::string ValidationReport::str() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (const auto& i : issues) os << i.check << "(" << i.subject << "): " << i.detail << "\n";
    return os.str();
}

int Monomial::exponent_of(int gen) const {
    for (const auto& [g, e] : factors)
        if (g == gen) return e;
    return 0;
}

bool MonomialBefore::operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree != b.degree) return a.degree > b.degree;
    size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        const auto& [ga, ea] = a.factors[i];
        const auto& [gb, eb] = b.factors[j];
        if (ga != gb) return ga < gb; // whoever has the earlier generator has the larger exponent there
        if (ea != eb) return ea > eb;
        ++i, ++j;
    }
    // one is a prefix of the other: the longer has positive exponent where the
    // shorter has zero, at a LATER index, so the shorter one ranks first only
    // if it still has factors... equal-degree prefix situations resolve here:
    return i < a.factors.size();
}

size_t MonomialHash::operator()(const Monomial& m) const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& [g, e] : m.factors) {
        h ^= static_cast<size_t>(g) + 0x9e3779b9 + (h << 6) + (h >> 2);
        h ^= static_cast<size_t>(e) + 0x9e3779b9 + (h << 6) + (h >> 2);
    }
    return h;
}

static void check_same_algebra(const DgAlgebra* a, const DgAlgebra* b) {
    if (a == nullptr || b == nullptr) throw std::logic_error("detached element in arithmetic");
    if (a != b) throw std::logic_error("elements of different algebras");
}

bool AlgebraElement::is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = terms_.begin()->first.degree;
    for (const auto& [m, c] : terms_)
        if (m.degree != d) return false;
    return true;
}

std::optional<int> AlgebraElement::degree() const {
    if (terms_.empty()) return std::nullopt;
    if (!is_homogeneous()) throw std::logic_error("degree of inhomogeneous element");
    return terms_.begin()->first.degree;
}

AlgebraElement AlgebraElement::operator-() const {
    AlgebraElement r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    check_same_algebra(alg_, o.alg_);
    AlgebraElement r = *this;
    for (const auto& [m, c] : o.terms_) {
        auto it = r.terms_.find(m);
        if (it == r.terms_.end()) {
            r.terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) r.terms_.erase(it);
        }
    }
    return r;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const { return *this + (-o); }

AlgebraElement AlgebraElement::operator*(const Scalar& c) const {
    AlgebraElement r = *this;
    if (c.is_zero()) {
        r.terms_.clear();
        return r;
    }
    for (auto& [m, v] : r.terms_) v *= c;
    return r;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    if (is_zero()) return *this;
    if (o.is_zero()) return o;
    check_same_algebra(alg_, o.alg_);
    AlgebraElement r;
    r.alg_ = alg_;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            Normalized n = alg_->multiply(ma, mb);
            if (n.sign == 0) continue;
            Scalar c = ca * cb;
            if (n.sign < 0) c = -c;
            auto it = r.terms_.find(n.monomial);
            if (it == r.terms_.end()) {
                if (!c.is_zero()) r.terms_.emplace(std::move(n.monomial), c);
            } else {
                it->second += c;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
    return r;
}

bool AlgebraElement::operator==(const AlgebraElement& o) const {
    if (is_zero() && o.is_zero()) return true;
    if (is_zero() != o.is_zero()) return false;
    check_same_algebra(alg_, o.alg_);
    return terms_ == o.terms_;
}

std::string AlgebraElement::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        mpq_class v = c.value();
        bool neg = v < 0 && c.field().is_rational();
        mpq_class mag = neg ? mpq_class(-v) : v;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        if (m.is_one()) {
            os << mag.get_str();
        } else {
            if (mag != 1) os << mag.get_str() << "*";
            bool f2 = true;
            for (const auto& [g, e] : m.factors) {
                if (!f2) os << "*";
                f2 = false;
                os << alg_->gen(g).name;
                if (e > 1) os << "^" << e;
            }
        }
    }
    return os.str();
}

DgAlgebra::DgAlgebra(Field f, std::string name) : field_(f), name_(std::move(name)) {
    if (f.p != 0 && !is_odd_prime(f.p)) throw std::invalid_argument("field must be Q or F_p, p an odd prime");
}

int DgAlgebra::add_generator(const std::string& name, int degree, bool base) {
    return add_generator(name, degree, base, zero());
}

int DgAlgebra::add_generator(const std::string& name, int degree, bool base,
                             const AlgebraElement& d) {
    if (index_.count(name)) throw std::invalid_argument("duplicate generator " + name);
    if (degree < 1) throw std::invalid_argument("generator degree must be >= 1 (connected algebra): " + name);
    if (base && extension_started_)
        throw std::invalid_argument("base generator after extension generator: " + name);
    if (!base && extension_started_ && gens_.back().degree > degree)
        throw std::invalid_argument("extension generators must have weakly increasing degree: " + name);
    if (!d.is_zero()) {
        if (d.algebra() != this) throw std::invalid_argument("d-image from a different algebra");
        for (const auto& [m, c] : d.terms())
            for (const auto& [g, e] : m.factors)
                if (g >= size())
                    throw std::invalid_argument("d-image of " + name + " references a later generator");
    }
    Generator g{name, degree, base, d};
    gens_.push_back(std::move(g));
    index_[name] = size() - 1;
    if (base) ++base_size_;
    else extension_started_ = true;
    {
        std::lock_guard<std::mutex> lk(cache_mu_);
        basis_cache_.clear();
        pos_cache_.clear();
    }
    return size() - 1;
}

int DgAlgebra::index_of(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

AlgebraElement DgAlgebra::zero() const {
    AlgebraElement e;
    e.alg_ = this;
    return e;
}

AlgebraElement DgAlgebra::one() const { return from_scalar(Scalar::one(field_)); }

AlgebraElement DgAlgebra::from_scalar(const Scalar& c) const {
    AlgebraElement e;
    e.alg_ = this;
    if (!c.is_zero()) e.terms_.emplace(Monomial{}, c);
    return e;
}

AlgebraElement DgAlgebra::generator(int i) const {
    Monomial m;
    m.factors = {{i, 1}};
    m.degree = gens_[i].degree;
    return element(m, Scalar::one(field_));
}

AlgebraElement DgAlgebra::element(const Monomial& m, const Scalar& c) const {
    AlgebraElement e;
    e.alg_ = this;
    if (!c.is_zero()) e.terms_.emplace(m, c);
    return e;
}

Monomial DgAlgebra::make_monomial(std::vector<std::pair<int, int>> factors) const {
    Monomial m;
    m.factors = std::move(factors);
    std::sort(m.factors.begin(), m.factors.end());
    for (const auto& [g, e] : m.factors) {
        if (g < 0 || g >= size()) throw std::invalid_argument("bad generator index");
        if (e < 1) throw std::invalid_argument("bad exponent");
        if (is_odd(g) && e > 1) throw std::invalid_argument("odd generator squared");
        m.degree += gens_[g].degree * e;
    }
    for (size_t i = 1; i < m.factors.size(); ++i)
        if (m.factors[i - 1].first == m.factors[i].first)
            throw std::invalid_argument("repeated factor run");
    return m;
}

Normalized DgAlgebra::normalize(const std::vector<int>& word) const {
    // count transpositions of odd generators while insertion-sorting
    std::vector<int> w = word;
    int sign = 1;
    for (size_t i = 1; i < w.size(); ++i) {
        for (size_t j = i; j > 0 && w[j - 1] > w[j]; --j) {
            if (is_odd(w[j - 1]) && is_odd(w[j])) sign = -sign;
            std::swap(w[j - 1], w[j]);
        }
    }
    Monomial m;
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0 || w[i] >= size()) throw std::invalid_argument("bad generator index");
        if (!m.factors.empty() && m.factors.back().first == w[i]) {
            if (is_odd(w[i])) return {0, Monomial{}};
            ++m.factors.back().second;
        } else {
            m.factors.push_back({w[i], 1});
        }
        m.degree += gens_[w[i]].degree;
    }
    return {sign, std::move(m)};
}

Normalized DgAlgebra::multiply(const Monomial& a, const Monomial& b) const {
    // sign: odd factors of b moving left past later odd factors of a
    std::vector<int> odd_a;
    for (const auto& [g, e] : a.factors)
        if (is_odd(g)) odd_a.push_back(g);
    long swaps = 0;
    for (const auto& [g, e] : b.factors) {
        if (!is_odd(g)) continue;
        auto it = std::upper_bound(odd_a.begin(), odd_a.end(), g);
        swaps += odd_a.end() - it;
        if (std::binary_search(odd_a.begin(), odd_a.end(), g)) return {0, Monomial{}};
    }
    Monomial m;
    m.degree = a.degree + b.degree;
    size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
            m.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
            m.factors.push_back(b.factors[j++]);
        } else {
            if (is_odd(a.factors[i].first)) return {0, Monomial{}};
            m.factors.push_back({a.factors[i].first, a.factors[i].second + b.factors[j].second});
            ++i, ++j;
        }
    }
    return {swaps % 2 == 0 ? 1 : -1, std::move(m)};
}

AlgebraElement DgAlgebra::differential(const AlgebraElement& x) const {
    check_same_algebra(this, x.algebra());
    AlgebraElement out = zero();
    for (const auto& [m, c] : x.terms()) {
        int prefix_deg = 0;
        for (size_t t = 0; t < m.factors.size(); ++t) {
            auto [g, e] = m.factors[t];
            const AlgebraElement& dg = gens_[g].d;
            if (!dg.is_zero()) {
                // Leibniz term: (-1)^{|prefix|} prefix * d(g) * g^{e-1} * suffix.
                // d(g) commutes past g^{e-1} freely: e > 1 only for even g.
                Scalar coeff = c * Scalar::of(e, field_);
                if (prefix_deg % 2 != 0) coeff = -coeff;
                Monomial pre, post;
                for (size_t s = 0; s < t; ++s) pre.factors.push_back(m.factors[s]);
                for (const auto& [pg, pe] : pre.factors) pre.degree += gens_[pg].degree * pe;
                if (e > 1) post.factors.push_back({g, e - 1});
                for (size_t s = t + 1; s < m.factors.size(); ++s) post.factors.push_back(m.factors[s]);
                for (const auto& [pg, pe] : post.factors) post.degree += gens_[pg].degree * pe;

                out += element(pre, coeff) * dg * element(post, Scalar::one(field_));
            }
            prefix_deg += gens_[g].degree * e;
        }
    }
    return out;
}

AlgebraElement DgAlgebra::partial_derivative(const AlgebraElement& x, int ext) const {
    check_same_algebra(this, x.algebra());
    if (ext < base_size_ || ext >= size()) throw std::invalid_argument("not an extension generator");
    const int ddeg = gens_[ext].degree; // |D| = -|X_ext|, parity of |X_ext|
    AlgebraElement out = zero();
    for (const auto& [m, c] : x.terms()) {
        int prefix_deg = 0;
        for (size_t t = 0; t < m.factors.size(); ++t) {
            auto [g, e] = m.factors[t];
            if (g == ext) {
                Monomial r;
                for (size_t s = 0; s < m.factors.size(); ++s) {
                    if (s == t) {
                        if (e > 1) r.factors.push_back({g, e - 1});
                    } else {
                        r.factors.push_back(m.factors[s]);
                    }
                }
                for (const auto& [rg, re] : r.factors) r.degree += gens_[rg].degree * re;
                Scalar coeff = c * Scalar::of(e, field_);
                if ((ddeg % 2) && (prefix_deg % 2)) coeff = -coeff;
                out += element(r, coeff);
            }
            prefix_deg += gens_[g].degree * e;
        }
    }
    return out;
}

void DgAlgebra::basis_rec(int remaining, int gi, std::vector<std::pair<int, int>>& acc,
                          std::vector<Monomial>& out) const {
    if (remaining == 0) {
        Monomial m;
        m.factors = acc;
        for (const auto& [g, e] : acc) m.degree += gens_[g].degree * e;
        out.push_back(std::move(m));
        return;
    }
    if (gi >= size()) return;
    int d = gens_[gi].degree;
    int maxe = is_odd(gi) ? 1 : remaining / d;
    for (int e = std::min(maxe, remaining / d); e >= 0; --e) {
        if (e > 0) acc.push_back({gi, e});
        basis_rec(remaining - e * d, gi + 1, acc, out);
        if (e > 0) acc.pop_back();
    }
}

const std::vector<Monomial>& DgAlgebra::monomial_basis(int degree) const {
    std::lock_guard<std::mutex> lk(cache_mu_);
    auto it = basis_cache_.find(degree);
    if (it != basis_cache_.end()) return it->second;
    std::vector<Monomial> out;
    if (degree == 0) {
        out.push_back(Monomial{});
    } else if (degree > 0) {
        std::vector<std::pair<int, int>> acc;
        basis_rec(degree, 0, acc, out);
    }
    auto& slot = basis_cache_[degree];
    slot = std::move(out);
    auto& pos = pos_cache_[degree];
    for (size_t k = 0; k < slot.size(); ++k) pos[slot[k]] = static_cast<int>(k);
    return slot;
}

int DgAlgebra::dim(int degree) const { return static_cast<int>(monomial_basis(degree).size()); }

Vec DgAlgebra::coords(const AlgebraElement& x, int degree) const {
    monomial_basis(degree); // fill caches
    std::lock_guard<std::mutex> lk(cache_mu_);
    const auto& pos = pos_cache_.at(degree);
    Vec v(pos.size(), Scalar::zero(field_));
    for (const auto& [m, c] : x.terms()) {
        auto it = pos.find(m);
        if (it == pos.end()) throw std::logic_error("element outside degree piece");
        v[it->second] = c;
    }
    return v;
}

AlgebraElement DgAlgebra::from_coords(const Vec& v, int degree) const {
    const auto& basis = monomial_basis(degree);
    if (v.size() != basis.size()) throw std::logic_error("coordinate size mismatch");
    AlgebraElement out = zero();
    for (size_t k = 0; k < basis.size(); ++k)
        if (!v[k].is_zero()) out += element(basis[k], v[k]);
    return out;
}

ValidationReport DgAlgebra::validate() const {
    ValidationReport rep;
    for (int i = 0; i < size(); ++i) {
        const Generator& g = gens_[i];
        if (g.d.is_zero()) continue;
        if (!g.d.is_homogeneous()) {
            rep.issues.push_back({"homogeneity", g.name, "d-image is not homogeneous"});
            continue;
        }
        int dd = *g.d.degree();
        if (dd != g.degree - 1) {
            rep.issues.push_back({"degree", g.name,
                                  "d-image has degree " + std::to_string(dd) + ", expected " +
                                      std::to_string(g.degree - 1)});
            continue;
        }
        AlgebraElement dd2 = differential(g.d);
        if (!dd2.is_zero())
            rep.issues.push_back({"d_squared", g.name, "d(d(" + g.name + ")) = " + dd2.str()});
    }
    return rep;
}

AlgebraElement AlgebraHom::apply(const AlgebraElement& x) const {
    if (x.algebra() != src) throw std::logic_error("hom applied to foreign element");
    AlgebraElement out = dst->zero();
    for (const auto& [m, c] : x.terms()) {
        AlgebraElement term = dst->from_scalar(Scalar::from_mpq(c.value(), dst->field()));
        for (const auto& [g, e] : m.factors)
            for (int k = 0; k < e; ++k) term *= images[g];
        out += term;
    }
    return out;
}

bool AlgebraHom::is_chain_map() const {
    for (int i = 0; i < src->size(); ++i)
        if (apply(src->gen(i).d) != dst->differential(images[i])) return false;
    return true;
}

AlgebraHom identity_hom(const DgAlgebra& a) {
    AlgebraHom h;
    h.src = &a;
    h.dst = &a;
    for (int i = 0; i < a.size(); ++i) h.images.push_back(a.generator(i));
    return h;
}

} // namespace dghom
