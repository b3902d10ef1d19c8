#include "dghom/randomgen.hpp"

#include <algorithm>
#include <stdexcept>

#include "dghom/linalg.hpp"
#include "dghom/rng.hpp"

namespace dghom {

namespace {

Scalar pool_coeff(const Field& f, int pool, Rng& rng) {
    return Scalar::of(rng.range(-pool, pool), f);
}

// random element of the kernel of d on the degree-n monomial slice
AlgebraElement random_algebra_cycle(const DgAlgebra& b, int n, int pool, Rng& rng) {
    if (n < 0) return b.zero();
    if (n == 0) return b.from_scalar(pool_coeff(b.field(), pool, rng));
    const auto& mons = b.monomial_basis(n);
    if (mons.empty()) return b.zero();
    Matrix m = Matrix::zero(b.dim(n - 1), static_cast<int>(mons.size()), b.field());
    for (size_t j = 0; j < mons.size(); ++j) {
        AlgebraElement img = b.differential(b.element(mons[j], Scalar::one(b.field())));
        Vec col = b.coords(img, n - 1);
        for (int i = 0; i < m.rows; ++i) m.a[i][j] = col[i];
    }
    std::vector<Vec> kern = kernel_basis(m);
    AlgebraElement out = b.zero();
    for (const Vec& k : kern) {
        if (!rng.chance(1, 2)) continue;
        Scalar c = pool_coeff(b.field(), pool, rng);
        if (c.is_zero()) continue;
        Vec scaled(k.size(), Scalar::zero(b.field()));
        for (size_t i = 0; i < k.size(); ++i) scaled[i] = k[i] * c;
        out += b.from_coords(scaled, n);
    }
    return out;
}

// random element of the kernel of the differential on the degree-n piece of
// the partially built module
ModuleElement random_module_cycle(const SemifreeModule& mod, int n, int pool, Rng& rng) {
    if (n < 0 || mod.dim(n) == 0) return mod.zero();
    const int cols = mod.dim(n);
    const int rows = mod.dim(n - 1);
    const Field& f = mod.algebra().field();
    Matrix m = Matrix::zero(rows, cols, f);
    for (int j = 0; j < cols; ++j) {
        Vec unit(cols, Scalar::zero(f));
        unit[j] = Scalar::one(f);
        Vec col = mod.coords(mod.differential(mod.from_coords(unit, n)), n - 1);
        for (int i = 0; i < rows; ++i) m.a[i][j] = col[i];
    }
    std::vector<Vec> kern = kernel_basis(m);
    ModuleElement out = mod.zero();
    for (const Vec& k : kern) {
        if (!rng.chance(1, 2)) continue;
        Scalar c = pool_coeff(f, pool, rng);
        if (c.is_zero()) continue;
        Vec scaled(k.size(), Scalar::zero(f));
        for (size_t i = 0; i < k.size(); ++i) scaled[i] = k[i] * c;
        out += mod.from_coords(scaled, n);
    }
    return out;
}

AlgebraElement random_homogeneous(const DgAlgebra& b, int n, int pool, Rng& rng) {
    AlgebraElement out = b.zero();
    if (n < 0) return out;
    if (n == 0) return b.from_scalar(pool_coeff(b.field(), pool, rng));
    for (const Monomial& m : b.monomial_basis(n))
        if (rng.chance(1, 2)) {
            Scalar c = pool_coeff(b.field(), pool, rng);
            if (!c.is_zero()) out += b.element(m, c);
        }
    return out;
}

} // namespace

Profile profile_by_name(const std::string& name) {
    if (name == "tiny") return {"tiny", 1, 2, 3, 3, 4, 2, true, true};
    if (name == "small") return {"small", 1, 3, 4, 4, 6, 2, true, true};
    if (name == "medium") return {"medium", 2, 4, 5, 5, 8, 3, true, true};
    throw std::invalid_argument("unknown profile '" + name + "'");
}

InstanceDocument generate_random_instance(std::uint64_t seed, const Profile& profile) {
    Rng rng(seed);
    InstanceDocument doc;

    doc.field = Field{0};
    if (profile.mixed_fields && rng.chance(1, 4)) {
        const unsigned long primes[] = {3, 5, 7};
        doc.field = Field{primes[rng.below(3)]};
    }

    const int nb = static_cast<int>(rng.below(profile.max_base_gens + 1));
    const int nx = static_cast<int>(rng.below(profile.max_ext_gens + 1));

    // both generator lists are reparsed as extension chains, so both must
    // come out weakly increasing
    std::vector<int> base_degs, ext_degs;
    for (int i = 0; i < nb; ++i)
        base_degs.push_back(1 + static_cast<int>(rng.below(profile.max_gen_degree)));
    std::sort(base_degs.begin(), base_degs.end());
    for (int i = 0; i < nx; ++i)
        ext_degs.push_back(1 + static_cast<int>(rng.below(profile.max_gen_degree)));
    std::sort(ext_degs.begin(), ext_degs.end());

    // working algebra; d-images are cycles of the part built so far
    DgAlgebra work(doc.field, "B");
    AlgebraSpec base;
    base.name = "A";
    for (int i = 0; i < nb; ++i) {
        AlgebraElement d = random_algebra_cycle(work, base_degs[i] - 1, profile.coeff_pool, rng);
        std::string id = "y" + std::to_string(i);
        work.add_generator(id, base_degs[i], true, d);
        base.gens.push_back({id, base_degs[i], doc_expr(d)});
    }
    AlgebraSpec ext;
    ext.name = "B";
    if (nb > 0) ext.extends = "A";
    for (int i = 0; i < nx; ++i) {
        AlgebraElement d = random_algebra_cycle(work, ext_degs[i] - 1, profile.coeff_pool, rng);
        std::string id = "x" + std::to_string(i);
        work.add_generator(id, ext_degs[i], false, d);
        ext.gens.push_back({id, ext_degs[i], doc_expr(d)});
    }
    if (nb > 0) doc.algebras.push_back(std::move(base));
    doc.algebras.push_back(std::move(ext));

    // module with differentials sampled from partial-module cycles
    const int rank = 1 + static_cast<int>(rng.below(profile.max_basis));
    SemifreeModule mod(&work, "N");
    ModuleSpec mspec;
    mspec.name = "N";
    mspec.over = "B";
    int deg = static_cast<int>(rng.below(2));
    for (int l = 0; l < rank; ++l) {
        deg = std::min(deg, profile.max_basis_degree);
        std::string id = "e" + std::to_string(l);
        mod.add_basis_element(id, deg);
        mspec.basis.push_back({id, deg});
        ModuleElement dl = random_module_cycle(mod, deg - 1, profile.coeff_pool, rng);
        if (!dl.is_zero()) {
            for (const auto& [mu, c] : dl.components()) mod.set_coefficient(mu, l, c);
            mspec.diffs.push_back({id, doc_expr(dl)});
        }
        deg += static_cast<int>(rng.below(3));
    }
    doc.modules.push_back(std::move(mspec));

    if (profile.with_derivation && nx > 0) {
        DerivationSpec dspec;
        dspec.name = "D";
        dspec.degree = static_cast<int>(rng.range(-1, 2));
        for (int i = 0; i < work.size(); ++i) {
            if (work.gen(i).base) continue;
            AlgebraElement img = random_homogeneous(work, dspec.degree + work.gen(i).degree,
                                                    profile.coeff_pool, rng);
            if (!img.is_zero()) dspec.images.push_back({work.gen(i).name, doc_expr(img)});
        }
        doc.derivations.push_back(std::move(dspec));
    }
    return doc;
}

} // namespace dghom
