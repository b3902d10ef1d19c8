#include "dghom/report_json.hpp"

namespace dghom {

using nlohmann::json;

json json_hom(const GradedHom& f) {
    json images = json::object();
    for (size_t l = 0; l < f.images.size(); ++l)
        if (!f.images[l].is_zero()) images[f.source->basis(static_cast<int>(l)).id] = f.images[l].str();
    return json{{"degree", f.degree}, {"images", images}};
}

json json_connection(const Connection& c) {
    return json{{"derivation", json_derivation(c.derivation())},
                {"correction", json_hom(c.correction())}};
}

json json_derivation(const Derivation& d) {
    json images = json::object();
    for (int i = 0; i < d.source().size(); ++i)
        if (!d.image(i).is_zero()) images[d.source().gen(i).name] = d.image(i).str();
    return json{{"degree", d.degree()}, {"target", d.target().tag}, {"images", images}};
}

json json_certificate(const HomotopyCertificate& c) {
    json rows = json::array();
    for (size_t i = 0; i < c.row.size(); ++i)
        if (!c.row[i].is_zero())
            rows.push_back(json{{"label", c.labels[i]}, {"coeff", c.row[i].str()}});
    return json{{"detail", c.detail}, {"rows", rows}};
}

json json_checks(const std::vector<CheckLine>& checks) {
    json out = json::array();
    for (const CheckLine& c : checks) out.push_back(json{{"name", c.name}, {"ok", c.ok}});
    return out;
}

json json_validation(const ValidationReport& rep) {
    json issues = json::array();
    for (const ValidationIssue& i : rep.issues)
        issues.push_back(json{{"check", i.check}, {"subject", i.subject}, {"detail", i.detail}});
    return json{{"verdict", rep.ok() ? "valid" : "invalid"}, {"issues", issues}};
}

json json_lift(const LiftReport& rep) {
    json out;
    out["verdict"] = rep.liftable ? "liftable" : "obstructed";
    out["witness_f"] = rep.f ? json_hom(*rep.f) : json();
    out["witness_psi"] = rep.psi ? json_connection(*rep.psi) : json();
    out["certificate"] = rep.certificate ? json_certificate(*rep.certificate) : json();
    out["checks"] = json_checks(rep.checks);
    return out;
}

json json_fes(const FesReport& rep) {
    json out;
    if (!rep.hypothesis_ok)
        out["verdict"] = "hypothesis failed";
    else
        out["verdict"] = rep.alpha_bar_null ? "liftable" : "obstructed";
    out["conditions"] = json{{"alpha_bar_null", rep.alpha_bar_null},
                             {"kappa_null", rep.kappa_null},
                             {"agree", rep.agree}};
    out["naive_liftable"] = rep.naive_liftable ? json(*rep.naive_liftable) : json();
    out["witness_fbar"] = rep.fbar ? json_hom(*rep.fbar) : json();
    out["witness_psi"] = rep.psi_bar ? json_connection(*rep.psi_bar) : json();
    out["psi_from_kappa"] = rep.psi_from_kappa ? json_connection(*rep.psi_from_kappa) : json();
    json table = json::array();
    for (const GradedHom& h : rep.h_table) table.push_back(json_hom(h));
    out["h_table"] = table;
    out["certificates"] =
        json{{"alpha_bar", rep.cert_alpha_bar ? json_certificate(*rep.cert_alpha_bar) : json()},
             {"kappa", rep.cert_kappa ? json_certificate(*rep.cert_kappa) : json()}};
    out["checks"] = json_checks(rep.checks);
    out["hypothesis_detail"] = rep.hypothesis_detail;
    return out;
}

json json_exactseq(const FundamentalSequenceReport& rep) {
    json rows = json::array();
    for (const FundamentalDegree& r : rep.rows)
        rows.push_back(json{{"degree", r.degree},
                            {"dim_hom", r.dim_hom},
                            {"dim_der", r.dim_der},
                            {"dim_conn", r.dim_conn},
                            {"nu_surjective", r.nu_surjective},
                            {"kernel_is_image", r.kernel_is_image},
                            {"probe_matches_storage", r.probe_matches_storage}});
    return json{{"verdict", rep.ok ? "exact" : "violation"},
                {"rows", rows},
                {"detail", rep.detail}};
}

json json_h0nu(const H0NuReport& rep) {
    return json{{"verdict", rep.surjective ? "surjective" : "not surjective"},
                {"lifting_checked", rep.lifting_checked},
                {"consistent", rep.consistent},
                {"checks", json_checks(rep.checks)}};
}

json json_atiyah(const LiftContext& ctx, bool classical) {
    GradedHom a = classical ? classical_atiyah(ctx) : atiyah_map(ctx);
    bool identity =
        classical ? check_classical_atiyah_identity(ctx) : check_atiyah_identity(ctx);
    json checks = json::array();
    checks.push_back(json{{"name", "alpha is a chain map"}, {"ok", true}});
    checks.push_back(
        json{{"name", "alpha = -d^Conn(phi(delta)) on the universal derivation"},
             {"ok", identity}});
    return json{{"verdict", identity ? "chain map" : "identity failed"},
                {"along", classical ? "Omega" : "J"},
                {"degree", a.degree},
                {"images", json_hom(a)["images"]},
                {"checks", checks}};
}

json json_ks(const std::string& name, const KodairaSpencerValue& v) {
    return json{{"name", name},
                {"derivation", json_derivation(v.d)},
                {"kappa", json_hom(v.kappa)}};
}

json json_omega(const EnvelopingAlgebra& env, const DifferentialModule& om) {
    const SemifreeModule& m = om.module();
    json gens = json::array();
    for (int l = 0; l < m.rank(); ++l)
        gens.push_back(json{{"id", m.basis(l).id}, {"degree", m.basis(l).degree}});
    json diffs = json::object();
    for (int l = 0; l < m.rank(); ++l) {
        ModuleElement d = m.differential(m.basis_elem(l));
        if (!d.is_zero()) diffs[m.basis(l).id] = d.str();
    }
    return json{{"algebra", env.base().name()}, {"generators", gens}, {"differentials", diffs}};
}

} // namespace dghom
