// Command line front end: parses instance documents and runs the lifting
// calculus on them. Exit codes: 0 success, 1 validation or usage failure,
// 2 parse error, 3 resource limit.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dghom/instance.hpp"
#include "dghom/lifting.hpp"
#include "dghom/randomgen.hpp"
#include "dghom/report_json.hpp"

using namespace dghom;
using nlohmann::json;

namespace {

struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Loaded {
    InstanceDocument doc;
    Elaboration el;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// size guards; exact arithmetic on larger instances is possible but the
// tool refuses rather than grind without warning
void guard_document(const InstanceDocument& doc) {
    if (doc.algebras.size() > 16) throw ResourceLimit("more than 16 algebras");
    for (const AlgebraSpec& a : doc.algebras)
        if (a.gens.size() > 64) throw ResourceLimit("more than 64 generators in one algebra");
    for (const ModuleSpec& m : doc.modules) {
        if (m.basis.size() > 64) throw ResourceLimit("module rank above 64");
        for (const BasisSpec& b : m.basis)
            if (b.degree > 64) throw ResourceLimit("basis degree above 64");
    }
}

Loaded load(const std::string& path) {
    Loaded out;
    out.doc = parse_instance(read_file(path));
    guard_document(out.doc);
    out.el = elaborate(out.doc);
    return out;
}

// fails loudly when the document is structurally fine but violates d^2 = 0
void require_valid(const Loaded& l) {
    ValidationReport rep = validate_instance(l.el);
    if (rep.ok()) return;
    for (const ValidationIssue& i : rep.issues)
        std::cerr << i.check << " " << i.subject << ": " << i.detail << "\n";
    throw std::invalid_argument("the document does not validate");
}

const SemifreeModule& pick_module(const Loaded& l, const std::string& name) {
    if (!name.empty()) {
        int i = l.el.module_index(name);
        if (i < 0) throw std::invalid_argument("no module named '" + name + "'");
        return *l.el.modules[static_cast<size_t>(i)];
    }
    if (l.el.modules.empty()) throw std::invalid_argument("the document declares no module");
    if (l.el.modules.size() > 1) {
        std::string names;
        for (const auto& m : l.el.modules) names += " " + m->name();
        throw std::invalid_argument("several modules declared, pick one with --module:" + names);
    }
    return *l.el.modules[0];
}

void parse_window(const std::string& s, int& lo, int& hi) {
    size_t dots = s.find("..");
    if (dots == std::string::npos)
        throw std::invalid_argument("--degrees expects LO..HI, got '" + s + "'");
    try {
        lo = std::stoi(s.substr(0, dots));
        hi = std::stoi(s.substr(dots + 2));
    } catch (const std::exception&) {
        throw std::invalid_argument("--degrees expects LO..HI, got '" + s + "'");
    }
    if (lo > hi) throw std::invalid_argument("--degrees window is empty");
    if (hi - lo > 64) throw ResourceLimit("degree window wider than 64");
}

void print_checks(const std::vector<CheckLine>& checks) {
    for (const CheckLine& c : checks)
        std::cout << "  [" << (c.ok ? "ok" : "FAILED") << "] " << c.name << "\n";
}

void print_hom(const GradedHom& f, const std::string& head) {
    std::cout << head << " (degree " << f.degree << ")\n";
    for (size_t l = 0; l < f.images.size(); ++l)
        if (!f.images[l].is_zero())
            std::cout << "  " << f.source->basis(static_cast<int>(l)).id << " -> "
                      << f.images[l].str() << "\n";
}

void print_certificate(const HomotopyCertificate& c) {
    std::cout << "obstruction certificate: " << c.detail << "\n";
    for (size_t i = 0; i < c.row.size(); ++i)
        if (!c.row[i].is_zero())
            std::cout << "  " << c.labels[i] << " * " << c.row[i].str() << "\n";
}

void emit(const json& j, bool as_json) {
    if (as_json) std::cout << j.dump(2) << "\n";
}

int run_validate(const std::string& file, bool as_json) {
    Loaded l = load(file);
    ValidationReport rep = validate_instance(l.el);
    if (as_json) {
        emit(json_validation(rep), true);
    } else if (rep.ok()) {
        std::cout << "ok: " << l.doc.algebras.size() << " algebra(s), "
                  << l.doc.modules.size() << " module(s), " << l.doc.derivations.size()
                  << " derivation(s)\n";
    } else {
        for (const ValidationIssue& i : rep.issues)
            std::cout << i.check << " " << i.subject << ": " << i.detail << "\n";
    }
    return rep.ok() ? 0 : 1;
}

int run_atiyah(const std::string& file, const std::string& module, const std::string& along,
               bool as_json) {
    if (along == "B")
        throw std::invalid_argument(
            "the Atiyah class lives in N (x) J or its quotient N (x) Omega; use J or Omega");
    Loaded l = load(file);
    require_valid(l);
    LiftContext ctx(pick_module(l, module));
    json j = json_atiyah(ctx, along == "Omega");
    if (as_json) {
        emit(j, true);
    } else {
        std::cout << (along == "Omega" ? "classical Atiyah map" : "Atiyah map") << " of "
                  << ctx.module().name() << ", degree " << j["degree"].get<int>() << "\n";
        for (const auto& [id, val] : j["images"].items())
            std::cout << "  " << id << " -> " << val.get<std::string>() << "\n";
        for (const auto& c : j["checks"])
            std::cout << "  [" << (c["ok"].get<bool>() ? "ok" : "FAILED") << "] "
                      << c["name"].get<std::string>() << "\n";
    }
    return j["verdict"] == "chain map" ? 0 : 1;
}

int run_lift(const std::string& file, const std::string& module, const std::string& witness,
             bool as_json) {
    Loaded l = load(file);
    require_valid(l);
    LiftContext ctx(pick_module(l, module));
    LiftReport rep = decide_naive_lifting(ctx);
    json j = json_lift(rep);
    if (!witness.empty()) {
        std::ofstream out(witness);
        if (!out) throw std::invalid_argument("cannot write '" + witness + "'");
        out << j.dump(2) << "\n";
    }
    if (as_json) {
        emit(j, true);
    } else {
        std::cout << ctx.module().name() << ": "
                  << (rep.liftable ? "liftable" : "not liftable") << "\n";
        if (rep.f) print_hom(*rep.f, "homotopy f with d^Hom(f) = alpha");
        if (rep.certificate) print_certificate(*rep.certificate);
        print_checks(rep.checks);
    }
    return rep.verified() ? 0 : 1;
}

int run_ks(const std::string& file, const std::string& module, bool as_json) {
    Loaded l = load(file);
    require_valid(l);
    LiftContext ctx(pick_module(l, module));
    const DgAlgebra& b = ctx.algebra();

    std::vector<std::pair<std::string, Derivation>> ders;
    for (const ElaboratedDerivation& ed : l.el.derivations) {
        if (l.el.algebras[static_cast<size_t>(ed.algebra)].get() != &b) continue;
        std::vector<ModuleElement> images;
        for (const AlgebraElement& img : ed.images)
            images.push_back(ctx.tb().keepalive->element(0, img));
        ders.emplace_back(ed.name, Derivation(&b, &ctx.tb(), ed.degree, std::move(images)));
    }
    bool from_document = !ders.empty();
    if (!from_document) {
        std::vector<Derivation> duals = dual_basis(b, ctx.tb());
        size_t k = 0;
        for (int i = 0; i < b.size(); ++i) {
            if (b.gen(i).base) continue;
            ders.emplace_back("partial[" + b.gen(i).name + "]", duals[k++]);
        }
    }

    json values = json::array();
    for (const auto& [name, d] : ders)
        values.push_back(json_ks(name, kodaira_spencer(ctx, d)));
    if (as_json) {
        emit(json{{"source", from_document ? "document" : "dual basis"}, {"values", values}},
             true);
    } else {
        std::cout << "Kodaira-Spencer values against "
                  << (from_document ? "document derivations" : "the dual basis") << "\n";
        for (const auto& v : values) {
            std::cout << v["name"].get<std::string>() << " (degree "
                      << v["derivation"]["degree"].get<int>() << "):\n";
            const auto& images = v["kappa"]["images"];
            if (images.empty()) std::cout << "  kappa = 0\n";
            for (const auto& [id, val] : images.items())
                std::cout << "  " << id << " -> " << val.get<std::string>() << "\n";
        }
    }
    return 0;
}

int run_fesox(const std::string& file, const std::string& module, bool as_json) {
    Loaded l = load(file);
    require_valid(l);
    LiftContext ctx(pick_module(l, module));
    FesReport rep = decide_fesOX(ctx);
    if (as_json) {
        emit(json_fes(rep), true);
    } else {
        if (!rep.hypothesis_ok) {
            std::cout << "hypothesis failed: " << rep.hypothesis_detail << "\n";
            return 1;
        }
        std::cout << ctx.module().name() << ":\n";
        std::cout << "  (i)  alpha-bar null-homotopic: " << (rep.alpha_bar_null ? "yes" : "no")
                  << "\n";
        std::cout << "  (ix) kappa null-homotopic on the dual basis: "
                  << (rep.kappa_null ? "yes" : "no") << "\n";
        std::cout << "  conditions agree: " << (rep.agree ? "yes" : "NO") << "\n";
        if (rep.naive_liftable)
            std::cout << "  naive lifting along J (side data): "
                      << (*rep.naive_liftable ? "yes" : "no") << "\n";
        print_checks(rep.checks);
    }
    if (!rep.hypothesis_ok) return 1;
    return rep.verified() ? 0 : 1;
}

int run_exactseq(const std::string& file, const std::string& module, const std::string& along,
                 const std::string& degrees, bool as_json) {
    int lo = -6, hi = 6;
    if (!degrees.empty()) parse_window(degrees, lo, hi);
    Loaded l = load(file);
    require_valid(l);
    LiftContext ctx(pick_module(l, module));
    const ConnSpace& sp = along == "B"       ? ctx.space_b()
                          : along == "Omega" ? ctx.space_omega()
                                             : ctx.space_j();
    FundamentalSequenceReport rep = fundamental_sequence(sp, lo, hi);
    if (as_json) {
        emit(json_exactseq(rep), true);
    } else {
        std::cout << "fundamental sequence for Conn(" << ctx.module().name() << ", "
                  << ctx.module().name() << " (x) " << along << ") on [" << lo << ", " << hi
                  << "]\n";
        std::cout << "  n    hom  der  conn  nu-onto  ker=im\n";
        for (const FundamentalDegree& r : rep.rows)
            std::cout << "  " << r.degree << "\t" << r.dim_hom << "    " << r.dim_der << "    "
                      << r.dim_conn << "     " << (r.nu_surjective ? "yes" : "no") << "      "
                      << (r.kernel_is_image ? "yes" : "NO") << "\n";
        if (!rep.ok) std::cout << "violation: " << rep.detail << "\n";
    }
    return rep.ok ? 0 : 1;
}

int run_h0nu(const std::string& file, const std::string& module, bool as_json) {
    Loaded l = load(file);
    require_valid(l);
    LiftContext ctx(pick_module(l, module));
    H0NuReport rep = h0_nu_surjective(ctx);
    if (as_json) {
        emit(json_h0nu(rep), true);
    } else {
        std::cout << "H_0(nu) surjective: " << (rep.surjective ? "yes" : "no") << "\n";
        if (rep.lifting_checked)
            std::cout << "  implied liftability checked: "
                      << (rep.consistent ? "consistent" : "VIOLATED") << "\n";
        print_checks(rep.checks);
    }
    return rep.consistent ? 0 : 1;
}

int run_omega(const std::string& file, const std::string& algebra, bool as_json) {
    Loaded l = load(file);
    require_valid(l);
    const DgAlgebra* b = nullptr;
    if (!algebra.empty()) {
        int i = l.el.algebra_index(algebra);
        if (i < 0) throw std::invalid_argument("no algebra named '" + algebra + "'");
        b = l.el.algebras[static_cast<size_t>(i)].get();
    } else {
        if (l.el.algebras.empty())
            throw std::invalid_argument("the document declares no algebra");
        b = l.el.algebras.back().get();
    }
    EnvelopingAlgebra env(b);
    DifferentialModule om(&env);
    if (as_json) {
        emit(json_omega(env, om), true);
    } else {
        const SemifreeModule& m = om.module();
        std::cout << "Omega over " << b->name() << ": rank " << m.rank() << "\n";
        for (int i = 0; i < m.rank(); ++i) {
            std::cout << "  " << m.basis(i).id << " deg " << m.basis(i).degree;
            ModuleElement d = m.differential(m.basis_elem(i));
            if (!d.is_zero()) std::cout << "  d -> " << d.str();
            std::cout << "\n";
        }
    }
    return 0;
}

struct Tally {
    long both = 0;       // naive yes, (i) yes
    long neither = 0;    // naive no, (i) no
    long fes_only = 0;   // naive no, (i) yes: allowed, the open direction
    long naive_only = 0; // naive yes, (i) no: would violate the proven implication
    long anomalies = 0;  // unverified reports or internal disagreement
    std::vector<std::uint64_t> fes_only_seeds;
    std::vector<std::uint64_t> anomaly_seeds;
};

int run_random(std::uint64_t seed, const std::string& profile_name, int count, bool experiment,
               int jobs, bool as_json) {
    Profile prof = profile_by_name(profile_name);
    if (count < 1) throw std::invalid_argument("--count must be positive");
    if (count > 100000) throw ResourceLimit("more than 100000 instances requested");

    if (!experiment) {
        for (int i = 0; i < count; ++i) {
            if (i) std::cout << "---\n";
            std::cout << print_instance(generate_random_instance(seed + i, prof));
        }
        return 0;
    }

#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
    Tally t;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
        std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        InstanceDocument doc = generate_random_instance(s, prof);
        Elaboration el = elaborate(doc);
        LiftContext ctx(*el.modules[0]);
        LiftReport naive = decide_naive_lifting(ctx);
        FesReport fes = decide_fesOX(ctx);
        bool bad = !naive.verified() || !fes.verified() || !fes.agree ||
                   (naive.liftable && !fes.alpha_bar_null);
#pragma omp critical
        {
            if (naive.liftable && fes.alpha_bar_null) ++t.both;
            if (!naive.liftable && !fes.alpha_bar_null) ++t.neither;
            if (!naive.liftable && fes.alpha_bar_null) {
                ++t.fes_only;
                t.fes_only_seeds.push_back(s);
            }
            if (naive.liftable && !fes.alpha_bar_null) ++t.naive_only;
            if (bad) {
                ++t.anomalies;
                t.anomaly_seeds.push_back(s);
            }
        }
    }
    if (as_json) {
        emit(json{{"instances", count},
                  {"table",
                   json{{"both", t.both},
                        {"neither", t.neither},
                        {"fes_only", t.fes_only},
                        {"naive_only", t.naive_only}}},
                  {"fes_only_seeds", t.fes_only_seeds},
                  {"anomalies", t.anomalies},
                  {"anomaly_seeds", t.anomaly_seeds}},
             true);
    } else {
        std::cout << count << " instances, profile " << prof.name << ", seeds " << seed << ".."
                  << (seed + static_cast<std::uint64_t>(count) - 1) << "\n";
        std::cout << "  naive and (i) liftable: " << t.both << "\n";
        std::cout << "  neither:                " << t.neither << "\n";
        std::cout << "  (i) only:               " << t.fes_only
                  << "  (naive lifting is the stronger condition)\n";
        std::cout << "  naive only:             " << t.naive_only
                  << "  (must be zero: naive lifting implies (i))\n";
        for (std::uint64_t s : t.fes_only_seeds) std::cout << "  (i)-only seed " << s << "\n";
        std::cout << "  anomalies: " << t.anomalies << "\n";
        for (std::uint64_t s : t.anomaly_seeds) std::cout << "  anomaly seed " << s << "\n";
    }
    return t.anomalies == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact lifting calculus for semifree DG modules over free extensions"};
    app.require_subcommand(1);

    std::string file, module, witness, algebra;
    std::string along_atiyah = "J", along_seq = "J", degrees, profile = "small";
    bool as_json = false;
    std::uint64_t seed = 1;
    int count = 1, jobs = 0;
    bool experiment = false;

    auto add_common = [&](CLI::App* sub, bool needs_module) {
        sub->add_option("file", file, "instance document")->required();
        if (needs_module) sub->add_option("--module", module, "module name (default: the only one)");
        sub->add_flag("--json", as_json, "JSON output with fixed keys");
    };

    CLI::App* v = app.add_subcommand("validate", "parse and check algebra and module laws");
    add_common(v, false);

    CLI::App* at = app.add_subcommand("atiyah", "Atiyah map of a module, along J or Omega");
    add_common(at, true);
    at->add_option("--along", along_atiyah, "J or Omega")
        ->check(CLI::IsMember({"J", "Omega", "B"}));

    CLI::App* li = app.add_subcommand("lift", "decide naive liftability, with witness");
    add_common(li, true);
    li->add_option("--witness", witness, "write the witness JSON to this path");

    CLI::App* ks = app.add_subcommand("ks", "Kodaira-Spencer values of derivations");
    add_common(ks, true);

    CLI::App* fe = app.add_subcommand("fesox", "classical criteria (i) and (ix), cross-checked");
    add_common(fe, true);

    CLI::App* ex = app.add_subcommand("exactseq", "fundamental exact sequence dimensions");
    add_common(ex, true);
    ex->add_option("--along", along_seq, "B, J, or Omega")
        ->check(CLI::IsMember({"B", "J", "Omega"}));
    ex->add_option("--degrees", degrees, "window LO..HI (default -6..6)");

    CLI::App* h0 = app.add_subcommand("h0nu", "surjectivity of H_0(nu) and its consequence");
    add_common(h0, true);

    CLI::App* om = app.add_subcommand("omega", "presentation of the differential module");
    add_common(om, false);
    om->add_option("--algebra", algebra, "algebra name (default: the last declared)");

    CLI::App* ra = app.add_subcommand("random", "emit random instances or run the comparison");
    ra->add_option("--seed", seed, "base seed (instance i uses seed + i)");
    ra->add_option("--profile", profile, "tiny, small, or medium");
    ra->add_option("--count", count, "number of instances");
    ra->add_flag("--experiment", experiment, "run naive lifting against the classical criteria");
    ra->add_option("--jobs", jobs, "worker threads for --experiment");
    ra->add_flag("--json", as_json, "JSON output with fixed keys");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (v->parsed()) return run_validate(file, as_json);
        if (at->parsed()) return run_atiyah(file, module, along_atiyah, as_json);
        if (li->parsed()) return run_lift(file, module, witness, as_json);
        if (ks->parsed()) return run_ks(file, module, as_json);
        if (fe->parsed()) return run_fesox(file, module, as_json);
        if (ex->parsed()) return run_exactseq(file, module, along_seq, degrees, as_json);
        if (h0->parsed()) return run_h0nu(file, module, as_json);
        if (om->parsed()) return run_omega(file, algebra, as_json);
        if (ra->parsed()) return run_random(seed, profile, count, experiment, jobs, as_json);
    } catch (const ParseError& e) {
        std::cerr << "parse error at line " << e.line << ", column " << e.col << ": " << e.what()
                  << "\n";
        return 2;
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
