#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dghom/connection.hpp"

namespace dghom {

// Owns the two-sided constructions attached to one semifree module N over a
// free extension: the enveloping algebra, the differential module, the three
// derivation targets, and the tensor spaces N (x) B, N (x) J, N (x) Omega.
// Every lifting computation shares these; connections returned by the
// operations below stay valid while the context lives.
class LiftContext {
  public:
    explicit LiftContext(const SemifreeModule& n);
    LiftContext(const LiftContext&) = delete;
    LiftContext& operator=(const LiftContext&) = delete;

    const SemifreeModule& module() const { return *n_; }
    const DgAlgebra& algebra() const { return n_->algebra(); }
    const EnvelopingAlgebra& env() const { return env_; }
    const DifferentialModule& omega() const { return om_; }

    const DerTarget& tb() const { return tb_; }
    const DerTarget& tj() const { return tj_; }
    const DerTarget& tomega() const { return tom_; }

    const ConnSpace& space_b() const { return sb_; }
    const ConnSpace& space_j() const { return sj_; }
    const ConnSpace& space_omega() const { return som_; }

    Derivation delta() const; // universal derivation into J
    Derivation dbar() const;  // its class into Omega

  private:
    const SemifreeModule* n_;
    EnvelopingAlgebra env_;
    DifferentialModule om_;
    DerTarget tb_, tj_, tom_;
    ConnSpace sb_, sj_, som_;
};

// one verified identity in a report
struct CheckLine {
    std::string name;
    bool ok = false;
};

// alpha(e_l) = sum_{m<l} e_m (x) delta(b_{ml}), a chain map of degree -1
// into N (x) J; throws std::logic_error if d^Hom(alpha) != 0
GradedHom atiyah_map(const LiftContext& ctx);

// alpha = -d^Conn(phi(delta)), both sides evaluated independently
bool check_atiyah_identity(const LiftContext& ctx);

// (id (x) projection) alpha, landing in N (x) Omega; chain map of degree -1
GradedHom classical_atiyah(const LiftContext& ctx);

// alpha-bar = -d^Conn(phi(delta-bar))
bool check_classical_atiyah_identity(const LiftContext& ctx);

struct LiftReport {
    bool liftable = false;
    std::optional<GradedHom> f;          // homotopy with d^Hom(f) = alpha
    std::optional<Connection> psi;       // f + phi(delta), a cycle
    std::optional<HomotopyCertificate> certificate;
    std::vector<CheckLine> checks;

    bool verified() const;
};

// decides null-homotopy of alpha exactly; verifies the witness or the
// certificate through evaluation paths independent of the solver
LiftReport decide_naive_lifting(const LiftContext& ctx);

// Psi(D) = (id (x) varpi^{-1}(D)) psi for a cycle delta-connection psi;
// each Psi(D) is a D-connection into spx. Throws when psi is not a cycle.
LConnection build_section_from_psi(const LiftContext& ctx, const Connection& psi,
                                   const ConnSpace& spx);

struct KodairaSpencerValue {
    Derivation d;
    GradedHom kappa; // B-linear N -> N of degree |d| - 1
};

// kappa(D) = [d^N, phi(D)] - phi([d^B, D]), expanded on the basis of N;
// D targets ctx.tb()
KodairaSpencerValue kodaira_spencer(const LiftContext& ctx, const Derivation& d);

// Condition table for the classical criteria: null-homotopy of alpha-bar
// and null-homotopy of kappa over the dual basis, with the witnesses each
// side constructs and the cross-checks between them.
struct FesReport {
    bool hypothesis_ok = true;
    std::string hypothesis_detail;

    bool alpha_bar_null = false;              // condition (i)
    std::optional<GradedHom> fbar;            // homotopy for alpha-bar
    std::optional<Connection> psi_bar;        // cycle delta-bar-connection
    std::optional<HomotopyCertificate> cert_alpha_bar;

    bool kappa_null = false;                  // condition (ix)
    std::vector<GradedHom> h_table;           // h(partial_l), one per u_l
    std::optional<HomotopyCertificate> cert_kappa;
    std::optional<Connection> psi_from_kappa; // the (6.4) connection

    bool agree = false; // the two verdicts coincide, as the equivalence demands
    std::optional<bool> naive_liftable; // side data for the open comparison
    std::vector<CheckLine> checks;

    bool verified() const;
};

FesReport decide_fesOX(const LiftContext& ctx);

struct H0NuReport {
    bool surjective = false;      // H_0(nu) reaches every class
    bool lifting_checked = false; // the one-directional consequence was run
    bool consistent = true;       // surjective implies liftable held
    std::vector<CheckLine> checks;
};

// H_0 of Conn(N, N (x) J) -> Der_A(B, J); surjectivity forces liftability,
// and the report runs that implication when surjectivity holds
H0NuReport h0_nu_surjective(const LiftContext& ctx);

} // namespace dghom
