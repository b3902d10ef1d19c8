#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dghom/algebra.hpp"
#include "dghom/module.hpp"

namespace dghom {

// Abstract form of an instance document. Expressions are stored as canonical
// strings (re-printed from the elaborated elements), so parse -> print ->
// parse is the identity on this struct.
struct GenSpec {
    std::string id;
    int degree = 0;
    std::string dexpr; // "0" when the differential vanishes
    bool operator==(const GenSpec&) const = default;
};

struct AlgebraSpec {
    std::string name;
    std::string extends; // empty: extension of the trivial base
    std::vector<GenSpec> gens;
    bool operator==(const AlgebraSpec&) const = default;
};

struct BasisSpec {
    std::string id;
    int degree = 0;
    bool operator==(const BasisSpec&) const = default;
};

struct DiffSpec {
    std::string id;   // basis element whose differential is declared
    std::string expr; // canonical, never "0" (zero differentials are omitted)
    bool operator==(const DiffSpec&) const = default;
};

struct ModuleSpec {
    std::string name;
    std::string over;
    std::vector<BasisSpec> basis;
    std::vector<DiffSpec> diffs;
    bool operator==(const ModuleSpec&) const = default;
};

struct ImageSpec {
    std::string gen;
    std::string expr; // canonical, never "0"
    bool operator==(const ImageSpec&) const = default;
};

struct DerivationSpec {
    std::string name;
    int degree = 0;
    std::vector<ImageSpec> images;
    bool operator==(const DerivationSpec&) const = default;
};

struct InstanceDocument {
    Field field{0};
    std::vector<AlgebraSpec> algebras;
    std::vector<ModuleSpec> modules;
    std::vector<DerivationSpec> derivations;
    bool operator==(const InstanceDocument&) const = default;
};

// Syntax or elaboration failure with 1-based source position.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string msg, int line, int col)
        : std::runtime_error(std::move(msg)), line(line), col(col) {}
    int line;
    int col;
};

// Parses and elaborates; every returned document is canonical and
// elaborates cleanly. Structural problems (unknown names, forward
// references, non-homogeneous or degree-mismatched expressions) are
// ParseErrors; d^2 = 0 style failures are left to validation.
InstanceDocument parse_instance(const std::string& text);

std::string print_instance(const InstanceDocument& doc);

// canonical expression strings used by the printer and the generator
std::string doc_expr(const AlgebraElement& v);
std::string doc_expr(const ModuleElement& v);

// Live objects built from a document. Algebras own their storage; modules
// and derivation images point into them, so keep the Elaboration alive
// while any of them is in use.
struct ElaboratedDerivation {
    std::string name;
    int algebra = 0; // index into Elaboration::algebras
    int degree = 0;
    std::vector<AlgebraElement> images; // one slot per generator, base slots zero
};

struct Elaboration {
    std::vector<std::unique_ptr<DgAlgebra>> algebras;
    std::vector<std::unique_ptr<SemifreeModule>> modules;
    std::vector<int> module_algebra; // per module: index into algebras
    std::vector<ElaboratedDerivation> derivations;

    int algebra_index(const std::string& name) const;
    int module_index(const std::string& name) const;
};

// Throws ParseError on the same structural failures as parse_instance.
Elaboration elaborate(const InstanceDocument& doc);

// document-level validation: algebra laws, module coefficient shape, d^2 = 0
ValidationReport validate_instance(const Elaboration& e);

} // namespace dghom
