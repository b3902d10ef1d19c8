#include <doctest.h>

#include <set>
#include <string>

#include "dghom/instance.hpp"
#include "dghom/lifting.hpp"
#include "dghom/randomgen.hpp"
#include "fixtures.hpp"

using namespace dghom;

namespace {

const char* k1_doc = "field Q\n"
                     "algebra B\n"
                     "  gen x deg 2 d 0\n"
                     "module N over B\n"
                     "  basis e0 deg 0\n"
                     "  basis e1 deg 3\n"
                     "  d e1 = e0 * x\n";

const char* k2_doc = "field Q\n"
                     "algebra A\n"
                     "  gen y deg 1 d 0\n"
                     "algebra B extends A\n"
                     "  gen x deg 2 d y\n"
                     "module N over B\n"
                     "  basis e0 deg 0\n"
                     "  basis e1 deg 4\n"
                     "  d e1 = e0 * x*y\n";

const char* basechange_doc = "field Q\n"
                             "algebra A\n"
                             "  gen y deg 1 d 0\n"
                             "algebra B extends A\n"
                             "  gen x deg 2 d y\n"
                             "module L over B\n"
                             "  basis l0 deg 0\n"
                             "  basis l1 deg 2\n"
                             "  d l1 = l0 * y\n";

const char* x124_doc = "field Q\n"
                       "algebra B\n"
                       "  gen x1 deg 1 d 0\n"
                       "  gen x2 deg 2 d x1\n"
                       "  gen x3 deg 4 d x1*x2\n"
                       "module N over B\n"
                       "  basis m0 deg 0\n"
                       "  basis m1 deg 2\n"
                       "  d m1 = m0 * x1\n"
                       "derivation D deg 2\n"
                       "  image x1 = x1*x2\n"
                       "  image x2 = x2*x2\n";

// expected line of the first ParseError raised by a bad document
int error_line(const std::string& text, const std::string& expect_substr) {
    try {
        parse_instance(text);
    } catch (const ParseError& e) {
        INFO("message: " << e.what());
        CHECK(std::string(e.what()).find(expect_substr) != std::string::npos);
        return e.line;
    }
    FAIL("expected a parse error containing '" << expect_substr << "'");
    return -1;
}

} // namespace

TEST_CASE("a minimal document parses and elaborates") {
    const std::string text = "field Q\n"
                             "algebra A\n"
                             "algebra B extends A\n"
                             "  gen x deg 2 d 0\n";
    InstanceDocument doc = parse_instance(text);
    CHECK(doc.field.p == 0);
    REQUIRE(doc.algebras.size() == 2);
    CHECK(doc.algebras[0].name == "A");
    CHECK(doc.algebras[1].extends == "A");
    REQUIRE(doc.algebras[1].gens.size() == 1);
    CHECK(doc.algebras[1].gens[0].dexpr == "0");
    CHECK(print_instance(doc) == text);

    Elaboration el = elaborate(doc);
    REQUIRE(el.algebras.size() == 2);
    const DgAlgebra& b = *el.algebras[1];
    CHECK(b.name() == "B");
    CHECK(b.size() == 1);
    CHECK(b.base_size() == 0);
    CHECK(b.gen(0).degree == 2);
    CHECK(b.differential(b.generator(0)).is_zero());
    CHECK(el.algebra_index("B") == 1);
    CHECK(el.algebra_index("C") == -1);
    CHECK(validate_instance(el).ok());
}

TEST_CASE("fixture documents elaborate to the hand-built objects") {
    SUBCASE("k1") {
        Elaboration el = elaborate(parse_instance(k1_doc));
        const DgAlgebra& b = *el.algebras[0];
        auto ref = fx::k1_algebra();
        REQUIRE(b.size() == ref->size());
        CHECK(b.gen(0).degree == ref->gen(0).degree);
        const SemifreeModule& n = *el.modules[0];
        SemifreeModule refm = fx::k1_module(*ref);
        REQUIRE(n.rank() == refm.rank());
        for (int l = 0; l < n.rank(); ++l) {
            CHECK(n.basis(l).degree == refm.basis(l).degree);
            CHECK(n.differential(n.basis_elem(l)).str() ==
                  refm.differential(refm.basis_elem(l)).str());
        }
    }
    SUBCASE("k2 and base change stay functional after elaboration") {
        Elaboration el = elaborate(parse_instance(k2_doc));
        const DgAlgebra& b = *el.algebras[1];
        CHECK(b.base_size() == 1);
        CHECK(b.extension_size() == 1);
        CHECK(b.differential(b.generator(1)).str() == b.generator(0).str());
        LiftContext ctx(*el.modules[0]);
        LiftReport rep = decide_naive_lifting(ctx);
        CHECK(rep.liftable);
        CHECK(rep.verified());

        Elaboration el2 = elaborate(parse_instance(basechange_doc));
        LiftContext ctx2(*el2.modules[0]);
        LiftReport rep2 = decide_naive_lifting(ctx2);
        CHECK(rep2.liftable);
        REQUIRE(rep2.f.has_value());
        CHECK(rep2.f->is_zero());
    }
    SUBCASE("x124 with a declared derivation") {
        Elaboration el = elaborate(parse_instance(x124_doc));
        const DgAlgebra& b = *el.algebras[0];
        CHECK(b.differential(b.generator(2)).str() ==
              (b.generator(0) * b.generator(1)).str());
        REQUIRE(el.derivations.size() == 1);
        const ElaboratedDerivation& ed = el.derivations[0];
        CHECK(ed.degree == 2);
        CHECK(ed.algebra == 0);
        REQUIRE(ed.images.size() == 3);
        CHECK(ed.images[0].str() == (b.generator(0) * b.generator(1)).str());
        CHECK(ed.images[2].is_zero());
    }
}

TEST_CASE("parse, print, parse is the identity") {
    for (const char* text : {k1_doc, k2_doc, basechange_doc, x124_doc}) {
        InstanceDocument doc = parse_instance(text);
        std::string printed = print_instance(doc);
        InstanceDocument doc2 = parse_instance(printed);
        CHECK(doc == doc2);
        CHECK(print_instance(doc2) == printed);
    }
    Profile tiny = profile_by_name("tiny");
    Profile small = profile_by_name("small");
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        InstanceDocument doc = generate_random_instance(seed, seed % 2 ? tiny : small);
        std::string printed = print_instance(doc);
        INFO("seed " << seed << "\n" << printed);
        InstanceDocument doc2 = parse_instance(printed);
        CHECK(doc == doc2);
        CHECK(print_instance(doc2) == printed);
    }
}

TEST_CASE("expressions are stored in canonical form") {
    const std::string text = "field Q\n"
                             "algebra A\n"
                             "  gen y deg 1 d 0\n"
                             "algebra B extends A\n"
                             "  gen x deg 2 d (y)\n"
                             "module N over B\n"
                             "  basis e0 deg 0\n"
                             "  basis e1 deg 4\n"
                             "  d e1 = e0 * (x*y + x*y)\n";
    InstanceDocument doc = parse_instance(text);
    CHECK(doc.algebras[1].gens[0].dexpr == "y");
    REQUIRE(doc.modules[0].diffs.size() == 1);
    CHECK(doc.modules[0].diffs[0].expr == "e0 * 2*y*x");
    // zero module differentials disappear from the canonical form
    const std::string zero_text = "field Q\n"
                                  "algebra B\n"
                                  "  gen x deg 2 d 0\n"
                                  "module N over B\n"
                                  "  basis e0 deg 0\n"
                                  "  d e0 = 0\n";
    CHECK(parse_instance(zero_text).modules[0].diffs.empty());
}

TEST_CASE("parse errors carry line positions and clear messages") {
    CHECK(error_line("", "empty document") == 1);
    CHECK(error_line("algebra A\n", "expected 'field'") == 1);
    CHECK(error_line("field R\n", "expected 'Q' or 'Fp'") == 1);
    CHECK(error_line("field Fp 2\n", "odd prime") == 1);
    CHECK(error_line("field Fp 9\n", "odd prime") == 1);
    CHECK(error_line("field Q\n  gen x deg 2 d 0\n", "outside any section") == 2);
    CHECK(error_line("field Q\nalgebra A\n  gen x deg 0 d 0\n", "degree") == 3);
    CHECK(error_line("field Q\nalgebra A\n  gen x deg 2 d z\n", "unknown name 'z'") == 3);
    CHECK(error_line("field Q\nalgebra A\n  gen x deg 2 d x\n", "unknown name 'x'") == 3);
    CHECK(error_line("field Q\nalgebra A\n  gen y deg 1 d 0\n  gen x deg 3 d y\n",
                     "wrong degree") == 4);
    CHECK(error_line("field Q\nalgebra A\n  gen y deg 1 d 0\n  gen z deg 2 d 0\n"
                     "  gen w deg 3 d y + z\n",
                     "not homogeneous") == 5);
    CHECK(error_line("field Q\nalgebra A\n  gen y deg 1 d 0\n  gen y deg 2 d 0\n",
                     "duplicate") == 4);
    CHECK(error_line("field Q\nalgebra module\n", "reserved word") == 2);
    CHECK(error_line("field Q\nalgebra A\nalgebra A\n", "duplicate name 'A'") == 3);
    CHECK(error_line("field Q\nalgebra B extends A\n", "undeclared algebra") == 2);
    CHECK(error_line("field Q\nmodule N over B\n", "unknown algebra 'B'") == 2);
    CHECK(error_line("field Q\nderivation D deg 1\n", "before any algebra") == 2);
    CHECK(error_line("field Q\nalgebra B\n  gen x deg 2 d 2 x\n", "trailing token") == 3);
    CHECK(error_line("field Q\nalgebra B\n  gen x deg 2 d 1/0\n", "zero denominator") == 3);
    CHECK(error_line("field Fp 3\nalgebra B\n  gen x deg 2 d 0\n"
                     "module N over B\n  basis e0 deg 0\n  basis e1 deg 3\n"
                     "  d e1 = e0 * 1/3*x\n",
                     "denominator vanishes") == 7);

    // module-side failures
    const std::string mod_head = "field Q\nalgebra B\n  gen x deg 2 d 0\n"
                                 "module N over B\n  basis e0 deg 0\n  basis e1 deg 3\n";
    CHECK(error_line(mod_head + "  d e0 = e1 * x\n", "later basis element") == 7);
    CHECK(error_line(mod_head + "  d e1 = e1 * x\n", "references itself") == 7);
    CHECK(error_line(mod_head + "  d e1 = e0 * x\n  d e1 = e0 * x\n",
                     "duplicate differential") == 8);
    CHECK(error_line(mod_head + "  d e2 = e0 * x\n", "unknown basis element 'e2'") == 7);
    CHECK(error_line(mod_head + "  d e1 = x\n", "must be a module element") == 7);
    CHECK(error_line(mod_head + "  d e1 = e0 * x + e0\n", "not homogeneous") == 7);
    CHECK(error_line(mod_head + "  d e1 = x * e0\n",
                     "cannot multiply a module element from the left") == 7);
    CHECK(error_line(mod_head + "  basis e0 deg 4\n", "duplicate basis id") == 7);

    // the K2 variant with the basis element one degree too low: the
    // coefficient of e1 would need degree 2, but x*y has degree 3
    CHECK(error_line("field Q\nalgebra A\n  gen y deg 1 d 0\n"
                     "algebra B extends A\n  gen x deg 2 d y\n"
                     "module N over B\n  basis e0 deg 0\n  basis e1 deg 3\n"
                     "  d e1 = e0 * x*y\n",
                     "wrong degree") == 9);

    // derivation-side failures
    const std::string der_head = "field Q\nalgebra A\n  gen y deg 1 d 0\n"
                                 "algebra B extends A\n  gen x deg 2 d y\n";
    CHECK(error_line(der_head + "derivation D deg 1\n  image y = x\n",
                     "vanish on base generators") == 7);
    CHECK(error_line(der_head + "derivation D deg 1\n  image x = y\n", "wrong degree") == 7);
    CHECK(error_line(der_head + "derivation D deg 1\n  image z = x\n",
                     "unknown generator 'z'") == 7);
    CHECK(error_line(der_head + "derivation D deg 1\n  image x = x*y\n  image x = x*y\n",
                     "duplicate image") == 8);

    // column information points at the offending token
    try {
        parse_instance("field Q\nalgebra B\n  gen x deg 2 d qq\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.col == 17);
    }
}

TEST_CASE("validation catches d squared failures the grammar cannot see") {
    // d(z) = x is degree-correct, but d(d(z)) = y is not zero
    Elaboration bad_alg = elaborate(parse_instance("field Q\n"
                                                   "algebra A\n"
                                                   "  gen y deg 1 d 0\n"
                                                   "algebra B extends A\n"
                                                   "  gen x deg 2 d y\n"
                                                   "  gen z deg 3 d x\n"));
    ValidationReport rep = validate_instance(bad_alg);
    CHECK(!rep.ok());
    bool found = false;
    for (const ValidationIssue& i : rep.issues)
        if (i.subject.rfind("B.", 0) == 0) found = true;
    CHECK(found);

    // module differentials can also square to something nonzero
    Elaboration bad_mod = elaborate(parse_instance("field Q\n"
                                                   "algebra B\n"
                                                   "  gen x deg 2 d 0\n"
                                                   "module N over B\n"
                                                   "  basis e0 deg 0\n"
                                                   "  basis e1 deg 1\n"
                                                   "  basis e2 deg 2\n"
                                                   "  d e1 = e0\n"
                                                   "  d e2 = e1\n"));
    ValidationReport rep2 = validate_instance(bad_mod);
    CHECK(!rep2.ok());
    bool found2 = false;
    for (const ValidationIssue& i : rep2.issues)
        if (i.subject.rfind("N.", 0) == 0) found2 = true;
    CHECK(found2);
}

TEST_CASE("generated documents validate and elaborate cleanly") {
    int fp_seen = 0;
    int with_derivation = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Profile prof = profile_by_name(seed % 3 == 0 ? "small" : "tiny");
        InstanceDocument doc = generate_random_instance(seed, prof);
        INFO("seed " << seed << "\n" << print_instance(doc));
        Elaboration el = elaborate(doc);
        CHECK(validate_instance(el).ok());
        REQUIRE(el.modules.size() == 1);
        CHECK(el.modules[0]->validate().ok());
        if (doc.field.p != 0) ++fp_seen;
        if (!doc.derivations.empty()) ++with_derivation;
    }
    CHECK(fp_seen > 10);
    CHECK(with_derivation > 50);
}

TEST_CASE("generation is deterministic in seed and profile") {
    Profile small = profile_by_name("small");
    std::set<std::string> prints;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        std::string a = print_instance(generate_random_instance(seed, small));
        std::string b = print_instance(generate_random_instance(seed, small));
        CHECK(a == b);
        prints.insert(a);
    }
    CHECK(prints.size() >= 10);
    CHECK_THROWS_AS(profile_by_name("huge"), std::invalid_argument);
}

TEST_CASE("a profile without extension generators makes every module lift trivially") {
    Profile flat = profile_by_name("tiny");
    flat.max_ext_gens = 0;
    flat.mixed_fields = false;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        InstanceDocument doc = generate_random_instance(seed, flat);
        Elaboration el = elaborate(doc);
        LiftContext ctx(*el.modules[0]);
        LiftReport rep = decide_naive_lifting(ctx);
        INFO("seed " << seed << "\n" << print_instance(doc));
        CHECK(rep.liftable);
        REQUIRE(rep.f.has_value());
        CHECK(rep.f->is_zero());
        CHECK(rep.verified());
    }
}

TEST_CASE("F_p documents round-trip with normalized coefficients") {
    const std::string text = "field Fp 5\n"
                             "algebra A\n"
                             "  gen y deg 1 d 0\n"
                             "algebra B extends A\n"
                             "  gen x deg 2 d y\n"
                             "module N over B\n"
                             "  basis e0 deg 0\n"
                             "  basis e1 deg 4\n"
                             "  d e1 = e0 * 1/2*x*y\n";
    InstanceDocument doc = parse_instance(text);
    CHECK(doc.field.p == 5);
    CHECK(doc.modules[0].diffs[0].expr == "e0 * 3*y*x");
    InstanceDocument doc2 = parse_instance(print_instance(doc));
    CHECK(doc == doc2);
    Elaboration el = elaborate(doc);
    CHECK(validate_instance(el).ok());
    LiftContext ctx(*el.modules[0]);
    LiftReport rep = decide_naive_lifting(ctx);
    CHECK(rep.liftable);
    CHECK(rep.verified());
}
