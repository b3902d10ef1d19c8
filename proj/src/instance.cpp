#include "dghom/instance.hpp"

#include <cctype>
#include <cstdlib>

namespace dghom {

namespace {

// ---------------------------------------------------------------- lexing

struct Token {
    enum Kind { Ident, Number, Op, End } kind = End;
    std::string text;
    int col = 0;
};

[[noreturn]] void fail(const std::string& msg, int line, int col) {
    throw ParseError(msg, line, col);
}

std::vector<Token> lex_line(const std::string& s, int line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        int col = static_cast<int>(i) + 1;
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t j = i + 1;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Token::Ident, s.substr(i, j - i), col});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j < s.size() && s[j] == '/') {
                size_t k = j + 1;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                if (k == j + 1) fail("malformed rational literal", line, col);
                j = k;
            }
            out.push_back({Token::Number, s.substr(i, j - i), col});
            i = j;
        } else if (c == '+' || c == '-' || c == '*' || c == '(' || c == ')' || c == '=') {
            out.push_back({Token::Op, std::string(1, c), col});
            ++i;
        } else {
            fail(std::string("unexpected character '") + c + "'", line, col);
        }
    }
    out.push_back({Token::End, "", static_cast<int>(s.size()) + 1});
    return out;
}

bool reserved_word(const std::string& s) {
    static const char* words[] = {"field",  "algebra",    "extends", "module", "over", "basis",
                                  "gen",    "derivation", "image",   "deg",    "d",    "Q",
                                  "Fp"};
    for (const char* w : words)
        if (s == w) return true;
    return false;
}

struct Line {
    int number = 0;
    bool indented = false;
    std::vector<Token> toks;
};

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> out;
    int number = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string raw =
            text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        ++number;
        bool blank = true;
        for (char c : raw)
            if (!std::isspace(static_cast<unsigned char>(c))) {
                blank = false;
                break;
            }
        if (!blank) {
            Line l;
            l.number = number;
            l.indented = std::isspace(static_cast<unsigned char>(raw[0])) != 0;
            l.toks = lex_line(raw, number);
            out.push_back(std::move(l));
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return out;
}

// ------------------------------------------------------- expression parse

struct Value {
    bool is_mod = false;
    AlgebraElement a;
    ModuleElement m;
};

struct ExprCtx {
    const DgAlgebra* alg = nullptr;
    const SemifreeModule* mod = nullptr;
    int basis_limit = -1; // strict bound on usable basis indices, -1: no bound
    int line = 0;
};

class ExprParser {
  public:
    ExprParser(const std::vector<Token>& toks, size_t start, const ExprCtx& ctx)
        : t_(toks), pos_(start), ctx_(ctx) {}

    Value run() {
        Value v = expr();
        if (t_[pos_].kind != Token::End)
            fail("unexpected trailing token '" + t_[pos_].text + "'", ctx_.line, t_[pos_].col);
        return v;
    }

  private:
    const std::vector<Token>& t_;
    size_t pos_;
    const ExprCtx& ctx_;

    const Token& cur() const { return t_[pos_]; }
    bool at_op(const char* o) const { return cur().kind == Token::Op && cur().text == o; }

    Value expr() {
        Value v = term();
        while (at_op("+") || at_op("-")) {
            bool plus = cur().text == "+";
            int col = cur().col;
            ++pos_;
            Value r = term();
            v = combine_add(std::move(v), std::move(r), plus, col);
        }
        return v;
    }

    Value term() {
        Value v = factor();
        while (at_op("*")) {
            int col = cur().col;
            ++pos_;
            Value r = factor();
            v = combine_mul(std::move(v), std::move(r), col);
        }
        return v;
    }

    Value factor() {
        if (at_op("-")) {
            ++pos_;
            Value v = factor();
            if (v.is_mod)
                v.m = -v.m;
            else
                v.a = -v.a;
            return v;
        }
        return primary();
    }

    Value primary() {
        const Token& tk = cur();
        if (tk.kind == Token::Ident) {
            ++pos_;
            return resolve(tk);
        }
        if (tk.kind == Token::Number) {
            ++pos_;
            Value v;
            v.a = ctx_.alg->from_scalar(literal(tk));
            return v;
        }
        if (at_op("(")) {
            int col = tk.col;
            ++pos_;
            Value v = expr();
            if (!at_op(")")) fail("expected ')'", ctx_.line, col);
            ++pos_;
            return v;
        }
        fail("expected an identifier, number, or '('", ctx_.line, tk.col);
    }

    Scalar literal(const Token& tk) const {
        const Field& f = ctx_.alg->field();
        size_t slash = tk.text.find('/');
        try {
            long num = std::stol(tk.text.substr(0, slash));
            if (slash == std::string::npos) return Scalar::of(num, f);
            long den = std::stol(tk.text.substr(slash + 1));
            if (den == 0) fail("zero denominator", ctx_.line, tk.col);
            if (f.p == 0) return Scalar::rational(num, den);
            Scalar d = Scalar::of(den, f);
            if (d.is_zero()) fail("denominator vanishes in F_p", ctx_.line, tk.col);
            return Scalar::of(num, f) / d;
        } catch (const std::out_of_range&) {
            fail("numeric literal out of range", ctx_.line, tk.col);
        }
    }

    Value resolve(const Token& tk) const {
        if (ctx_.mod != nullptr) {
            int bi = ctx_.mod->index_of(tk.text);
            if (bi >= 0) {
                if (ctx_.basis_limit >= 0 && bi >= ctx_.basis_limit)
                    fail("'" + tk.text + "' references itself or a later basis element",
                         ctx_.line, tk.col);
                Value v;
                v.is_mod = true;
                v.m = ctx_.mod->basis_elem(bi);
                return v;
            }
        }
        int gi = ctx_.alg->index_of(tk.text);
        if (gi < 0) fail("unknown name '" + tk.text + "'", ctx_.line, tk.col);
        Value v;
        v.a = ctx_.alg->generator(gi);
        return v;
    }

    Value combine_add(Value l, Value r, bool plus, int col) const {
        // a zero scalar summand may stand in for the zero module element
        if (l.is_mod != r.is_mod) {
            if (!l.is_mod && l.a.is_zero() && ctx_.mod != nullptr) {
                l.is_mod = true;
                l.m = ctx_.mod->zero();
            } else if (!r.is_mod && r.a.is_zero() && ctx_.mod != nullptr) {
                r.is_mod = true;
                r.m = ctx_.mod->zero();
            } else {
                fail("cannot add a module element and an algebra element", ctx_.line, col);
            }
        }
        if (l.is_mod)
            l.m = plus ? l.m + r.m : l.m - r.m;
        else
            l.a = plus ? l.a + r.a : l.a - r.a;
        return l;
    }

    Value combine_mul(Value l, Value r, int col) const {
        if (l.is_mod && r.is_mod) fail("cannot multiply two module elements", ctx_.line, col);
        if (!l.is_mod && r.is_mod)
            fail("an algebra factor cannot multiply a module element from the left", ctx_.line,
                 col);
        if (l.is_mod)
            l.m = l.m * r.a;
        else
            l.a = l.a * r.a;
        return l;
    }
};

Value eval_expr(const std::vector<Token>& toks, size_t start, const ExprCtx& ctx) {
    return ExprParser(toks, start, ctx).run();
}

Value eval_expr_string(const std::string& s, const ExprCtx& ctx) {
    std::vector<Token> toks = lex_line(s, ctx.line);
    return eval_expr(toks, 0, ctx);
}

// ------------------------------------------------------- document parse

struct Cursor {
    const std::vector<Token>& t;
    size_t pos = 0;
    int line;

    const Token& cur() const { return t[pos]; }

    std::string ident(const std::string& what) {
        if (cur().kind != Token::Ident) fail("expected " + what, line, cur().col);
        std::string s = cur().text;
        ++pos;
        return s;
    }

    std::string fresh_ident(const std::string& what) {
        int col = cur().col;
        std::string s = ident(what);
        if (reserved_word(s)) fail("'" + s + "' is a reserved word", line, col);
        return s;
    }

    void keyword(const char* k) {
        if (cur().kind != Token::Ident || cur().text != k)
            fail(std::string("expected '") + k + "'", line, cur().col);
        ++pos;
    }

    void op(const char* o) {
        if (cur().kind != Token::Op || cur().text != o)
            fail(std::string("expected '") + o + "'", line, cur().col);
        ++pos;
    }

    int integer(bool allow_negative) {
        bool neg = false;
        if (allow_negative && cur().kind == Token::Op && cur().text == "-") {
            neg = true;
            ++pos;
        }
        if (cur().kind != Token::Number || cur().text.find('/') != std::string::npos)
            fail("expected an integer", line, cur().col);
        if (cur().text.size() > 9) fail("integer too large", line, cur().col);
        int v = std::atoi(cur().text.c_str());
        ++pos;
        return neg ? -v : v;
    }

    void end() {
        if (cur().kind != Token::End)
            fail("unexpected trailing token '" + cur().text + "'", line, cur().col);
    }

    bool at_end() const { return cur().kind == Token::End; }
};

bool is_prime(unsigned long p) {
    if (p < 2) return false;
    for (unsigned long q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

struct ParseOutput {
    InstanceDocument doc;
    Elaboration elab;
};

// own generators of spec k plus, transitively, those of its ancestors
std::vector<const AlgebraSpec*> ancestor_chain(const InstanceDocument& doc, int k) {
    std::vector<const AlgebraSpec*> chain;
    int cur = k;
    while (true) {
        const AlgebraSpec& s = doc.algebras[static_cast<size_t>(cur)];
        if (s.extends.empty()) break;
        int next = -1;
        for (size_t i = 0; i < doc.algebras.size(); ++i)
            if (doc.algebras[i].name == s.extends) next = static_cast<int>(i);
        chain.insert(chain.begin(), &doc.algebras[static_cast<size_t>(next)]);
        cur = next;
    }
    return chain;
}

ParseOutput parse_full(const std::string& text) {
    ParseOutput out;
    InstanceDocument& doc = out.doc;
    Elaboration& el = out.elab;

    std::vector<Line> lines = split_lines(text);
    if (lines.empty()) fail("empty document", 1, 1);

    size_t li = 0;
    {
        Cursor c{lines[0].toks, 0, lines[0].number};
        if (lines[0].indented) fail("the document must start with a field line", c.line, 1);
        c.keyword("field");
        if (c.cur().kind != Token::Ident) fail("expected 'Q' or 'Fp'", c.line, c.cur().col);
        if (c.cur().text == "Q") {
            ++c.pos;
            doc.field = Field{0};
        } else if (c.cur().text == "Fp") {
            ++c.pos;
            int col = c.cur().col;
            int p = c.integer(false);
            if (p < 3 || !is_prime(static_cast<unsigned long>(p)))
                fail("Fp requires an odd prime", c.line, col);
            doc.field = Field{static_cast<unsigned long>(p)};
        } else {
            fail("expected 'Q' or 'Fp'", c.line, c.cur().col);
        }
        c.end();
        ++li;
    }

    enum class Section { None, Algebra, Module, Derivation };
    Section section = Section::None;
    std::vector<bool> mod_has_diff; // per current module basis element

    auto check_unique_top = [&doc](const std::string& name, int line, int col) {
        for (const AlgebraSpec& a : doc.algebras)
            if (a.name == name) fail("duplicate name '" + name + "'", line, col);
        for (const ModuleSpec& m : doc.modules)
            if (m.name == name) fail("duplicate name '" + name + "'", line, col);
        for (const DerivationSpec& d : doc.derivations)
            if (d.name == name) fail("duplicate name '" + name + "'", line, col);
    };

    for (; li < lines.size(); ++li) {
        Cursor c{lines[li].toks, 0, lines[li].number};
        if (!lines[li].indented) {
            if (c.cur().kind != Token::Ident)
                fail("expected 'algebra', 'module', or 'derivation'", c.line, c.cur().col);
            const std::string head = c.cur().text;
            if (head == "algebra") {
                ++c.pos;
                int ncol = c.cur().col;
                std::string name = c.fresh_ident("an algebra name");
                check_unique_top(name, c.line, ncol);
                AlgebraSpec spec;
                spec.name = name;
                if (!c.at_end()) {
                    c.keyword("extends");
                    int ecol = c.cur().col;
                    spec.extends = c.ident("a base algebra name");
                    bool found = false;
                    for (const AlgebraSpec& a : doc.algebras)
                        if (a.name == spec.extends) found = true;
                    if (!found)
                        fail("extends an undeclared algebra '" + spec.extends + "'", c.line,
                             ecol);
                }
                c.end();
                doc.algebras.push_back(std::move(spec));
                auto alg = std::make_unique<DgAlgebra>(doc.field, name);
                // replay the ancestor chain as base generators
                for (const AlgebraSpec* anc :
                     ancestor_chain(doc, static_cast<int>(doc.algebras.size()) - 1))
                    for (const GenSpec& g : anc->gens) {
                        ExprCtx ctx{alg.get(), nullptr, -1, c.line};
                        Value v = eval_expr_string(g.dexpr, ctx);
                        alg->add_generator(g.id, g.degree, true, v.a);
                    }
                el.algebras.push_back(std::move(alg));
                section = Section::Algebra;
            } else if (head == "module") {
                ++c.pos;
                int ncol = c.cur().col;
                std::string name = c.fresh_ident("a module name");
                check_unique_top(name, c.line, ncol);
                c.keyword("over");
                int acol = c.cur().col;
                std::string over = c.ident("an algebra name");
                c.end();
                int ai = el.algebra_index(over);
                if (ai < 0) fail("unknown algebra '" + over + "'", c.line, acol);
                ModuleSpec spec;
                spec.name = name;
                spec.over = over;
                doc.modules.push_back(std::move(spec));
                el.modules.push_back(std::make_unique<SemifreeModule>(
                    el.algebras[static_cast<size_t>(ai)].get(), name));
                el.module_algebra.push_back(ai);
                mod_has_diff.clear();
                section = Section::Module;
            } else if (head == "derivation") {
                ++c.pos;
                int ncol = c.cur().col;
                std::string name = c.fresh_ident("a derivation name");
                check_unique_top(name, c.line, ncol);
                c.keyword("deg");
                int degree = c.integer(true);
                c.end();
                if (el.algebras.empty())
                    fail("derivation declared before any algebra", c.line, 1);
                DerivationSpec spec;
                spec.name = name;
                spec.degree = degree;
                doc.derivations.push_back(std::move(spec));
                ElaboratedDerivation ed;
                ed.name = name;
                // derivations attach to the most recently declared algebra
                ed.algebra = static_cast<int>(el.algebras.size()) - 1;
                ed.degree = degree;
                const DgAlgebra& b = *el.algebras[static_cast<size_t>(ed.algebra)];
                ed.images.assign(static_cast<size_t>(b.size()), b.zero());
                el.derivations.push_back(std::move(ed));
                section = Section::Derivation;
            } else {
                fail("expected 'algebra', 'module', or 'derivation'", c.line, c.cur().col);
            }
            continue;
        }

        // indented member line of the current section
        switch (section) {
        case Section::None:
            fail("indented line outside any section", c.line, c.cur().col);
        case Section::Algebra: {
            c.keyword("gen");
            int icol = c.cur().col;
            std::string id = c.fresh_ident("a generator name");
            c.keyword("deg");
            int degree = c.integer(false);
            c.keyword("d");
            DgAlgebra& alg = *el.algebras.back();
            ExprCtx ctx{&alg, nullptr, -1, c.line};
            Value v = eval_expr(lines[li].toks, c.pos, ctx);
            if (v.is_mod) fail("generator differential must be an algebra element", c.line, icol);
            if (!v.a.is_zero() && !v.a.is_homogeneous())
                fail("generator differential is not homogeneous", c.line, icol);
            if (!v.a.is_zero() && *v.a.degree() != degree - 1)
                fail("generator differential has the wrong degree", c.line, icol);
            try {
                alg.add_generator(id, degree, false, v.a);
            } catch (const std::invalid_argument& e) {
                fail(e.what(), c.line, icol);
            }
            GenSpec g;
            g.id = id;
            g.degree = degree;
            g.dexpr = doc_expr(v.a);
            doc.algebras.back().gens.push_back(std::move(g));
            break;
        }
        case Section::Module: {
            if (c.cur().kind == Token::Ident && c.cur().text == "basis") {
                ++c.pos;
                int icol = c.cur().col;
                std::string id = c.fresh_ident("a basis name");
                c.keyword("deg");
                int degree = c.integer(false);
                c.end();
                try {
                    el.modules.back()->add_basis_element(id, degree);
                } catch (const std::invalid_argument& e) {
                    fail(e.what(), c.line, icol);
                }
                mod_has_diff.push_back(false);
                doc.modules.back().basis.push_back({id, degree});
                break;
            }
            c.keyword("d");
            int icol = c.cur().col;
            std::string id = c.ident("a basis name");
            SemifreeModule& mod = *el.modules.back();
            int bi = mod.index_of(id);
            if (bi < 0) fail("unknown basis element '" + id + "'", c.line, icol);
            if (mod_has_diff[static_cast<size_t>(bi)])
                fail("duplicate differential for '" + id + "'", c.line, icol);
            c.op("=");
            const DgAlgebra& alg = mod.algebra();
            ExprCtx ctx{&alg, &mod, bi, c.line};
            Value v = eval_expr(lines[li].toks, c.pos, ctx);
            mod_has_diff[static_cast<size_t>(bi)] = true;
            if (!v.is_mod) {
                if (!v.a.is_zero())
                    fail("module differential must be a module element or 0", c.line, icol);
                break; // zero differential, omitted from the canonical form
            }
            if (v.m.is_zero()) break;
            if (!v.m.is_homogeneous())
                fail("differential of '" + id + "' is not homogeneous", c.line, icol);
            if (*v.m.degree() != mod.basis(bi).degree - 1)
                fail("differential of '" + id + "' has the wrong degree", c.line, icol);
            try {
                for (const auto& [mu, coeff] : v.m.components())
                    mod.set_coefficient(mu, bi, coeff);
            } catch (const std::invalid_argument& e) {
                fail(e.what(), c.line, icol);
            }
            doc.modules.back().diffs.push_back({id, doc_expr(v.m)});
            break;
        }
        case Section::Derivation: {
            c.keyword("image");
            int icol = c.cur().col;
            std::string id = c.ident("a generator name");
            ElaboratedDerivation& ed = el.derivations.back();
            const DgAlgebra& alg = *el.algebras[static_cast<size_t>(ed.algebra)];
            int gi = alg.index_of(id);
            if (gi < 0) fail("unknown generator '" + id + "'", c.line, icol);
            if (alg.gen(gi).base)
                fail("derivations vanish on base generators; '" + id + "' is one", c.line,
                     icol);
            if (!ed.images[static_cast<size_t>(gi)].is_zero())
                fail("duplicate image for '" + id + "'", c.line, icol);
            c.op("=");
            ExprCtx ctx{&alg, nullptr, -1, c.line};
            Value v = eval_expr(lines[li].toks, c.pos, ctx);
            if (v.is_mod) fail("derivation image must be an algebra element", c.line, icol);
            if (v.a.is_zero()) break;
            if (!v.a.is_homogeneous() || *v.a.degree() != ed.degree + alg.gen(gi).degree)
                fail("image of '" + id + "' has the wrong degree", c.line, icol);
            ed.images[static_cast<size_t>(gi)] = v.a;
            doc.derivations.back().images.push_back({id, doc_expr(v.a)});
            break;
        }
        }
    }
    return out;
}

} // namespace

int Elaboration::algebra_index(const std::string& name) const {
    for (size_t i = 0; i < algebras.size(); ++i)
        if (algebras[i]->name() == name) return static_cast<int>(i);
    return -1;
}

int Elaboration::module_index(const std::string& name) const {
    for (size_t i = 0; i < modules.size(); ++i)
        if (modules[i]->name() == name) return static_cast<int>(i);
    return -1;
}

std::string doc_expr(const AlgebraElement& v) {
    if (v.is_zero()) return "0";
    const DgAlgebra& b = *v.algebra();
    std::string out;
    bool first = true;
    for (const auto& [m, c] : v.terms()) {
        std::string cs = c.str();
        bool neg = !cs.empty() && cs[0] == '-';
        std::string mag = neg ? cs.substr(1) : cs;
        std::string piece;
        if (m.is_one()) {
            piece = mag;
        } else {
            std::string chain;
            for (const auto& [g, e] : m.factors)
                for (int k = 0; k < e; ++k) {
                    if (!chain.empty()) chain += "*";
                    chain += b.gen(g).name;
                }
            piece = (mag == "1") ? chain : mag + "*" + chain;
        }
        if (first) {
            out = neg ? "-" + piece : piece;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + piece;
        }
    }
    return out;
}

std::string doc_expr(const ModuleElement& v) {
    if (v.is_zero()) return "0";
    const SemifreeModule& n = *v.module();
    std::string out;
    bool first = true;
    for (const auto& [l, c] : v.components()) {
        const std::string id = n.basis(l).id;
        std::string piece;
        bool neg = false;
        if (c.terms().size() == 1) {
            const auto& [m, coeff] = *c.terms().begin();
            std::string cs = coeff.str();
            neg = !cs.empty() && cs[0] == '-';
            std::string mag = neg ? cs.substr(1) : cs;
            std::string chain;
            for (const auto& [g, e] : m.factors)
                for (int k = 0; k < e; ++k) {
                    if (!chain.empty()) chain += "*";
                    chain += n.algebra().gen(g).name;
                }
            if (chain.empty())
                piece = (mag == "1") ? id : id + " * " + mag;
            else
                piece = (mag == "1") ? id + " * " + chain : id + " * " + mag + "*" + chain;
        } else {
            piece = id + " * (" + doc_expr(c) + ")";
        }
        if (first) {
            out = neg ? "-" + piece : piece;
            first = false;
        } else {
            out += (neg ? " - " : " + ") + piece;
        }
    }
    return out;
}

InstanceDocument parse_instance(const std::string& text) { return parse_full(text).doc; }

Elaboration elaborate(const InstanceDocument& doc) {
    return parse_full(print_instance(doc)).elab;
}

std::string print_instance(const InstanceDocument& doc) {
    std::string out = "field " + (doc.field.p == 0 ? std::string("Q")
                                                   : "Fp " + std::to_string(doc.field.p));
    out += "\n";
    for (const AlgebraSpec& a : doc.algebras) {
        out += "algebra " + a.name;
        if (!a.extends.empty()) out += " extends " + a.extends;
        out += "\n";
        for (const GenSpec& g : a.gens)
            out += "  gen " + g.id + " deg " + std::to_string(g.degree) + " d " + g.dexpr + "\n";
    }
    for (const ModuleSpec& m : doc.modules) {
        out += "module " + m.name + " over " + m.over + "\n";
        for (const BasisSpec& b : m.basis)
            out += "  basis " + b.id + " deg " + std::to_string(b.degree) + "\n";
        for (const DiffSpec& d : m.diffs) out += "  d " + d.id + " = " + d.expr + "\n";
    }
    for (const DerivationSpec& d : doc.derivations) {
        out += "derivation " + d.name + " deg " + std::to_string(d.degree) + "\n";
        for (const ImageSpec& im : d.images) out += "  image " + im.gen + " = " + im.expr + "\n";
    }
    return out;
}

ValidationReport validate_instance(const Elaboration& e) {
    ValidationReport rep;
    for (const auto& a : e.algebras) {
        ValidationReport r = a->validate();
        for (ValidationIssue& i : r.issues) {
            i.subject = a->name() + "." + i.subject;
            rep.issues.push_back(std::move(i));
        }
    }
    for (const auto& m : e.modules) {
        ValidationReport r = m->validate();
        for (ValidationIssue& i : r.issues) {
            i.subject = m->name() + "." + i.subject;
            rep.issues.push_back(std::move(i));
        }
    }
    return rep;
}

} // namespace dghom
