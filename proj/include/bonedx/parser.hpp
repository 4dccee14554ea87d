#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lexer.hpp"
#include "model.hpp"

namespace bonedx {

namespace detail {

struct ParseAbort {};

// Token cursor with error collection. `fail` records an error and unwinds to
// the statement loop, which resynchronises on the statement's closing paren.
class TokenCursor {
public:
    TokenCursor(std::string_view text, std::string file) : tokens_(Lexer(text).tokenize()), file_(std::move(file)) {}

    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(idx_ + ahead, tokens_.size() - 1)];
    }
    std::size_t position() const { return idx_; }
    bool atEnd() const { return peek().kind == TokenKind::End; }

    Token take() {
        const Token& t = peek();
        if (t.kind == TokenKind::Error) fail(t, "a valid token");
        if (idx_ + 1 < tokens_.size()) ++idx_;
        return t;
    }

    // Advances without validating the current token.
    void skip() {
        if (idx_ + 1 < tokens_.size()) ++idx_;
    }

    bool accept(TokenKind k) {
        if (peek().kind != k) return false;
        take();
        return true;
    }

    bool peekIdent(std::string_view text, std::size_t ahead = 0) const {
        return peek(ahead).kind == TokenKind::Ident && peek(ahead).text == text;
    }

    Token expect(TokenKind k, const std::string& what) {
        if (peek().kind != k) fail(peek(), what);
        return take();
    }

    std::string expectIdent(const std::string& what) { return expect(TokenKind::Ident, what).text; }

    void expectKeyword(std::string_view kw) {
        if (!peekIdent(kw)) fail(peek(), "'" + std::string(kw) + "'");
        take();
    }

    [[noreturn]] void fail(const Token& at, const std::string& expected) {
        error(at, expected, describeToken(at));
        throw ParseAbort{};
    }

    void error(const Token& at, const std::string& expected, const std::string& found) {
        errors_.push_back({file_, at.line, at.column, expected, found});
    }

    // Moves past the ')' matching the '(' at token index `open`.
    void syncPast(std::size_t open) {
        int depth = 0;
        for (std::size_t i = open; i < tokens_.size(); ++i) {
            if (tokens_[i].kind == TokenKind::LParen) ++depth;
            if (tokens_[i].kind == TokenKind::RParen && --depth == 0) {
                idx_ = std::min(i + 1, tokens_.size() - 1);
                return;
            }
            if (tokens_[i].kind == TokenKind::End) break;
        }
        idx_ = tokens_.size() - 1;
    }

    std::vector<ParseError> takeErrors() {
        std::stable_sort(errors_.begin(), errors_.end(), [](const ParseError& a, const ParseError& b) {
            return std::tie(a.line, a.column) < std::tie(b.line, b.column);
        });
        // One report per source position.
        errors_.erase(std::unique(errors_.begin(), errors_.end(),
                                  [](const ParseError& a, const ParseError& b) {
                                      return a.line == b.line && a.column == b.column;
                                  }),
                      errors_.end());
        return std::move(errors_);
    }

    bool hasErrors() const { return !errors_.empty(); }

private:
    std::vector<Token> tokens_;
    std::size_t idx_ = 0;
    std::string file_;
    std::vector<ParseError> errors_;
};

inline Literal parseLiteral(TokenCursor& in) {
    const Token& t = in.peek();
    if (t.kind == TokenKind::Integer) {
        try {
            return std::int64_t{std::stoll(in.take().text)};
        } catch (const std::out_of_range&) {
            in.fail(t, "an integer in 64-bit range");
        }
    }
    if (t.kind == TokenKind::String) return in.take().text;
    if (in.peekIdent("dateTime") && in.peek(1).kind == TokenKind::LParen) {
        in.take();
        in.take();
        std::string iso = in.expect(TokenKind::String, "an ISO-8601 string").text;
        in.expect(TokenKind::RParen, "')'");
        return DateTime{iso};
    }
    in.fail(t, "a literal (integer, string or dateTime(...))");
}

inline std::vector<std::string> parseStringList(TokenCursor& in) {
    in.expect(TokenKind::LParen, "'('");
    std::vector<std::string> values;
    std::set<std::string> seen;
    while (in.peek().kind != TokenKind::RParen) {
        const Token& t = in.peek();
        std::string v = in.expect(TokenKind::String, "a string literal or ')'").text;
        if (!seen.insert(v).second) in.fail(t, "a value not already listed");
        values.push_back(std::move(v));
        in.accept(TokenKind::Comma);
    }
    const Token& close = in.peek();
    if (values.empty()) in.fail(close, "at least one string literal");
    in.take();
    return values;
}

class OntologyParser {
public:
    OntologyParser(std::string_view text, std::string file) : in_(text, std::move(file)) {}

    Parsed<Ontology> run() {
        Parsed<Ontology> result;
        bool wrapped = in_.peekIdent("Ontology") && in_.peek(1).kind == TokenKind::LParen;
        if (wrapped) {
            in_.take();
            in_.take();
            try {
                onto_.name = in_.expectIdent("an ontology name");
            } catch (const ParseAbort&) {
            }
        }
        while (!in_.atEnd()) {
            if (wrapped && in_.peek().kind == TokenKind::RParen) {
                in_.skip();
                closed_ = true;
                if (!in_.atEnd()) in_.error(in_.peek(), "end of input after the ontology", describeToken(in_.peek()));
                break;
            }
            statement();
        }
        if (wrapped && !closed_ && in_.atEnd()) in_.error(in_.peek(), "')' closing the ontology", "end of input");
        result.errors = in_.takeErrors();
        if (result.errors.empty()) result.value = std::move(onto_);
        return result;
    }

private:
    void statement() {
        const Token head = in_.peek();
        if (head.kind != TokenKind::Ident) {
            in_.error(head, "a statement keyword", describeToken(head));
            in_.skip();
            return;
        }
        in_.skip();
        const std::size_t open = in_.position();
        try {
            in_.expect(TokenKind::LParen, "'(' after " + head.text);
            dispatch(head);
        } catch (const ParseAbort&) {
            if (in_.peek(0).kind == TokenKind::End) return;
            if (in_.position() == open && in_.peek().kind != TokenKind::LParen) return;
            in_.syncPast(open);
        }
    }

    void dispatch(const Token& head) {
        const std::string& kw = head.text;
        if (kw == "Class") return classDecl();
        if (kw == "SubClassOf") {
            auto cs = conceptList();
            if (cs.size() != 2) in_.fail(in_.peek(), "two concept expressions");
            in_.take();
            onto_.axioms.push_back(SubClassOf{cs[0], cs[1]});
            return;
        }
        if (kw == "EquivalentClasses") {
            auto cs = conceptList();
            if (cs.size() != 2) in_.fail(in_.peek(), "two concept expressions");
            in_.take();
            onto_.axioms.push_back(EquivalentClasses{cs[0], cs[1]});
            return;
        }
        if (kw == "DisjointClasses") {
            auto cs = conceptList();
            if (cs.size() < 2) in_.fail(in_.peek(), "at least two concept expressions");
            in_.take();
            onto_.axioms.push_back(DisjointClasses{std::move(cs)});
            return;
        }
        if (kw == "ObjectProperty") return objectProperty();
        if (kw == "DataProperty") return dataProperty();
        if (kw == "SubPropertyChainOf") return chain();
        if (kw == "InverseOf") {
            InverseOf inv;
            inv.first = in_.expectIdent("an object property name");
            inv.second = in_.expectIdent("an object property name");
            in_.expect(TokenKind::RParen, "')'");
            onto_.axioms.push_back(inv);
            return;
        }
        if (kw == "Individual") return individual();
        in_.fail(head, "a statement keyword (Class, SubClassOf, EquivalentClasses, DisjointClasses, ObjectProperty, "
                       "DataProperty, SubPropertyChainOf, InverseOf, Individual)");
    }

    std::string declName(std::map<std::string, int>& seen, const char* what) {
        const Token t = in_.peek();
        std::string name = in_.expectIdent(std::string("a ") + what + " name");
        if (name == "Thing" || name == "Nothing") in_.fail(t, std::string("a ") + what + " name other than Thing/Nothing");
        if (auto it = seen.find(name); it != seen.end())
            in_.fail(t, std::string("a ") + what + " not already declared (first declared at line " +
                            std::to_string(it->second) + ")");
        seen.emplace(name, t.line);
        return name;
    }

    void classDecl() {
        std::string name = declName(classes_, "class");
        in_.expect(TokenKind::RParen, "')'");
        onto_.declaredClasses.insert(name);
    }

    void objectProperty() {
        ObjectPropertyDecl decl;
        decl.name = declName(properties_, "property");
        while (in_.peek().kind != TokenKind::RParen) {
            const Token key = in_.peek();
            std::string k = in_.expectIdent("'domain=' or 'range='");
            in_.expect(TokenKind::Equals, "'='");
            if (k == "domain" && !decl.domain)
                decl.domain = in_.expectIdent("a class name");
            else if (k == "range" && !decl.range)
                decl.range = in_.expectIdent("a class name");
            else
                in_.fail(key, "'domain=' or 'range=' (each at most once)");
        }
        in_.take();
        onto_.axioms.push_back(decl);
    }

    DataRange dataRange() {
        const Token t = in_.peek();
        std::string k = in_.expectIdent("int, string, dateTime or oneOf(...)");
        DataRange r;
        if (k == "int" || k == "integer") r.kind = DataRange::Kind::Integer;
        else if (k == "string") r.kind = DataRange::Kind::String;
        else if (k == "dateTime") r.kind = DataRange::Kind::DateTime;
        else if (k == "oneOf") {
            r.kind = DataRange::Kind::OneOf;
            r.values = parseStringList(in_);
        } else {
            in_.fail(t, "int, string, dateTime or oneOf(...)");
        }
        return r;
    }

    void dataProperty() {
        DataPropertyDecl decl;
        decl.name = declName(properties_, "property");
        while (in_.peek().kind != TokenKind::RParen) {
            const Token key = in_.peek();
            std::string k = in_.expectIdent("'domain=' or 'range='");
            in_.expect(TokenKind::Equals, "'='");
            if (k == "domain" && !decl.domain)
                decl.domain = in_.expectIdent("a class name");
            else if (k == "range" && !decl.range)
                decl.range = dataRange();
            else
                in_.fail(key, "'domain=' or 'range=' (each at most once)");
        }
        in_.take();
        onto_.axioms.push_back(decl);
    }

    void chain() {
        SubPropertyChainOf ax;
        while (in_.peek().kind == TokenKind::Ident) ax.chain.push_back(in_.take().text);
        if (ax.chain.size() < 2) in_.fail(in_.peek(), "a chain of at least two object properties");
        in_.expect(TokenKind::Arrow, "'->'");
        ax.super = in_.expectIdent("the implied object property");
        in_.expect(TokenKind::RParen, "')'");
        onto_.axioms.push_back(ax);
    }

    void individual() {
        std::string name = declName(individuals_, "individual");
        onto_.declaredIndividuals.insert(name);
        std::set<std::string> sections;
        std::vector<Assertion> pending;
        while (in_.peek().kind != TokenKind::RParen) {
            const Token key = in_.peek();
            std::string k = in_.expectIdent("'types=', 'facts=' or 'data='");
            if ((k != "types" && k != "facts" && k != "data") || !sections.insert(k).second)
                in_.fail(key, "'types=', 'facts=' or 'data=' (each at most once)");
            in_.expect(TokenKind::Equals, "'='");
            in_.expect(TokenKind::LParen, "'('");
            while (in_.peek().kind != TokenKind::RParen) {
                if (k == "types") {
                    pending.push_back(ClassAssertion{name, conceptExpr()});
                } else {
                    in_.expect(TokenKind::LParen, "'(' starting a (property value) pair");
                    std::string prop = in_.expectIdent("a property name");
                    if (k == "facts") {
                        std::string obj = in_.expectIdent("an individual name");
                        pending.push_back(ObjectPropertyAssertion{prop, name, obj});
                    } else {
                        pending.push_back(DataPropertyAssertion{prop, name, parseLiteral(in_)});
                    }
                    in_.expect(TokenKind::RParen, "')'");
                }
            }
            in_.take();
        }
        in_.take();
        onto_.abox.insert(onto_.abox.end(), pending.begin(), pending.end());
    }

    // Parses concepts up to (not including) the closing ')'.
    std::vector<ConceptExpr> conceptList() {
        std::vector<ConceptExpr> out;
        while (in_.peek().kind != TokenKind::RParen) {
            if (in_.atEnd()) in_.fail(in_.peek(), "')'");
            out.push_back(conceptExpr());
        }
        return out;
    }

    ConceptExpr conceptExpr() {
        const Token t = in_.peek();
        if (t.kind != TokenKind::Ident) in_.fail(t, "a concept expression");
        const bool call = in_.peek(1).kind == TokenKind::LParen;
        if (!call) {
            in_.take();
            if (t.text == "Thing") return ConceptExpr::top();
            if (t.text == "Nothing") return ConceptExpr::bottom();
            return ConceptExpr::atomic(t.text);
        }
        const std::string& k = t.text;
        if (k != "Not" && k != "And" && k != "Or" && k != "Some" && k != "All" && k != "DataSome")
            in_.fail(t, "a concept constructor (Not, And, Or, Some, All, DataSome) or a class name");
        in_.take();
        in_.take();
        if (k == "Not") {
            auto c = conceptExpr();
            in_.expect(TokenKind::RParen, "')' closing Not");
            return ConceptExpr::negation(std::move(c));
        }
        if (k == "And" || k == "Or") {
            auto cs = conceptList();
            if (cs.size() < 2) in_.fail(in_.peek(), "at least two concept expressions");
            in_.take();
            return k == "And" ? ConceptExpr::conjunction(std::move(cs)) : ConceptExpr::disjunction(std::move(cs));
        }
        if (k == "Some" || k == "All") {
            std::string role = in_.expectIdent("an object property name");
            auto c = conceptExpr();
            in_.expect(TokenKind::RParen, "')' closing " + k);
            return k == "Some" ? ConceptExpr::exists(role, std::move(c)) : ConceptExpr::forAll(role, std::move(c));
        }
        std::string prop = in_.expectIdent("a data property name");
        DataRestriction r = restriction();
        in_.expect(TokenKind::RParen, "')' closing DataSome");
        return ConceptExpr::dataSome(prop, std::move(r));
    }

    DataRestriction restriction() {
        const Token t = in_.peek();
        std::optional<CompareOp> op;
        switch (t.kind) {
            case TokenKind::GreaterEq: op = CompareOp::GreaterEq; break;
            case TokenKind::LessEq: op = CompareOp::LessEq; break;
            case TokenKind::Greater: op = CompareOp::Greater; break;
            case TokenKind::Less: op = CompareOp::Less; break;
            case TokenKind::Equals: op = CompareOp::Equal; break;
            default: break;
        }
        if (op) {
            in_.take();
            const Token b = in_.expect(TokenKind::Integer, "an integer bound");
            try {
                return DataRestriction::compare(*op, std::stoll(b.text));
            } catch (const std::out_of_range&) {
                in_.fail(b, "an integer in 64-bit range");
            }
        }
        if (in_.peekIdent("oneOf")) {
            in_.take();
            return DataRestriction::oneOf(parseStringList(in_));
        }
        in_.fail(t, "a comparison (>=, <=, >, <, =) or oneOf(...)");
    }

    TokenCursor in_;
    Ontology onto_;
    std::map<std::string, int> classes_, properties_, individuals_;
    bool closed_ = false;
};

} // namespace detail

// Parses the functional ontology syntax. The Ontology(name ...) wrapper is
// optional so that statement fragments (fixtures, snippets) parse too.
inline Parsed<Ontology> parseOntology(std::string_view text, std::string file = {}) {
    return detail::OntologyParser(text, std::move(file)).run();
}

namespace detail {

inline std::string renderAxiom(const Axiom& ax) {
    return std::visit([](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SubClassOf>) {
            return "SubClassOf(" + render(x.sub) + " " + render(x.sup) + ")";
        } else if constexpr (std::is_same_v<T, EquivalentClasses>) {
            return "EquivalentClasses(" + render(x.first) + " " + render(x.second) + ")";
        } else if constexpr (std::is_same_v<T, DisjointClasses>) {
            std::string out = "DisjointClasses(";
            for (std::size_t i = 0; i < x.classes.size(); ++i) out += (i ? " " : "") + render(x.classes[i]);
            return out + ")";
        } else if constexpr (std::is_same_v<T, ObjectPropertyDecl>) {
            std::string out = "ObjectProperty(" + x.name;
            if (x.domain) out += " domain=" + *x.domain;
            if (x.range) out += " range=" + *x.range;
            return out + ")";
        } else if constexpr (std::is_same_v<T, DataPropertyDecl>) {
            std::string out = "DataProperty(" + x.name;
            if (x.domain) out += " domain=" + *x.domain;
            if (x.range) out += " range=" + renderDataRange(*x.range);
            return out + ")";
        } else if constexpr (std::is_same_v<T, SubPropertyChainOf>) {
            std::string out = "SubPropertyChainOf(";
            for (const auto& r : x.chain) out += r + " ";
            return out + "-> " + x.super + ")";
        } else {
            return "InverseOf(" + x.first + " " + x.second + ")";
        }
    }, ax);
}

} // namespace detail

// Canonical, deterministic serialization: declarations, then class axioms,
// then property axioms, then individuals; each group sorted.
inline std::string serializeOntology(const Ontology& o) {
    std::vector<std::string> props, classAxioms, rbox;
    for (const auto& ax : o.axioms) {
        std::string line = detail::renderAxiom(ax);
        if (std::holds_alternative<ObjectPropertyDecl>(ax) || std::holds_alternative<DataPropertyDecl>(ax))
            props.push_back(std::move(line));
        else if (std::holds_alternative<SubPropertyChainOf>(ax) || std::holds_alternative<InverseOf>(ax))
            rbox.push_back(std::move(line));
        else
            classAxioms.push_back(std::move(line));
    }
    std::sort(props.begin(), props.end());
    std::sort(classAxioms.begin(), classAxioms.end());
    std::sort(rbox.begin(), rbox.end());

    std::set<std::string> inds = o.declaredIndividuals;
    for (const auto& a : o.abox) inds.insert(subjectOf(a));
    std::map<std::string, std::vector<std::string>> types, facts, data;
    for (const auto& a : o.abox) {
        if (auto c = std::get_if<ClassAssertion>(&a)) types[c->individual].push_back(render(c->concept_));
        if (auto p = std::get_if<ObjectPropertyAssertion>(&a))
            facts[p->subject].push_back("(" + p->role + " " + p->object + ")");
        if (auto d = std::get_if<DataPropertyAssertion>(&a))
            data[d->subject].push_back("(" + d->property + " " + renderLiteral(d->value) + ")");
    }

    std::string out = "Ontology(" + o.name + "\n";
    for (const auto& c : o.declaredClasses) out += "  Class(" + c + ")\n";
    for (const auto& l : props) out += "  " + l + "\n";
    for (const auto& l : classAxioms) out += "  " + l + "\n";
    for (const auto& l : rbox) out += "  " + l + "\n";
    auto section = [](const char* key, std::vector<std::string> items) {
        if (items.empty()) return std::string();
        std::sort(items.begin(), items.end());
        std::string s = std::string(" ") + key + "=(";
        for (std::size_t i = 0; i < items.size(); ++i) s += (i ? " " : "") + items[i];
        return s + ")";
    };
    for (const auto& ind : inds)
        out += "  Individual(" + ind + section("types", types[ind]) + section("facts", facts[ind]) +
               section("data", data[ind]) + ")\n";
    return out + ")";
}

// ---------------------------------------------------------------------------
// Rules

namespace detail {

class RuleParser {
public:
    RuleParser(std::string_view text, const Signature* sig, std::string file) : in_(text, std::move(file)), sig_(sig) {}

    Parsed<std::vector<Rule>> run() {
        while (!in_.atEnd()) {
            const std::size_t start = in_.position();
            std::size_t open = start;
            try {
                const Token head = in_.peek();
                if (!in_.peekIdent("Rule")) in_.fail(head, "'Rule'");
                in_.take();
                open = in_.position();
                in_.expect(TokenKind::LParen, "'(' after Rule");
                rule();
            } catch (const ParseAbort&) {
                if (open != start) {
                    in_.syncPast(open);
                } else {
                    // Skip up to the next Rule keyword.
                    do in_.skip();
                    while (!in_.atEnd() && !in_.peekIdent("Rule"));
                }
            }
        }
        Parsed<std::vector<Rule>> result;
        result.errors = in_.takeErrors();
        if (result.errors.empty()) result.value = std::move(rules_);
        return result;
    }

private:
    struct Located {
        Atom atom;
        Token at;
    };

    void rule() {
        const Token nameTok = in_.peek();
        Rule r;
        r.name = in_.expectIdent("a rule name");
        if (!names_.insert(r.name).second) in_.fail(nameTok, "a rule name not already used");
        in_.expect(TokenKind::Colon, "':' after the rule name");
        auto body = atoms();
        in_.expect(TokenKind::Arrow, "'->' or '^'");
        auto head = atoms();
        in_.expect(TokenKind::RParen, "')' or '^'");
        classify(body, head);
        if (sig_) checkNames(body, head);
        check(body, head);
        for (auto& l : body) r.body.push_back(std::move(l.atom));
        for (auto& l : head) r.head.push_back(std::move(l.atom));
        rules_.push_back(std::move(r));
    }

    std::vector<Located> atoms() {
        std::vector<Located> out;
        do {
            out.push_back(atom());
        } while (in_.accept(TokenKind::Caret));
        return out;
    }

    Term term() {
        const Token& t = in_.peek();
        if (t.kind == TokenKind::Variable) return Variable{in_.take().text};
        if (t.kind == TokenKind::Ident && !(t.text == "dateTime" && in_.peek(1).kind == TokenKind::LParen))
            return Individual{in_.take().text};
        return parseLiteral(in_);
    }

    Located atom() {
        const Token at = in_.peek();
        std::string pred = in_.expectIdent("an atom");
        in_.expect(TokenKind::LParen, "'(' after " + pred);
        std::vector<Term> args;
        while (in_.peek().kind != TokenKind::RParen) {
            if (in_.atEnd()) in_.fail(in_.peek(), "')'");
            args.push_back(term());
            in_.accept(TokenKind::Comma);
        }
        in_.take();
        if (auto op = builtinFromName(pred)) {
            if (*op == BuiltinOp::OneOf ? args.size() < 2 : args.size() != 2)
                in_.fail(at, std::string(toString(*op)) + (*op == BuiltinOp::OneOf ? " with at least two arguments" : " with two arguments"));
            return {Atom::builtinAtom(*op, std::move(args)), at};
        }
        if (args.size() == 1) return {Atom::classAtom(pred, std::move(args[0])), at};
        if (args.size() == 2) return {Atom::objectAtom(pred, std::move(args[0]), std::move(args[1])), at};
        in_.fail(at, "an atom with one (class) or two (property) arguments");
    }

    void checkNames(const std::vector<Located>& body, const std::vector<Located>& head) {
        auto one = [&](const Located& l) {
            const Atom& a = l.atom;
            if (a.kind == Atom::Kind::Class && !sig_->concepts.count(a.predicate))
                in_.error(l.at, "a declared class", a.predicate);
            else if ((a.kind == Atom::Kind::ObjectProperty && !sig_->roles.count(a.predicate)) ||
                     (a.kind == Atom::Kind::DataProperty && !sig_->dataProperties.count(a.predicate)))
                in_.error(l.at, "a declared property", a.predicate);
            for (const auto& t : a.args)
                if (auto i = std::get_if<Individual>(&t); i && !sig_->individuals.count(i->name))
                    in_.error(l.at, "a declared individual in " + a.predicate + "(...)", i->name);
        };
        for (const auto& l : body) one(l);
        for (const auto& l : head) one(l);
    }

    // Decides object vs data property atoms: the signature wins when given,
    // otherwise a literal or builtin-compared object marks a data property.
    void classify(std::vector<Located>& body, std::vector<Located>& head) {
        std::set<std::string> builtinVars;
        for (const auto& l : body)
            if (l.atom.kind == Atom::Kind::Builtin)
                for (const auto& t : l.atom.args)
                    if (auto v = std::get_if<Variable>(&t)) builtinVars.insert(v->name);
        auto fix = [&](Located& l) {
            if (l.atom.kind != Atom::Kind::ObjectProperty) return;
            bool data;
            if (sig_ && sig_->dataProperties.count(l.atom.predicate))
                data = true;
            else if (sig_ && sig_->roles.count(l.atom.predicate))
                data = false;
            else if (std::holds_alternative<Literal>(l.atom.args[1]))
                data = true;
            else if (auto v = std::get_if<Variable>(&l.atom.args[1]))
                data = builtinVars.count(v->name) > 0;
            else
                data = false;
            if (data) l.atom.kind = Atom::Kind::DataProperty;
        };
        for (auto& l : body) fix(l);
        for (auto& l : head) fix(l);
    }

    void check(const std::vector<Located>& body, const std::vector<Located>& head) {
        std::set<std::string> bound; // variables bound by class/property atoms
        for (const auto& l : body) {
            const Atom& a = l.atom;
            for (std::size_t i = 0; i < a.args.size(); ++i) {
                const Term& t = a.args[i];
                const bool literal = std::holds_alternative<Literal>(t);
                const bool individual = std::holds_alternative<Individual>(t);
                if (a.kind == Atom::Kind::Builtin && individual)
                    in_.fail(l.at, "builtin arguments that are variables or literals");
                if ((a.kind == Atom::Kind::Class || a.kind == Atom::Kind::ObjectProperty) && literal)
                    in_.fail(l.at, "individuals or variables as arguments of " + a.predicate);
                if (a.kind == Atom::Kind::DataProperty && i == 0 && literal)
                    in_.fail(l.at, "an individual or variable as subject of " + a.predicate);
                if (a.kind != Atom::Kind::Builtin)
                    if (auto v = std::get_if<Variable>(&t)) bound.insert(v->name);
            }
        }
        for (const auto& l : body)
            if (l.atom.kind == Atom::Kind::Builtin)
                for (const auto& t : l.atom.args)
                    if (auto v = std::get_if<Variable>(&t); v && !bound.count(v->name))
                        in_.fail(l.at, "variable ?" + v->name +
                                           " bound by a class or property atom (DL-safety: it occurs only in builtins)");
        for (const auto& l : head) {
            if (l.atom.kind == Atom::Kind::Builtin) in_.fail(l.at, "a class or property atom (no builtins in rule heads)");
            for (const auto& t : l.atom.args)
                if (auto v = std::get_if<Variable>(&t); v && !bound.count(v->name))
                    in_.fail(l.at, "head variable ?" + v->name + " to occur in the rule body (safety)");
        }
    }

    TokenCursor in_;
    const Signature* sig_;
    std::vector<Rule> rules_;
    std::set<std::string> names_;
};

} // namespace detail

// Parses `Rule(name: a ^ b -> c)` statements. With a signature, two-argument
// atoms are typed by it; without, by the shape of their arguments.
inline Parsed<std::vector<Rule>> parseRules(std::string_view text, const Signature* sig = nullptr,
                                            std::string file = {}) {
    return detail::RuleParser(text, sig, std::move(file)).run();
}

inline std::string serializeRules(const std::vector<Rule>& rules) {
    std::string out;
    for (const auto& r : rules) out += renderRule(r) + "\n";
    return out;
}

} // namespace bonedx
