#include "sofai/strips.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace sofai {

PddlError::PddlError(PddlErrc c, int l, int co, const std::string &msg)
    : std::runtime_error(msg + " (line " + std::to_string(l) + ", col " + std::to_string(co) + ")"),
      code(c), line(l), col(co) {}

namespace {

struct Token {
    enum class Kind { lparen, rparen, symbol, end };
    Kind kind = Kind::end;
    std::string text;
    int line = 1;
    int col = 1;
};

// S-expression lexer. Symbols are case-folded to lowercase (PDDL is
// case-insensitive); ';' starts a comment running to end of line.
class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token &peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        skip_ws();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) {
            tok_.kind = Token::Kind::end;
            tok_.text.clear();
            return;
        }
        char c = text_[pos_];
        if (c == '(') {
            bump();
            tok_.kind = Token::Kind::lparen;
            tok_.text = "(";
        } else if (c == ')') {
            bump();
            tok_.kind = Token::Kind::rparen;
            tok_.text = ")";
        } else {
            std::string s;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d)))
                    break;
                s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(d))));
                bump();
            }
            tok_.kind = Token::Kind::symbol;
            tok_.text = std::move(s);
        }
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

[[noreturn]] void fail(PddlErrc code, const Token &at, const std::string &msg) {
    throw PddlError(code, at.line, at.col, msg);
}

class Parser {
  public:
    explicit Parser(std::string_view text) : lex_(text) {}

    Domain domain() {
        expect_lparen();
        expect_keyword("define");
        expect_lparen();
        expect_keyword("domain");
        dom_.name = symbol("domain name");
        expect_rparen();
        while (lex_.peek().kind == Token::Kind::lparen) {
            Token open = lex_.next();
            Token head = lex_.next();
            if (head.kind != Token::Kind::symbol)
                fail(PddlErrc::syntax, head, "expected section keyword");
            if (head.text == ":requirements")
                requirements();
            else if (head.text == ":types")
                types();
            else if (head.text == ":predicates")
                predicates();
            else if (head.text == ":action")
                action();
            else
                fail(PddlErrc::syntax, open, "unsupported domain section '" + head.text + "'");
        }
        expect_rparen();
        expect_end();
        return std::move(dom_);
    }

    Instance instance(const Domain &dom) {
        dom_ref_ = &dom;
        expect_lparen();
        expect_keyword("define");
        expect_lparen();
        expect_keyword("problem");
        inst_.name = symbol("problem name");
        expect_rparen();
        bool saw_goal = false;
        while (lex_.peek().kind == Token::Kind::lparen) {
            Token open = lex_.next();
            Token head = lex_.next();
            if (head.kind != Token::Kind::symbol)
                fail(PddlErrc::syntax, head, "expected section keyword");
            if (head.text == ":domain") {
                symbol("domain name");
                expect_rparen();
            } else if (head.text == ":requirements") {
                requirements();
            } else if (head.text == ":objects") {
                objects();
            } else if (head.text == ":init") {
                init_section();
            } else if (head.text == ":goal") {
                goal_section(open);
                saw_goal = true;
            } else {
                fail(PddlErrc::syntax, open, "unsupported problem section '" + head.text + "'");
            }
        }
        expect_rparen();
        expect_end();
        if (!saw_goal || inst_.goal.empty())
            fail(PddlErrc::empty_goal, lex_.peek(), "problem has an empty goal");
        return std::move(inst_);
    }

  private:
    void expect_lparen() {
        Token t = lex_.next();
        if (t.kind != Token::Kind::lparen)
            fail(PddlErrc::syntax, t, "expected '('");
    }
    void expect_rparen() {
        Token t = lex_.next();
        if (t.kind != Token::Kind::rparen)
            fail(PddlErrc::syntax, t, "expected ')'");
    }
    void expect_end() {
        Token t = lex_.next();
        if (t.kind != Token::Kind::end)
            fail(PddlErrc::syntax, t, "trailing input after closing ')'");
    }
    void expect_keyword(const std::string &kw) {
        Token t = lex_.next();
        if (t.kind != Token::Kind::symbol || t.text != kw)
            fail(PddlErrc::syntax, t, "expected '" + kw + "'");
    }
    std::string symbol(const std::string &what) {
        Token t = lex_.next();
        if (t.kind != Token::Kind::symbol || t.text.empty())
            fail(PddlErrc::syntax, t, "expected " + what);
        return t.text;
    }

    void requirements() {
        static const std::set<std::string> supported = {":strips", ":typing",
                                                        ":negative-preconditions"};
        while (lex_.peek().kind == Token::Kind::symbol) {
            Token t = lex_.next();
            if (!supported.count(t.text))
                fail(PddlErrc::unsupported_requirement, t, "unsupported requirement '" + t.text + "'");
        }
        expect_rparen();
    }

    // name* [- type] repeated until ')'
    std::vector<TypedName> typed_list(bool variables) {
        std::vector<TypedName> out;
        std::vector<std::string> pending;
        while (true) {
            Token t = lex_.peek();
            if (t.kind == Token::Kind::rparen) {
                lex_.next();
                break;
            }
            if (t.kind != Token::Kind::symbol)
                fail(PddlErrc::syntax, t, "expected name in typed list");
            lex_.next();
            if (t.text == "-") {
                std::string ty = symbol("type name");
                for (auto &n : pending)
                    out.push_back({n, ty});
                pending.clear();
            } else {
                if (variables && t.text[0] != '?')
                    fail(PddlErrc::syntax, t, "expected variable (starting with '?')");
                if (!variables && t.text[0] == '?')
                    fail(PddlErrc::syntax, t, "unexpected variable in constant list");
                pending.push_back(t.text);
            }
        }
        for (auto &n : pending)
            out.push_back({n, "object"});
        return out;
    }

    void types() {
        auto ts = typed_list(false);
        for (auto &t : ts) {
            if (std::any_of(dom_.types.begin(), dom_.types.end(),
                            [&](const TypedName &x) { return x.name == t.name; }))
                fail(PddlErrc::duplicate_name, lex_.peek(), "duplicate type '" + t.name + "'");
            dom_.types.push_back({t.name, t.type}); // t.type is the parent here
        }
        // parents must resolve (forward references within the same block allowed)
        for (auto &t : dom_.types)
            if (t.type != "object" && !dom_.type_exists(t.type))
                fail(PddlErrc::undeclared_type, lex_.peek(), "undeclared parent type '" + t.type + "'");
    }

    void check_param_types(const std::vector<TypedName> &params) {
        for (auto &p : params)
            if (!dom_.type_exists(p.type))
                fail(PddlErrc::undeclared_type, lex_.peek(), "undeclared type '" + p.type + "'");
    }

    void predicates() {
        while (lex_.peek().kind == Token::Kind::lparen) {
            lex_.next();
            Predicate pred;
            pred.name = symbol("predicate name");
            pred.params = typed_list(true);
            check_param_types(pred.params);
            if (dom_.find_predicate(pred.name))
                fail(PddlErrc::duplicate_name, lex_.peek(), "duplicate predicate '" + pred.name + "'");
            dom_.predicates.push_back(std::move(pred));
        }
        expect_rparen();
    }

    Atom schema_atom(const ActionSchema &schema) {
        Atom a;
        Token at = lex_.peek();
        a.pred = symbol("predicate name");
        while (lex_.peek().kind == Token::Kind::symbol)
            a.args.push_back(lex_.next().text);
        expect_rparen();
        const Predicate *p = dom_.find_predicate(a.pred);
        if (!p)
            fail(PddlErrc::undeclared_predicate, at, "undeclared predicate '" + a.pred + "'");
        if (p->params.size() != a.args.size())
            fail(PddlErrc::arity_mismatch, at,
                 "predicate '" + a.pred + "' expects " + std::to_string(p->params.size()) +
                     " arguments, got " + std::to_string(a.args.size()));
        for (auto &arg : a.args) {
            if (arg.empty() || arg[0] != '?')
                fail(PddlErrc::undeclared_variable, at,
                     "schema atoms may only use parameter variables, got '" + arg + "'");
            if (std::none_of(schema.parameters.begin(), schema.parameters.end(),
                             [&](const TypedName &v) { return v.name == arg; }))
                fail(PddlErrc::undeclared_variable, at, "variable '" + arg + "' not in parameters");
        }
        return a;
    }

    // (and LIT*) | LIT, where LIT = atom | (not atom)
    void condition_list(const ActionSchema &schema, std::vector<Literal> &out) {
        expect_lparen();
        Token head = lex_.peek();
        if (head.kind == Token::Kind::symbol && head.text == "and") {
            lex_.next();
            while (lex_.peek().kind == Token::Kind::lparen) {
                lex_.next();
                out.push_back(single_literal(schema));
            }
            expect_rparen();
        } else {
            out.push_back(single_literal(schema));
        }
    }

    Literal single_literal(const ActionSchema &schema) {
        Token head = lex_.peek();
        if (head.kind == Token::Kind::symbol && head.text == "not") {
            lex_.next();
            expect_lparen();
            Atom a = schema_atom(schema);
            expect_rparen();
            return {std::move(a), false};
        }
        return {schema_atom(schema), true};
    }

    void action() {
        ActionSchema schema;
        schema.name = symbol("action name");
        if (std::any_of(dom_.action_schemas.begin(), dom_.action_schemas.end(),
                        [&](const ActionSchema &s) { return s.name == schema.name; }))
            fail(PddlErrc::duplicate_name, lex_.peek(), "duplicate action '" + schema.name + "'");
        while (lex_.peek().kind == Token::Kind::symbol) {
            std::string key = lex_.next().text;
            if (key == ":parameters") {
                expect_lparen();
                schema.parameters = typed_list(true);
                check_param_types(schema.parameters);
            } else if (key == ":precondition") {
                condition_list(schema, schema.preconditions);
            } else if (key == ":effect") {
                std::vector<Literal> effects;
                condition_list(schema, effects);
                for (auto &e : effects) {
                    if (e.positive)
                        schema.add_effects.push_back(e.atom);
                    else
                        schema.del_effects.push_back(e.atom);
                }
                for (auto &a : schema.add_effects)
                    for (auto &d : schema.del_effects)
                        if (a == d)
                            fail(PddlErrc::conflicting_effect, lex_.peek(),
                                 "effect adds and deletes '" + render_atom(a) + "'");
            } else {
                fail(PddlErrc::syntax, lex_.peek(), "unexpected action key '" + key + "'");
            }
        }
        expect_rparen();
        dom_.action_schemas.push_back(std::move(schema));
    }

    void objects() {
        auto objs = typed_list(false);
        for (auto &o : objs) {
            if (!dom_ref_->type_exists(o.type))
                fail(PddlErrc::undeclared_type, lex_.peek(), "undeclared type '" + o.type + "'");
            if (std::any_of(inst_.objects.begin(), inst_.objects.end(),
                            [&](const TypedName &x) { return x.name == o.name; }))
                fail(PddlErrc::duplicate_name, lex_.peek(), "duplicate object '" + o.name + "'");
            inst_.objects.push_back(o);
        }
    }

    Atom ground_atom() {
        Atom a;
        Token at = lex_.peek();
        a.pred = symbol("predicate name");
        while (lex_.peek().kind == Token::Kind::symbol)
            a.args.push_back(lex_.next().text);
        expect_rparen();
        const Predicate *p = dom_ref_->find_predicate(a.pred);
        if (!p)
            fail(PddlErrc::undeclared_predicate, at, "undeclared predicate '" + a.pred + "'");
        if (p->params.size() != a.args.size())
            fail(PddlErrc::arity_mismatch, at,
                 "predicate '" + a.pred + "' expects " + std::to_string(p->params.size()) +
                     " arguments, got " + std::to_string(a.args.size()));
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            auto it = std::find_if(inst_.objects.begin(), inst_.objects.end(),
                                   [&](const TypedName &o) { return o.name == a.args[i]; });
            if (it == inst_.objects.end())
                fail(PddlErrc::undeclared_object, at, "undeclared object '" + a.args[i] + "'");
            if (!dom_ref_->type_is(it->type, p->params[i].type))
                fail(PddlErrc::type_mismatch, at,
                     "object '" + a.args[i] + "' of type '" + it->type + "' does not fit parameter type '" +
                         p->params[i].type + "'");
        }
        return a;
    }

    void init_section() {
        while (lex_.peek().kind == Token::Kind::lparen) {
            lex_.next();
            Atom a = ground_atom();
            if (std::find(inst_.init.begin(), inst_.init.end(), a) == inst_.init.end())
                inst_.init.push_back(std::move(a));
        }
        expect_rparen();
    }

    void goal_section(const Token &open) {
        expect_lparen();
        Token head = lex_.peek();
        if (head.kind == Token::Kind::symbol && head.text == "and") {
            lex_.next();
            while (lex_.peek().kind == Token::Kind::lparen) {
                lex_.next();
                add_goal_literal();
            }
            expect_rparen();
        } else {
            add_goal_literal();
        }
        expect_rparen(); // closes (:goal ...)
        (void)open;
    }

    void add_goal_literal() {
        Literal lit{{}, true};
        Token head = lex_.peek();
        if (head.kind == Token::Kind::symbol && head.text == "not") {
            lex_.next();
            expect_lparen();
            lit.atom = ground_atom();
            lit.positive = false;
            expect_rparen();
        } else {
            lit.atom = ground_atom();
        }
        if (std::find(inst_.goal.begin(), inst_.goal.end(), lit) == inst_.goal.end())
            inst_.goal.push_back(std::move(lit));
    }

    Lexer lex_;
    Domain dom_;
    Instance inst_;
    const Domain *dom_ref_ = nullptr;
};

} // namespace

const Predicate *Domain::find_predicate(const std::string &n) const {
    for (auto &p : predicates)
        if (p.name == n)
            return &p;
    return nullptr;
}

bool Domain::type_exists(const std::string &t) const {
    if (t == "object")
        return true;
    return std::any_of(types.begin(), types.end(), [&](const TypedName &x) { return x.name == t; });
}

bool Domain::type_is(const std::string &t, const std::string &ancestor) const {
    if (ancestor == "object" || t == ancestor)
        return true;
    std::string cur = t;
    // hierarchy is acyclic by construction (parents resolve to earlier decls
    // or "object"); bound the walk anyway
    for (std::size_t hops = 0; hops <= types.size(); ++hops) {
        auto it = std::find_if(types.begin(), types.end(),
                               [&](const TypedName &x) { return x.name == cur; });
        if (it == types.end())
            return false;
        if (it->type == ancestor)
            return true;
        if (it->type == "object")
            return false;
        cur = it->type;
    }
    return false;
}

Domain parse_domain(std::string_view text) { return Parser(text).domain(); }

Instance parse_instance(std::string_view text, const Domain &dom) {
    return Parser(text).instance(dom);
}

} // namespace sofai
