#include "dfan/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace dfan {

namespace {

struct Token {
    enum Kind { Num, Var, Plus, Minus, Star, Caret, Slash, LParen, RParen, End } kind;
    long num = 0;
    int var_index = -1; // flat layout index
    int line = 1, col = 1;
};

class Lexer {
  public:
    Lexer(const std::string& s, RingSignature sig, RingMode mode, int line0)
        : s_(s), sig_(sig), mode_(mode), line_(line0) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= s_.size()) {
            t.kind = Token::End;
            return t;
        }
        char c = s_[pos_];
        if (std::isdigit((unsigned char)c)) {
            long v = 0;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
                v = v * 10 + (s_[pos_] - '0');
                advance();
            }
            t.kind = Token::Num;
            t.num = v;
            return t;
        }
        if (std::isalpha((unsigned char)c)) {
            std::string word;
            while (pos_ < s_.size() && std::isalnum((unsigned char)s_[pos_])) {
                word += s_[pos_];
                advance();
            }
            t.kind = Token::Var;
            t.var_index = variable_index(word, t);
            return t;
        }
        advance();
        switch (c) {
        case '+': t.kind = Token::Plus; return t;
        case '-': t.kind = Token::Minus; return t;
        case '*': t.kind = Token::Star; return t;
        case '^': t.kind = Token::Caret; return t;
        case '/': t.kind = Token::Slash; return t;
        case '(': t.kind = Token::LParen; return t;
        case ')': t.kind = Token::RParen; return t;
        default: throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
        }
    }

  private:
    void advance() {
        if (pos_ < s_.size() && s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else
            ++col_;
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) advance();
    }

    int variable_index(const std::string& w, const Token& t) const {
        auto bad = [&](const std::string& msg) -> int {
            throw ParseError(msg + ": '" + w + "'", t.line, t.col);
        };
        auto parse_idx = [&](size_t from, int limit, const char* what) {
            if (from >= w.size()) return bad(std::string("missing index on ") + what);
            for (size_t i = from; i < w.size(); ++i)
                if (!std::isdigit((unsigned char)w[i])) return bad("malformed variable");
            int idx = std::stoi(w.substr(from));
            if (idx < 1 || idx > limit) return bad(std::string(what) + " index out of range");
            return idx - 1;
        };
        const int n = sig_.n, p = sig_.p, m = sig_.m();
        if (w == "z") {
            if (mode_ == RingMode::Plain)
                bad("z is not a variable of the plain operator ring");
            return 2 * m;
        }
        if (w.size() >= 2 && w[0] == 'd') {
            if (w[1] == 'x') return m + parse_idx(2, n, "dx");
            if (w[1] == 't') return m + n + parse_idx(2, p, "dt");
        }
        if (w[0] == 'x') return parse_idx(1, n, "x");
        if (w[0] == 't') return n + parse_idx(1, p, "t");
        return bad("unknown variable");
    }

    const std::string& s_;
    RingSignature sig_;
    RingMode mode_;
    size_t pos_ = 0;
    int line_, col_ = 1;
};

class Parser {
  public:
    Parser(const std::string& s, RingSignature sig, RingMode mode, int line0)
        : lex_(s, sig, mode, line0), sig_(sig), mode_(mode) {
        cur_ = lex_.next();
    }

    DiffOp parse() {
        DiffOp r = expression();
        expect(Token::End, "trailing input");
        return r;
    }

  private:
    void bump() { cur_ = lex_.next(); }
    void expect(Token::Kind k, const char* msg) {
        if (cur_.kind != k) throw ParseError(msg, cur_.line, cur_.col);
    }

    DiffOp expression() {
        bool neg = false;
        while (cur_.kind == Token::Plus || cur_.kind == Token::Minus) {
            if (cur_.kind == Token::Minus) neg = !neg;
            bump();
        }
        DiffOp acc = term();
        if (neg) acc = -acc;
        while (cur_.kind == Token::Plus || cur_.kind == Token::Minus) {
            bool minus = cur_.kind == Token::Minus;
            bump();
            DiffOp t = term();
            if (minus)
                acc -= t;
            else
                acc += t;
        }
        return acc;
    }

    bool starts_factor() const {
        return cur_.kind == Token::Num || cur_.kind == Token::Var || cur_.kind == Token::LParen;
    }

    DiffOp term() {
        DiffOp acc = factor();
        for (;;) {
            if (cur_.kind == Token::Star) {
                bump();
                acc = product(acc, factor());
            } else if (starts_factor()) {
                acc = product(acc, factor());
            } else
                break;
        }
        return acc;
    }

    DiffOp product(const DiffOp& a, const DiffOp& b) {
        return mode_ == RingMode::Plain ? multiply_plain(a, b) : multiply(a, b);
    }

    DiffOp factor() {
        DiffOp base = atom();
        if (cur_.kind == Token::Caret) {
            bump();
            if (cur_.kind != Token::Num) throw ParseError("exponent must be a number", cur_.line, cur_.col);
            long e = cur_.num;
            bump();
            DiffOp r = DiffOp::constant(sig_, 1);
            for (long i = 0; i < e; ++i) r = product(r, base);
            return r;
        }
        return base;
    }

    DiffOp atom() {
        if (cur_.kind == Token::Num) {
            long num = cur_.num;
            bump();
            if (cur_.kind == Token::Slash) {
                bump();
                if (cur_.kind != Token::Num)
                    throw ParseError("denominator must be a number", cur_.line, cur_.col);
                long den = cur_.num;
                if (den == 0) throw ParseError("zero denominator", cur_.line, cur_.col);
                bump();
                return DiffOp::constant(sig_, frac(num, den));
            }
            return DiffOp::constant(sig_, Rational(num));
        }
        if (cur_.kind == Token::Var) {
            int idx = cur_.var_index;
            bump();
            return DiffOp::variable(sig_, idx);
        }
        if (cur_.kind == Token::LParen) {
            bump();
            DiffOp r = expression();
            expect(Token::RParen, "expected ')'");
            bump();
            return r;
        }
        if (cur_.kind == Token::Minus) {
            bump();
            return -factor();
        }
        throw ParseError("expected a coefficient, variable, or '('", cur_.line, cur_.col);
    }

    Lexer lex_;
    Token cur_;
    RingSignature sig_;
    RingMode mode_;
};

std::string variable_name(const RingSignature& sig, int flat) {
    const int n = sig.n, m = sig.m();
    if (flat < n) return "x" + std::to_string(flat + 1);
    if (flat < m) return "t" + std::to_string(flat - n + 1);
    if (flat < m + n) return "dx" + std::to_string(flat - m + 1);
    if (flat < 2 * m) return "dt" + std::to_string(flat - m - n + 1);
    return "z";
}

std::string print_monomial(const ExponentVector& e) {
    std::string s;
    const auto& raw = e.raw();
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += variable_name(e.sig(), (int)i);
        if (raw[i] > 1) s += "^" + std::to_string(raw[i]);
    }
    return s;
}

} // namespace

DiffOp parse_operator(const std::string& text, RingSignature sig, RingMode mode, int line_offset) {
    sig.validate();
    return Parser(text, sig, mode, line_offset).parse();
}

std::string print_operator(const DiffOp& P) {
    if (P.is_zero()) return "0";
    std::string out;
    // canonical descending
    for (auto it = P.terms().rbegin(); it != P.terms().rend(); ++it) {
        const auto& [e, c] = *it;
        Rational a = abs(c);
        bool negative = sgn(c) < 0;
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        std::string mono = print_monomial(e);
        if (mono.empty())
            out += to_string(a);
        else if (a == 1)
            out += mono;
        else
            out += to_string(a) + "*" + mono;
    }
    return out;
}

std::string print_exponent(const ExponentVector& e) {
    std::string s = "[";
    const auto& raw = e.raw();
    for (size_t i = 0; i < raw.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(raw[i]);
    }
    return s + "]";
}

InputProblem parse_input(std::istream& in) {
    InputProblem prob;
    std::string line;
    int lineno = 0;
    bool header_done = false;
    std::vector<std::pair<int, std::pair<std::string, int>>> flines; // j -> (text, line)
    std::vector<std::pair<std::string, int>> glines;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = line;
        size_t a = trimmed.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t b = trimmed.find_last_not_of(" \t\r");
        trimmed = trimmed.substr(a, b - a + 1);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        if (!header_done) {
            int n = -1, p = -1;
            std::istringstream hs(trimmed);
            std::string tok;
            while (hs >> tok) {
                if (tok.rfind("n=", 0) == 0)
                    n = std::stoi(tok.substr(2));
                else if (tok.rfind("p=", 0) == 0)
                    p = std::stoi(tok.substr(2));
                else
                    throw ParseError("expected `n=<int> p=<int>` header", lineno, 1);
            }
            if (n < 0 || p < 0) throw ParseError("header must set both n and p", lineno, 1);
            prob.sig = RingSignature{n, p};
            try {
                prob.sig.validate();
            } catch (const InvariantViolation& e) {
                throw ParseError(e.what(), lineno, 1);
            }
            header_done = true;
            continue;
        }
        size_t eq = trimmed.find('=');
        if (eq == std::string::npos) throw ParseError("expected `name = <expr>`", lineno, 1);
        std::string name = trimmed.substr(0, eq);
        size_t e2 = name.find_last_not_of(" \t");
        name = name.substr(0, e2 == std::string::npos ? 0 : e2 + 1);
        std::string rhs = trimmed.substr(eq + 1);
        if (name == "gen") {
            glines.push_back({rhs, lineno});
        } else if (name.size() >= 2 && name[0] == 'f') {
            int j;
            try {
                j = std::stoi(name.substr(1));
            } catch (...) {
                throw ParseError("unknown assignment '" + name + "'", lineno, 1);
            }
            if (j < 1 || j > prob.sig.p)
                throw ParseError("component index out of range in '" + name + "'", lineno, 1);
            flines.push_back({j, {rhs, lineno}});
        } else
            throw ParseError("unknown assignment '" + name + "'", lineno, 1);
    }
    if (!header_done) throw ParseError("empty input", lineno ? lineno : 1, 1);
    if (!flines.empty() && !glines.empty())
        throw ParseError("mixed `f<j>` and `gen` assignments", lineno, 1);
    if (!glines.empty()) {
        prob.raw = true;
        for (const auto& [text, ln] : glines) {
            DiffOp g = parse_operator(text, prob.sig, RingMode::Plain, ln);
            prob.raw_gens.push_back(g);
        }
        return prob;
    }
    if ((int)flines.size() != prob.sig.p)
        throw ParseError("need exactly one f<j> line per component", lineno ? lineno : 1, 1);
    prob.f.assign(prob.sig.p, DiffOp(prob.sig));
    std::vector<bool> seen(prob.sig.p, false);
    for (const auto& [j, tl] : flines) {
        if (seen[j - 1]) throw ParseError("duplicate component f" + std::to_string(j), tl.second, 1);
        seen[j - 1] = true;
        DiffOp g = parse_operator(tl.first, prob.sig, RingMode::Plain, tl.second);
        for (const auto& [e, c] : g.terms()) {
            if (e.derivation_degree() != 0 || e.k() != 0)
                throw ParseError("map components must be polynomials in x", tl.second, 1);
            for (int jj = 0; jj < prob.sig.p; ++jj)
                if (e.mu(jj) != 0)
                    throw ParseError("map components must be polynomials in x", tl.second, 1);
        }
        prob.f[j - 1] = g;
    }
    return prob;
}

InputProblem parse_input_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file " + path, 1, 1);
    return parse_input(in);
}

} // namespace dfan
