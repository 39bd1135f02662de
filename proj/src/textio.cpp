#include "hsfg/textio.hpp"

#include <cctype>
#include <sstream>

namespace hsfg {

namespace {

struct Lexer {
    std::string text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw parse_error("expected '" + std::string(1, c) + "' at position " +
                              std::to_string(pos) + " in: " + text);
    }
    uint64_t integer() {
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw parse_error("expected an integer at position " + std::to_string(pos) + " in: " +
                              text);
        uint64_t v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            v = v * 10 + uint64_t(text[pos++] - '0');
        return v;
    }
    std::string name() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (start == pos)
            throw parse_error("expected a name at position " + std::to_string(pos) + " in: " +
                              text);
        return text.substr(start, pos - start);
    }
};

class ExprParser {
  public:
    ExprParser(const std::string &text, const FqFieldPtr &field,
               const std::vector<std::string> &vars)
        : lex_{text}, field_(field), vars_(vars) {}

    RatFunc parse() {
        RatFunc r = expr();
        if (!lex_.eof())
            throw parse_error("trailing input at position " + std::to_string(lex_.pos) + " in: " +
                              lex_.text);
        return r;
    }

  private:
    int arity() const { return int(vars_.size()); }

    RatFunc expr() {
        RatFunc acc = lex_.accept('-') ? -term() : term();
        while (true) {
            if (lex_.accept('+'))
                acc = acc + term();
            else if (lex_.accept('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    RatFunc term() {
        RatFunc acc = unary();
        while (true) {
            if (lex_.accept('*'))
                acc = acc * unary();
            else if (lex_.accept('/'))
                acc = acc / unary();
            else
                return acc;
        }
    }

    RatFunc unary() {
        bool neg = lex_.accept('-');
        RatFunc base = primary();
        if (lex_.accept('^')) {
            uint64_t k = lex_.integer();
            base = base.pow(uint32_t(k));
        }
        return neg ? -base : base;
    }

    RatFunc primary() {
        char c = lex_.peek();
        if (c == '(') {
            lex_.expect('(');
            RatFunc inner = expr();
            lex_.expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return RatFunc::constant(arity(), field_->from_int(int64_t(lex_.integer())));
        std::string id = lex_.name();
        if (id == "g" && field_->n() > 1)
            return RatFunc::constant(arity(), field_->generator());
        for (int v = 0; v < arity(); ++v)
            if (vars_[size_t(v)] == id)
                return RatFunc::variable(arity(), v, field_->one());
        throw parse_error("unknown variable '" + id + "'");
    }

    Lexer lex_;
    FqFieldPtr field_;
    std::vector<std::string> vars_;
};

std::vector<std::string> v_names(int e) {
    std::vector<std::string> names;
    for (int i = 1; i <= e; ++i)
        names.push_back("v" + std::to_string(i));
    return names;
}

std::string compact_spaces(std::string s, bool compact) {
    if (!compact)
        return s;
    std::string out;
    for (char c : s)
        if (c != ' ')
            out += c;
    return out;
}

std::vector<std::string> split_lines(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        // strip comments and blank lines
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos)
            continue;
        size_t b = line.find_last_not_of(" \t\r");
        lines.push_back(line.substr(a, b - a + 1));
    }
    return lines;
}

std::vector<std::string> split_words(const std::string &line) {
    std::vector<std::string> words;
    std::istringstream in(line);
    std::string w;
    while (in >> w)
        words.push_back(w);
    return words;
}

} // namespace

RatFunc parse_rational(const std::string &text, const FqFieldPtr &field,
                       const std::vector<std::string> &var_names) {
    return ExprParser(text, field, var_names).parse();
}

PolyFq parse_poly(const std::string &text, const FqFieldPtr &field,
                  const std::vector<std::string> &var_names) {
    RatFunc r = parse_rational(text, field, var_names);
    if (!r.is_polynomial())
        throw parse_error("expected a polynomial, got a proper fraction: " + text);
    return r.num();
}

TruncSeries<RatFunc> parse_series(const std::string &text, const FqFieldPtr &field,
                                  const std::vector<std::string> &gen_names, int64_t p, int m,
                                  int e) {
    std::vector<std::string> vars = gen_names;
    for (auto &vn : v_names(e))
        vars.push_back(vn);
    std::string body = text;
    if (e == 1) { // accept the alias v for v1
        std::string replaced;
        for (size_t i = 0; i < body.size(); ++i) {
            if (body[i] == 'v' &&
                (i + 1 >= body.size() ||
                 (!std::isalnum(static_cast<unsigned char>(body[i + 1])) && body[i + 1] != '_')) &&
                (i == 0 || (!std::isalnum(static_cast<unsigned char>(body[i - 1])) &&
                            body[i - 1] != '_'))) {
                replaced += "v1";
            } else {
                replaced += body[i];
            }
        }
        body = replaced;
    }
    RatFunc full = parse_rational(body, field, vars);
    int r = int(gen_names.size());
    // the denominator must not involve the series variables
    for (auto &t : full.den().terms())
        for (int v = r; v < r + e; ++v)
            if (t.first[size_t(v)])
                throw parse_error("series coefficients may not divide by v-variables");
    PolyFq den(r, field->zero());
    for (auto &t : full.den().terms())
        den.mutable_terms().push_back({ExpVec(t.first.begin(), t.first.begin() + r), t.second});
    den.restore_invariants();
    RatFunc zero = RatFunc::zero(r, field->zero());
    TruncSeries<RatFunc> out(p, m, e, zero);
    std::map<ExpVec, PolyFq> buckets;
    for (auto &t : full.num().terms()) {
        ExpVec vexp(t.first.begin() + r, t.first.end());
        ExpVec gexp(t.first.begin(), t.first.begin() + r);
        auto it = buckets.find(vexp);
        if (it == buckets.end()) {
            PolyFq fresh(r, field->zero());
            it = buckets.emplace(vexp, std::move(fresh)).first;
        }
        it->second.mutable_terms().push_back({std::move(gexp), t.second});
    }
    for (auto &[vexp, numpoly] : buckets) {
        if (!out.in_bounds(vexp))
            throw parse_error("series exponent exceeds the truncation bound p^m");
        PolyFq n = numpoly;
        n.restore_invariants();
        RatFunc coeff(n, den);
        if (!coeff.is_zero())
            out.mutable_terms().push_back({vexp, std::move(coeff)});
    }
    out.restore_invariants();
    return out;
}

std::string poly_to_string(const PolyFq &f, const std::vector<std::string> &var_names,
                           bool compact) {
    auto s = f.to_string([&](int v) { return var_names[size_t(v)]; });
    return compact_spaces(s, compact);
}

std::string ratfunc_to_string(const RatFunc &x, const std::vector<std::string> &var_names,
                              bool compact) {
    auto s = x.to_string([&](int v) { return var_names[size_t(v)]; });
    return compact_spaces(s, compact);
}

std::string series_to_string(const TruncSeries<RatFunc> &s,
                             const std::vector<std::string> &gen_names, bool compact) {
    if (s.is_zero())
        return "0";
    std::string out;
    auto vn = v_names(s.arity());
    for (auto &term : s.terms()) {
        std::string mono;
        for (int v = 0; v < s.arity(); ++v) {
            if (term.first[size_t(v)] == 0)
                continue;
            if (!mono.empty())
                mono += "*";
            mono += vn[size_t(v)];
            if (term.first[size_t(v)] > 1)
                mono += "^" + std::to_string(term.first[size_t(v)]);
        }
        std::string cs = ratfunc_to_string(term.second, gen_names, compact);
        bool needs_parens = !term.second.is_polynomial() || term.second.num().term_count() > 1;
        std::string piece;
        if (mono.empty())
            piece = cs;
        else if (cs == "1")
            piece = mono;
        else if (needs_parens && cs.front() != '(')
            piece = "(" + cs + ")*" + mono;
        else
            piece = cs + "*" + mono;
        if (!out.empty())
            out += compact ? "+" : " + ";
        out += piece;
    }
    return out;
}

DerivationFile parse_derivation_file(const std::string &text) {
    auto lines = split_lines(text);
    if (lines.empty())
        throw parse_error("empty derivation file");
    // header: p=2 n=1 m=1 e=1 [kind=rational|polynomial] [precision=N]
    int64_t p = 0;
    int n = 1, m = 0, e = 0, precision = 0;
    RingKind kind = RingKind::RationalFunction;
    for (auto &w : split_words(lines[0])) {
        auto eq = w.find('=');
        if (eq == std::string::npos)
            throw parse_error("malformed header entry: " + w);
        std::string key = w.substr(0, eq), val = w.substr(eq + 1);
        if (key == "p")
            p = std::stoll(val);
        else if (key == "n")
            n = std::stoi(val);
        else if (key == "m")
            m = std::stoi(val);
        else if (key == "e")
            e = std::stoi(val);
        else if (key == "precision")
            precision = std::stoi(val);
        else if (key == "kind") {
            if (val == "rational")
                kind = RingKind::RationalFunction;
            else if (val == "polynomial")
                kind = RingKind::Polynomial;
            else
                throw parse_error("unknown ring kind: " + val);
        } else
            throw parse_error("unknown header key: " + key);
    }
    if (p == 0 || m == 0 || e == 0)
        throw parse_error("derivation header must set p, m and e");
    DerivCtx ctx;
    ctx.field = n == 1 ? FqField::prime(p) : FqField::extension(p, n);
    ctx.kind = kind;
    ctx.m = m;
    ctx.e = e;
    ctx.precision = precision;
    size_t row = 1;
    if (row >= lines.size())
        throw parse_error("derivation file is missing the gens line");
    auto gen_words = split_words(lines[row]);
    if (gen_words.empty() || gen_words[0] != "gens")
        throw parse_error("expected `gens <name>...` on line 2");
    ctx.gens.assign(gen_words.begin() + 1, gen_words.end());
    ++row;
    std::map<std::string, TruncSeries<RatFunc>> images;
    for (; row < lines.size(); ++row) {
        auto arrow = lines[row].find("->");
        if (lines[row].rfind("gen ", 0) != 0 || arrow == std::string::npos)
            throw parse_error("expected `gen <name> -> <series>`: " + lines[row]);
        std::string gname = lines[row].substr(4, arrow - 4);
        gname.erase(gname.find_last_not_of(" \t") + 1);
        std::string body = lines[row].substr(arrow + 2);
        images.emplace(gname, parse_series(body, ctx.field, ctx.gens, p, m, e));
    }
    std::vector<TruncSeries<RatFunc>> ordered;
    for (auto &gname : ctx.gens) {
        auto it = images.find(gname);
        if (it == images.end())
            throw parse_error("no image line for generator " + gname);
        ordered.push_back(it->second);
    }
    return DerivationFile{HSDerivation(ctx, std::move(ordered))};
}

std::string derivation_to_file(const HSDerivation &D) {
    const DerivCtx &ctx = D.ctx();
    std::string out = "p=" + std::to_string(ctx.p()) + " n=" + std::to_string(ctx.field->n()) +
                      " m=" + std::to_string(ctx.m) + " e=" + std::to_string(ctx.e);
    if (ctx.kind == RingKind::Polynomial)
        out += " kind=polynomial";
    out += "\ngens";
    for (auto &g : ctx.gens)
        out += " " + g;
    out += "\n";
    for (size_t t = 0; t < ctx.gens.size(); ++t)
        out += "gen " + ctx.gens[t] + " -> " + series_to_string(D.images()[t], ctx.gens) + "\n";
    return out;
}

AffineVariety parse_variety_file(const std::string &text, const FqFieldPtr &field,
                                 const std::vector<std::string> &gen_names) {
    auto lines = split_lines(text);
    if (lines.empty())
        throw parse_error("empty variety file");
    auto head = split_words(lines[0]);
    if (head.empty() || head[0] != "vars")
        throw parse_error("variety file must start with `vars <name>...`");
    std::vector<std::string> jet_names(head.begin() + 1, head.end());
    AffineVariety V;
    V.ambient = int(jet_names.size());
    RatFunc zero = RatFunc::zero(int(gen_names.size()), field->zero());
    for (size_t row = 1; row < lines.size(); ++row) {
        if (lines[row].rfind("name ", 0) == 0) {
            V.name = lines[row].substr(5);
            continue;
        }
        if (lines[row].rfind("gen ", 0) != 0)
            throw parse_error("expected `gen <poly>`: " + lines[row]);
        std::string body = lines[row].substr(4);
        // coefficients live in K(gen_names); ambient variables are jet_names
        std::vector<std::string> vars = gen_names;
        vars.insert(vars.end(), jet_names.begin(), jet_names.end());
        RatFunc full = parse_rational(body, field, vars);
        int r = int(gen_names.size());
        for (auto &t : full.den().terms())
            for (size_t v = size_t(r); v < vars.size(); ++v)
                if (t.first[v])
                    throw parse_error("variety generators may not divide by ambient variables");
        PolyFq den(r, field->zero());
        for (auto &t : full.den().terms())
            den.mutable_terms().push_back(
                {ExpVec(t.first.begin(), t.first.begin() + r), t.second});
        den.restore_invariants();
        JetPoly gen(V.ambient, zero);
        std::map<ExpVec, PolyFq> buckets;
        for (auto &t : full.num().terms()) {
            ExpVec jet_exp(t.first.begin() + r, t.first.end());
            ExpVec gen_exp(t.first.begin(), t.first.begin() + r);
            auto it = buckets.find(jet_exp);
            if (it == buckets.end())
                it = buckets.emplace(jet_exp, PolyFq(r, field->zero())).first;
            it->second.mutable_terms().push_back({std::move(gen_exp), t.second});
        }
        for (auto &[jexp, numpoly] : buckets) {
            PolyFq nn = numpoly;
            nn.restore_invariants();
            RatFunc coeff(nn, den);
            if (!coeff.is_zero())
                gen.mutable_terms().push_back({jexp, std::move(coeff)});
        }
        gen.restore_invariants();
        if (!gen.is_zero())
            V.gens.push_back(std::move(gen));
    }
    V.validate();
    return V;
}

std::string variety_to_file(const AffineVariety &V, const std::vector<std::string> &jet_names,
                            const std::vector<std::string> &gen_names) {
    std::string out = "vars";
    for (auto &nm : jet_names)
        out += " " + nm;
    out += "\n";
    if (!V.name.empty())
        out += "name " + V.name + "\n";
    for (auto &g : V.gens) {
        out += "gen " + g.to_string([&](int v) { return jet_names[size_t(v)]; });
        out += "\n";
    }
    return out;
}

std::string record_to_line(const Record &r) {
    std::string out;
    for (auto &[k, v] : r) {
        if (v.find(' ') != std::string::npos || v.find('=') != std::string::npos)
            throw argument_error("record values may not contain spaces or '=': " + v);
        if (!out.empty())
            out += " ";
        out += k + "=" + v;
    }
    return out;
}

Record parse_record_line(const std::string &line) {
    Record r;
    for (auto &w : split_words(line)) {
        auto eq = w.find('=');
        if (eq == std::string::npos)
            throw parse_error("malformed record entry: " + w);
        r.push_back({w.substr(0, eq), w.substr(eq + 1)});
    }
    return r;
}

} // namespace hsfg
