#include "xwf/workload.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace xwf {

std::string_view to_string(Cmp c) {
    switch (c) {
        case Cmp::Eq: return "=";
        case Cmp::Ne: return "!=";
        case Cmp::Lt: return "<";
        case Cmp::Le: return "<=";
        case Cmp::Gt: return ">";
        case Cmp::Ge: return ">=";
    }
    return "?";
}

Cmp cmp_from_string(std::string_view s) {
    if (s == "=") return Cmp::Eq;
    if (s == "!=") return Cmp::Ne;
    if (s == "<") return Cmp::Lt;
    if (s == "<=") return Cmp::Le;
    if (s == ">") return Cmp::Gt;
    if (s == ">=") return Cmp::Ge;
    throw Error("unknown comparator '" + std::string(s) + "'");
}

Cmp negate(Cmp c) {
    switch (c) {
        case Cmp::Eq: return Cmp::Ne;
        case Cmp::Ne: return Cmp::Eq;
        case Cmp::Lt: return Cmp::Ge;
        case Cmp::Le: return Cmp::Gt;
        case Cmp::Gt: return Cmp::Le;
        case Cmp::Ge: return Cmp::Lt;
    }
    return c;
}

std::string SelectionPredicate::canonical_key() const {
    std::string key = dimension_id;
    key += '\x1f';
    key += attribute_id;
    key += '\x1f';
    key += to_string(cmp);
    key += '\x1f';
    key += literal.to_string();
    return key;
}

bool SelectionPredicate::matches(const Value& v) const {
    const int c = v.compare(literal);
    switch (cmp) {
        case Cmp::Eq: return c == 0;
        case Cmp::Ne: return c != 0;
        case Cmp::Lt: return c < 0;
        case Cmp::Le: return c <= 0;
        case Cmp::Gt: return c > 0;
        case Cmp::Ge: return c >= 0;
    }
    return false;
}

const SelectionPredicate* Workload::find_predicate(std::string_view id) const {
    for (const auto& p : predicates) {
        if (p.id == id) return &p;
    }
    return nullptr;
}

int Workload::predicate_pos(std::string_view id) const {
    for (size_t i = 0; i < predicates.size(); ++i) {
        if (predicates[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

std::map<std::string, int> Workload::frequencies() const {
    std::map<std::string, int> out;
    for (const auto& q : queries) out[q.id] = q.frequency;
    return out;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
    enum Kind { End, Ident, Var, Str, Num, Sym } kind = End;
    std::string text;
};

struct Lexer {
    std::string_view src;
    size_t pos = 0;

    Token next() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos >= src.size()) return {};
        const char c = src[pos];
        if (c == '$') {
            size_t start = ++pos;
            while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                        src[pos] == '_'))
                ++pos;
            return {Token::Var, std::string(src.substr(start, pos - start))};
        }
        if (c == '"') {
            size_t start = ++pos;
            while (pos < src.size() && src[pos] != '"') ++pos;
            if (pos >= src.size()) throw WorkloadParseError("unterminated string literal");
            std::string text(src.substr(start, pos - start));
            ++pos;
            return {Token::Str, std::move(text)};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) ||
                                        src[pos] == '_' || src[pos] == '-'))
                ++pos;
            return {Token::Ident, std::string(src.substr(start, pos - start))};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            return {Token::Num, std::string(src.substr(start, pos - start))};
        }
        if (c == '!' || c == '<' || c == '>') {
            if (pos + 1 < src.size() && src[pos + 1] == '=') {
                pos += 2;
                return {Token::Sym, std::string(src.substr(pos - 2, 2))};
            }
            ++pos;
            return {Token::Sym, std::string(1, c)};
        }
        ++pos;
        return {Token::Sym, std::string(1, c)};
    }
};

struct QueryParser {
    Lexer lex;
    Token tok;
    int query_index;
    const WarehouseMeta& meta;

    QueryParser(std::string_view src, int index, const WarehouseMeta& m)
        : lex{src}, query_index(index), meta(m) {
        advance();
    }

    void advance() { tok = lex.next(); }

    [[noreturn]] void fail(const std::string& what) {
        throw WorkloadParseError("query " + std::to_string(query_index) + ": " + what);
    }

    void expect_sym(std::string_view s) {
        if (tok.kind != Token::Sym || tok.text != s) {
            fail("expected '" + std::string(s) + "', found '" + tok.text + "'");
        }
        advance();
    }

    void expect_kw(std::string_view kw) {
        if (tok.kind != Token::Ident || tok.text != kw) {
            fail("expected '" + std::string(kw) + "', found '" + tok.text + "'");
        }
        advance();
    }

    std::string expect_ident() {
        if (tok.kind != Token::Ident) fail("expected identifier, found '" + tok.text + "'");
        std::string s = tok.text;
        advance();
        return s;
    }

    std::string expect_var() {
        if (tok.kind != Token::Var) fail("expected variable, found '" + tok.text + "'");
        std::string s = tok.text;
        advance();
        return s;
    }

    std::string expect_str() {
        if (tok.kind != Token::Str) fail("expected quoted string, found '" + tok.text + "'");
        std::string s = tok.text;
        advance();
        return s;
    }

    bool at_kw(std::string_view kw) const { return tok.kind == Token::Ident && tok.text == kw; }

    // path := "//FactDoc/Fact" | "//dimension[@dim-id=" QSTR "]/Level/instance"
    // Returns the bound dimension id, or empty for the fact path.
    std::string parse_path() {
        expect_sym("/");
        expect_sym("/");
        const std::string head = expect_ident();
        if (head == "FactDoc") {
            expect_sym("/");
            expect_kw("Fact");
            return {};
        }
        if (head != "dimension") fail("unknown binding path '//" + head + "'");
        expect_sym("[");
        expect_sym("@");
        if (expect_ident() != "dim-id") fail("expected @dim-id in dimension path");
        expect_sym("=");
        std::string dim = expect_str();
        expect_sym("]");
        expect_sym("/");
        expect_kw("Level");
        expect_sym("/");
        expect_kw("instance");
        if (!meta.find_dimension(dim)) fail("unknown dimension '" + dim + "'");
        return dim;
    }

    Cmp parse_cmp() {
        if (tok.kind != Token::Sym) fail("expected comparator, found '" + tok.text + "'");
        std::string s = tok.text;
        if (s != "=" && s != "!=" && s != "<" && s != "<=" && s != ">" && s != ">=") {
            fail("expected comparator, found '" + s + "'");
        }
        advance();
        return cmp_from_string(s);
    }
};

struct RawSelection {
    std::string var;
    std::string attribute_id;
    Cmp cmp;
    std::string raw_literal;
};

struct RawQuery {
    std::map<std::string, std::string> bindings; // var -> dimension id ("" = facts)
    std::vector<RawSelection> selections;
    std::vector<std::string> join_dims;
    int frequency = 1;
    std::string source_text;
};

RawQuery parse_query_block(const std::string& block, int index, const WarehouseMeta& meta) {
    QueryParser p(block, index, meta);
    RawQuery q;
    q.source_text = block;

    p.expect_kw("for");
    for (;;) {
        std::string var = p.expect_var();
        p.expect_kw("in");
        q.bindings[var] = p.parse_path();
        if (p.tok.kind == Token::Sym && p.tok.text == ",") {
            p.advance();
            continue;
        }
        break;
    }

    if (p.at_kw("where")) {
        p.advance();
        for (;;) {
            // clause := VAR "/attribute[...]..." | VAR "/dimension[...]..."
            std::string var = p.expect_var();
            if (!q.bindings.count(var)) p.fail("unbound variable '$" + var + "'");
            p.expect_sym("/");
            const std::string kind = p.expect_ident();
            if (kind == "attribute") {
                p.expect_sym("[");
                p.expect_sym("@");
                if (p.expect_ident() != "id") p.fail("expected @id in attribute step");
                p.expect_sym("=");
                std::string attr = p.expect_str();
                p.expect_sym("]");
                p.expect_sym("/");
                p.expect_sym("@");
                if (p.expect_ident() != "value") p.fail("expected /@value after attribute step");
                Cmp cmp = p.parse_cmp();
                std::string lit = p.expect_str();
                q.selections.push_back(RawSelection{var, attr, cmp, lit});
            } else if (kind == "dimension") {
                p.expect_sym("[");
                p.expect_sym("@");
                if (p.expect_ident() != "dim-id") p.fail("expected @dim-id in join clause");
                p.expect_sym("=");
                std::string dim = p.expect_str();
                p.expect_sym("]");
                p.expect_sym("/");
                p.expect_sym("@");
                if (p.expect_ident() != "value-id") p.fail("expected /@value-id in join clause");
                p.expect_sym("=");
                p.expect_var();
                p.expect_sym("/");
                p.expect_sym("@");
                if (p.expect_ident() != "id") p.fail("expected /@id in join clause");
                if (!meta.find_dimension(dim)) p.fail("unknown dimension '" + dim + "'");
                q.join_dims.push_back(dim);
            } else {
                p.fail("expected attribute or dimension step, found '" + kind + "'");
            }
            if (p.at_kw("and")) {
                p.advance();
                continue;
            }
            break;
        }
    }

    p.expect_kw("return");
    p.expect_var();
    if (p.tok.kind == Token::Sym && p.tok.text == "@") {
        p.advance();
        if (p.expect_ident() != "freq") p.fail("expected @freq annotation");
        p.expect_sym("=");
        if (p.tok.kind != Token::Num) p.fail("expected integer frequency");
        q.frequency = std::stoi(p.tok.text);
        p.advance();
        if (q.frequency < 1) p.fail("frequency must be >= 1");
    }
    if (p.tok.kind != Token::End) p.fail("trailing input after 'return': '" + p.tok.text + "'");
    return q;
}

std::vector<std::string> split_blocks(const std::string& text) {
    std::vector<std::string> blocks;
    std::string current;
    std::istringstream in(text);
    std::string line;
    auto flush = [&] {
        if (current.find_first_not_of(" \t\r\n") != std::string::npos) blocks.push_back(current);
        current.clear();
    };
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            flush();
        } else {
            current += line;
            current += '\n';
        }
    }
    flush();
    return blocks;
}

} // namespace

Workload parse_workload(const std::string& text, const WarehouseMeta& meta) {
    Workload out;
    std::map<std::string, int> canon; // canonical key -> predicate position

    const auto blocks = split_blocks(text);
    for (size_t qi = 0; qi < blocks.size(); ++qi) {
        RawQuery raw = parse_query_block(blocks[qi], static_cast<int>(qi) + 1, meta);

        WorkloadQuery q;
        q.id = "q" + std::to_string(qi + 1);
        q.frequency = raw.frequency;
        q.source_text = raw.source_text;
        for (const auto& dim : raw.join_dims) q.joined_dimensions.insert(dim);

        for (const auto& sel : raw.selections) {
            // The dimension owning a selection is the variable's binding when
            // it declares the attribute. Workloads in the wild reuse one
            // variable across dimensions, so fall back to the unique owner of
            // the attribute id.
            std::string dim = raw.bindings.at(sel.var);
            const AttributeMeta* attr = nullptr;
            if (!dim.empty()) attr = meta.find_dimension(dim)->find_attribute(sel.attribute_id);
            if (!attr) {
                std::string owner;
                attr = meta.find_unique_attribute(sel.attribute_id, &owner);
                if (!attr) {
                    throw WorkloadParseError("query " + std::to_string(qi + 1) +
                                             ": unknown attribute '" + sel.attribute_id + "'");
                }
                dim = owner;
            }

            SelectionPredicate p;
            p.dimension_id = dim;
            p.attribute_id = sel.attribute_id;
            p.cmp = sel.cmp;
            try {
                p.literal = Value::parse(attr->value_type, sel.raw_literal);
            } catch (const Error& e) {
                throw WorkloadParseError("query " + std::to_string(qi + 1) + ", attribute '" +
                                         sel.attribute_id + "': " + e.what());
            }

            const std::string key = p.canonical_key();
            auto [it, inserted] = canon.emplace(key, static_cast<int>(out.predicates.size()));
            if (inserted) {
                p.id = "p" + std::to_string(out.predicates.size() + 1);
                out.predicates.push_back(p);
            }
            const std::string& pid = out.predicates[static_cast<size_t>(it->second)].id;
            if (std::find(q.selections.begin(), q.selections.end(), pid) == q.selections.end()) {
                q.selections.push_back(pid);
            }
            q.joined_dimensions.insert(dim);
        }
        out.queries.push_back(std::move(q));
    }
    return out;
}

std::string to_text(const Workload& workload) {
    std::string out;
    for (const auto& q : workload.queries) {
        if (!out.empty()) out += "\n";
        std::map<std::string, std::string> var_of_dim;
        std::string text = "for $x in //FactDoc/Fact";
        int vi = 0;
        for (const auto& dim : q.joined_dimensions) {
            const std::string var = "d" + std::to_string(++vi);
            var_of_dim[dim] = var;
            text += ",\n    $" + var + " in //dimension[@dim-id=\"" + dim + "\"]/Level/instance";
        }
        bool first = true;
        auto clause = [&](const std::string& c) {
            text += first ? "\nwhere " : "\n  and ";
            text += c;
            first = false;
        };
        for (const auto& pid : q.selections) {
            const SelectionPredicate* p = workload.find_predicate(pid);
            clause("$" + var_of_dim.at(p->dimension_id) + "/attribute[@id=\"" + p->attribute_id +
                   "\"]/@value" + std::string(to_string(p->cmp)) + "\"" + p->literal.to_string() +
                   "\"");
        }
        for (const auto& dim : q.joined_dimensions) {
            clause("$x/dimension[@dim-id=\"" + dim + "\"]/@value-id=$" + var_of_dim.at(dim) +
                   "/@id");
        }
        text += "\nreturn $x";
        if (q.frequency != 1) text += " @freq=" + std::to_string(q.frequency);
        out += text;
        out += "\n";
    }
    return out;
}

std::vector<std::uint8_t> QueryPredicateMatrix::column(int pred_pos) const {
    std::vector<std::uint8_t> col(queries.size(), 0);
    for (size_t i = 0; i < queries.size(); ++i) col[i] = cells[i][static_cast<size_t>(pred_pos)];
    return col;
}

double QueryPredicateMatrix::density() const {
    if (queries.empty() || predicates.empty()) return 0.0;
    long long ones = 0;
    for (const auto& row : cells) {
        for (auto c : row) ones += c;
    }
    return static_cast<double>(ones) /
           (static_cast<double>(queries.size()) * static_cast<double>(predicates.size()));
}

QueryPredicateMatrix build_qp_matrix(const Workload& workload) {
    QueryPredicateMatrix m;
    for (const auto& q : workload.queries) m.queries.push_back(q.id);
    for (const auto& p : workload.predicates) m.predicates.push_back(p.id);
    m.cells.assign(m.queries.size(), std::vector<std::uint8_t>(m.predicates.size(), 0));
    for (size_t qi = 0; qi < workload.queries.size(); ++qi) {
        for (const auto& pid : workload.queries[qi].selections) {
            const int pos = workload.predicate_pos(pid);
            if (pos < 0) throw Error("query references unknown predicate '" + pid + "'");
            m.cells[qi][static_cast<size_t>(pos)] = 1;
        }
    }
    for (size_t j = 0; j < m.predicates.size(); ++j) {
        bool any = false;
        for (size_t i = 0; i < m.queries.size(); ++i) any = any || m.cells[i][j];
        if (!any) throw Error("predicate '" + m.predicates[j] + "' appears in no query");
    }
    return m;
}

} // namespace xwf
