#include "charp/problem.hpp"

#include <cctype>

namespace charp {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1, col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char take() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }
    void skip_ws_inline() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) take();
    }
    void skip_ws_and_comments() {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                take();
            } else if (c == '#') {
                while (!eof() && peek() != '\n') take();
            } else {
                break;
            }
        }
    }
};

Value parse_value(Cursor& cur);

Value parse_list(Cursor& cur) {
    Value v;
    v.kind = Value::Kind::List;
    v.line = cur.line;
    cur.take();  // '['
    cur.skip_ws_and_comments();
    if (!cur.eof() && cur.peek() == ']') {
        cur.take();
        return v;
    }
    while (true) {
        cur.skip_ws_and_comments();
        v.list.push_back(parse_value(cur));
        cur.skip_ws_and_comments();
        if (cur.eof()) throw ParseError(cur.line, cur.col, ", or ]", "unterminated list");
        char c = cur.peek();
        if (c == ',') {
            cur.take();
            continue;
        }
        if (c == ']') {
            cur.take();
            return v;
        }
        throw ParseError(cur.line, cur.col, ", or ]", std::string("unexpected '") + c + "' in list");
    }
}

Value parse_value(Cursor& cur) {
    cur.skip_ws_inline();
    if (cur.eof()) throw ParseError(cur.line, cur.col, "integer, string or [", "missing value");
    char c = cur.peek();
    if (c == '[') return parse_list(cur);
    Value v;
    v.line = cur.line;
    if (c == '"') {
        cur.take();
        v.kind = Value::Kind::Str;
        while (!cur.eof() && cur.peek() != '"' && cur.peek() != '\n') v.s += cur.take();
        if (cur.eof() || cur.peek() != '"')
            throw ParseError(cur.line, cur.col, "closing \"", "unterminated string");
        cur.take();
        return v;
    }
    if (c == '-' || std::isdigit((unsigned char)c)) {
        v.kind = Value::Kind::Int;
        std::string digits;
        if (c == '-') digits += cur.take();
        while (!cur.eof() && std::isdigit((unsigned char)cur.peek())) digits += cur.take();
        if (digits.empty() || digits == "-")
            throw ParseError(cur.line, cur.col, "digits", "malformed integer");
        v.i = std::stoll(digits);
        return v;
    }
    throw ParseError(cur.line, cur.col, "integer, string or [", std::string("unexpected '") + c + "'");
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
    ProblemFile pf;
    Cursor cur{text};
    std::string section;
    while (true) {
        cur.skip_ws_and_comments();
        if (cur.eof()) break;
        char c = cur.peek();
        if (c == '[') {
            cur.take();
            std::string name;
            while (!cur.eof() && cur.peek() != ']' && cur.peek() != '\n') name += cur.take();
            if (cur.eof() || cur.peek() != ']') throw ParseError(cur.line, cur.col, "]", "unterminated section header");
            cur.take();
            if (name.empty()) throw ParseError(cur.line, cur.col, "section name", "empty section header");
            section = name;
            pf.sections[section];
            continue;
        }
        if (!std::isalpha((unsigned char)c) && c != '_')
            throw ParseError(cur.line, cur.col, "[section] or key", std::string("unexpected '") + c + "'");
        if (section.empty())
            throw ParseError(cur.line, cur.col, "[section]", "key outside of any section");
        std::string key;
        while (!cur.eof() && (std::isalnum((unsigned char)cur.peek()) || cur.peek() == '_')) key += cur.take();
        cur.skip_ws_inline();
        if (cur.eof() || cur.peek() != '=') throw ParseError(cur.line, cur.col, "=", "expected '=' after key");
        cur.take();
        Value v = parse_value(cur);
        cur.skip_ws_inline();
        if (!cur.eof() && cur.peek() == '#')
            while (!cur.eof() && cur.peek() != '\n') cur.take();
        if (!cur.eof() && cur.peek() != '\n')
            throw ParseError(cur.line, cur.col, "end of line", "trailing input after value");
        if (pf.sections[section].count(key))
            throw ParseError(cur.line, cur.col, "unique key", "duplicate key '" + key + "' in [" + section + "]");
        pf.sections[section][key] = std::move(v);
    }
    return pf;
}

bool ProblemFile::has(const std::string& section, const std::string& key) const {
    auto it = sections.find(section);
    return it != sections.end() && it->second.count(key) > 0;
}

const Value& ProblemFile::get(const std::string& section, const std::string& key) const {
    auto it = sections.find(section);
    if (it == sections.end()) throw ValidationError("missing [" + section + "] block");
    auto kit = it->second.find(key);
    if (kit == it->second.end()) throw ValidationError("missing key '" + key + "' in [" + section + "]");
    return kit->second;
}

long long ProblemFile::get_int(const std::string& section, const std::string& key) const {
    const Value& v = get(section, key);
    if (v.kind != Value::Kind::Int) throw ValidationError("'" + key + "' in [" + section + "] must be an integer");
    return v.i;
}

long long ProblemFile::get_int_or(const std::string& section, const std::string& key, long long fallback) const {
    if (!has(section, key)) return fallback;
    return get_int(section, key);
}

const std::string& ProblemFile::get_str(const std::string& section, const std::string& key) const {
    const Value& v = get(section, key);
    if (v.kind != Value::Kind::Str) throw ValidationError("'" + key + "' in [" + section + "] must be a string");
    return v.s;
}

std::vector<long long> ProblemFile::get_int_list(const std::string& section, const std::string& key) const {
    const Value& v = get(section, key);
    if (v.kind != Value::Kind::List) throw ValidationError("'" + key + "' in [" + section + "] must be a list");
    std::vector<long long> out;
    for (const auto& e : v.list) {
        if (e.kind != Value::Kind::Int)
            throw ValidationError("'" + key + "' in [" + section + "] must be a list of integers");
        out.push_back(e.i);
    }
    return out;
}

std::vector<std::string> ProblemFile::get_str_list(const std::string& section, const std::string& key) const {
    const Value& v = get(section, key);
    if (v.kind != Value::Kind::List) throw ValidationError("'" + key + "' in [" + section + "] must be a list");
    std::vector<std::string> out;
    for (const auto& e : v.list) {
        if (e.kind != Value::Kind::Str)
            throw ValidationError("'" + key + "' in [" + section + "] must be a list of strings");
        out.push_back(e.s);
    }
    return out;
}

std::vector<std::vector<long long>> ProblemFile::get_int_matrix(const std::string& section,
                                                                const std::string& key) const {
    const Value& v = get(section, key);
    if (v.kind != Value::Kind::List) throw ValidationError("'" + key + "' in [" + section + "] must be a list");
    std::vector<std::vector<long long>> out;
    for (const auto& row : v.list) {
        if (row.kind != Value::Kind::List)
            throw ValidationError("'" + key + "' in [" + section + "] must be a list of integer lists");
        std::vector<long long> r;
        for (const auto& e : row.list) {
            if (e.kind != Value::Kind::Int)
                throw ValidationError("'" + key + "' in [" + section + "] must contain integers");
            r.push_back(e.i);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace charp
