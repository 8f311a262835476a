#include "canard/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace canard::toml {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return eof() ? '\0' : text[pos]; }
    char get() {
        char c = text[pos++];
        if (c == '\n') ++line;
        return c;
    }
    void skip_ws_inline() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos;
    }
    void skip_ws_and_comments() {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                get();
            } else if (c == '#') {
                while (!eof() && peek() != '\n') get();
            } else {
                break;
            }
        }
    }
    [[noreturn]] void fail(const std::string& message) const { throw TomlError(message, line); }
};

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_key_part(Cursor& c) {
    c.skip_ws_inline();
    if (c.peek() == '"') {
        c.get();
        std::string out;
        while (!c.eof() && c.peek() != '"') out += c.get();
        if (c.eof()) c.fail("unterminated quoted key");
        c.get();
        return out;
    }
    std::string out;
    while (!c.eof() && is_bare_key_char(c.peek())) out += c.get();
    if (out.empty()) c.fail("expected a key");
    return out;
}

std::vector<std::string> parse_dotted_key(Cursor& c) {
    std::vector<std::string> parts{parse_key_part(c)};
    c.skip_ws_inline();
    while (c.peek() == '.') {
        c.get();
        parts.push_back(parse_key_part(c));
        c.skip_ws_inline();
    }
    return parts;
}

Value parse_value(Cursor& c);

std::string parse_basic_string(Cursor& c) {
    c.get(); // opening quote
    std::string out;
    while (!c.eof() && c.peek() != '"') {
        char ch = c.get();
        if (ch == '\n') c.fail("newline in basic string");
        if (ch == '\\') {
            if (c.eof()) c.fail("dangling escape");
            char esc = c.get();
            switch (esc) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: c.fail(std::string("unsupported escape \\") + esc);
            }
        } else {
            out += ch;
        }
    }
    if (c.eof()) c.fail("unterminated string");
    c.get();
    return out;
}

Value parse_number_or_bool(Cursor& c) {
    std::string tok;
    while (!c.eof() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '+' ||
                        c.peek() == '-' || c.peek() == '.' || c.peek() == '_'))
        tok += c.get();
    if (tok == "true") return Value(true);
    if (tok == "false") return Value(false);
    std::string digits;
    for (char ch : tok)
        if (ch != '_') digits += ch;
    char* end = nullptr;
    double v = std::strtod(digits.c_str(), &end);
    if (end == digits.c_str() || *end != '\0') c.fail("malformed value '" + tok + "'");
    return Value(v);
}

Value parse_array(Cursor& c) {
    c.get(); // '['
    Array items;
    for (;;) {
        c.skip_ws_and_comments();
        if (c.peek() == ']') {
            c.get();
            break;
        }
        items.push_back(parse_value(c));
        c.skip_ws_and_comments();
        if (c.peek() == ',') {
            c.get();
            continue;
        }
        if (c.peek() == ']') {
            c.get();
            break;
        }
        c.fail("expected ',' or ']' in array");
    }
    return Value(std::move(items));
}

Value parse_inline_table(Cursor& c) {
    c.get(); // '{'
    Table t;
    c.skip_ws_inline();
    if (c.peek() == '}') {
        c.get();
        return Value(std::move(t));
    }
    for (;;) {
        std::string key = parse_key_part(c);
        c.skip_ws_inline();
        if (c.peek() != '=') c.fail("expected '=' in inline table");
        c.get();
        c.skip_ws_inline();
        t[key] = parse_value(c);
        c.skip_ws_inline();
        if (c.peek() == ',') {
            c.get();
            c.skip_ws_inline();
            continue;
        }
        if (c.peek() == '}') {
            c.get();
            return Value(std::move(t));
        }
        c.fail("expected ',' or '}' in inline table");
    }
}

Value parse_value(Cursor& c) {
    c.skip_ws_inline();
    char ch = c.peek();
    if (ch == '"') return Value(parse_basic_string(c));
    if (ch == '[') return parse_array(c);
    if (ch == '{') return parse_inline_table(c);
    return parse_number_or_bool(c);
}

Table* descend(Table& root, const std::vector<std::string>& path, Cursor& c) {
    Table* t = &root;
    for (const std::string& part : path) {
        auto it = t->find(part);
        if (it == t->end()) it = t->emplace(part, Value(Table{})).first;
        if (!it->second.is_table()) c.fail("key '" + part + "' is not a table");
        t = &it->second.as_table();
    }
    return t;
}

} // namespace

Table parse(const std::string& text) {
    Cursor c{text};
    Table root;
    Table* current = &root;

    for (;;) {
        c.skip_ws_and_comments();
        if (c.eof()) break;
        if (c.peek() == '[') {
            c.get();
            std::vector<std::string> path = parse_dotted_key(c);
            c.skip_ws_inline();
            if (c.peek() != ']') c.fail("expected ']' after table header");
            c.get();
            current = descend(root, path, c);
            continue;
        }
        std::vector<std::string> key = parse_dotted_key(c);
        c.skip_ws_inline();
        if (c.peek() != '=') c.fail("expected '=' after key '" + key.back() + "'");
        c.get();
        Value v = parse_value(c);
        Table* t = current;
        if (key.size() > 1)
            t = descend(*current, {key.begin(), key.end() - 1}, c);
        if (t->count(key.back())) c.fail("duplicate key '" + key.back() + "'");
        (*t)[key.back()] = std::move(v);
        c.skip_ws_inline();
        if (!c.eof() && c.peek() == '#')
            while (!c.eof() && c.peek() != '\n') c.get();
        if (!c.eof() && c.peek() != '\n' && c.peek() != '\r')
            c.fail("unexpected trailing content after value");
    }
    return root;
}

Table parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

} // namespace canard::toml
