#ifndef CANARD_TOML_HPP
#define CANARD_TOML_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// Minimal TOML reader covering the subset the model files use: comments,
// [table] headers, dotted keys, basic strings, numbers, booleans, single-line
// arrays and inline tables.

namespace canard::toml {

class TomlError : public std::runtime_error {
public:
    TomlError(const std::string& message, int line)
        : std::runtime_error(message + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class Value;
using Array = std::vector<Value>;
using Table = std::map<std::string, Value>;

class Value {
public:
    Value() : data_(std::string{}) {}
    explicit Value(std::string s) : data_(std::move(s)) {}
    explicit Value(double d) : data_(d) {}
    explicit Value(bool b) : data_(b) {}
    explicit Value(Array a) : data_(std::move(a)) {}
    explicit Value(Table t) : data_(std::move(t)) {}

    bool is_string() const { return std::holds_alternative<std::string>(data_); }
    bool is_number() const { return std::holds_alternative<double>(data_); }
    bool is_bool() const { return std::holds_alternative<bool>(data_); }
    bool is_array() const { return std::holds_alternative<Array>(data_); }
    bool is_table() const { return std::holds_alternative<Table>(data_); }

    const std::string& as_string() const { return std::get<std::string>(data_); }
    double as_number() const { return std::get<double>(data_); }
    bool as_bool() const { return std::get<bool>(data_); }
    const Array& as_array() const { return std::get<Array>(data_); }
    const Table& as_table() const { return std::get<Table>(data_); }
    Table& as_table() { return std::get<Table>(data_); }

private:
    std::variant<std::string, double, bool, Array, Table> data_;
};

/// Parse TOML text; throws TomlError with a 1-based line number.
Table parse(const std::string& text);

/// Parse a file; throws TomlError / std::runtime_error on I/O failure.
Table parse_file(const std::string& path);

} // namespace canard::toml

#endif
