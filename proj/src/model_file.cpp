#include "canard/model_file.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "canard/toml.hpp"

namespace canard {

namespace {

const toml::Value* find(const toml::Table& t, const std::string& key) {
    auto it = t.find(key);
    return it == t.end() ? nullptr : &it->second;
}

const toml::Value& require(const toml::Table& t, const std::string& key,
                           const std::string& where) {
    const toml::Value* v = find(t, key);
    if (!v) throw ModelFileError("missing key '" + key + "' in [" + where + "]");
    return *v;
}

std::vector<std::string> string_list(const toml::Value& v, const std::string& what) {
    if (!v.is_array()) throw ModelFileError(what + " must be an array of strings");
    std::vector<std::string> out;
    for (const toml::Value& item : v.as_array()) {
        if (!item.is_string()) throw ModelFileError(what + " must be an array of strings");
        out.push_back(item.as_string());
    }
    return out;
}

Point number_pair(const toml::Value& v, const std::string& what) {
    if (!v.is_array() || v.as_array().size() != 2 || !v.as_array()[0].is_number() ||
        !v.as_array()[1].is_number())
        throw ModelFileError(what + " must be an array of two numbers");
    return {v.as_array()[0].as_number(), v.as_array()[1].as_number()};
}

Expr parse_field(const std::string& text, const SymbolSet& symbols, const std::string& what) {
    try {
        return parse_expression(text, symbols);
    } catch (const ParseError& e) {
        throw ModelFileError(what + ": " + e.what());
    }
}

} // namespace

ModelFile parse_model_file(const std::string& toml_text) {
    toml::Table root;
    try {
        root = toml::parse(toml_text);
    } catch (const toml::TomlError& e) {
        throw ModelFileError(std::string("TOML: ") + e.what());
    }

    const toml::Value* model_v = find(root, "model");
    if (!model_v || !model_v->is_table()) throw ModelFileError("missing [model] section");
    const toml::Table& model_t = model_v->as_table();

    ModelFile mf;
    if (const toml::Value* n = find(model_t, "name"); n && n->is_string()) mf.name = n->as_string();

    std::vector<std::string> vars = string_list(require(model_t, "vars", "model"), "vars");
    if (vars != std::vector<std::string>{"x", "y"})
        throw ModelFileError("vars must be exactly [\"x\", \"y\"]");
    std::vector<std::string> params;
    if (const toml::Value* p = find(model_t, "params")) params = string_list(*p, "params");
    for (const std::string& p : params) {
        if (p == "x" || p == "y") throw ModelFileError("parameter shadows a variable: " + p);
        if (std::count(params.begin(), params.end(), p) > 1)
            throw ModelFileError("duplicate parameter: " + p);
    }

    SymbolSet symbols{vars, params};
    mf.model.parameters = params;
    const toml::Value& f_v = require(model_t, "F", "model");
    if (!f_v.is_string()) throw ModelFileError("F must be a string expression");
    mf.model.F = parse_field(f_v.as_string(), symbols, "F");

    auto field = [&](const char* key) {
        std::vector<std::string> comps = string_list(require(model_t, key, "model"), key);
        if (comps.size() != 2)
            throw ModelFileError(std::string(key) + " must have exactly two components");
        return VectorField{parse_field(comps[0], symbols, key), parse_field(comps[1], symbols, key)};
    };
    mf.model.Z = field("Z");
    mf.model.Q = field("Q");

    if (const toml::Value* metric_v = find(model_t, "metric")) {
        if (!metric_v->is_table()) throw ModelFileError("metric must be an inline table");
        const toml::Table& mt = metric_v->as_table();
        auto coeff = [&](const char* key) {
            const toml::Value& v = require(mt, key, "model.metric");
            if (!v.is_string()) throw ModelFileError(std::string("metric.") + key + " must be a string");
            return parse_field(v.as_string(), symbols, std::string("metric.") + key);
        };
        mf.model.metric = {coeff("E"), coeff("F"), coeff("G")};
    }

    if (const toml::Value* b = find(model_t, "breaking")) {
        if (!b->is_string()) throw ModelFileError("breaking must be a parameter name");
        mf.breaking = b->as_string();
        if (std::find(params.begin(), params.end(), mf.breaking) == params.end())
            throw ModelFileError("breaking parameter '" + mf.breaking + "' is not declared");
    }

    if (const toml::Value* point_v = find(root, "point")) {
        if (!point_v->is_table()) throw ModelFileError("[point] must be a table");
        const toml::Table& pt = point_v->as_table();
        if (const toml::Value* g = find(pt, "guess")) mf.guess = number_pair(*g, "guess");
        if (const toml::Value* pv = find(pt, "params")) {
            if (!pv->is_table()) throw ModelFileError("point.params must be a table");
            for (const auto& [k, v] : pv->as_table()) {
                if (std::find(params.begin(), params.end(), k) == params.end())
                    throw ModelFileError("point.params names undeclared parameter '" + k + "'");
                if (!v.is_number()) throw ModelFileError("point.params." + k + " must be a number");
                mf.point_params[k] = v.as_number();
            }
        }
    }

    if (const toml::Value* an = find(root, "analysis")) {
        if (!an->is_table()) throw ModelFileError("[analysis] must be a table");
        const toml::Table& at = an->as_table();
        if (const toml::Value* v = find(at, "tol_residual")) mf.tol.residual = v->as_number();
        if (const toml::Value* v = find(at, "tol_degenerate")) mf.tol.degenerate = v->as_number();
        if (const toml::Value* v = find(at, "tol_newton")) mf.tol.newton_step = v->as_number();
        if (const toml::Value* v = find(at, "seed"))
            mf.seed = static_cast<std::uint64_t>(v->as_number());
    }

    if (const toml::Value* sim = find(root, "sim")) {
        if (!sim->is_table()) throw ModelFileError("[sim] must be a table");
        const toml::Table& st = sim->as_table();
        if (const toml::Value* v = find(st, "start")) mf.sim_start = number_pair(*v, "sim.start");
        if (const toml::Value* v = find(st, "dt")) mf.sim_dt = v->as_number();
    }

    return mf;
}

ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelFileError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_model_file(buf.str());
    } catch (const ModelFileError& e) {
        throw ModelFileError(path + ": " + e.what());
    }
}

Bindings resolve_parameters(const ModelFile& mf, const std::vector<std::string>& overrides) {
    Bindings params = mf.point_params;
    for (const std::string& entry : overrides) {
        std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw ModelFileError("parameter override must look like name=value: " + entry);
        std::string name = entry.substr(0, eq);
        const std::string value = entry.substr(eq + 1);
        if (std::find(mf.model.parameters.begin(), mf.model.parameters.end(), name) ==
            mf.model.parameters.end())
            throw ModelFileError("override names undeclared parameter '" + name + "'");
        char* end = nullptr;
        double v = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0')
            throw ModelFileError("malformed value in override: " + entry);
        params[name] = v;
    }
    for (const std::string& p : mf.model.parameters)
        if (!params.count(p)) throw ModelFileError("parameter '" + p + "' has no value");
    return params;
}

} // namespace canard
