#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lpsum/core.hpp"

namespace lps {

using nlohmann::json;

namespace {

json encode_value(double v) {
    if (is_inf(v)) return "inf";
    return v;
}

double decode_value(const json& j) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        throw UsageError("unknown value token: " + s);
    }
    if (!j.is_number()) throw UsageError("grid values must be numbers or \"inf\"");
    return j.get<double>();
}

}  // namespace

std::string grid_to_string(const GridFn& f) {
    json j;
    j["dim"] = f.dim;
    j["origin"] = std::vector<double>(f.origin.begin(), f.origin.begin() + f.dim);
    j["spacing"] = std::vector<double>(f.spacing.begin(), f.spacing.begin() + f.dim);
    j["shape"] = std::vector<int>(f.shape.begin(), f.shape.begin() + f.dim);
    j["kind"] = f.kind == Kind::base ? "base" : "density";
    json meta = json::object();
    for (const auto& [k, v] : f.meta) meta[k] = encode_value(v);
    j["meta"] = meta;
    json vals = json::array();
    for (double v : f.values) vals.push_back(encode_value(v));
    j["values"] = vals;
    // nlohmann prints doubles with round-trip precision.
    return j.dump();
}

GridFn grid_from_string(const std::string& text) {
    json j = json::parse(text);
    GridFn f;
    f.dim = j.at("dim").get<int>();
    if (f.dim < 1 || f.dim > 3) throw UsageError("dim must be 1, 2 or 3");
    auto origin = j.at("origin").get<std::vector<double>>();
    auto spacing = j.at("spacing").get<std::vector<double>>();
    auto shape = j.at("shape").get<std::vector<int>>();
    if ((int)origin.size() != f.dim || (int)spacing.size() != f.dim || (int)shape.size() != f.dim)
        throw UsageError("origin/spacing/shape must have dim entries");
    for (int a = 0; a < f.dim; ++a) {
        f.origin[a] = origin[a];
        f.spacing[a] = spacing[a];
        f.shape[a] = shape[a];
    }
    auto kind = j.at("kind").get<std::string>();
    if (kind == "base") f.kind = Kind::base;
    else if (kind == "density") f.kind = Kind::density;
    else throw UsageError("kind must be density or base");
    if (j.contains("meta"))
        for (auto it = j["meta"].begin(); it != j["meta"].end(); ++it)
            if (it->is_number() || it->is_string()) f.meta[it.key()] = decode_value(*it);
    const auto& vals = j.at("values");
    f.values.reserve(vals.size());
    for (const auto& v : vals) f.values.push_back(decode_value(v));
    f.validate();
    return f;
}

GridFn read_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return grid_from_string(ss.str());
}

void write_grid(const GridFn& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << grid_to_string(f) << '\n';
}

}  // namespace lps
