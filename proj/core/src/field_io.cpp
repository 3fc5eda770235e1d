#include "bmoext/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bmoext {

namespace {

using json = nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_header(std::ostream& os, const Grid& g, const char* kind) {
    os << "FLD/1 {\"nx\":" << g.nx << ",\"ny\":" << g.ny
       << ",\"x0\":" << fmt(g.x0) << ",\"y0\":" << fmt(g.y0)
       << ",\"h\":" << fmt(g.h) << ",\"kind\":\"" << kind << "\"}\n";
}

struct Header {
    Grid grid;
    std::string kind;
};

Header parse_header(const std::string& line) {
    if (line.rfind("FLD/1 ", 0) != 0)
        throw IoError("malformed header: expected FLD/1 magic");
    json j;
    try {
        j = json::parse(line.substr(6));
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed header: ") + e.what());
    }
    Header h;
    try {
        h.grid.nx = j.at("nx").get<int>();
        h.grid.ny = j.at("ny").get<int>();
        h.grid.x0 = j.at("x0").get<double>();
        h.grid.y0 = j.at("y0").get<double>();
        h.grid.h = j.at("h").get<double>();
        h.kind = j.at("kind").get<std::string>();
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed header: ") + e.what());
    }
    if (h.grid.nx <= 0 || h.grid.ny <= 0 || !(h.grid.h > 0))
        throw IoError("malformed header: invalid grid dimensions");
    if (h.kind != "scalar" && h.kind != "vector2")
        throw IoError("malformed header: unknown kind '" + h.kind + "'");
    return h;
}

void write_values(std::ostream& os, const ScalarField& f,
                  const ScalarField* second) {
    for (int j = 0; j < f.ny(); ++j) {
        for (int i = 0; i < f.nx(); ++i) {
            if (i) os << ' ';
            if (f.masked(i, j)) {
                if (!std::isfinite(f.value(i, j)))
                    throw IoError("masked cells must hold finite values");
                os << fmt(f.value(i, j));
            } else {
                os << "nan";
            }
            if (second) {
                os << ' ';
                if (second->masked(i, j))
                    os << fmt(second->value(i, j));
                else
                    os << "nan";
            }
        }
        os << '\n';
    }
}

std::vector<double> read_tokens(std::istream& is, long expected,
                                std::vector<std::uint8_t>& mask) {
    std::vector<double> vals;
    vals.reserve(expected);
    mask.reserve(expected);
    std::string tok;
    while (is >> tok) {
        if (tok == "nan") {
            vals.push_back(std::numeric_limits<double>::quiet_NaN());
            mask.push_back(0);
            continue;
        }
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw IoError("non-numeric token '" + tok + "'");
        vals.push_back(v);
        mask.push_back(1);
    }
    if ((long)vals.size() != expected) {
        std::ostringstream os;
        os << "dimension mismatch: expected " << expected << " values, found "
           << vals.size();
        throw IoError(os.str());
    }
    return vals;
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& f) {
    write_header(os, f.grid(), "scalar");
    write_values(os, f, nullptr);
}

void write_field(std::ostream& os, const VectorField& f) {
    write_header(os, f.grid(), "vector2");
    write_values(os, f.c1, &f.c2);
}

AnyField read_field(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty field file");
    const Header h = parse_header(line);
    const long cells = h.grid.size();
    std::vector<std::uint8_t> mask;
    if (h.kind == "scalar") {
        const auto vals = read_tokens(is, cells, mask);
        ScalarField f(h.grid);
        for (long k = 0; k < cells; ++k)
            if (mask[k]) f.set((int)(k % h.grid.nx), (int)(k / h.grid.nx), vals[k]);
        return f;
    }
    const auto vals = read_tokens(is, 2 * cells, mask);
    ScalarField a(h.grid), b(h.grid);
    for (long k = 0; k < cells; ++k) {
        const int i = (int)(k % h.grid.nx), j = (int)(k / h.grid.nx);
        if (mask[2 * k]) a.set(i, j, vals[2 * k]);
        if (mask[2 * k + 1]) b.set(i, j, vals[2 * k + 1]);
    }
    return VectorField{std::move(a), std::move(b)};
}

void write_field_file(const std::string& path, const ScalarField& f) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_field(os, f);
}

void write_field_file(const std::string& path, const VectorField& f) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_field(os, f);
}

AnyField read_field_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return read_field(is);
}

ScalarField read_scalar_field_file(const std::string& path) {
    AnyField f = read_field_file(path);
    if (auto* s = std::get_if<ScalarField>(&f)) return std::move(*s);
    throw IoError(path + " holds a vector2 field, expected scalar");
}

VectorField read_vector_field_file(const std::string& path) {
    AnyField f = read_field_file(path);
    if (auto* v = std::get_if<VectorField>(&f)) return std::move(*v);
    throw IoError(path + " holds a scalar field, expected vector2");
}

}  // namespace bmoext
