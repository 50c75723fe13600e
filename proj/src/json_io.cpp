#include "wco/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace wco {

namespace {

void put_number(std::string& out, double x) {
    if (!std::isfinite(x)) {
        out += "null";
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    out += buf;
}

void newline(std::string& out, int indent, int depth) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * depth), ' ');
}

void write(std::string& out, const Json& j, int indent, int depth) {
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ',';
            first = false;
            newline(out, indent, depth + 1);
            out += Json(key).dump();
            out += indent < 0 ? ":" : ": ";
            write(out, value, indent, depth + 1);
        }
        newline(out, indent, depth);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        bool flat = true;
        for (const auto& v : j) flat = flat && !v.is_structured();
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += flat ? ", " : ",";
            first = false;
            if (!flat) newline(out, indent, depth + 1);
            write(out, v, indent, depth + 1);
        }
        if (!flat) newline(out, indent, depth);
        out += ']';
        return;
    }
    case Json::value_t::number_float:
        put_number(out, j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

}  // namespace

std::string dump_json(const Json& doc, int indent) {
    std::string out;
    write(out, doc, indent, 0);
    if (indent >= 0) out += '\n';
    return out;
}

Json complex_to_json(std::complex<double> z) {
    return Json::array({z.real(), z.imag()});
}

}  // namespace wco
