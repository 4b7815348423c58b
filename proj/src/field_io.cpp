#include "blab/field_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace blab {

namespace {

void format_double(std::string& out, double v) {
    char buf[40];
    int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, n);
}

double parse_double(const char*& p, const char* end) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{}) throw precondition_error("CFLD-1: malformed number");
    p = next;
    return v;
}

}  // namespace

void write_cfld(std::ostream& os, const ComplexField& f) {
    if (!f.all_finite()) throw precondition_error("CFLD-1: refusing to write non-finite field");
    std::string buf;
    buf.reserve(64);
    buf = "CFLD1 ";
    buf += std::to_string(f.spec.resolution);
    buf += ' ';
    format_double(buf, f.spec.half_width);
    buf += ' ';
    format_double(buf, f.spec.center.real());
    buf += ' ';
    format_double(buf, f.spec.center.imag());
    buf += '\n';
    os << buf;
    for (const auto& v : f.values) {
        buf.clear();
        format_double(buf, v.real());
        buf += ' ';
        format_double(buf, v.imag());
        buf += '\n';
        os << buf;
    }
    if (!os) throw std::runtime_error("CFLD-1: write failed");
}

void write_cfld(const std::filesystem::path& path, const ComplexField& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("CFLD-1: cannot open " + path.string());
    write_cfld(os, f);
}

ComplexField read_cfld(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw precondition_error("CFLD-1: empty stream");
    std::istringstream hdr(line);
    std::string magic;
    hdr >> magic;
    if (magic != "CFLD1") throw precondition_error("CFLD-1: bad magic");
    int N = 0;
    std::string ntok, ltok, crtok, citok;
    hdr >> ntok >> ltok >> crtok >> citok;
    {
        const char* p = ntok.data();
        auto [next, ec] = std::from_chars(p, p + ntok.size(), N);
        if (ec != std::errc{}) throw precondition_error("CFLD-1: bad N");
        (void)next;
    }
    auto parse_tok = [](const std::string& s) {
        const char* p = s.data();
        return parse_double(p, s.data() + s.size());
    };
    const double L = parse_tok(ltok);
    const double cr = parse_tok(crtok);
    const double ci = parse_tok(citok);
    GridSpec g(Complex(cr, ci), L, N);
    ComplexField f(g);
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        if (!std::getline(is, line))
            throw precondition_error("CFLD-1: truncated file at sample " + std::to_string(k));
        const char* p = line.data();
        const char* end = line.data() + line.size();
        const double re = parse_double(p, end);
        const double im = parse_double(p, end);
        if (!std::isfinite(re) || !std::isfinite(im))
            throw precondition_error("CFLD-1: non-finite sample");
        f.values[k] = Complex(re, im);
    }
    return f;
}

ComplexField read_cfld(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("CFLD-1: cannot open " + path.string());
    return read_cfld(is);
}

void write_cfld(const std::filesystem::path& path, const RealField& f) {
    ComplexField c(f.spec);
    for (std::size_t k = 0; k < f.values.size(); ++k) c.values[k] = Complex(f.values[k], 0.0);
    write_cfld(path, c);
}

RealField read_real_cfld(const std::filesystem::path& path) {
    ComplexField c = read_cfld(path);
    RealField r(c.spec);
    for (std::size_t k = 0; k < c.values.size(); ++k) {
        if (std::abs(c.values[k].imag()) > 1e-12 * (1.0 + std::abs(c.values[k].real())))
            throw precondition_error("CFLD-1: expected a real field, found imaginary parts");
        r.values[k] = c.values[k].real();
    }
    return r;
}

}  // namespace blab
