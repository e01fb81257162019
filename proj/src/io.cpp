#include "qshess/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace qshess {

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& tok, const std::string& path, int line) {
    double v = 0.0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        fail(path, line, "bad number '" + tok + "'");
    return v;
}

cx parse_cx(const std::string& tok, const std::string& path, int line) {
    const auto comma = tok.find(',');
    if (comma == std::string::npos) return cx{parse_double(tok, path, line), 0.0};
    return cx{parse_double(tok.substr(0, comma), path, line),
              parse_double(tok.substr(comma + 1), path, line)};
}

struct LineReader {
    std::string path;
    std::ifstream in;
    int line = 0;

    explicit LineReader(const std::string& p) : path(p), in(p) {
        if (!in) throw std::runtime_error(path + ": cannot open");
    }

    std::string next() {
        std::string s;
        while (std::getline(in, s)) {
            ++line;
            // trim trailing CR/space
            while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
                s.pop_back();
            if (!s.empty()) return s;
        }
        fail(path, line + 1, "unexpected end of file");
    }

    std::vector<std::string> tokens(int expected) {
        const std::string s = next();
        std::vector<std::string> out;
        std::istringstream is(s);
        std::string t;
        while (is >> t) out.push_back(t);
        if (expected >= 0 && static_cast<int>(out.size()) != expected)
            fail(path, line,
                 "expected " + std::to_string(expected) + " fields, got " +
                     std::to_string(out.size()));
        return out;
    }
};

void read_cx_matrix(LineReader& lr, DenseMatrix& M) {
    for (int i = 0; i < M.rows; ++i) {
        const auto toks = lr.tokens(M.cols);
        for (int j = 0; j < M.cols; ++j)
            M(i, j) = parse_cx(toks[static_cast<size_t>(j)], lr.path, lr.line);
    }
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_cx(cx z, bool force_pair) {
    if (!force_pair && z.imag() == 0.0) return format_double(z.real());
    return format_double(z.real()) + "," + format_double(z.imag());
}

ProblemFile read_problem(const std::string& path) {
    LineReader lr(path);
    {
        const auto h = lr.tokens(2);
        if (h[0] != "QSHESS" || h[1] != "1") fail(path, lr.line, "not a QSHESS 1 problem file");
    }
    ProblemFile pf;
    {
        const auto h = lr.tokens(3);
        pf.n = static_cast<int>(parse_double(h[0], path, lr.line));
        pf.k = static_cast<int>(parse_double(h[1], path, lr.line));
        if (h[2] == "real")
            pf.complex_entries = false;
        else if (h[2] == "complex")
            pf.complex_entries = true;
        else
            fail(path, lr.line, "field type must be 'real' or 'complex'");
        if (pf.n < 1 || pf.k < 1 || pf.k >= pf.n)
            fail(path, lr.line, "need n > k >= 1");
    }
    pf.D.resize(static_cast<size_t>(pf.n));
    for (int i = 0; i < pf.n; ++i) {
        const auto toks = lr.tokens(1);
        pf.D[static_cast<size_t>(i)] = parse_double(toks[0], path, lr.line);
    }
    pf.U = DenseMatrix(pf.n, pf.k);
    pf.V = DenseMatrix(pf.n, pf.k);
    read_cx_matrix(lr, pf.U);
    read_cx_matrix(lr, pf.V);
    return pf;
}

void write_problem(const ProblemFile& pf, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot write");
    out << "QSHESS 1\n";
    out << pf.n << ' ' << pf.k << ' ' << (pf.complex_entries ? "complex" : "real") << '\n';
    for (int i = 0; i < pf.n; ++i) out << format_double(pf.D[static_cast<size_t>(i)]) << '\n';
    for (const DenseMatrix* M : {&pf.U, &pf.V})
        for (int i = 0; i < M->rows; ++i) {
            for (int j = 0; j < M->cols; ++j) {
                if (j) out << ' ';
                out << format_cx((*M)(i, j), pf.complex_entries);
            }
            out << '\n';
        }
    if (!out.flush()) throw std::runtime_error(path + ": write failed");
}

void write_hessenberg(const HessenbergForm& hf, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot write");
    out << "QSHESS-H 1\n";
    out << hf.n << ' ' << hf.k << '\n';
    for (int i = 0; i < hf.n; ++i) out << format_cx(hf.d[static_cast<size_t>(i)], true) << '\n';
    for (int i = 0; i + 1 < hf.n; ++i)
        out << format_cx(hf.s[static_cast<size_t>(i)], true) << '\n';
    for (const DenseMatrix* M : {&hf.Uf, &hf.Vf})
        for (int i = 0; i < M->rows; ++i) {
            for (int j = 0; j < M->cols; ++j) {
                if (j) out << ' ';
                out << format_cx((*M)(i, j), true);
            }
            out << '\n';
        }
    if (!out.flush()) throw std::runtime_error(path + ": write failed");
}

HessenbergForm read_hessenberg(const std::string& path) {
    LineReader lr(path);
    {
        const auto h = lr.tokens(2);
        if (h[0] != "QSHESS-H" || h[1] != "1")
            fail(path, lr.line, "not a QSHESS-H 1 file");
    }
    HessenbergForm hf;
    {
        const auto h = lr.tokens(2);
        hf.n = static_cast<int>(parse_double(h[0], path, lr.line));
        hf.k = static_cast<int>(parse_double(h[1], path, lr.line));
        if (hf.n < 1 || hf.k < 1) fail(path, lr.line, "bad dimensions");
    }
    hf.d.resize(static_cast<size_t>(hf.n));
    for (int i = 0; i < hf.n; ++i)
        hf.d[static_cast<size_t>(i)] = parse_cx(lr.tokens(1)[0], path, lr.line);
    if (hf.n > 1) hf.s.resize(static_cast<size_t>(hf.n) - 1);
    for (int i = 0; i + 1 < hf.n; ++i)
        hf.s[static_cast<size_t>(i)] = parse_cx(lr.tokens(1)[0], path, lr.line);
    hf.Uf = DenseMatrix(hf.n, hf.k);
    hf.Vf = DenseMatrix(hf.n, hf.k);
    read_cx_matrix(lr, hf.Uf);
    read_cx_matrix(lr, hf.Vf);
    return hf;
}

} // namespace qshess
