#pragma once

#include "errors.hpp"
#include "graph.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace chroma::dimacs {

/// Parses the DIMACS edge format: `c` comment lines, one `p edge <n> <m>` header,
/// then `e <u> <v>` lines with 1-based endpoints. Duplicate edges, self-loops,
/// out-of-range endpoints and an edge count differing from the header are rejected.
inline Graph read(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    long long n = -1;
    long long m = -1;
    std::vector<Edge> edges;
    std::set<Edge> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::istringstream tokens(line);
        std::string tag;
        if (!(tokens >> tag) || tag == "c")
            continue;
        if (tag == "p") {
            if (n >= 0)
                throw ParseError(line_no, "duplicate problem line");
            std::string format;
            if (!(tokens >> format >> n >> m) || (format != "edge" && format != "col"))
                throw ParseError(line_no, "expected 'p edge <n> <m>'");
            if (n < 0 || m < 0)
                throw ParseError(line_no, "negative vertex or edge count");
            if (n > (1LL << 30))
                throw ParseError(line_no, "vertex count too large");
        } else if (tag == "e") {
            if (n < 0)
                throw ParseError(line_no, "edge line before problem line");
            long long u = 0;
            long long v = 0;
            if (!(tokens >> u >> v))
                throw ParseError(line_no, "expected 'e <u> <v>'");
            if (u < 1 || v < 1 || u > n || v > n)
                throw ParseError(line_no, "endpoint out of range 1.." + std::to_string(n));
            if (u == v)
                throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
            Edge e{static_cast<Vertex>(std::min(u, v) - 1), static_cast<Vertex>(std::max(u, v) - 1)};
            if (!seen.insert(e).second)
                throw ParseError(line_no, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
            edges.push_back(e);
        } else {
            throw ParseError(line_no, "unknown line type '" + tag + "'");
        }
        std::string extra;
        if (tokens >> extra)
            throw ParseError(line_no, "trailing token '" + extra + "'");
    }
    if (n < 0)
        throw ParseError(line_no, "missing problem line");
    if (static_cast<long long>(edges.size()) != m)
        throw ParseError(line_no, "header declares " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
    return Graph::from_edges(static_cast<int>(n), edges);
}

inline Graph read_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open " + path.string());
    try {
        return read(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.message(), path.string());
    }
}

inline void write(std::ostream& out, const Graph& g, const std::vector<std::string>& comments = {})
{
    for (const auto& c : comments)
        out << "c " << c << '\n';
    out << "p edge " << g.order() << ' ' << g.size() << '\n';
    for (auto [u, v] : g.edges())
        out << "e " << (u + 1) << ' ' << (v + 1) << '\n';
}

inline std::string to_string(const Graph& g, const std::vector<std::string>& comments = {})
{
    std::ostringstream os;
    write(os, g, comments);
    return os.str();
}

/// Writes `contents` to a sibling temp file and renames it over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& contents)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InvalidArgument("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out)
            throw InvalidArgument("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_file(const std::filesystem::path& path, const Graph& g, const std::vector<std::string>& comments = {})
{
    write_atomic(path, to_string(g, comments));
}

/// FNV-1a over the canonical DIMACS text; stable digest for reports.
inline std::string digest(const Graph& g)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_string(g)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

} // namespace chroma::dimacs
