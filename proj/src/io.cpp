#include "capdeg/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "capdeg/error.hpp"

namespace capdeg {

namespace {

struct Token {
    std::string_view text;
    std::size_t column = 0;  // 1-based
};

struct Line {
    std::size_t number = 0;
    std::vector<Token> tokens;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++number;
        std::string_view raw = text.substr(start, end - start);
        if (!raw.empty() && raw.back() == '\r') {
            raw.remove_suffix(1);
        }
        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) {
                ++i;
            }
            const std::size_t begin = i;
            while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t') {
                ++i;
            }
            if (i > begin) {
                line.tokens.push_back({raw.substr(begin, i - begin), begin + 1});
            }
        }
        if (!line.tokens.empty() && line.tokens.front().text.front() != '#') {
            lines.push_back(std::move(line));
        }
        if (end == text.size()) {
            break;
        }
        start = end + 1;
    }
    return lines;
}

[[noreturn]] void fail(const Line& line, const Token& token, const std::string& what) {
    throw ParseError(line.number, token.column, what);
}

[[noreturn]] void fail(const Line& line, const std::string& what) { throw ParseError(line.number, 0, what); }

template <typename Int>
Int parse_int(const Line& line, const Token& token, std::string_view text, std::size_t offset = 0) {
    Int value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last) {
        throw ParseError(line.number, token.column + offset, "expected an integer, got '" + std::string(text) + "'");
    }
    return value;
}

template <typename Int>
Int parse_int(const Line& line, const Token& token) {
    return parse_int<Int>(line, token, token.text);
}

// Comma-separated integers inside one token, e.g. "0,1,2".
template <typename Int>
std::vector<Int> parse_list(const Line& line, const Token& token) {
    std::vector<Int> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = token.text.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? token.text.size() : comma;
        out.push_back(parse_int<Int>(line, token, token.text.substr(start, end - start), start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

void expect_keyword(const Line& line, std::size_t index, std::string_view keyword) {
    if (index >= line.tokens.size()) {
        fail(line, "expected '" + std::string(keyword) + "'");
    }
    if (line.tokens[index].text != keyword) {
        fail(line, line.tokens[index], "expected '" + std::string(keyword) + "'");
    }
}

void expect_count(const Line& line, std::size_t count) {
    if (line.tokens.size() < count) {
        fail(line, "expected " + std::to_string(count) + " fields, got " + std::to_string(line.tokens.size()));
    }
    if (line.tokens.size() > count) {
        fail(line, line.tokens[count], "unexpected trailing field");
    }
}

const std::vector<Line>& require_header(const std::vector<Line>& lines, std::string_view what) {
    if (lines.empty()) {
        throw ParseError(1, 0, "empty " + std::string(what) + " file");
    }
    return lines;
}

template <typename Int>
Int parse_index(const Line& line, const Token& token, std::size_t bound, const char* what) {
    const auto value = parse_int<long long>(line, token);
    if (value < 0 || static_cast<unsigned long long>(value) >= bound) {
        fail(line, token, std::string(what) + " " + std::string(token.text) + " out of range [0, " + std::to_string(bound) + ")");
    }
    return static_cast<Int>(value);
}

std::string join(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += std::to_string(values[i]);
    }
    return out;
}

}  // namespace

std::string serialize(const Hypergraph& h) {
    std::ostringstream out;
    out << "k " << h.arity() << " v " << h.vertex_count() << "\n";
    for (std::size_t v = 0; v < h.vertex_count(); ++v) {
        out << "V " << v << " " << join(h.labels()[v]) << "\n";
    }
    const auto& edges = h.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        out << "E";
        for (Vertex v : edges[e]) {
            out << " " << v;
        }
        out << "\n";
    }
    return out.str();
}

Hypergraph parse_hypergraph(std::string_view text) {
    const auto all_lines = split_lines(text);
    const auto& lines = require_header(all_lines, "hypergraph");
    const Line& header = lines.front();
    expect_count(header, 4);
    expect_keyword(header, 0, "k");
    expect_keyword(header, 2, "v");
    const int k = parse_int<int>(header, header.tokens[1]);
    if (k < 2) {
        fail(header, header.tokens[1], "arity must be at least 2");
    }
    const auto n = parse_int<std::size_t>(header, header.tokens[3]);

    std::vector<Label> labels;
    std::set<Label> seen;
    std::vector<Vertex> flat;
    std::set<std::vector<Vertex>> edges_seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& line = lines[i];
        const Token& tag = line.tokens.front();
        if (tag.text == "V") {
            if (!flat.empty()) {
                fail(line, tag, "vertex line after the first edge line");
            }
            if (line.tokens.size() < 2) {
                fail(line, "expected 'V <index> <label>'");
            }
            const auto index = parse_int<std::size_t>(line, line.tokens[1]);
            if (index != labels.size()) {
                fail(line, line.tokens[1], "expected vertex index " + std::to_string(labels.size()));
            }
            if (index >= n) {
                fail(line, line.tokens[1], "vertex index out of range");
            }
            expect_count(line, 3);
            Label label = parse_list<int>(line, line.tokens[2]);
            if (!seen.insert(label).second) {
                fail(line, line.tokens[2], "duplicate vertex label");
            }
            labels.push_back(std::move(label));
        } else if (tag.text == "E") {
            if (labels.size() != n) {
                fail(line, tag, "expected " + std::to_string(n) + " vertex lines before the edges");
            }
            if (line.tokens.size() != static_cast<std::size_t>(k) + 1) {
                fail(line, "edge has " + std::to_string(line.tokens.size() - 1) + " vertices, arity is " + std::to_string(k));
            }
            std::vector<Vertex> edge;
            for (int j = 1; j <= k; ++j) {
                edge.push_back(parse_index<Vertex>(line, line.tokens[static_cast<std::size_t>(j)], n, "vertex"));
            }
            if (is_constant(edge)) {
                fail(line, tag, "constant tuple is not an edge");
            }
            if (!edges_seen.insert(edge).second) {
                fail(line, tag, "duplicate edge");
            }
            flat.insert(flat.end(), edge.begin(), edge.end());
        } else {
            fail(line, tag, "unknown record '" + std::string(tag.text) + "'");
        }
    }
    if (labels.size() != n) {
        throw ParseError(lines.back().number, 0, "expected " + std::to_string(n) + " vertices, got " + std::to_string(labels.size()));
    }
    return Hypergraph(k, std::move(labels), TupleSet::from_flat(k, std::move(flat)));
}

std::string serialize(const DegenerationCertificate& cert) {
    std::ostringstream out;
    out << "degen k " << cert.k << " |S| " << cert.subset.size() << "\n";
    for (Vertex v : cert.subset) {
        out << "S " << v << "\n";
    }
    for (std::size_t j = 0; j < cert.maps.size(); ++j) {
        for (std::size_t v = 0; v < cert.maps[j].size(); ++v) {
            out << "U " << j + 1 << " " << v << " " << cert.maps[j][v] << "\n";
        }
    }
    return out.str();
}

DegenerationCertificate parse_certificate(std::string_view text, std::optional<std::size_t> vertex_count) {
    const auto all_lines = split_lines(text);
    const auto& lines = require_header(all_lines, "certificate");
    const Line& header = lines.front();
    expect_count(header, 5);
    expect_keyword(header, 0, "degen");
    expect_keyword(header, 1, "k");
    expect_keyword(header, 3, "|S|");
    const int k = parse_int<int>(header, header.tokens[2]);
    if (k < 2) {
        fail(header, header.tokens[2], "arity must be at least 2");
    }
    const auto s = parse_int<std::size_t>(header, header.tokens[4]);
    const std::size_t bound = vertex_count.value_or(std::numeric_limits<Vertex>::max());

    DegenerationCertificate cert;
    cert.k = k;
    std::map<std::pair<std::size_t, std::size_t>, std::int64_t> values;
    std::size_t width = vertex_count.value_or(0);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& line = lines[i];
        const Token& tag = line.tokens.front();
        if (tag.text == "S") {
            if (!values.empty()) {
                fail(line, tag, "S line after the first U line");
            }
            expect_count(line, 2);
            cert.subset.push_back(parse_index<Vertex>(line, line.tokens[1], bound, "vertex"));
        } else if (tag.text == "U") {
            expect_count(line, 4);
            const auto j = parse_int<long long>(line, line.tokens[1]);
            if (j < 1 || j > k) {
                fail(line, line.tokens[1], "coordinate must be in 1.." + std::to_string(k));
            }
            const auto v = parse_index<std::size_t>(line, line.tokens[2], bound, "vertex");
            const auto value = parse_int<std::int64_t>(line, line.tokens[3]);
            if (!values.emplace(std::pair{static_cast<std::size_t>(j - 1), v}, value).second) {
                fail(line, tag, "repeated U line");
            }
            width = std::max(width, v + 1);
        } else {
            fail(line, tag, "unknown record '" + std::string(tag.text) + "'");
        }
    }
    if (cert.subset.size() != s) {
        throw ParseError(header.number, header.tokens[4].column,
                         "header announces " + std::to_string(s) + " S lines, found " + std::to_string(cert.subset.size()));
    }
    std::sort(cert.subset.begin(), cert.subset.end());
    if (std::adjacent_find(cert.subset.begin(), cert.subset.end()) != cert.subset.end()) {
        throw ParseError(header.number, 0, "repeated vertex in S");
    }
    cert.maps.assign(static_cast<std::size_t>(k), std::vector<std::int64_t>(width, 0));
    if (values.size() != static_cast<std::size_t>(k) * width) {
        for (std::size_t j = 0; j < cert.maps.size(); ++j) {
            for (std::size_t v = 0; v < width; ++v) {
                if (!values.contains({j, v})) {
                    throw ParseError(lines.back().number, 0,
                                     "missing U " + std::to_string(j + 1) + " " + std::to_string(v));
                }
            }
        }
    }
    for (const auto& [key, value] : values) {
        cert.maps[key.first][key.second] = value;
    }
    return cert;
}

std::string serialize(const GroundSubset& s) {
    std::ostringstream out;
    out << "group " << s.group().to_string() << " dim " << s.dimension() << "\n";
    for (const auto& element : s.elements()) {
        out << "S";
        for (std::size_t i = 0; i < element.size(); ++i) {
            out << (i == 0 ? " " : ",") << element[i];
        }
        out << "\n";
    }
    return out.str();
}

GroundSubset parse_subset(std::string_view text) {
    const auto all_lines = split_lines(text);
    const auto& lines = require_header(all_lines, "subset");
    const Line& header = lines.front();
    expect_count(header, 4);
    expect_keyword(header, 0, "group");
    expect_keyword(header, 2, "dim");
    std::optional<GroupSpec> group;
    try {
        group = GroupSpec::parse(std::string(header.tokens[1].text));
    } catch (const Error& e) {
        fail(header, header.tokens[1], e.what());
    }
    const int d = parse_int<int>(header, header.tokens[3]);
    if (d < 1) {
        fail(header, header.tokens[3], "dimension must be positive");
    }
    std::vector<std::vector<std::uint32_t>> elements;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& line = lines[i];
        const Token& tag = line.tokens.front();
        if (tag.text != "S") {
            fail(line, tag, "unknown record '" + std::string(tag.text) + "'");
        }
        expect_count(line, 2);
        auto element = parse_list<long long>(line, line.tokens[1]);
        if (element.size() != static_cast<std::size_t>(d)) {
            fail(line, line.tokens[1], "expected " + std::to_string(d) + " entries");
        }
        std::vector<std::uint32_t> codes;
        for (long long x : element) {
            if (x < 0 || x >= group->order()) {
                fail(line, line.tokens[1], "group element " + std::to_string(x) + " out of range");
            }
            codes.push_back(static_cast<std::uint32_t>(x));
        }
        elements.push_back(std::move(codes));
    }
    return GroundSubset(*group, d, std::move(elements));
}

std::string serialize_vertex_set(std::span<const Vertex> set) {
    std::ostringstream out;
    out << "set " << set.size() << "\n";
    for (Vertex v : set) {
        out << "x " << v << "\n";
    }
    return out.str();
}

std::vector<Vertex> parse_vertex_set(std::string_view text) {
    const auto all_lines = split_lines(text);
    const auto& lines = require_header(all_lines, "vertex set");
    const Line& header = lines.front();
    expect_count(header, 2);
    expect_keyword(header, 0, "set");
    const auto size = parse_int<std::size_t>(header, header.tokens[1]);
    std::vector<Vertex> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& line = lines[i];
        if (line.tokens.front().text != "x") {
            fail(line, line.tokens.front(), "unknown record '" + std::string(line.tokens.front().text) + "'");
        }
        expect_count(line, 2);
        out.push_back(parse_index<Vertex>(line, line.tokens[1], std::numeric_limits<Vertex>::max(), "vertex"));
    }
    if (out.size() != size) {
        throw ParseError(header.number, header.tokens[1].column,
                         "header announces " + std::to_string(size) + " members, found " + std::to_string(out.size()));
    }
    return out;
}

std::string serialize(const TightnessCertificate& cert) {
    std::ostringstream out;
    out << "tight k " << cert.k << " v ";
    for (std::size_t i = 0; i < cert.maps.size(); ++i) {
        out << (i == 0 ? "" : ",") << cert.maps[i].size();
    }
    out << "\n";
    for (std::size_t j = 0; j < cert.maps.size(); ++j) {
        for (std::size_t a = 0; a < cert.maps[j].size(); ++a) {
            out << "U " << j + 1 << " " << a << " " << cert.maps[j][a] << "\n";
        }
    }
    return out.str();
}

TightnessCertificate parse_tightness(std::string_view text) {
    const auto all_lines = split_lines(text);
    const auto& lines = require_header(all_lines, "tightness certificate");
    const Line& header = lines.front();
    expect_count(header, 5);
    expect_keyword(header, 0, "tight");
    expect_keyword(header, 1, "k");
    expect_keyword(header, 3, "v");
    const int k = parse_int<int>(header, header.tokens[2]);
    const auto sizes = parse_list<std::size_t>(header, header.tokens[4]);
    if (k < 2 || sizes.size() != static_cast<std::size_t>(k)) {
        fail(header, header.tokens[4], "expected " + std::to_string(k) + " ground sizes");
    }
    TightnessCertificate cert;
    cert.k = k;
    std::vector<std::vector<char>> filled;
    for (std::size_t size : sizes) {
        cert.maps.emplace_back(size, 0);
        filled.emplace_back(size, 0);
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& line = lines[i];
        const Token& tag = line.tokens.front();
        if (tag.text != "U") {
            fail(line, tag, "unknown record '" + std::string(tag.text) + "'");
        }
        expect_count(line, 4);
        const auto j = parse_index<std::size_t>(line, line.tokens[1], static_cast<std::size_t>(k) + 1, "coordinate");
        if (j == 0) {
            fail(line, line.tokens[1], "coordinates are numbered from 1");
        }
        const auto a = parse_index<std::size_t>(line, line.tokens[2], sizes[j - 1], "value");
        if (filled[j - 1][a]) {
            fail(line, tag, "repeated U line");
        }
        filled[j - 1][a] = 1;
        cert.maps[j - 1][a] = parse_int<std::int64_t>(line, line.tokens[3]);
    }
    for (std::size_t j = 0; j < filled.size(); ++j) {
        for (std::size_t a = 0; a < filled[j].size(); ++a) {
            if (!filled[j][a]) {
                throw ParseError(lines.back().number, 0, "missing U " + std::to_string(j + 1) + " " + std::to_string(a));
            }
        }
    }
    return cert;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidArgument("cannot write " + path.string());
    }
    out << text;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xf];
    }
    return out;
}

}  // namespace capdeg
