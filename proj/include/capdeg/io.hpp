#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capdeg/constructions.hpp"
#include "capdeg/degeneration.hpp"
#include "capdeg/hypergraph.hpp"
#include "capdeg/tightness.hpp"

namespace capdeg {

// Line-oriented text formats. Parsers skip blank lines and lines starting with '#'
// and throw ParseError with the 1-based line and column of the offending token.
//
//   hypergraph:   k <arity> v <count>, then V <index> <label,...> per vertex in
//                 order, then E <v_1> ... <v_k> per edge
//   certificate:  degen k <k> |S| <s>, then S <vertex> lines, then
//                 U <coordinate 1..k> <vertex> <integer> for every pair
//   subset:       group <moduli> dim <d>, then S <e_1,...,e_d> per element
//   vertex set:   set <size>, then x <vertex> per member
//   tightness:    tight k <k> v <n_1,...,n_k>, then U <coordinate> <value> <integer>

std::string serialize(const Hypergraph& h);
Hypergraph parse_hypergraph(std::string_view text);

std::string serialize(const DegenerationCertificate& cert);
// The map length is the largest vertex index in a U line plus one unless
// vertex_count is given, in which case larger indices are errors.
DegenerationCertificate parse_certificate(std::string_view text, std::optional<std::size_t> vertex_count = {});

std::string serialize(const GroundSubset& s);
GroundSubset parse_subset(std::string_view text);

std::string serialize_vertex_set(std::span<const Vertex> set);
std::vector<Vertex> parse_vertex_set(std::string_view text);

std::string serialize(const TightnessCertificate& cert);
TightnessCertificate parse_tightness(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace capdeg
