#ifndef LATMOVE_JSON_IO_HPP
#define LATMOVE_JSON_IO_HPP

#include <string>

#include "latmove/moves.hpp"
#include "latmove/sampler.hpp"

namespace latmove {

// Polytope JSON: {"dim": d, "vertices": [[int,...],...]}, vertices sorted
// lexicographically. Unsorted or non-extreme vertex lists are rejected
// unless canonicalize is set.
Polytope parse_polytope_json(const std::string& text, bool canonicalize = false);
std::string polytope_to_json(const Polytope& p);

// Point-set JSON for hull inputs: {"dim": d, "points": [[int,...],...]}.
std::vector<Vec> parse_points_json(const std::string& text, int& dim_out);

// Trace JSON: {"start": <polytope>, "moves": [{"kind":"insert","point":[...]},...]}.
MoveTrace parse_trace_json(const std::string& text);
std::string trace_to_json(const MoveTrace& t);

std::string point_to_json(const Vec& v);

// Histogram CSV: header line then "canonical_key,count" sorted by key.
std::string histogram_to_csv(const Histogram& h);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace latmove

#endif
